#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wt/dist.hpp"
#include "wt/pcsm.hpp"

namespace wt {

// W-transform of a continuous base distribution F_X and a pcsm function T:
//
//   W(u) = F_{T(X)}(T(F_X^{-1}(u))),  u in (0,1],
//
// with W(0) evaluated at u = 1e-12 as a documented approximation of the
// limit. F_{T(X)} is assembled analytically from the piece inverses of T.
// Immutable after build; all evaluators are reentrant.
class WTransform {
 public:
  static WTransform build(BaseDistribution base, PcsmFunction transform);

  double operator()(double u) const { return eval(u); }
  double eval(double u) const;

  // F_{T(X)}(y) = sum over pieces of the F_X-mass where T <= y.
  double transformed_cdf(double y) const;
  double transformed_quantile(double v) const;

  bool lazy() const { return lazy_; }
  // Effective number of pieces; for lazy transforms this is the explicit
  // enumeration cap (the analytic tail handles the rest).
  int piece_count() const { return k_; }
  double delta(int k) const;  // delta_k = F_X(t_k)
  bool piece_increasing(int k) const;
  // Image [v_lo, v_hi] of W on piece k.
  std::pair<double, double> piece_image(int k) const;

  // Piecewise inverse with the empty-set conventions: for an increasing
  // piece, W^{-1}_{|k}(v) = inf{u in D_k : W(u) >= v} (inf empty = delta_k);
  // for a decreasing piece the sup analogue (sup empty = delta_{k-1}).
  double piece_inverse(int k, double v) const;

  // Piece-pinned evaluation: W_{|k} extended continuously to the closed
  // interval [delta_{k-1}, delta_k].
  double piece_eval(int k, double u) const { return eval_on_piece(k, u); }
  // Index k with u in (delta_{k-1}, delta_k]; u = 0 maps to 1.
  int piece_index(double u) const;

  // Half-open interval (lo, hi] equal to S_k(v) = {u in D_k : W(u) <= v}.
  std::pair<double, double> preimage_interval(int k, double v) const;

  // Lebesgue measure of the union of the S_k(v); equals v for
  // uniformity-preserving transforms. For lazy transforms sums
  // explicit_pieces intervals and completes the tail analytically.
  double preimage_measure(double v, int explicit_pieces = 100000) const;

  // Derivative of W at u. dir < 0 selects the left, dir > 0 the right
  // one-sided derivative; dir = 0 averages a central stencil. Uses the
  // chain rule through f_X and T' when available, otherwise a finite
  // difference with h = 1e-6 clamped inside the piece.
  double deriv(double u, int dir = 0) const;

  const BaseDistribution& base() const { return base_; }
  const PcsmFunction& transform() const { return transform_; }

 private:
  WTransform(BaseDistribution base, PcsmFunction transform);

  double eval_on_piece(int k, double u) const;
  double transformed_pdf_side(double y, int side) const;
  bool have_analytic_deriv() const;

  BaseDistribution base_;
  PcsmFunction transform_;
  std::vector<double> deltas_;                          // delta_0..delta_K
  std::vector<std::pair<double, double>> t_ranges_;     // T-image per piece
  std::vector<std::pair<double, double>> v_ranges_;     // W-image per piece
  bool lazy_ = false;
  bool w_equals_t_ = false;  // uniform base with F_{T(X)} = id: W = T
  int k_ = 0;
  int lazy_terms_ = 512;  // explicit series terms before the tail closure
};

// Parametric pssm family: piecewise surjective strictly monotone transforms
// with knots t (t_0 = 0 < ... < t_K = 1), per-piece directions r in {0,1}
// (1 = increasing), and base distribution F_X on [0,1].
class PssmWTransform {
 public:
  PssmWTransform(std::vector<double> t, std::vector<int> r,
                 BaseDistribution base);

  double operator()(double u) const { return eval(u); }
  double eval(double u) const;  // closed-form product-sum

  // The same transform built through the generic (F_X, T) path.
  WTransform to_generic() const;

  const std::vector<double>& knots() const { return t_; }
  const std::vector<int>& directions() const { return r_; }
  const BaseDistribution& base() const { return base_; }

 private:
  std::vector<double> t_;
  std::vector<int> r_;
  BaseDistribution base_;
};

struct BoundaryDerivative {
  double value;
  bool lemma_applicable;
};

// Numeric limit of W' at the support endpoint (end = 0 or 1) for a
// piecewise increasing pssm transform. When the base density diverges at
// the queried endpoint and is finite inside, the limit is 1.
BoundaryDerivative pssm_boundary_derivative(const PssmWTransform& w, int end);

// Generalised W-transform for bases with atoms, built on the modified
// distribution function F_X(x,v) = P(X<x) + v P(X=x).
class GenWTransform {
 public:
  static GenWTransform build(BaseDistribution base, PcsmFunction transform);

  double operator()(double u) const { return eval(u); }
  double eval(double u) const;  // defined for u in (0,1]; u=0 via limit

  double transformed_cdf(double y) const;       // right-continuous
  double transformed_atom_mass(double s) const;  // P(T(X) = s)

  struct JumpInterval {
    double lo;     // F_X(x-)
    double hi;     // F_X(x)
    double slope;  // P(T(X)=T(x)) / P(X=x)
  };
  std::vector<JumpInterval> jump_intervals() const;

  const BaseDistribution& base() const { return base_; }

 private:
  GenWTransform(BaseDistribution base, PcsmFunction transform);

  BaseDistribution base_;
  PcsmFunction transform_;
};

// Composition w_outer(w_inner(.)) of two uniformity-preserving self-maps of
// [0,1], refined into a single pcsm function.
PcsmFunction compose(const WTransform& outer, const WTransform& inner);

}  // namespace wt
