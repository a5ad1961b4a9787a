#pragma once

#include <span>
#include <vector>

#include "wt/copula.hpp"
#include "wt/wtransform.hpp"

namespace wt {

struct PieceWeight {
  int k;
  double preimage;  // W^{-1}_{|k}(v)
  double weight;    // p_k = |d/dv W^{-1}_{|k}(v)|
};

// Active pieces N(v) of a W-transform at level v with their preimages and
// weights. weight_sum equals 1 at differentiable v; a deviation flags the
// countable exception set.
struct StochasticInverseQuery {
  double v;
  std::vector<PieceWeight> active;
  double weight_sum;
};

StochasticInverseQuery stochastic_inverse_weights(const WTransform& w,
                                                  double v);

// Randomized right-inverse: picks the piece whose cumulative weight interval
// contains u_aux. Throws when v lies in the exception set.
double stochastic_inverse(const WTransform& w, double v, double u_aux);

// W-transformed copula: the distribution of (W_1(U_1),...,W_d(U_d)) for
// U ~ base. The cdf is an explicit sum of base-copula volumes over the
// rectilinear grid induced by the margins' change points; sampling is the
// measure push-forward and never uses the cdf.
class WTransformedCopula {
 public:
  WTransformedCopula(Copula base, std::vector<WTransform> margins);

  int dim() const { return base_.dim(); }
  const Copula& base() const { return base_; }
  const WTransform& margin(int j) const {
    return margins_.at(static_cast<std::size_t>(j));
  }

  double cdf(std::span<const double> u) const;
  double cdf2(double u1, double u2) const;
  // Sum over active piece multi-indices of c(u_W) * prod 1/|W'|; requires an
  // absolutely continuous base and u componentwise off change points.
  double density(std::span<const double> u) const;
  double density2(double u1, double u2) const;
  // Raw multi-index sum, bypassing the mixture shortcut (cross-check path).
  double density_generic(std::span<const double> u) const;
  double volume(const Box& b) const;
  void sample(RngStream& rng, std::span<double> out) const;
  // P(U2 <= u2 | U1 = u1): mixture rule for W-transformed ordinal sums,
  // central finite difference of the cdf otherwise.
  double conditional(double u2, double u1) const;

  // Mixture representation (ordinal-sum base, piecewise increasing
  // surjective margins on the same break grid).
  bool mixture_form() const { return mixture_; }
  double mixture_G(int j, int k, double u) const;
  double mixture_g(int j, int k, double u) const;

 private:
  bool detect_mixture() const;
  double mixture_density2(double u1, double u2) const;

  Copula base_;
  std::vector<WTransform> margins_;
  bool mixture_ = false;
};

}  // namespace wt
