#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wt {

// One strictly monotone piece of a pcsm function, defined on the open
// interval between two change points. Closed forms carry analytic inverses;
// generic pieces fall back to bisection and must declare their direction.
struct Piece {
  enum class Form { linear, abs_value, exp_quad, reciprocal, generic };

  Form form = Form::generic;
  bool increasing = true;
  std::function<double(double)> eval;
  std::function<double(double)> inverse;  // optional
  std::function<double(double)> deriv;    // optional

  static Piece linear(double slope, double intercept);
  static Piece abs_value(bool increasing);
  // exp(3 (x - 1/4)^2), monotone away from x = 1/4.
  static Piece exp_quad(bool increasing);
  static Piece reciprocal();
  static Piece generic(bool increasing, std::function<double(double)> eval,
                       std::function<double(double)> inverse = nullptr,
                       std::function<double(double)> deriv = nullptr);
};

struct ValidationIssue {
  int piece;
  std::string what;
  double x1;
  double x2;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Piecewise continuous strictly monotone function T with change points
// t_0 < t_1 < ... < t_K. Pieces own their right endpoint ((t_{k-1}, t_k]);
// t_0 is assigned to piece 1. Values at change points may be overridden
// (needed by generalised transforms whose base has atoms there).
// Immutable after construction apart from the explicit override setter.
class PcsmFunction {
 public:
  PcsmFunction(std::vector<double> change_points, std::vector<Piece> pieces);

  // T(x) = x^2 - ceil(x^2) + 1 on [1, inf): countably many change points
  // t_k = sqrt(k+1), generated lazily.
  static PcsmFunction frac_part_square();

  bool lazy() const { return lazy_; }
  // Number of pieces; throws for lazy functions.
  int piece_count() const;
  double domain_lo() const;
  double domain_hi() const;

  double change_point(int k) const;  // t_k, k = 0..K
  double eval(double x) const;
  int piece_of(double x) const;  // 1-based
  double piece_eval(int k, double x) const;
  // Unique x in [t_{k-1}, t_k] with T_{|k}(x) = y; bisection when no
  // analytic inverse, |dx| <= 1e-12 * max(1, t_k - t_{k-1}).
  double piece_inverse(int k, double y) const;
  double piece_deriv(int k, double x) const;
  bool piece_increasing(int k) const;
  // Closure range [lo, hi] of T on piece k.
  std::pair<double, double> piece_range(int k) const;

  void set_value_at_change_point(int k, double value);
  std::optional<double> value_override(int k) const;

  ValidationReport validate() const;

 private:
  std::vector<double> t_;
  std::vector<Piece> pieces_;
  std::map<int, double> overrides_;
  bool lazy_ = false;

  PcsmFunction() = default;
};

// Builds T from change points and per-piece (slope, intercept).
PcsmFunction piecewise_linear(const std::vector<double>& t,
                              const std::vector<std::pair<double, double>>&
                                  slope_intercept);

// Least p <= p_max with W^p = id on [0,1] off breakpoints, for a bijective
// piecewise linear self-map with unit slopes; std::nullopt when none found.
// Throws when the necessary condition (bijective, |slope| = 1) fails.
std::optional<int> periodicity(const PcsmFunction& w, int p_max);

}  // namespace wt
