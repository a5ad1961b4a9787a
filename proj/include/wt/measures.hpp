#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wt/copula.hpp"
#include "wt/wcopula.hpp"

namespace wt {

using Cdf2 = std::function<double(double, double)>;

struct TailEstimate {
  bool upper;
  double value;
  std::string method;  // "analytic" or "empirical-limit"
  std::vector<double> t_grid;
  bool warning = false;  // oscillating extrapolation
};

// Closed-form tail dependence coefficient per family.
TailEstimate tail_coeff_analytic(const Copula& c, bool upper);
// Diagonal limit evaluated on t in {1e-1..1e-4} with Aitken extrapolation.
TailEstimate tail_coeff_limit(const Cdf2& cdf, bool upper);

// Tail coefficients of a homogeneous W-transformed ordinal sum via the
// boundary weights alpha_k = (delta_k - delta_{k-1}) g_k(0+) (lower) and
// beta_k = (delta_k - delta_{k-1}) g_k(1-) (upper). The weights sum to 1.
struct OrdinalTail {
  TailEstimate estimate;
  std::vector<double> weights;
};
OrdinalTail ordinal_sum_tail(const WTransformedCopula& cw, bool upper);

// Upper tail coefficient of a homogeneous v-transformed copula: a convex
// combination lambda_l/m + (1 - 1/m) lambda_u with m = |V'_{|1}(0+)|, plus
// a numeric corner-limit term when the base is not corner tail independent.
TailEstimate vtransform_upper_tail(const Copula& c, const WTransform& v);

struct MtcmEstimate {
  double lambda_star;
  double b_star;
  std::vector<double> b_grid;
  double p;
};

std::vector<double> mtcm_default_grid();  // 101 log-spaced points in [1/50,50]
// Empirical tail copula hat-C(p x, p y)/p from a bivariate sample;
// p defaults to ceil(sqrt(n))/n.
MtcmEstimate mtcm_from_sample(const std::vector<double>& u1,
                              const std::vector<double>& u2, double p = 0.0,
                              std::vector<double> b_grid = {});
MtcmEstimate mtcm_from_cdf(const Cdf2& cdf, double p,
                           std::vector<double> b_grid = {});

// Rank correlation estimators on a bivariate sample (no ties assumed).
double spearman_rho_sample(const std::vector<double>& x,
                           const std::vector<double>& y);
// Pairwise-concordance estimator with O(n log n) merge counting.
double kendall_tau_sample(const std::vector<double>& x,
                          const std::vector<double>& y);

struct McEstimate {
  double value;
  double stderr_;
  std::size_t n;
};

using RowSampler = std::function<void(RngStream&, double*)>;
McEstimate spearman_rho_mc(const RowSampler& sampler, std::size_t n,
                           std::uint64_t seed);
McEstimate kendall_tau_mc(const RowSampler& sampler, std::size_t n,
                          std::uint64_t seed);
// Quadrature smoke path: 12 * mean(C) - 3 on a grid^2 midpoint rule.
double spearman_rho_quadrature(const Cdf2& cdf, int grid = 201);

// Per-piece bound check: increasing pieces satisfy W_{|k}(u) <= u/delta_k
// and W^{-1}_{|k}(v) >= delta_k v; decreasing pieces the mirrored bounds.
struct PiecewiseMapView {
  std::vector<double> deltas;
  std::vector<bool> increasing;
  std::function<double(int, double)> eval;     // (piece, u)
  std::function<double(int, double)> inverse;  // (piece, v)
};
PiecewiseMapView view_of(const WTransform& w);

struct PieceBoundsReport {
  bool pass;
  int worst_piece;
  double worst_violation;
  double worst_point;
};
PieceBoundsReport piece_bounds_check(const PiecewiseMapView& w,
                                     int points_per_piece = 1000);

}  // namespace wt
