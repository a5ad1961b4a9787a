#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wt/matrix.hpp"
#include "wt/wcopula.hpp"

namespace wt {

// Pseudo-observations: componentwise ranks / (n+1), ties by average rank.
struct PseudoSample {
  Matrix u;  // n x d, values in (0,1)
};

PseudoSample pseudo_obs(const Matrix& data);

struct FitResult {
  std::string model;
  std::vector<double> params;
  double loglik = 0.0;
  std::vector<double> trace;  // best objective after each accepted step
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

enum class FitFamily { gumbel, khoudraji_gumbel, wos };

// One-parameter Gumbel by maximum pseudo-likelihood: bounded golden-section
// search on theta in (1, 50].
FitResult fit_gumbel_mple(const PseudoSample& p);

// W-transformed ordinal sum of the application study: breaks (0, 0.5, 1),
// Gumbel components (alpha1, alpha2), a two-tooth sawtooth on the first
// margin and the concave parametric transform (theta) on the second.
// Nelder-Mead over (log(a1-1), log(a2-1), log theta) with 5 restarts.
FitResult fit_wos(const PseudoSample& p, std::uint64_t seed);

FitResult fit_khoudraji_gumbel(const PseudoSample& p, std::uint64_t seed);

// The fitted W-transformed ordinal sum model.
WTransformedCopula wos_model(double alpha1, double alpha2, double theta);

// Likelihood ratio test p-value, 1 - chi2_df(2 (l_full - l_nested)).
double lr_test(const FitResult& full, const FitResult& nested, int df);

// Parametric bootstrap goodness-of-fit with the Cramer-von Mises statistic
// S_n = sum_i (hat-C_n(u_i) - C_fit(u_i))^2; p = (1 + #{S* >= S_n})/(N+1).
struct GofResult {
  double statistic;
  double p_value;
  int replicates;
  std::uint64_t seed;
};
GofResult gof_bootstrap(FitFamily family, const PseudoSample& p, int n_rep,
                        std::uint64_t seed, int threads = 1);

// Permutation test of exchangeability: statistic is the mean squared
// difference of the empirical copula and its transpose on a 32x32 grid;
// the null resamples by swapping the coordinates of each row with
// probability 1/2.
struct ExchResult {
  double statistic;
  double p_value;
  int replicates;
  std::uint64_t seed;
};
ExchResult exch_test(const PseudoSample& p, int n_perm, std::uint64_t seed,
                     int threads = 1);

// Loads a two-column CSV of pseudo-observations and validates its shape.
Matrix load_pseudo_csv(const std::string& path);

}  // namespace wt
