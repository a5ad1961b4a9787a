#include "wt/fit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "wt/fixtures.hpp"
#include "wt/measures.hpp"
#include "wt/parallel.hpp"
#include "wt/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wt {

namespace {

constexpr double kNudge = 1e-9;  // pseudo-observations off change points

double nudge_half(double u) {
  if (std::fabs(u - 0.5) < kNudge) return 0.5 - kNudge;
  return u;
}

// Standard Nelder-Mead maximizer; stops when the simplex diameter falls
// below 1e-6. Records the best objective after each accepted improvement.
struct NelderMead {
  int max_iter = 500;
  double diam_tol = 1e-6;

  FitResult maximize(const std::function<double(const std::vector<double>&)>& f,
                     std::vector<std::vector<double>> simplex) const {
    const std::size_t n = simplex[0].size();
    std::vector<double> val(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) val[i] = f(simplex[i]);
    FitResult res;
    auto order = [&]() {
      std::vector<std::size_t> idx(simplex.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(),
                [&val](std::size_t a, std::size_t b) { return val[a] > val[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      for (std::size_t i : idx) {
        s2.push_back(simplex[i]);
        v2.push_back(val[i]);
      }
      simplex = std::move(s2);
      val = std::move(v2);
    };
    order();
    res.trace.push_back(val[0]);
    int it = 0;
    for (; it < max_iter; ++it) {
      double diam = 0.0;
      for (std::size_t i = 1; i < simplex.size(); ++i)
        for (std::size_t j = 0; j < n; ++j)
          diam = std::max(diam, std::fabs(simplex[i][j] - simplex[0][j]));
      if (diam < diam_tol) {
        res.converged = true;
        break;
      }
      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
      for (std::size_t j = 0; j < n; ++j)
        centroid[j] /= static_cast<double>(simplex.size() - 1);
      auto blend = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j)
          x[j] = centroid[j] + t * (simplex.back()[j] - centroid[j]);
        return x;
      };
      const auto xr = blend(-1.0);
      const double fr = f(xr);
      if (fr > val[0]) {
        const auto xe = blend(-2.0);
        const double fe = f(xe);
        if (fe > fr) {
          simplex.back() = xe;
          val.back() = fe;
        } else {
          simplex.back() = xr;
          val.back() = fr;
        }
      } else if (fr > val[val.size() - 2]) {
        simplex.back() = xr;
        val.back() = fr;
      } else {
        const auto xc = blend(0.5);
        const double fc = f(xc);
        if (fc > val.back()) {
          simplex.back() = xc;
          val.back() = fc;
        } else {
          for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t j = 0; j < n; ++j)
              simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
            val[i] = f(simplex[i]);
          }
        }
      }
      order();
      if (val[0] > res.trace.back()) res.trace.push_back(val[0]);
    }
    res.iterations = it;
    res.params = simplex[0];
    res.loglik = val[0];
    return res;
  }
};

FitResult nm_with_restarts(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<std::pair<double, double>>& box, std::uint64_t seed,
    int restarts) {
  const std::size_t n = box.size();
  FitResult best;
  best.loglik = -std::numeric_limits<double>::infinity();
  RngStream rng(seed, 0);
  // Latin hypercube initial points
  std::vector<std::vector<double>> inits;
  std::vector<std::vector<int>> strata(n, std::vector<int>(static_cast<std::size_t>(restarts)));
  for (std::size_t j = 0; j < n; ++j) {
    std::iota(strata[j].begin(), strata[j].end(), 0);
    for (int i = restarts - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(strata[j][static_cast<std::size_t>(i)], strata[j][static_cast<std::size_t>(k)]);
    }
  }
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double frac = (strata[j][static_cast<std::size_t>(r)] + rng.uniform()) / restarts;
      x[j] = box[j].first + frac * (box[j].second - box[j].first);
    }
    inits.push_back(std::move(x));
  }
  int failures = 0;
  for (const auto& x0 : inits) {
    std::vector<std::vector<double>> simplex{x0};
    for (std::size_t j = 0; j < n; ++j) {
      auto v = x0;
      v[j] += 0.25 * (box[j].second - box[j].first) * 0.1;
      simplex.push_back(v);
    }
    NelderMead nm;
    FitResult r;
    try {
      r = nm.maximize(f, std::move(simplex));
    } catch (const std::exception&) {
      ++failures;
      continue;
    }
    if (!std::isfinite(r.loglik)) {
      ++failures;
      continue;
    }
    if (r.loglik > best.loglik) best = r;
  }
  if (failures == restarts)
    throw std::runtime_error("fit: all optimizer restarts failed");
  best.seed = seed;
  return best;
}

double gumbel_loglik(const PseudoSample& p, double theta) {
  const Copula c = Copula::gumbel(theta);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.u.rows; ++i) {
    const double d = c.density2(p.u(i, 0), p.u(i, 1));
    if (!(d > 0.0) || !std::isfinite(d))
      return -std::numeric_limits<double>::infinity();
    acc += std::log(d);
  }
  return acc;
}

double cvm_statistic(const Matrix& u, const Cdf2& model_cdf) {
  const std::size_t n = u.rows;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (u(j, 0) <= u(i, 0) && u(j, 1) <= u(i, 1)) ++cnt;
    const double emp = static_cast<double>(cnt) / static_cast<double>(n);
    const double mod = model_cdf(u(i, 0), u(i, 1));
    acc += (emp - mod) * (emp - mod);
  }
  return acc;
}

// 32x32-grid empirical copula via a cumulative cell histogram.
constexpr int kExchGrid = 32;

double exch_statistic(const Matrix& u, const std::vector<bool>& swapped) {
  int hist[kExchGrid + 1][kExchGrid + 1] = {};
  for (std::size_t r = 0; r < u.rows; ++r) {
    double a = u(r, 0);
    double b = u(r, 1);
    if (swapped[r]) std::swap(a, b);
    // smallest grid index i with a <= (i+0.5)/kExchGrid
    int ia = static_cast<int>(std::ceil(a * kExchGrid - 0.5));
    int ib = static_cast<int>(std::ceil(b * kExchGrid - 0.5));
    ia = std::clamp(ia, 0, kExchGrid);
    ib = std::clamp(ib, 0, kExchGrid);
    ++hist[ia][ib];
  }
  // prefix sums -> counts of {U <= g_i, V <= g_j}
  double cum[kExchGrid + 1][kExchGrid + 1];
  for (int i = 0; i <= kExchGrid; ++i) {
    for (int j = 0; j <= kExchGrid; ++j) {
      double c = hist[i][j];
      if (i > 0) c += cum[i - 1][j];
      if (j > 0) c += cum[i][j - 1];
      if (i > 0 && j > 0) c -= cum[i - 1][j - 1];
      cum[i][j] = c;
    }
  }
  const double n = static_cast<double>(u.rows);
  double acc = 0.0;
  for (int i = 0; i < kExchGrid; ++i) {
    for (int j = 0; j < kExchGrid; ++j) {
      const double d = (cum[i][j] - cum[j][i]) / n;
      acc += d * d;
    }
  }
  return acc / (kExchGrid * kExchGrid);
}

FitResult fit_family(FitFamily family, const PseudoSample& p,
                     std::uint64_t seed) {
  switch (family) {
    case FitFamily::gumbel:
      return fit_gumbel_mple(p);
    case FitFamily::khoudraji_gumbel:
      return fit_khoudraji_gumbel(p, seed);
    case FitFamily::wos:
      return fit_wos(p, seed);
  }
  throw std::logic_error("fit_family: unknown family");
}

// Model objects for sampling / cdf evaluation from a fit result.
struct FittedModel {
  std::function<double(double, double)> cdf;
  MatrixRowSampler sampler;
};

FittedModel make_model(FitFamily family, const FitResult& r) {
  switch (family) {
    case FitFamily::gumbel: {
      const auto c = std::make_shared<Copula>(Copula::gumbel(r.params[0]));
      return {[c](double a, double b) { return c->cdf2(a, b); },
              [c](RngStream& rng, std::span<double> out) { c->sample(rng, out); }};
    }
    case FitFamily::khoudraji_gumbel: {
      const auto c = std::make_shared<Copula>(Copula::khoudraji(
          Copula::gumbel(r.params[0]), r.params[1], r.params[2]));
      return {[c](double a, double b) { return c->cdf2(a, b); },
              [c](RngStream& rng, std::span<double> out) { c->sample(rng, out); }};
    }
    case FitFamily::wos: {
      const auto m = std::make_shared<WTransformedCopula>(
          wos_model(r.params[0], r.params[1], r.params[2]));
      return {[m](double a, double b) { return m->cdf2(a, b); },
              [m](RngStream& rng, std::span<double> out) { m->sample(rng, out); }};
    }
  }
  throw std::logic_error("make_model: unknown family");
}

}  // namespace

PseudoSample pseudo_obs(const Matrix& data) {
  if (data.rows < 2) throw std::invalid_argument("pseudo_obs: need n >= 2");
  PseudoSample out;
  out.u = Matrix(data.rows, data.cols);
  for (std::size_t c = 0; c < data.cols; ++c) {
    const auto col = data.column(c);
    bool constant = true;
    for (double v : col)
      if (v != col[0]) constant = false;
    if (constant)
      throw std::invalid_argument("pseudo_obs: constant column has no ranks");
    std::vector<std::size_t> idx(col.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&col](std::size_t a, std::size_t b) { return col[a] < col[b]; });
    std::size_t i = 0;
    while (i < col.size()) {
      std::size_t j = i;
      while (j + 1 < col.size() && col[idx[j + 1]] == col[idx[i]]) ++j;
      const double avg =
          0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k)
        out.u(idx[k], c) = avg / (static_cast<double>(data.rows) + 1.0);
      i = j + 1;
    }
  }
  return out;
}

FitResult fit_gumbel_mple(const PseudoSample& p) {
  if (p.u.cols != 2) throw std::invalid_argument("fit_gumbel_mple: d=2 only");
  // golden-section on (1, 50], then a parabolic refinement step
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1.0 + 1e-9;
  double b = 50.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = gumbel_loglik(p, c);
  double fd = gumbel_loglik(p, d);
  FitResult res;
  res.model = "gumbel";
  res.trace.push_back(std::max(fc, fd));
  int it = 0;
  for (; it < 200 && b - a > 1e-9; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = gumbel_loglik(p, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = gumbel_loglik(p, d);
    }
    if (std::max(fc, fd) > res.trace.back())
      res.trace.push_back(std::max(fc, fd));
  }
  if (b - a > 1e-6)
    throw std::runtime_error("fit_gumbel_mple: no convergence after 200 iterations");
  res.iterations = it;
  res.converged = true;
  const double theta = 0.5 * (a + b);
  res.params = {theta};
  res.loglik = gumbel_loglik(p, theta);
  return res;
}

WTransformedCopula wos_model(double alpha1, double alpha2, double theta) {
  Copula base = Copula::ordinal_sum(
      {0.0, 0.5, 1.0}, {Copula::gumbel(alpha1), Copula::gumbel(alpha2)});
  std::vector<WTransform> margins;
  margins.push_back(fixtures::sawtooth(2));
  margins.push_back(fixtures::inn_transform(theta));
  return WTransformedCopula(std::move(base), std::move(margins));
}

FitResult fit_wos(const PseudoSample& p, std::uint64_t seed) {
  if (p.u.cols != 2) throw std::invalid_argument("fit_wos: d=2 only");
  auto objective = [&p](const std::vector<double>& x) {
    const double a1 = 1.0 + std::exp(x[0]);
    const double a2 = 1.0 + std::exp(x[1]);
    const double th = std::exp(x[2]);
    if (a1 > 60.0 || a2 > 60.0 || th > 1e4 || th < 1e-8)
      return -std::numeric_limits<double>::infinity();
    const WTransformedCopula m = wos_model(a1, a2, th);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.u.rows; ++i) {
      const double d =
          m.density2(nudge_half(p.u(i, 0)), nudge_half(p.u(i, 1)));
      if (!(d > 0.0) || !std::isfinite(d))
        return -std::numeric_limits<double>::infinity();
      acc += std::log(d);
    }
    return acc;
  };
  const std::vector<std::pair<double, double>> box = {
      {std::log(0.2), std::log(5.0)},
      {std::log(0.2), std::log(5.0)},
      {std::log(0.5), std::log(60.0)}};
  FitResult r = nm_with_restarts(objective, box, seed, 5);
  r.model = "wos";
  r.params = {1.0 + std::exp(r.params[0]), 1.0 + std::exp(r.params[1]),
              std::exp(r.params[2])};
  return r;
}

FitResult fit_khoudraji_gumbel(const PseudoSample& p, std::uint64_t seed) {
  if (p.u.cols != 2)
    throw std::invalid_argument("fit_khoudraji_gumbel: d=2 only");
  auto logit_inv = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto objective = [&p, logit_inv](const std::vector<double>& x) {
    const double theta = 1.0 + std::exp(x[0]);
    const double s1 = logit_inv(x[1]);
    const double s2 = logit_inv(x[2]);
    if (theta > 60.0) return -std::numeric_limits<double>::infinity();
    const Copula c = Copula::khoudraji(Copula::gumbel(theta), s1, s2);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.u.rows; ++i) {
      const double d = c.density2(p.u(i, 0), p.u(i, 1));
      if (!(d > 0.0) || !std::isfinite(d))
        return -std::numeric_limits<double>::infinity();
      acc += std::log(d);
    }
    return acc;
  };
  const std::vector<std::pair<double, double>> box = {
      {std::log(0.2), std::log(12.0)}, {-2.5, 4.5}, {-2.5, 4.5}};
  FitResult r = nm_with_restarts(objective, box, seed, 5);
  r.model = "khoudraji_gumbel";
  r.params = {1.0 + std::exp(r.params[0]), logit_inv(r.params[1]),
              logit_inv(r.params[2])};
  return r;
}

double lr_test(const FitResult& full, const FitResult& nested, int df) {
  const double stat = 2.0 * (full.loglik - nested.loglik);
  if (stat < -1e-9)
    throw std::runtime_error(
        "lr_test: negative statistic; the nested fit beat the full model");
  return 1.0 - chi2_cdf(std::max(stat, 0.0), df);
}

GofResult gof_bootstrap(FitFamily family, const PseudoSample& p, int n_rep,
                        std::uint64_t seed, int threads) {
  if (n_rep < 1) throw std::invalid_argument("gof_bootstrap: need replicates");
  const FitResult fit0 = fit_family(family, p, seed);
  const FittedModel m0 = make_model(family, fit0);
  const double s0 = cvm_statistic(p.u, m0.cdf);
  const std::size_t n = p.u.rows;
  std::vector<int> exceed(static_cast<std::size_t>(n_rep), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads(threads))
#endif
  for (int r = 0; r < n_rep; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r) + 1);
    Matrix sim(n, 2);
    for (std::size_t i = 0; i < n; ++i)
      m0.sampler(rng, std::span<double>(sim.row(i), 2));
    const PseudoSample ps = pseudo_obs(sim);
    try {
      const FitResult fr =
          fit_family(family, ps, seed ^ (static_cast<std::uint64_t>(r) + 1));
      const FittedModel mr = make_model(family, fr);
      const double sr = cvm_statistic(ps.u, mr.cdf);
      exceed[static_cast<std::size_t>(r)] = sr >= s0 ? 1 : 0;
    } catch (const std::exception&) {
      exceed[static_cast<std::size_t>(r)] = 1;  // conservative
    }
  }
  int count = 0;
  for (int e : exceed) count += e;
  return {s0, (1.0 + count) / (n_rep + 1.0), n_rep, seed};
}

ExchResult exch_test(const PseudoSample& p, int n_perm, std::uint64_t seed,
                     int threads) {
  if (p.u.cols != 2) throw std::invalid_argument("exch_test: d=2 only");
  const std::vector<bool> none(p.u.rows, false);
  const double t0 = exch_statistic(p.u, none);
  std::vector<int> exceed(static_cast<std::size_t>(n_perm), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads(threads))
#endif
  for (int r = 0; r < n_perm; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r) + 1);
    std::vector<bool> swapped(p.u.rows);
    for (std::size_t i = 0; i < p.u.rows; ++i) swapped[i] = rng.uniform() < 0.5;
    const double tr = exch_statistic(p.u, swapped);
    exceed[static_cast<std::size_t>(r)] = tr >= t0 ? 1 : 0;
  }
  int count = 0;
  for (int e : exceed) count += e;
  return {t0, (1.0 + count) / (n_perm + 1.0), n_perm, seed};
}

Matrix load_pseudo_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pseudo_csv: cannot open " + path);
  std::vector<double> vals;
  std::string line;
  bool header_checked = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_checked) {
      header_checked = true;
      // header row permitted
      if (line.find_first_not_of("0123456789.,+-eE \t") != std::string::npos)
        continue;
    }
    std::istringstream ls(line);
    std::string cell;
    int ncell = 0;
    while (std::getline(ls, cell, ',')) {
      vals.push_back(std::stod(cell));
      ++ncell;
    }
    if (ncell != 2)
      throw std::runtime_error("load_pseudo_csv: expected two columns");
  }
  if (vals.size() < 4) throw std::runtime_error("load_pseudo_csv: empty file");
  Matrix m(vals.size() / 2, 2);
  m.data = std::move(vals);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      if (!(m(r, c) > 0.0 && m(r, c) < 1.0))
        throw std::runtime_error(
            "load_pseudo_csv: values must be pseudo-observations in (0,1)");
    }
  }
  return m;
}

}  // namespace wt
