#include "wt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wt {

namespace {

double aitken(double a, double b, double c) {
  const double denom = (c - b) - (b - a);
  if (std::fabs(denom) < 1e-14) return c;
  return c - (c - b) * (c - b) / denom;
}

// Richardson limit of f(eps)/..., model A + B sqrt(eps) + C eps.
double sqrt_richardson(const std::function<double(double)>& f, double eps) {
  const double f1 = f(eps);
  const double f2 = f(eps / 4.0);
  const double f3 = f(eps / 16.0);
  return (8.0 * f3 - 6.0 * f2 + f1) / 3.0;
}

std::vector<double> ranks(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

// counts inversions of v in-place
std::size_t merge_count(std::vector<double>& v, std::vector<double>& tmp,
                        std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t cnt = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      cnt += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
            tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return cnt;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

McEstimate batched_mc(const RowSampler& sampler, std::size_t n,
                      std::uint64_t seed,
                      double (*stat)(const std::vector<double>&,
                                     const std::vector<double>&)) {
  constexpr int kBatches = 10;
  std::vector<double> x(n), y(n);
  {
    RngStream rng(seed, 0);
    double row[2];
    for (std::size_t i = 0; i < n; ++i) {
      sampler(rng, row);
      x[i] = row[0];
      y[i] = row[1];
    }
  }
  const double value = stat(x, y);
  std::vector<double> batch;
  const std::size_t bs = n / kBatches;
  for (int b = 0; b < kBatches; ++b) {
    std::vector<double> bx(x.begin() + static_cast<std::ptrdiff_t>(b * bs),
                           x.begin() + static_cast<std::ptrdiff_t>((b + 1) * bs));
    std::vector<double> by(y.begin() + static_cast<std::ptrdiff_t>(b * bs),
                           y.begin() + static_cast<std::ptrdiff_t>((b + 1) * bs));
    batch.push_back(stat(bx, by));
  }
  double mean = 0.0;
  for (double v : batch) mean += v;
  mean /= kBatches;
  double var = 0.0;
  for (double v : batch) var += (v - mean) * (v - mean);
  var /= (kBatches - 1);
  return {value, std::sqrt(var / kBatches), n};
}

}  // namespace

TailEstimate tail_coeff_analytic(const Copula& c, bool upper) {
  return {upper, c.tail_lambda(upper), "analytic", {}, false};
}

TailEstimate tail_coeff_limit(const Cdf2& cdf, bool upper) {
  const std::vector<double> ts = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> lam;
  for (double t : ts) {
    if (upper) {
      const double s = 1.0 - t;
      lam.push_back((1.0 - 2.0 * s + cdf(s, s)) / t);
    } else {
      lam.push_back(cdf(t, t) / t);
    }
  }
  const double d2 = lam[2] - lam[1];
  const double d3 = lam[3] - lam[2];
  TailEstimate est{upper, 0.0, "empirical-limit", ts, false};
  if (d2 * d3 < 0.0) {
    est.value = lam[3];
    est.warning = true;
    return est;
  }
  est.value = std::clamp(aitken(lam[1], lam[2], lam[3]), 0.0, 1.0);
  return est;
}

OrdinalTail ordinal_sum_tail(const WTransformedCopula& cw, bool upper) {
  if (!cw.mixture_form())
    throw std::invalid_argument(
        "ordinal_sum_tail: requires an ordinal-sum base with piecewise "
        "surjective increasing margins on the same break grid; general "
        "piece directions are out of scope");
  // homogeneity check on a coarse grid
  for (int i = 1; i < 17; ++i) {
    const double u = i / 17.0;
    if (std::fabs(cw.margin(0).eval(u) - cw.margin(1).eval(u)) > 1e-10)
      throw std::invalid_argument("ordinal_sum_tail: margins must be equal");
  }
  const auto& brk = cw.base().breaks();
  const int K = static_cast<int>(brk.size()) - 1;
  std::vector<double> w(static_cast<std::size_t>(K));
  double total = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double width = brk[static_cast<std::size_t>(k)] -
                         brk[static_cast<std::size_t>(k - 1)];
    auto g_ratio = [&](double eps) {
      return upper ? (1.0 - cw.mixture_G(0, k, 1.0 - eps)) / eps
                   : cw.mixture_G(0, k, eps) / eps;
    };
    const double g = std::max(0.0, sqrt_richardson(g_ratio, 1e-5));
    w[static_cast<std::size_t>(k - 1)] = width * g;
    total += width * g;
  }
  if (std::fabs(total - 1.0) > 1e-6)
    throw std::logic_error("ordinal_sum_tail: boundary weights do not sum to 1");
  double lambda = 0.0;
  for (int k = 1; k <= K; ++k)
    lambda += w[static_cast<std::size_t>(k - 1)] *
              cw.base().components()[static_cast<std::size_t>(k - 1)].tail_lambda(upper);
  return {{upper, lambda, "analytic", {}, false}, std::move(w)};
}

TailEstimate vtransform_upper_tail(const Copula& c, const WTransform& v) {
  if (v.piece_count() != 2 || v.piece_increasing(1) || !v.piece_increasing(2))
    throw std::invalid_argument(
        "vtransform_upper_tail: need a two-piece decreasing/increasing map");
  const double m = std::fabs(v.deriv(1e-9, +1));
  const double ll = c.tail_lambda(false);
  const double lu = c.tail_lambda(true);
  double lambda = ll / m + (1.0 - 1.0 / m) * lu;
  if (!c.corner_tail_independent()) {
    std::vector<double> corner;
    for (double t : {1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4}) {
      const double x = v.piece_inverse(1, t);
      corner.push_back(
          (c.cdf2(x + t, x) + c.cdf2(x, x + t)) / (1.0 - t));
    }
    lambda += 2.0 / m - aitken(corner[0], corner[1], corner[2]);
  }
  return {true, std::clamp(lambda, 0.0, 1.0), "analytic", {}, false};
}

std::vector<double> mtcm_default_grid() {
  std::vector<double> b;
  const double lo = std::log(1.0 / 50.0);
  const double hi = std::log(50.0);
  for (int i = 0; i < 101; ++i)
    b.push_back(std::exp(lo + (hi - lo) * i / 100.0));
  return b;
}

MtcmEstimate mtcm_from_sample(const std::vector<double>& u1,
                              const std::vector<double>& u2, double p,
                              std::vector<double> b_grid) {
  if (u1.size() != u2.size() || u1.empty())
    throw std::invalid_argument("mtcm_from_sample: bad sample");
  const std::size_t n = u1.size();
  if (p <= 0.0) p = std::ceil(std::sqrt(static_cast<double>(n))) / static_cast<double>(n);
  if (b_grid.empty()) b_grid = mtcm_default_grid();
  MtcmEstimate out{0.0, 1.0, b_grid, p};
  for (double b : b_grid) {
    const double x = std::min(1.0, p * b);
    const double y = std::min(1.0, p / b);
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (u1[i] <= x && u2[i] <= y) ++cnt;
    const double lam = static_cast<double>(cnt) / (static_cast<double>(n) * p);
    if (lam > out.lambda_star) {
      out.lambda_star = lam;
      out.b_star = b;
    }
  }
  return out;
}

MtcmEstimate mtcm_from_cdf(const Cdf2& cdf, double p,
                           std::vector<double> b_grid) {
  if (p <= 0.0) throw std::invalid_argument("mtcm_from_cdf: p must be > 0");
  if (b_grid.empty()) b_grid = mtcm_default_grid();
  MtcmEstimate out{0.0, 1.0, b_grid, p};
  for (double b : b_grid) {
    const double lam = cdf(std::min(1.0, p * b), std::min(1.0, p / b)) / p;
    if (lam > out.lambda_star) {
      out.lambda_star = lam;
      out.b_star = b;
    }
  }
  return out;
}

double spearman_rho_sample(const std::vector<double>& x,
                           const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

double kendall_tau_sample(const std::vector<double>& x,
                          const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2)
    throw std::invalid_argument("kendall_tau_sample: bad sample");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b];
  });
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = y[idx[i]];
  std::vector<double> tmp(n);
  const std::size_t inversions = merge_count(v, tmp, 0, n);
  const double pairs = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  return 1.0 - 2.0 * static_cast<double>(inversions) / pairs;
}

McEstimate spearman_rho_mc(const RowSampler& sampler, std::size_t n,
                           std::uint64_t seed) {
  if (n < 10000)
    throw std::invalid_argument("spearman_rho_mc: need n >= 10^4");
  return batched_mc(sampler, n, seed, &spearman_rho_sample);
}

McEstimate kendall_tau_mc(const RowSampler& sampler, std::size_t n,
                          std::uint64_t seed) {
  if (n < 10000)
    throw std::invalid_argument("kendall_tau_mc: need n >= 10^4");
  return batched_mc(sampler, n, seed, &kendall_tau_sample);
}

double spearman_rho_quadrature(const Cdf2& cdf, int grid) {
  double acc = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double u = (i + 0.5) / grid;
    for (int j = 0; j < grid; ++j) acc += cdf(u, (j + 0.5) / grid);
  }
  return 12.0 * acc / (static_cast<double>(grid) * grid) - 3.0;
}

PiecewiseMapView view_of(const WTransform& w) {
  PiecewiseMapView v;
  for (int k = 0; k <= w.piece_count(); ++k) v.deltas.push_back(w.delta(k));
  for (int k = 1; k <= w.piece_count(); ++k)
    v.increasing.push_back(w.piece_increasing(k));
  const auto wp = std::make_shared<WTransform>(w);
  v.eval = [wp](int, double u) { return wp->eval(u); };
  v.inverse = [wp](int k, double vv) { return wp->piece_inverse(k, vv); };
  return v;
}

PieceBoundsReport piece_bounds_check(const PiecewiseMapView& w,
                                     int points_per_piece) {
  PieceBoundsReport rep{true, 0, 0.0, 0.0};
  const int K = static_cast<int>(w.increasing.size());
  constexpr double tol = 1e-9;
  auto record = [&rep](int k, double viol, double at) {
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_piece = k;
      rep.worst_point = at;
    }
    rep.pass = false;
  };
  for (int k = 1; k <= K; ++k) {
    const double dlo = w.deltas[static_cast<std::size_t>(k - 1)];
    const double dhi = w.deltas[static_cast<std::size_t>(k)];
    for (int i = 1; i <= points_per_piece; ++i) {
      const double u = dlo + (dhi - dlo) * i / (points_per_piece + 1.0);
      const double f = w.eval(k, u);
      const double v = static_cast<double>(i) / (points_per_piece + 1.0);
      const double x = w.inverse(k, v);
      if (w.increasing[static_cast<std::size_t>(k - 1)]) {
        if (f > u / dhi + tol) record(k, f - u / dhi, u);
        if (x < dhi * v - tol) record(k, dhi * v - x, v);
      } else {
        if (f > (1.0 - u) / (1.0 - dlo) + tol)
          record(k, f - (1.0 - u) / (1.0 - dlo), u);
        if (x > 1.0 - (1.0 - dlo) * v + tol)
          record(k, x - (1.0 - (1.0 - dlo) * v), v);
      }
    }
  }
  return rep;
}

}  // namespace wt
