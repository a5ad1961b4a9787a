#include "wt/wtransform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "wt/rootfind.hpp"

namespace wt {

namespace {

constexpr double kZeroLimit = 1e-12;  // W(0) evaluated as W(1e-12)

// sum_{n=n0}^inf [n^-a - (n+y)^-a], Euler-Maclaurin closure.
double pareto_series_tail(double a, double n0, double y) {
  const double integral =
      a == 1.0 ? std::log((n0 + y) / n0)
               : (std::pow(n0, 1.0 - a) - std::pow(n0 + y, 1.0 - a)) / (a - 1.0);
  const double f0 = std::pow(n0, -a) - std::pow(n0 + y, -a);
  const double f1 = -a * std::pow(n0, -a - 1.0) + a * std::pow(n0 + y, -a - 1.0);
  const double c3 = a * (a + 1.0) * (a + 2.0);
  const double f3 =
      -c3 * std::pow(n0, -a - 3.0) + c3 * std::pow(n0 + y, -a - 3.0);
  return integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0;
}

// sum_{n=n0}^inf a (n+y)^-(a+1), Euler-Maclaurin closure.
double pareto_density_tail(double a, double n0, double y) {
  const double integral = std::pow(n0 + y, -a);
  const double f0 = a * std::pow(n0 + y, -a - 1.0);
  const double f1 = -a * (a + 1.0) * std::pow(n0 + y, -a - 2.0);
  const double f3 = -a * (a + 1.0) * (a + 2.0) * (a + 3.0) *
                    std::pow(n0 + y, -a - 4.0);
  return integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0;
}

}  // namespace

WTransform::WTransform(BaseDistribution base, PcsmFunction transform)
    : base_(std::move(base)), transform_(std::move(transform)) {}

WTransform WTransform::build(BaseDistribution base, PcsmFunction transform) {
  if (!base.is_continuous())
    throw std::invalid_argument(
        "WTransform::build: base distribution has atoms and is not "
        "uniformity-preserving under this construction; use "
        "GenWTransform::build");
  WTransform w(std::move(base), std::move(transform));
  w.lazy_ = w.transform_.lazy();
  if (w.lazy_) {
    if (w.base_.kind() != BaseDistribution::Kind::pareto1)
      throw std::invalid_argument(
          "WTransform::build: lazy transforms are supported for Pareto "
          "type-I bases only");
    w.k_ = 64;
    return w;
  }
  const int K = w.transform_.piece_count();
  if (std::fabs(w.base_.support_lo() - w.transform_.change_point(0)) > 1e-12 ||
      std::fabs(w.base_.support_hi() - w.transform_.change_point(K)) > 1e-12)
    throw std::invalid_argument(
        "WTransform::build: support of F_X must span [t_0, t_K]");
  const auto report = w.transform_.validate();
  if (!report.ok())
    throw std::invalid_argument("WTransform::build: invalid pcsm function: " +
                                report.issues.front().what);
  w.k_ = K;
  w.deltas_.resize(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k)
    w.deltas_[static_cast<std::size_t>(k)] =
        w.base_.cdf(w.transform_.change_point(k));
  w.deltas_.front() = 0.0;
  w.deltas_.back() = 1.0;
  for (int k = 1; k <= K; ++k) {
    if (!(w.deltas_[static_cast<std::size_t>(k)] >
          w.deltas_[static_cast<std::size_t>(k - 1)]))
      throw std::invalid_argument(
          "WTransform::build: change points delta_k must be strictly "
          "increasing");
  }
  w.t_ranges_.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) w.t_ranges_.push_back(w.transform_.piece_range(k));
  w.v_ranges_.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const auto [lo, hi] = w.t_ranges_[static_cast<std::size_t>(k - 1)];
    w.v_ranges_.push_back({w.transformed_cdf(lo), w.transformed_cdf(hi)});
  }
  if (w.base_.kind() == BaseDistribution::Kind::uniform &&
      w.base_.support_lo() == 0.0 && w.base_.support_hi() == 1.0) {
    // F_{T(X)} = id makes W = T with analytic piece inverses
    bool identity = true;
    for (int i = 0; i <= 64 && identity; ++i) {
      const double y = i / 64.0;
      identity = std::fabs(w.transformed_cdf(y) - y) <= 1e-12;
    }
    w.w_equals_t_ = identity;
  }
  return w;
}

double WTransform::transformed_cdf(double y) const {
  if (lazy_) {
    const double a = 0.5 * base_.param(0);
    const double yc = std::clamp(y, 0.0, 1.0);
    double acc = 0.0;
    for (int n = 1; n < lazy_terms_; ++n)
      acc += std::pow(n, -a) - std::pow(n + yc, -a);
    return acc + pareto_series_tail(a, lazy_terms_, yc);
  }
  double acc = 0.0;
  for (int k = 1; k <= k_; ++k) {
    const auto [lo, hi] = t_ranges_[static_cast<std::size_t>(k - 1)];
    const double fa = deltas_[static_cast<std::size_t>(k - 1)];
    const double fb = deltas_[static_cast<std::size_t>(k)];
    if (y >= hi) {
      acc += fb - fa;
    } else if (y >= lo) {
      const double x = transform_.piece_inverse(k, y);
      const double fx = std::clamp(base_.cdf(x), fa, fb);
      acc += transform_.piece_increasing(k) ? fx - fa : fb - fx;
    }
  }
  return acc;
}

double WTransform::transformed_quantile(double v) const {
  if (lazy_) {
    return bisect_monotone([this](double y) { return transformed_cdf(y); },
                           0.0, 1.0, v, 1e-15);
  }
  double ylo = t_ranges_.front().first;
  double yhi = t_ranges_.front().second;
  for (const auto& [lo, hi] : t_ranges_) {
    ylo = std::min(ylo, lo);
    yhi = std::max(yhi, hi);
  }
  return bisect_monotone([this](double y) { return transformed_cdf(y); }, ylo,
                         yhi, v, 1e-15 * std::max(1.0, yhi - ylo));
}

double WTransform::eval(double u) const {
  if (u < 0.0 || u > 1.0) throw std::domain_error("WTransform: u outside [0,1]");
  if (u == 0.0) u = kZeroLimit;
  if (lazy_) {
    if (u == 1.0) return 1.0;  // T has no limit at +inf; null-set convention
    const double x = base_.quantile(u);
    const double s = x * x;
    double y = s - std::ceil(s) + 1.0;
    if (y <= 0.0) y = 1.0;
    return transformed_cdf(y);
  }
  const double x = base_.quantile(u);
  return transformed_cdf(transform_.eval(x));
}

double WTransform::eval_on_piece(int k, double u) const {
  const double x = base_.quantile(u);
  if (lazy_) {
    return transformed_cdf(x * x - static_cast<double>(k));
  }
  return transformed_cdf(transform_.piece_eval(k, x));
}

double WTransform::delta(int k) const {
  if (lazy_) {
    const double a = 0.5 * base_.param(0);
    return 1.0 - std::pow(static_cast<double>(k) + 1.0, -a);
  }
  return deltas_.at(static_cast<std::size_t>(k));
}

bool WTransform::piece_increasing(int k) const {
  if (lazy_) return true;
  return transform_.piece_increasing(k);
}

std::pair<double, double> WTransform::piece_image(int k) const {
  if (lazy_) return {0.0, 1.0};
  return v_ranges_.at(static_cast<std::size_t>(k - 1));
}

double WTransform::piece_inverse(int k, double v) const {
  const double dlo = delta(k - 1);
  const double dhi = delta(k);
  if (lazy_) {
    if (v <= 0.0) return dlo;
    if (v >= 1.0) return dhi;
    const double y = transformed_quantile(v);
    return base_.cdf(std::sqrt(static_cast<double>(k) + y));
  }
  const auto [vlo, vhi] = v_ranges_.at(static_cast<std::size_t>(k - 1));
  if (piece_increasing(k)) {
    if (v <= vlo) return dlo;
    if (v > vhi) return dhi;  // inf of empty set
  } else {
    if (v <= vlo) return dhi;  // whole piece satisfies W >= v
    if (v >= vhi) return dlo;  // sup of empty set
  }
  if (w_equals_t_)
    return std::clamp(transform_.piece_inverse(k, v), dlo, dhi);
  return bisect_monotone([this, k](double u) { return eval_on_piece(k, u); },
                         dlo, dhi, v, 1e-15);
}

std::pair<double, double> WTransform::preimage_interval(int k, double v) const {
  const double x = piece_inverse(k, v);
  if (piece_increasing(k)) return {delta(k - 1), x};
  return {x, delta(k)};
}

double WTransform::preimage_measure(double v, int explicit_pieces) const {
  if (lazy_) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    const double a = 0.5 * base_.param(0);
    const double y = transformed_quantile(v);
    double acc = 0.0;
    for (int n = 1; n <= explicit_pieces; ++n)
      acc += std::pow(n, -a) - std::pow(n + y, -a);
    return acc + pareto_series_tail(a, explicit_pieces + 1.0, y);
  }
  double acc = 0.0;
  for (int k = 1; k <= k_; ++k) {
    const auto [lo, hi] = preimage_interval(k, v);
    acc += hi - lo;
  }
  return acc;
}

bool WTransform::have_analytic_deriv() const {
  if (lazy_) return true;
  for (int k = 1; k <= k_; ++k) {
    const double mid = 0.5 * (transform_.change_point(k - 1) +
                              transform_.change_point(k));
    try {
      transform_.piece_deriv(k, mid);
    } catch (...) {
      return false;
    }
  }
  return true;
}

double WTransform::transformed_pdf_side(double y, int side) const {
  if (lazy_) {
    const double a = 0.5 * base_.param(0);
    double acc = 0.0;
    for (int n = 1; n < lazy_terms_; ++n)
      acc += a * std::pow(n + y, -a - 1.0);
    return acc + pareto_density_tail(a, lazy_terms_, y);
  }
  if (side == 0)
    return 0.5 * (transformed_pdf_side(y, -1) + transformed_pdf_side(y, +1));
  double acc = 0.0;
  for (int k = 1; k <= k_; ++k) {
    const auto [lo, hi] = t_ranges_[static_cast<std::size_t>(k - 1)];
    const bool active = side < 0 ? (y > lo && y <= hi) : (y >= lo && y < hi);
    if (!active) continue;
    const double x = transform_.piece_inverse(k, y);
    const double tp = std::fabs(transform_.piece_deriv(k, x));
    if (tp <= 0.0) continue;
    acc += base_.pdf(x) / tp;
  }
  return acc;
}

int WTransform::piece_index(double u) const {
  if (lazy_) {
    const double a = 0.5 * base_.param(0);
    int k = std::max(
        1, static_cast<int>(std::ceil(std::pow(1.0 - u, -1.0 / a))) - 1);
    while (delta(k) < u) ++k;
    return k;
  }
  const auto it = std::lower_bound(deltas_.begin() + 1, deltas_.end(), u);
  return std::clamp(static_cast<int>(it - deltas_.begin()), 1, k_);
}

double WTransform::deriv(double u, int dir) const {
  u = std::clamp(u, kZeroLimit, 1.0);
  const int k = piece_index(u);
  const double sign = piece_increasing(k) ? 1.0 : -1.0;
  if (w_equals_t_) return transform_.piece_deriv(k, base_.quantile(u));
  if (have_analytic_deriv()) {
    const double x = base_.quantile(u);
    const double fx = base_.pdf(x);
    if (fx > 0.0 && std::isfinite(fx)) {
      double y;
      double tp;
      if (lazy_) {
        y = x * x - std::ceil(x * x) + 1.0;
        if (y <= 0.0) y = 1.0;
        tp = 2.0 * x;
      } else {
        y = transform_.piece_eval(k, x);
        tp = transform_.piece_deriv(k, x);
      }
      const int yside = dir == 0 ? 0 : (sign > 0 ? dir : -dir);
      return sign * transformed_pdf_side(y, yside) * std::fabs(tp) / fx;
    }
  }
  const double dlo = delta(k - 1);
  const double dhi = delta(k);
  const double h = std::min(1e-6, 0.25 * (dhi - dlo));
  if (dir < 0) {
    const double u0 = std::min(u, dhi);
    return (eval_on_piece(k, u0) - eval_on_piece(k, u0 - h)) / h;
  }
  if (dir > 0) {
    const double u0 = std::max(u, dlo);
    return (eval_on_piece(k, u0 + h) - eval_on_piece(k, u0)) / h;
  }
  const double u0 = std::clamp(u, dlo + h, dhi - h);
  return (eval_on_piece(k, u0 + h) - eval_on_piece(k, u0 - h)) / (2.0 * h);
}

PssmWTransform::PssmWTransform(std::vector<double> t, std::vector<int> r,
                               BaseDistribution base)
    : t_(std::move(t)), r_(std::move(r)), base_(std::move(base)) {
  if (t_.size() != r_.size() + 1)
    throw std::invalid_argument("pssm: need K+1 knots for K directions");
  if (t_.front() != 0.0 || t_.back() != 1.0)
    throw std::invalid_argument("pssm: knots must span [0,1]");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw std::invalid_argument("pssm: knots must be strictly increasing");
  for (int f : r_)
    if (f != 0 && f != 1)
      throw std::invalid_argument("pssm: directions must be 0 or 1");
  if (!base_.is_continuous())
    throw std::invalid_argument("pssm: base must be continuous");
  if (std::fabs(base_.support_lo()) > 1e-12 ||
      std::fabs(base_.support_hi() - 1.0) > 1e-12)
    throw std::invalid_argument("pssm: base support must be [0,1]");
}

double PssmWTransform::eval(double u) const {
  if (u < 0.0 || u > 1.0) throw std::domain_error("pssm: u outside [0,1]");
  if (u == 0.0) u = kZeroLimit;
  const double x = base_.quantile(u);
  const std::size_t K = r_.size();
  std::size_t k = 1;
  while (k < K && x > t_[k]) ++k;
  const double width = t_[k] - t_[k - 1];
  const double y =
      r_[k - 1] == 1 ? (x - t_[k - 1]) / width : (t_[k] - x) / width;
  double acc = 0.0;
  for (std::size_t j = 1; j <= K; ++j) {
    if (r_[j - 1] == 1) {
      acc += base_.cdf(y * t_[j] + (1.0 - y) * t_[j - 1]) -
             base_.cdf(t_[j - 1]);
    } else {
      acc += base_.cdf(t_[j]) - base_.cdf(y * t_[j - 1] + (1.0 - y) * t_[j]);
    }
  }
  return acc;
}

WTransform PssmWTransform::to_generic() const {
  std::vector<Piece> pieces;
  pieces.reserve(r_.size());
  for (std::size_t k = 1; k <= r_.size(); ++k) {
    const double width = t_[k] - t_[k - 1];
    const double slope = (r_[k - 1] == 1 ? 1.0 : -1.0) / width;
    const double c = r_[k - 1] == 1 ? t_[k - 1] : t_[k];
    pieces.push_back(Piece::linear(slope, -slope * c));
  }
  return WTransform::build(base_, PcsmFunction(t_, std::move(pieces)));
}

BoundaryDerivative pssm_boundary_derivative(const PssmWTransform& w, int end) {
  if (end != 0 && end != 1)
    throw std::invalid_argument("pssm_boundary_derivative: end must be 0 or 1");
  bool all_increasing = true;
  for (int f : w.directions()) all_increasing = all_increasing && f == 1;
  const bool diverges = end == 0 ? w.base().pdf_infinite_at_lo()
                                 : w.base().pdf_infinite_at_hi();
  // Difference-quotient limit with Richardson steps. Stops above the
  // cancellation floor of 1 - W(1 - eps).
  auto slope = [&](double eps) {
    return end == 0 ? w.eval(eps) / eps : (1.0 - w.eval(1.0 - eps)) / eps;
  };
  const double s4 = slope(1e-4);
  const double s5 = slope(1e-5);
  const double s6 = slope(1e-6);
  // model A + B eps: two extrapolations, then one more level
  const double a45 = (10.0 * s5 - s4) / 9.0;
  const double a56 = (10.0 * s6 - s5) / 9.0;
  const double best = std::fabs(a56 - a45) < 1e-7 ? a56 : (10.0 * a56 - a45) / 9.0;
  return {best, all_increasing && diverges};
}

GenWTransform::GenWTransform(BaseDistribution base, PcsmFunction transform)
    : base_(std::move(base)), transform_(std::move(transform)) {}

GenWTransform GenWTransform::build(BaseDistribution base,
                                   PcsmFunction transform) {
  if (base.is_continuous())
    throw std::invalid_argument(
        "GenWTransform::build: base is continuous; use WTransform::build");
  if (transform.lazy())
    throw std::invalid_argument("GenWTransform::build: lazy T not supported");
  const int K = transform.piece_count();
  if (std::fabs(base.support_lo() - transform.change_point(0)) > 1e-12 ||
      std::fabs(base.support_hi() - transform.change_point(K)) > 1e-12)
    throw std::invalid_argument(
        "GenWTransform::build: support of F_X must span [t_0, t_K]");
  return GenWTransform(std::move(base), std::move(transform));
}

double GenWTransform::transformed_atom_mass(double s) const {
  double acc = 0.0;
  for (const auto& a : base_.atoms()) {
    if (transform_.eval(a.x) == s) acc += a.mass;
  }
  return acc;
}

double GenWTransform::transformed_cdf(double y) const {
  double acc = 0.0;
  const int K = transform_.piece_count();
  const double t0 = transform_.change_point(0);
  if (transform_.eval(t0) <= y) acc += base_.atom_mass_at(t0);
  for (int k = 1; k <= K; ++k) {
    const double a = transform_.change_point(k - 1);
    const double b = transform_.change_point(k);
    const double fa = transform_.piece_eval(k, a);
    const double fb = transform_.piece_eval(k, b);
    const double lo = std::min(fa, fb);
    const double hi = std::max(fa, fb);
    const bool inc = transform_.piece_increasing(k);
    if (y >= hi) {
      acc += base_.cdf_left(b) - base_.cdf(a);
    } else if (y >= lo) {
      const double x = transform_.piece_inverse(k, y);
      if (inc) {
        acc += std::clamp(base_.cdf(x), base_.cdf(a), base_.cdf_left(b)) -
               base_.cdf(a);
      } else {
        acc += base_.cdf_left(b) -
               std::clamp(base_.cdf_left(x), base_.cdf(a), base_.cdf_left(b));
      }
    }
    if (transform_.eval(b) <= y) acc += base_.atom_mass_at(b);
  }
  return acc;
}

double GenWTransform::eval(double u) const {
  if (u < 0.0 || u > 1.0)
    throw std::domain_error("GenWTransform: u outside [0,1]");
  if (u == 0.0) u = kZeroLimit;
  const double x = base_.quantile(u);
  const double m = base_.atom_mass_at(x);
  const double s = transform_.eval(x);
  if (m > 0.0) {
    const double v = std::clamp((u - base_.cdf_left(x)) / m, 0.0, 1.0);
    const double jump = transformed_atom_mass(s);
    return transformed_cdf(s) - jump + v * jump;
  }
  return transformed_cdf(s);
}

std::vector<GenWTransform::JumpInterval> GenWTransform::jump_intervals() const {
  std::vector<JumpInterval> out;
  for (const auto& a : base_.atoms()) {
    const double s = transform_.eval(a.x);
    out.push_back({base_.cdf_left(a.x), base_.cdf(a.x),
                   transformed_atom_mass(s) / a.mass});
  }
  return out;
}

PcsmFunction compose(const WTransform& outer, const WTransform& inner) {
  if (inner.lazy() || outer.lazy())
    throw std::invalid_argument("compose: lazy transforms not supported");
  std::vector<double> brk;
  for (int k = 0; k <= inner.piece_count(); ++k) brk.push_back(inner.delta(k));
  for (int k = 1; k <= inner.piece_count(); ++k) {
    const auto [vlo, vhi] = inner.piece_image(k);
    for (int j = 1; j < outer.piece_count(); ++j) {
      const double d = outer.delta(j);
      if (d > vlo + 1e-12 && d < vhi - 1e-12)
        brk.push_back(inner.piece_inverse(k, d));
    }
  }
  std::sort(brk.begin(), brk.end());
  std::vector<double> t;
  for (double b : brk) {
    if (t.empty() || b - t.back() > 1e-10) t.push_back(b);
  }
  t.front() = 0.0;
  t.back() = 1.0;

  const auto o = std::make_shared<WTransform>(outer);
  const auto i = std::make_shared<WTransform>(inner);
  std::vector<Piece> pieces;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double m = 0.5 * (t[k - 1] + t[k]);
    const double q = 0.25 * (t[k] - t[k - 1]);
    // pin the branches so the evaluator extends continuously to the
    // closed sub-interval (the raw composition jumps at breakpoints)
    const int ki = i->piece_index(m);
    const int ko = o->piece_index(i->piece_eval(ki, m));
    auto f = [o, i, ki, ko](double x) {
      return o->piece_eval(ko, i->piece_eval(ki, x));
    };
    const bool inc = f(m + q) > f(m - q);
    pieces.push_back(Piece::generic(inc, f));
  }
  return PcsmFunction(std::move(t), std::move(pieces));
}

}  // namespace wt
