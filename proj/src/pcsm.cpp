#include "wt/pcsm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wt/rootfind.hpp"

namespace wt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Piece Piece::linear(double slope, double intercept) {
  if (slope == 0.0) throw std::invalid_argument("linear piece: zero slope");
  Piece p;
  p.form = Form::linear;
  p.increasing = slope > 0.0;
  p.eval = [slope, intercept](double x) { return slope * x + intercept; };
  p.inverse = [slope, intercept](double y) { return (y - intercept) / slope; };
  p.deriv = [slope](double) { return slope; };
  return p;
}

Piece Piece::abs_value(bool increasing) {
  Piece p;
  p.form = Form::abs_value;
  p.increasing = increasing;
  p.eval = [](double x) { return std::fabs(x); };
  p.inverse = [increasing](double y) { return increasing ? y : -y; };
  p.deriv = [increasing](double) { return increasing ? 1.0 : -1.0; };
  return p;
}

Piece Piece::exp_quad(bool increasing) {
  Piece p;
  p.form = Form::exp_quad;
  p.increasing = increasing;
  p.eval = [](double x) {
    const double d = x - 0.25;
    return std::exp(3.0 * d * d);
  };
  p.inverse = [increasing](double y) {
    const double r = std::sqrt(std::max(0.0, std::log(y) / 3.0));
    return increasing ? 0.25 + r : 0.25 - r;
  };
  p.deriv = [](double x) {
    const double d = x - 0.25;
    return 6.0 * d * std::exp(3.0 * d * d);
  };
  return p;
}

Piece Piece::reciprocal() {
  Piece p;
  p.form = Form::reciprocal;
  p.increasing = false;
  p.eval = [](double x) { return 1.0 / x; };
  p.inverse = [](double y) { return 1.0 / y; };
  p.deriv = [](double x) { return -1.0 / (x * x); };
  return p;
}

Piece Piece::generic(bool increasing, std::function<double(double)> eval,
                     std::function<double(double)> inverse,
                     std::function<double(double)> deriv) {
  Piece p;
  p.form = Form::generic;
  p.increasing = increasing;
  p.eval = std::move(eval);
  p.inverse = std::move(inverse);
  p.deriv = std::move(deriv);
  return p;
}

PcsmFunction::PcsmFunction(std::vector<double> change_points,
                           std::vector<Piece> pieces)
    : t_(std::move(change_points)), pieces_(std::move(pieces)) {
  if (t_.size() != pieces_.size() + 1)
    throw std::invalid_argument("pcsm: need K+1 change points for K pieces");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1]))
      throw std::invalid_argument("pcsm: change points must increase");
  }
  for (const auto& p : pieces_) {
    if (!p.eval) throw std::invalid_argument("pcsm: piece without evaluator");
  }
}

PcsmFunction PcsmFunction::frac_part_square() {
  PcsmFunction f;
  f.lazy_ = true;
  return f;
}

int PcsmFunction::piece_count() const {
  if (lazy_) throw std::logic_error("pcsm: lazy function has no finite K");
  return static_cast<int>(pieces_.size());
}

double PcsmFunction::domain_lo() const { return lazy_ ? 1.0 : t_.front(); }

double PcsmFunction::domain_hi() const { return lazy_ ? kInf : t_.back(); }

double PcsmFunction::change_point(int k) const {
  if (lazy_) {
    if (k < 0) throw std::out_of_range("change_point");
    return std::sqrt(static_cast<double>(k) + 1.0);
  }
  return t_.at(static_cast<std::size_t>(k));
}

int PcsmFunction::piece_of(double x) const {
  if (x < domain_lo() || x > domain_hi())
    throw std::domain_error("pcsm: x outside domain");
  if (lazy_) {
    if (x == 1.0) return 1;
    const double s = x * x;
    const double c = std::ceil(s);
    return static_cast<int>(c) - 1;
  }
  if (x == t_.front()) return 1;
  const auto it = std::lower_bound(t_.begin() + 1, t_.end(), x);
  return static_cast<int>(it - t_.begin());
}

double PcsmFunction::piece_eval(int k, double x) const {
  if (lazy_) return x * x - static_cast<double>(k);
  return pieces_.at(static_cast<std::size_t>(k - 1)).eval(x);
}

double PcsmFunction::eval(double x) const {
  const int k = piece_of(x);
  if (!lazy_) {
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (x == t_[i]) {
        const auto it = overrides_.find(static_cast<int>(i));
        if (it != overrides_.end()) return it->second;
      }
    }
  }
  return piece_eval(k, x);
}

double PcsmFunction::piece_inverse(int k, double y) const {
  if (lazy_) return std::sqrt(y + static_cast<double>(k));
  const Piece& p = pieces_.at(static_cast<std::size_t>(k - 1));
  const double a = t_[static_cast<std::size_t>(k - 1)];
  const double b = t_[static_cast<std::size_t>(k)];
  if (p.inverse) {
    const double x = p.inverse(y);
    return std::clamp(x, a, b);
  }
  const double tol = 1e-12 * std::max(1.0, b - a);
  return bisect_monotone(p.eval, a, b, y, tol);
}

double PcsmFunction::piece_deriv(int k, double x) const {
  if (lazy_) return 2.0 * x;
  const Piece& p = pieces_.at(static_cast<std::size_t>(k - 1));
  if (p.deriv) return p.deriv(x);
  const double a = t_[static_cast<std::size_t>(k - 1)];
  const double b = t_[static_cast<std::size_t>(k)];
  double h = std::min(1e-6, 0.25 * (b - a));
  const double x0 = std::clamp(x, a + h, b - h);
  return (p.eval(x0 + h) - p.eval(x0 - h)) / (2.0 * h);
}

bool PcsmFunction::piece_increasing(int k) const {
  if (lazy_) return true;
  return pieces_.at(static_cast<std::size_t>(k - 1)).increasing;
}

std::pair<double, double> PcsmFunction::piece_range(int k) const {
  if (lazy_) return {0.0, 1.0};
  const Piece& p = pieces_.at(static_cast<std::size_t>(k - 1));
  const double a = t_[static_cast<std::size_t>(k - 1)];
  const double b = t_[static_cast<std::size_t>(k)];
  const double fa = p.eval(a);
  const double fb = p.eval(b);
  return {std::min(fa, fb), std::max(fa, fb)};
}

void PcsmFunction::set_value_at_change_point(int k, double value) {
  if (lazy_) throw std::logic_error("pcsm: no overrides on lazy functions");
  if (k < 0 || k >= static_cast<int>(t_.size()))
    throw std::out_of_range("set_value_at_change_point");
  overrides_[k] = value;
}

std::optional<double> PcsmFunction::value_override(int k) const {
  const auto it = overrides_.find(k);
  if (it == overrides_.end()) return std::nullopt;
  return it->second;
}

ValidationReport PcsmFunction::validate() const {
  ValidationReport report;
  if (lazy_) return report;
  constexpr int n_samples = 256;
  for (int k = 1; k <= piece_count(); ++k) {
    const double a = t_[static_cast<std::size_t>(k - 1)];
    const double b = t_[static_cast<std::size_t>(k)];
    const bool inc = piece_increasing(k);
    double prev_x = a + (b - a) / (n_samples + 1);
    double prev_y = piece_eval(k, prev_x);
    for (int i = 2; i <= n_samples; ++i) {
      const double x = a + (b - a) * i / (n_samples + 1);
      const double y = piece_eval(k, x);
      if (y == prev_y) {
        report.issues.push_back({k, "constant plateau", prev_x, x});
        break;
      }
      if ((y > prev_y) != inc) {
        report.issues.push_back({k, "non-monotone sample pair", prev_x, x});
        break;
      }
      prev_x = x;
      prev_y = y;
    }
  }
  return report;
}

PcsmFunction piecewise_linear(
    const std::vector<double>& t,
    const std::vector<std::pair<double, double>>& slope_intercept) {
  std::vector<Piece> pieces;
  pieces.reserve(slope_intercept.size());
  for (const auto& [s, c] : slope_intercept) pieces.push_back(Piece::linear(s, c));
  return PcsmFunction(t, std::move(pieces));
}

std::optional<int> periodicity(const PcsmFunction& w, int p_max) {
  const int K = w.piece_count();
  if (w.domain_lo() != 0.0 || w.domain_hi() != 1.0)
    throw std::invalid_argument("periodicity: map must be a self-map of [0,1]");

  // Necessary condition: bijective piecewise linear with unit slopes.
  std::vector<std::pair<double, double>> images;
  for (int k = 1; k <= K; ++k) {
    const double a = w.change_point(k - 1);
    const double b = w.change_point(k);
    const double m = 0.5 * (a + b);
    const double slope = (w.piece_eval(k, m + 0.25 * (b - a)) -
                          w.piece_eval(k, m - 0.25 * (b - a))) /
                         (0.5 * (b - a));
    if (std::fabs(std::fabs(slope) - 1.0) > 1e-12)
      throw std::invalid_argument(
          "periodicity: only bijective piecewise linear maps with unit "
          "slopes can be periodic");
    // linearity probe
    const double mid = w.piece_eval(k, m);
    const double lin = 0.5 * (w.piece_eval(k, m - 0.25 * (b - a)) +
                              w.piece_eval(k, m + 0.25 * (b - a)));
    if (std::fabs(mid - lin) > 1e-12)
      throw std::invalid_argument("periodicity: map is not piecewise linear");
    images.push_back(w.piece_range(k));
  }
  std::sort(images.begin(), images.end());
  double covered = 0.0;
  for (const auto& [lo, hi] : images) {
    if (lo > covered + 1e-9)
      throw std::invalid_argument("periodicity: map is not bijective");
    covered = std::max(covered, hi);
  }
  if (covered < 1.0 - 1e-9)
    throw std::invalid_argument("periodicity: map is not bijective");

  constexpr int n_grid = 10007;
  std::vector<double> u0(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    double u = (i + 0.5) / n_grid;
    // keep grid points off breakpoints
    for (int k = 0; k <= K; ++k) {
      if (std::fabs(u - w.change_point(k)) < 1e-9) u += 1e-9;
    }
    u0[i] = u;
  }
  std::vector<double> u = u0;
  for (int p = 1; p <= p_max; ++p) {
    for (double& x : u) x = w.eval(std::clamp(x, 0.0, 1.0));
    bool identity = true;
    for (int i = 0; i < n_grid; ++i) {
      if (std::fabs(u[i] - u0[i]) > 1e-8) {
        identity = false;
        break;
      }
    }
    if (identity) return p;
  }
  return std::nullopt;
}

}  // namespace wt
