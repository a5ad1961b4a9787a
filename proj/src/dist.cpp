#include "wt/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wt/rootfind.hpp"

namespace wt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog4 = std::log(4.0);
const double kEmHalf = std::exp(-0.5);
}  // namespace

BaseDistribution::BaseDistribution(Kind kind, std::vector<double> params,
                                   double lo, double hi,
                                   std::vector<Atom> atoms)
    : kind_(kind),
      params_(std::move(params)),
      lo_(lo),
      hi_(hi),
      atoms_(std::move(atoms)) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i > 0 && atoms_[i].x <= atoms_[i - 1].x)
      throw std::invalid_argument("atoms must be strictly increasing");
    if (atoms_[i].mass <= 0.0)
      throw std::invalid_argument("atom mass must be positive");
    total += atoms_[i].mass;
  }
  if (total > 1.0 + 1e-12)
    throw std::invalid_argument("atom masses exceed 1");
}

BaseDistribution BaseDistribution::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
  return BaseDistribution(Kind::uniform, {a, b}, a, b);
}

BaseDistribution BaseDistribution::pareto1(double shape) {
  if (shape <= 0.0) throw std::invalid_argument("pareto1: shape must be > 0");
  return BaseDistribution(Kind::pareto1, {shape}, 1.0, kInf);
}

BaseDistribution BaseDistribution::power_law(double exponent) {
  if (exponent <= 0.0)
    throw std::invalid_argument("power_law: exponent must be > 0");
  return BaseDistribution(Kind::power_law, {exponent}, 0.0, 1.0);
}

BaseDistribution BaseDistribution::two_sided_exp() {
  return BaseDistribution(Kind::two_sided_exp, {}, 0.0, 1.0);
}

BaseDistribution BaseDistribution::kumaraswamy_like(double a) {
  if (a <= 0.0) throw std::invalid_argument("kumaraswamy_like: a must be > 0");
  return BaseDistribution(Kind::kumaraswamy_like, {a}, 0.0, 1.0);
}

BaseDistribution BaseDistribution::bernoulli(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("bernoulli: p outside [0,1]");
  std::vector<Atom> atoms;
  if (p < 1.0) atoms.push_back({0.0, 1.0 - p});
  if (p > 0.0) atoms.push_back({1.0, p});
  const double lo = p < 1.0 ? 0.0 : 1.0;
  const double hi = p > 0.0 ? 1.0 : 0.0;
  return BaseDistribution(Kind::bernoulli, {p}, lo, hi, std::move(atoms));
}

BaseDistribution BaseDistribution::mixed_exp() {
  std::vector<Atom> atoms{{0.0, 2.0 * kEmHalf - 1.0}};
  return BaseDistribution(Kind::mixed_exp, {}, -1.0, 1.0, std::move(atoms));
}

BaseDistribution BaseDistribution::tabulated(std::vector<double> x,
                                             std::vector<double> p) {
  if (x.size() != p.size() || x.size() < 2)
    throw std::invalid_argument("tabulated: need matching grids, size >= 2");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] <= x[i - 1] || p[i] < p[i - 1])
      throw std::invalid_argument("tabulated: grid must be monotone");
  }
  if (p.front() != 0.0 || p.back() != 1.0)
    throw std::invalid_argument("tabulated: p must span [0,1]");
  BaseDistribution d(Kind::tabulated, {}, x.front(), x.back());
  d.tab_x_ = std::move(x);
  d.tab_p_ = std::move(p);
  return d;
}

BaseDistribution BaseDistribution::discrete(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("discrete: no atoms");
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("discrete: masses must sum to 1");
  const double lo = atoms.front().x;
  const double hi = atoms.back().x;
  return BaseDistribution(Kind::bernoulli, {}, lo, hi, std::move(atoms));
}

double BaseDistribution::cdf(double x) const {
  if (x >= hi_) return 1.0;
  switch (kind_) {
    case Kind::uniform: {
      const double a = params_[0], b = params_[1];
      if (x < a) return 0.0;
      return (x - a) / (b - a);
    }
    case Kind::pareto1: {
      if (x < 1.0) return 0.0;
      return 1.0 - std::pow(x, -params_[0]);
    }
    case Kind::power_law: {
      if (x < 0.0) return 0.0;
      return std::pow(x, params_[0]);
    }
    case Kind::two_sided_exp: {
      if (x < 0.0) return 0.0;
      if (x < 0.5) return 1.0 - std::exp(-x * kLog4);
      return std::exp((x - 1.0) * kLog4);
    }
    case Kind::kumaraswamy_like: {
      if (x <= 0.0) return 0.0;
      return 1.0 / (1.0 + std::pow(1.0 / x - 1.0, params_[0]));
    }
    case Kind::bernoulli: {
      double acc = 0.0;
      for (const auto& a : atoms_)
        if (a.x <= x) acc += a.mass;
      return acc;
    }
    case Kind::mixed_exp: {
      if (x < -1.0) return 0.0;
      if (x < 0.0) return 1.0 - std::exp(-0.5 * (x + 1.0));
      if (x == 0.0) return kEmHalf;
      return 1.0 + kEmHalf - std::exp(-0.5 * x);
    }
    case Kind::tabulated: {
      if (x < tab_x_.front()) return 0.0;
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
      const double x0 = tab_x_[i - 1], x1 = tab_x_[i];
      const double p0 = tab_p_[i - 1], p1 = tab_p_[i];
      return p0 + (p1 - p0) * (x - x0) / (x1 - x0);
    }
  }
  return 0.0;
}

double BaseDistribution::atom_mass_at(double x) const {
  for (const auto& a : atoms_)
    if (a.x == x) return a.mass;
  return 0.0;
}

double BaseDistribution::cdf_left(double x) const {
  return cdf(x) - atom_mass_at(x);
}

double BaseDistribution::quantile(double p) const {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("quantile: p outside [0,1]");
  if (p == 1.0) return hi_;  // right endpoint of F_X
  switch (kind_) {
    case Kind::uniform:
      return params_[0] + p * (params_[1] - params_[0]);
    case Kind::pareto1:
      return std::pow(1.0 - p, -1.0 / params_[0]);
    case Kind::power_law:
      return std::pow(p, 1.0 / params_[0]);
    case Kind::two_sided_exp:
      if (p <= 0.5) return -std::log1p(-p) / kLog4 * 1.0;
      return 1.0 + std::log(p) / kLog4;
    case Kind::kumaraswamy_like: {
      if (p == 0.0) return 0.0;
      return 1.0 / (1.0 + std::pow((1.0 - p) / p, 1.0 / params_[0]));
    }
    case Kind::bernoulli: {
      double acc = 0.0;
      for (const auto& a : atoms_) {
        acc += a.mass;
        if (p <= acc + 1e-15) return a.x;
      }
      return atoms_.back().x;
    }
    case Kind::mixed_exp: {
      const double f_left = 1.0 - kEmHalf;
      if (p < f_left) return -2.0 * std::log1p(-p) - 1.0;
      if (p <= kEmHalf) return 0.0;
      return -2.0 * std::log(1.0 + kEmHalf - p);
    }
    case Kind::tabulated: {
      auto f = [this](double x) { return cdf(x); };
      return bisect_monotone(f, tab_x_.front(), tab_x_.back(), p, 1e-12);
    }
  }
  return lo_;
}

double BaseDistribution::pdf(double x) const {
  if (atom_mass_at(x) > 0.0)
    throw std::domain_error("pdf: atom has no density");
  if (x < lo_ || x > hi_) return 0.0;
  switch (kind_) {
    case Kind::uniform:
      return 1.0 / (params_[1] - params_[0]);
    case Kind::pareto1:
      return params_[0] * std::pow(x, -params_[0] - 1.0);
    case Kind::power_law:
      return params_[0] * std::pow(x, params_[0] - 1.0);
    case Kind::two_sided_exp:
      if (x < 0.5) return kLog4 * std::exp(-x * kLog4);
      return kLog4 * std::exp((x - 1.0) * kLog4);
    case Kind::kumaraswamy_like: {
      const double a = params_[0];
      if (x <= 0.0 || x >= 1.0) return kInf;
      const double r = std::pow(1.0 / x - 1.0, a);
      const double den = (1.0 + r) * (1.0 + r);
      return a * r / (x * (1.0 - x)) / den;
    }
    case Kind::bernoulli:
      return 0.0;
    case Kind::mixed_exp:
      if (x < 0.0) return 0.5 * std::exp(-0.5 * (x + 1.0));
      return 0.5 * std::exp(-0.5 * x);
    case Kind::tabulated: {
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t i = static_cast<std::size_t>(it - tab_x_.begin());
      if (i == 0) i = 1;
      if (i == tab_x_.size()) i = tab_x_.size() - 1;
      return (tab_p_[i] - tab_p_[i - 1]) / (tab_x_[i] - tab_x_[i - 1]);
    }
  }
  return 0.0;
}

bool BaseDistribution::pdf_infinite_at_lo() const {
  switch (kind_) {
    case Kind::kumaraswamy_like:
      return params_[0] < 1.0;
    case Kind::power_law:
      return params_[0] < 1.0;
    default:
      return false;
  }
}

bool BaseDistribution::pdf_infinite_at_hi() const {
  return kind_ == Kind::kumaraswamy_like && params_[0] < 1.0;
}

std::string BaseDistribution::describe() const {
  switch (kind_) {
    case Kind::uniform:
      return "uniform";
    case Kind::pareto1:
      return "pareto1";
    case Kind::power_law:
      return "power_law";
    case Kind::two_sided_exp:
      return "two_sided_exp";
    case Kind::kumaraswamy_like:
      return "kumaraswamy_like";
    case Kind::bernoulli:
      return atoms_.size() > 2 ? "discrete" : "bernoulli";
    case Kind::mixed_exp:
      return "mixed_exp";
    case Kind::tabulated:
      return "tabulated";
  }
  return "?";
}

}  // namespace wt
