#include "wt/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wt/special.hpp"

namespace wt {

namespace {
constexpr double kPi = 3.14159265358979323846;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

Box::Box(std::vector<double> a, std::vector<double> b)
    : lo(std::move(a)), hi(std::move(b)) {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("Box: dimension mismatch");
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(0.0 <= lo[j] && lo[j] <= hi[j] && hi[j] <= 1.0))
      throw std::invalid_argument("Box: need 0 <= lo <= hi <= 1");
  }
}

Copula::Copula(Family f, int dim, std::vector<double> params)
    : family_(f), dim_(dim), params_(std::move(params)) {}

Copula Copula::independence(int dim) {
  return Copula(Family::independence, dim, {});
}

Copula Copula::clayton(double theta, int dim) {
  if (theta <= 0.0) throw std::invalid_argument("clayton: theta must be > 0");
  return Copula(Family::clayton, dim, {theta});
}

Copula Copula::gumbel(double theta, int dim) {
  if (theta < 1.0) throw std::invalid_argument("gumbel: theta must be >= 1");
  return Copula(Family::gumbel, dim, {theta});
}

Copula Copula::survival_gumbel(double theta) {
  if (theta < 1.0)
    throw std::invalid_argument("survival_gumbel: theta must be >= 1");
  return Copula(Family::survival_gumbel, 2, {theta});
}

Copula Copula::gaussian(double rho) {
  if (!(rho > -1.0 && rho < 1.0))
    throw std::invalid_argument("gaussian: need |rho| < 1");
  return Copula(Family::gaussian, 2, {rho});
}

Copula Copula::student_t(double rho, double nu) {
  if (!(rho > -1.0 && rho < 1.0) || nu <= 0.0)
    throw std::invalid_argument("student_t: need |rho| < 1 and nu > 0");
  return Copula(Family::student_t, 2, {rho, nu});
}

Copula Copula::maltese() { return Copula(Family::maltese, 2, {}); }

Copula Copula::ordinal_sum(std::vector<double> breaks,
                           std::vector<Copula> components) {
  if (breaks.size() != components.size() + 1)
    throw std::invalid_argument("ordinal_sum: need K+1 breaks for K pieces");
  if (breaks.front() != 0.0 || breaks.back() != 1.0)
    throw std::invalid_argument("ordinal_sum: breaks must span [0,1]");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1]))
      throw std::invalid_argument("ordinal_sum: breaks must increase");
  const int d = components.front().dim();
  for (const auto& c : components)
    if (c.dim() != d)
      throw std::invalid_argument("ordinal_sum: mixed dimensions");
  Copula c(Family::ordinal_sum, d, {});
  c.breaks_ = std::move(breaks);
  c.components_ = std::move(components);
  return c;
}

Copula Copula::khoudraji(Copula base, double s1, double s2) {
  if (s1 < 0.0 || s1 > 1.0 || s2 < 0.0 || s2 > 1.0)
    throw std::invalid_argument("khoudraji: shapes must lie in [0,1]");
  if (base.dim() != 2)
    throw std::invalid_argument("khoudraji: base must be bivariate");
  Copula c(Family::khoudraji, 2, {s1, s2});
  c.components_.push_back(std::move(base));
  return c;
}

double Copula::cdf2(double u1, double u2) const {
  const double u[2] = {u1, u2};
  return cdf(std::span<const double>(u, 2));
}

double Copula::density2(double u1, double u2) const {
  const double u[2] = {u1, u2};
  return density(std::span<const double>(u, 2));
}

double Copula::cdf(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_)
    throw std::invalid_argument("cdf: dimension mismatch");
  for (double x : u)
    if (x <= 0.0) return 0.0;
  switch (family_) {
    case Family::independence: {
      double p = 1.0;
      for (double x : u) p *= clamp01(x);
      return p;
    }
    case Family::clayton: {
      const double th = params_[0];
      double s = 1.0 - static_cast<double>(dim_);
      for (double x : u) s += std::pow(clamp01(x), -th);
      return std::pow(std::max(s, 0.0), -1.0 / th);
    }
    case Family::gumbel: {
      const double th = params_[0];
      double s = 0.0;
      for (double x : u) {
        const double c = clamp01(x);
        if (c >= 1.0) continue;
        s += std::pow(-std::log(c), th);
      }
      return std::exp(-std::pow(s, 1.0 / th));
    }
    case Family::survival_gumbel: {
      const double a = clamp01(u[0]);
      const double b = clamp01(u[1]);
      const Copula g = Copula::gumbel(params_[0]);
      return a + b - 1.0 + g.cdf2(1.0 - a, 1.0 - b);
    }
    case Family::gaussian: {
      const double a = clamp01(u[0]);
      const double b = clamp01(u[1]);
      if (a >= 1.0) return b;
      if (b >= 1.0) return a;
      const double rho = params_[0];
      const double x = normal_quantile(a);
      const double y = normal_quantile(b);
      // Drezner-Wesolowsky correlation integral.
      const double g = integrate(
          0.0, rho, 1e-10, [x, y](double r) {
            const double q = 1.0 - r * r;
            return std::exp(-0.5 * (x * x - 2.0 * r * x * y + y * y) / q) /
                   std::sqrt(q);
          });
      return a * b + g / (2.0 * kPi);
    }
    case Family::student_t: {
      const double a = clamp01(u[0]);
      const double b = clamp01(u[1]);
      if (a >= 1.0) return b;
      if (b >= 1.0) return a;
      return integrate(0.0, a, 1e-9,
                       [this, b](double w) { return conditional(b, w); });
    }
    case Family::maltese: {
      const double a = clamp01(u[0]);
      const double b = clamp01(u[1]);
      if (b <= 0.25) return std::max(0.0, 4.0 * a * b - 3.0 * b);
      return std::min(4.0 / 3.0 * a * b - a / 3.0, b - 0.25) +
             std::max(0.0, a - 0.75);
    }
    case Family::ordinal_sum: {
      double acc = 0.0;
      std::vector<double> s(u.size());
      for (std::size_t k = 1; k < breaks_.size(); ++k) {
        const double w = breaks_[k] - breaks_[k - 1];
        for (std::size_t j = 0; j < u.size(); ++j)
          s[j] = clamp01((clamp01(u[j]) - breaks_[k - 1]) / w);
        acc += w * components_[k - 1].cdf(s);
      }
      return acc;
    }
    case Family::khoudraji: {
      const double a = clamp01(u[0]);
      const double b = clamp01(u[1]);
      const double s1 = params_[0];
      const double s2 = params_[1];
      return std::pow(a, 1.0 - s1) * std::pow(b, 1.0 - s2) *
             components_[0].cdf2(std::pow(a, s1), std::pow(b, s2));
    }
  }
  return 0.0;
}

double Copula::volume(const Box& b) const {
  if (b.dim() != dim_) throw std::invalid_argument("volume: dimension mismatch");
  double acc = 0.0;
  std::vector<double> corner(static_cast<std::size_t>(dim_));
  for (int mask = 0; mask < (1 << dim_); ++mask) {
    int ones = 0;
    for (int j = 0; j < dim_; ++j) {
      const bool take_lo = mask & (1 << j);
      corner[static_cast<std::size_t>(j)] =
          take_lo ? b.lo[static_cast<std::size_t>(j)]
                  : b.hi[static_cast<std::size_t>(j)];
      ones += take_lo ? 1 : 0;
    }
    acc += (ones % 2 == 0 ? 1.0 : -1.0) * cdf(corner);
  }
  return acc;
}

double Copula::density(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dim_)
    throw std::invalid_argument("density: dimension mismatch");
  switch (family_) {
    case Family::independence:
      return 1.0;
    case Family::clayton: {
      if (dim_ != 2)
        throw std::invalid_argument("clayton density: d=2 only");
      const double th = params_[0];
      const double a = u[0], b = u[1];
      const double s = std::pow(a, -th) + std::pow(b, -th) - 1.0;
      return (th + 1.0) * std::pow(a * b, -th - 1.0) *
             std::pow(s, -1.0 / th - 2.0);
    }
    case Family::gumbel: {
      if (dim_ != 2) throw std::invalid_argument("gumbel density: d=2 only");
      const double th = params_[0];
      const double x = -std::log(u[0]);
      const double y = -std::log(u[1]);
      const double s = std::pow(x, th) + std::pow(y, th);
      const double c = std::exp(-std::pow(s, 1.0 / th));
      return c * std::pow(x * y, th - 1.0) *
             std::pow(s, 2.0 / th - 2.0) *
             (1.0 + (th - 1.0) * std::pow(s, -1.0 / th)) / (u[0] * u[1]);
    }
    case Family::survival_gumbel: {
      const double v[2] = {1.0 - u[0], 1.0 - u[1]};
      return Copula::gumbel(params_[0]).density(std::span<const double>(v, 2));
    }
    case Family::gaussian: {
      const double rho = params_[0];
      const double q = 1.0 - rho * rho;
      const double x = normal_quantile(u[0]);
      const double y = normal_quantile(u[1]);
      return std::exp(-0.5 * (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) /
                      q) /
             std::sqrt(q);
    }
    case Family::student_t: {
      const double rho = params_[0];
      const double nu = params_[1];
      const double q = 1.0 - rho * rho;
      const double x = student_t_quantile(u[0], nu);
      const double y = student_t_quantile(u[1], nu);
      const double joint =
          std::exp(std::lgamma(0.5 * nu + 1.0) - std::lgamma(0.5 * nu)) /
          (nu * kPi * std::sqrt(q)) *
          std::pow(1.0 + (x * x - 2.0 * rho * x * y + y * y) / (nu * q),
                   -0.5 * nu - 1.0);
      return joint / (student_t_pdf(x, nu) * student_t_pdf(y, nu));
    }
    case Family::maltese: {
      const double a = u[0], b = u[1];
      if (a < 0.75 && b > 0.25) return 4.0 / 3.0;
      if (a > 0.75 && b < 0.25) return 4.0;
      return 0.0;
    }
    case Family::ordinal_sum: {
      std::vector<double> s(u.size());
      for (std::size_t k = 1; k < breaks_.size(); ++k) {
        const double w = breaks_[k] - breaks_[k - 1];
        bool inside = true;
        for (std::size_t j = 0; j < u.size(); ++j) {
          if (!(u[j] > breaks_[k - 1] && u[j] < breaks_[k])) {
            inside = false;
            break;
          }
          s[j] = (u[j] - breaks_[k - 1]) / w;
        }
        if (inside)
          return components_[k - 1].density(s) /
                 std::pow(w, static_cast<double>(dim_) - 1.0);
      }
      return 0.0;
    }
    case Family::khoudraji: {
      const double s1 = params_[0];
      const double s2 = params_[1];
      const double a = 1.0 - s1;
      const double b = 1.0 - s2;
      const double x = std::pow(u[0], s1);
      const double y = std::pow(u[1], s2);
      const Copula& base = components_[0];
      const double B = base.cdf2(x, y);
      const double Bx = s1 > 0.0 ? base.conditional(y, x) : 0.0;
      const double By = s2 > 0.0 ? base.conditional(x, y) : 0.0;
      const double Bxy = s1 > 0.0 && s2 > 0.0 ? base.density2(x, y) : 0.0;
      const double u1 = u[0], u2 = u[1];
      double acc = 0.0;
      if (a > 0.0 && b > 0.0)
        acc += a * b * std::pow(u1, a - 1.0) * std::pow(u2, b - 1.0) * B;
      if (b > 0.0 && s1 > 0.0)
        acc += b * s1 * std::pow(u1, a + s1 - 1.0) * std::pow(u2, b - 1.0) * Bx;
      if (a > 0.0 && s2 > 0.0)
        acc += a * s2 * std::pow(u1, a - 1.0) * std::pow(u2, b + s2 - 1.0) * By;
      if (s1 > 0.0 && s2 > 0.0)
        acc += s1 * s2 * std::pow(u1, a + s1 - 1.0) *
               std::pow(u2, b + s2 - 1.0) * Bxy;
      return acc;
    }
  }
  return 0.0;
}

double Copula::conditional(double u2, double u1) const {
  if (dim_ != 2) throw std::invalid_argument("conditional: d=2 only");
  u2 = clamp01(u2);
  u1 = std::clamp(u1, 1e-15, 1.0 - 1e-15);
  if (u2 <= 0.0) return 0.0;
  if (u2 >= 1.0) return 1.0;
  switch (family_) {
    case Family::independence:
      return u2;
    case Family::clayton: {
      const double th = params_[0];
      const double s = std::pow(u1, -th) + std::pow(u2, -th) - 1.0;
      return std::pow(u1, -th - 1.0) * std::pow(s, -1.0 / th - 1.0);
    }
    case Family::gumbel: {
      const double th = params_[0];
      const double x = -std::log(u1);
      const double y = -std::log(u2);
      const double s = std::pow(x, th) + std::pow(y, th);
      const double c = std::exp(-std::pow(s, 1.0 / th));
      return c * std::pow(s, 1.0 / th - 1.0) * std::pow(x, th - 1.0) / u1;
    }
    case Family::survival_gumbel: {
      const Copula g = Copula::gumbel(params_[0]);
      return 1.0 - g.conditional(1.0 - u2, 1.0 - u1);
    }
    case Family::gaussian: {
      const double rho = params_[0];
      return normal_cdf((normal_quantile(u2) - rho * normal_quantile(u1)) /
                        std::sqrt(1.0 - rho * rho));
    }
    case Family::student_t: {
      const double rho = params_[0];
      const double nu = params_[1];
      const double x = student_t_quantile(u1, nu);
      const double y = student_t_quantile(u2, nu);
      const double scale =
          std::sqrt((nu + 1.0) / ((nu + x * x) * (1.0 - rho * rho)));
      return student_t_cdf((y - rho * x) * scale, nu + 1.0);
    }
    case Family::maltese: {
      if (u1 <= 0.75) return clamp01((u2 - 0.25) / 0.75);
      return clamp01(4.0 * u2);
    }
    case Family::ordinal_sum: {
      std::size_t k = 1;
      while (k + 1 < breaks_.size() && u1 > breaks_[k]) ++k;
      const double w = breaks_[k] - breaks_[k - 1];
      if (u2 <= breaks_[k - 1]) return 0.0;
      if (u2 >= breaks_[k]) return 1.0;
      return components_[k - 1].conditional((u2 - breaks_[k - 1]) / w,
                                            (u1 - breaks_[k - 1]) / w);
    }
    case Family::khoudraji: {
      const double s1 = params_[0];
      const double s2 = params_[1];
      const double a = 1.0 - s1;
      const double b = 1.0 - s2;
      const double x = std::pow(u1, s1);
      const double y = std::pow(u2, s2);
      const Copula& base = components_[0];
      double acc = 0.0;
      if (a > 0.0)
        acc += a * std::pow(u1, a - 1.0) * base.cdf2(x, y);
      if (s1 > 0.0)
        acc += s1 * std::pow(u1, a + s1 - 1.0) * base.conditional(y, x);
      return clamp01(std::pow(u2, b) * acc);
    }
  }
  return u2;
}

void Copula::sample(RngStream& rng, std::span<double> out) const {
  if (static_cast<int>(out.size()) != dim_)
    throw std::invalid_argument("sample: dimension mismatch");
  switch (family_) {
    case Family::independence:
      for (auto& x : out) x = rng.uniform();
      return;
    case Family::clayton: {
      const double th = params_[0];
      const double v = rng.gamma(1.0 / th);
      for (auto& x : out)
        x = std::pow(1.0 + rng.exponential() / v, -1.0 / th);
      return;
    }
    case Family::gumbel: {
      const double th = params_[0];
      const double s = rng.pos_stable(1.0 / th);
      for (auto& x : out)
        x = std::exp(-std::pow(rng.exponential() / s, 1.0 / th));
      return;
    }
    case Family::survival_gumbel: {
      Copula g = Copula::gumbel(params_[0]);
      g.sample(rng, out);
      for (auto& x : out) x = 1.0 - x;
      return;
    }
    case Family::gaussian: {
      const double rho = params_[0];
      const double z1 = rng.normal();
      const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * rng.normal();
      out[0] = normal_cdf(z1);
      out[1] = normal_cdf(z2);
      return;
    }
    case Family::student_t: {
      const double rho = params_[0];
      const double nu = params_[1];
      const double z1 = rng.normal();
      const double z2 = rho * z1 + std::sqrt(1.0 - rho * rho) * rng.normal();
      const double w = std::sqrt(2.0 * rng.gamma(0.5 * nu) / nu);
      out[0] = student_t_cdf(z1 / w, nu);
      out[1] = student_t_cdf(z2 / w, nu);
      return;
    }
    case Family::maltese: {
      if (rng.uniform() < 0.75) {
        out[0] = 0.75 * rng.uniform();
        out[1] = 0.25 + 0.75 * rng.uniform();
      } else {
        out[0] = 0.75 + 0.25 * rng.uniform();
        out[1] = 0.25 * rng.uniform();
      }
      return;
    }
    case Family::ordinal_sum: {
      const double pick = rng.uniform();
      std::size_t k = 1;
      while (k < breaks_.size() - 1 && pick > breaks_[k]) ++k;
      components_[k - 1].sample(rng, out);
      const double w = breaks_[k] - breaks_[k - 1];
      for (auto& x : out) x = breaks_[k - 1] + w * x;
      return;
    }
    case Family::khoudraji: {
      const double s1 = params_[0];
      const double s2 = params_[1];
      double a[2];
      components_[0].sample(rng, std::span<double>(a, 2));
      const double b1 = rng.uniform();
      const double b2 = rng.uniform();
      auto mix = [](double base_draw, double indep_draw, double s) {
        if (s <= 0.0) return indep_draw;
        if (s >= 1.0) return base_draw;
        return std::max(std::pow(base_draw, 1.0 / s),
                        std::pow(indep_draw, 1.0 / (1.0 - s)));
      };
      out[0] = mix(a[0], b1, s1);
      out[1] = mix(a[1], b2, s2);
      return;
    }
  }
}

bool Copula::has_tail_lambda() const {
  switch (family_) {
    case Family::independence:
    case Family::clayton:
    case Family::gumbel:
    case Family::survival_gumbel:
    case Family::gaussian:
    case Family::student_t:
    case Family::maltese:
      return true;
    case Family::ordinal_sum:
      return components_.front().has_tail_lambda() &&
             components_.back().has_tail_lambda();
    case Family::khoudraji:
      return false;
  }
  return false;
}

double Copula::tail_lambda(bool upper) const {
  switch (family_) {
    case Family::independence:
    case Family::gaussian:
    case Family::maltese:
      return 0.0;
    case Family::clayton:
      return upper ? 0.0 : std::pow(2.0, -1.0 / params_[0]);
    case Family::gumbel:
      return upper ? 2.0 - std::pow(2.0, 1.0 / params_[0]) : 0.0;
    case Family::survival_gumbel:
      return upper ? 0.0 : 2.0 - std::pow(2.0, 1.0 / params_[0]);
    case Family::student_t: {
      const double rho = params_[0];
      const double nu = params_[1];
      const double arg =
          -std::sqrt((nu + 1.0) * (1.0 - rho) / (1.0 + rho));
      return 2.0 * student_t_cdf(arg, nu + 1.0);
    }
    case Family::ordinal_sum:
      // mass on the diagonal blocks: the extreme components own the tails
      return upper ? components_.back().tail_lambda(true)
                   : components_.front().tail_lambda(false);
    case Family::khoudraji:
      throw std::invalid_argument(
          "tail_lambda: no closed form for khoudraji; use the empirical "
          "limit");
  }
  return 0.0;
}

bool Copula::corner_tail_independent() const {
  switch (family_) {
    case Family::student_t:
      return false;
    case Family::ordinal_sum:
      // mass lives on the diagonal blocks; off-diagonal corners are empty
      return components_.size() > 1 ||
             components_.front().corner_tail_independent();
    case Family::khoudraji:
      return components_[0].corner_tail_independent();
    default:
      return true;
  }
}

}  // namespace wt
