#include "wt/fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {
namespace fixtures {

WTransform shuffle_identity() {
  auto T = piecewise_linear({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                            {{-1.0, 1.0}, {1.0, 0.0}, {1.0, -2.0 / 3.0}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform piecewise_increasing(double alpha) {
  auto T = piecewise_linear({0.0, 0.5, 1.0}, {{1.0, 0.0}, {1.0, -alpha}});
  return WTransform::build(BaseDistribution::two_sided_exp(), std::move(T));
}

WTransform zig_zag() {
  std::vector<Piece> pieces;
  pieces.push_back(Piece::exp_quad(false));
  pieces.push_back(Piece::exp_quad(true));
  pieces.push_back(Piece::linear(-1.0, 1.5));
  // 1/x - 1/2: image [1/2, 1), consistent with the published inverse anchors
  pieces.push_back(Piece::generic(
      false, [](double x) { return 1.0 / x - 0.5; },
      [](double y) { return 1.0 / (y + 0.5); },
      [](double x) { return -1.0 / (x * x); }));
  PcsmFunction T({0.0, 0.25, 1.0 / 3.0, 2.0 / 3.0, 1.0}, std::move(pieces));
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform pareto_frac_part(double shape) {
  return WTransform::build(BaseDistribution::pareto1(shape),
                           PcsmFunction::frac_part_square());
}

PssmWTransform pssm_vtransform_sq() {
  return PssmWTransform({0.0, 0.5, 1.0}, {0, 1},
                        BaseDistribution::power_law(2.0));
}

PssmWTransform pssm_linear_example() {
  return PssmWTransform({0.0, 0.1, 0.3, 0.5, 0.7, 1.0}, {0, 1, 0, 0, 1},
                        BaseDistribution::uniform(0.0, 1.0));
}

WTransform sawtooth(int teeth) {
  if (teeth < 1) throw std::invalid_argument("sawtooth: teeth must be >= 1");
  std::vector<double> t;
  std::vector<std::pair<double, double>> si;
  const double k = static_cast<double>(teeth);
  for (int i = 0; i <= teeth; ++i) t.push_back(i / k);
  for (int i = 1; i <= teeth; ++i) si.push_back({k, -(i - 1.0)});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0),
                           piecewise_linear(t, si));
}

WTransform linear_vtransform(double delta) {
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("linear_vtransform: delta in (0,1)");
  auto T = piecewise_linear(
      {0.0, delta, 1.0},
      {{-1.0 / delta, 1.0}, {1.0 / (1.0 - delta), -delta / (1.0 - delta)}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform flipped_vtransform(double delta) {
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("flipped_vtransform: delta in (0,1)");
  auto T = piecewise_linear(
      {0.0, delta, 1.0},
      {{1.0 / delta, 0.0}, {-1.0 / (1.0 - delta), 1.0 / (1.0 - delta)}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform generator_vtransform(double delta, std::function<double(double)> G,
                                std::function<double(double)> G_inv) {
  std::vector<Piece> pieces;
  pieces.push_back(Piece::generic(
      false, [delta, G](double x) {
        return (1.0 - x) - (1.0 - delta) * G(x / delta);
      }));
  pieces.push_back(Piece::generic(
      true, [delta, G_inv](double x) {
        return x - delta * G_inv((1.0 - x) / (1.0 - delta));
      }));
  PcsmFunction T({0.0, delta, 1.0}, std::move(pieces));
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform tail_removal() {
  std::vector<Piece> pieces;
  pieces.push_back(Piece::generic(
      false,
      [](double x) { return 0.9 - 0.6 * std::sqrt(5.0 * x); },
      [](double y) {
        const double r = (0.9 - y) / 0.6;
        return r * r / 5.0;
      },
      [](double x) { return -1.5 / std::sqrt(5.0 * x); }));
  pieces.push_back(Piece::generic(
      true,
      [](double x) { return 0.3 * std::sqrt(20.0 * x - 9.0); },
      [](double y) {
        const double r = y / 0.3;
        return (r * r + 9.0) / 20.0;
      },
      [](double x) { return 3.0 / std::sqrt(20.0 * x - 9.0); }));
  pieces.push_back(Piece::linear(1.0, 0.0));
  PcsmFunction T({0.0, 0.45, 0.9, 1.0}, std::move(pieces));
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform asym_linear(double theta) {
  if (theta <= 0.0 || theta >= 0.5)
    throw std::invalid_argument("asym_linear: theta in (0,0.5)");
  auto T = piecewise_linear(
      {0.0, theta, 1.0 - theta, 1.0},
      {{0.5 / theta, 0.0},
       {1.0 / (1.0 - 2.0 * theta), -theta / (1.0 - 2.0 * theta)},
       {0.5 / theta, (2.0 * theta - 1.0) / (2.0 * theta)}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform inn_transform(double theta) {
  if (theta <= 0.0) throw std::invalid_argument("inn_transform: theta > 0");
  const double d = std::sqrt(0.5 * theta + 1.0) - 1.0;
  std::vector<Piece> pieces;
  pieces.push_back(Piece::generic(
      true,
      [theta, d](double u) { return (std::sqrt(theta * u + 1.0) - 1.0) / d; },
      [theta, d](double v) {
        const double r = 1.0 + d * v;
        return (r * r - 1.0) / theta;
      },
      [theta, d](double u) {
        return theta / (2.0 * d * std::sqrt(theta * u + 1.0));
      }));
  const double A = theta * theta - 4.0 * theta * d + 4.0 * d * d +
                   2.0 * theta * d * d;
  pieces.push_back(Piece::generic(
      true,
      [theta, d, A](double u) {
        const double s = std::sqrt(std::max(0.0, A - 4.0 * theta * d * d * u));
        return (theta - 2.0 * d - s) / (2.0 * d * d);
      },
      [theta, d, A](double v) {
        const double s = theta - 2.0 * d - 2.0 * d * d * v;
        return (A - s * s) / (4.0 * theta * d * d);
      },
      [theta, d, A](double u) {
        const double s = std::sqrt(std::max(1e-300, A - 4.0 * theta * d * d * u));
        return theta / s;
      }));
  PcsmFunction T({0.0, 0.5, 1.0}, std::move(pieces));
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform maltese_w() {
  auto T = piecewise_linear({0.0, 0.25, 1.0},
                            {{-4.0, 1.0}, {4.0 / 3.0, -1.0 / 3.0}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

WTransform identity_transform(BaseDistribution base) {
  BaseDistribution copy = base;
  std::vector<Piece> pieces;
  pieces.push_back(Piece::generic(
      true, [copy](double x) { return copy.cdf(x); },
      [copy](double p) { return copy.quantile(p); },
      [copy](double x) { return copy.pdf(x); }));
  PcsmFunction T({base.support_lo(), base.support_hi()}, std::move(pieces));
  return WTransform::build(std::move(base), std::move(T));
}

PssmWTransform tail_designer_pssm(double a, std::vector<double> t) {
  std::vector<int> r(t.size() - 1, 1);
  return PssmWTransform(std::move(t), std::move(r),
                        BaseDistribution::kumaraswamy_like(a));
}

GenWTransform bernoulli_gen(double p, bool t1_less_t0) {
  auto T = t1_less_t0
               ? piecewise_linear({0.0, 1.0}, {{-1.0, 1.0}})
               : piecewise_linear({0.0, 1.0}, {{1.0, 0.0}});
  return GenWTransform::build(BaseDistribution::bernoulli(p), std::move(T));
}

GenWTransform bernoulli_gen_equal(double p) {
  auto T = piecewise_linear({0.0, 1.0}, {{1.0, 0.0}});
  T.set_value_at_change_point(1, 0.0);  // T(1) = T(0) = 0
  return GenWTransform::build(BaseDistribution::bernoulli(p), std::move(T));
}

GenWTransform mixed_gen(double alpha) {
  auto T = piecewise_linear({-1.0, 0.0, 1.0}, {{-1.0, 0.0}, {1.0, 0.0}});
  T.set_value_at_change_point(1, alpha);  // T(0) = alpha
  return GenWTransform::build(BaseDistribution::mixed_exp(), std::move(T));
}

GenWTransform three_atom_gen() {
  auto T = piecewise_linear({-1.0, 0.0, 1.0}, {{-1.0, 0.0}, {1.0, 0.0}});
  return GenWTransform::build(
      BaseDistribution::discrete({{-1.0, 0.3}, {0.0, 0.4}, {1.0, 0.3}}),
      std::move(T));
}

WTransform nogueira(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0 / 3.0)
    throw std::invalid_argument("nogueira: alpha in (0,1/3)");
  auto T = piecewise_linear({0.0, alpha, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                            {{1.0, 2.0 / 3.0 - alpha},
                             {1.0, 1.0 / 3.0 - alpha},
                             {-1.0, 4.0 / 3.0},
                             {-1.0, 1.0}});
  return WTransform::build(BaseDistribution::uniform(0.0, 1.0), std::move(T));
}

}  // namespace fixtures
}  // namespace wt
