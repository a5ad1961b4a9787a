#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wt/fit.hpp"
#include "wt/fixtures.hpp"
#include "wt/parallel.hpp"
#include "wt/wcopula.hpp"

using namespace wt;

namespace {

WTransformedCopula make_cw(Copula base, WTransform m1, WTransform m2) {
  std::vector<WTransform> margins;
  margins.push_back(std::move(m1));
  margins.push_back(std::move(m2));
  return WTransformedCopula(std::move(base), std::move(margins));
}

// Four-box closed form of the example pair W1(u)=|3|u-2/3|-1|, W2(u)=1-|2u-1|.
double example_pair_cdf(const Copula& c, double u1, double u2) {
  auto vol = [&c](double a1, double b1, double a2, double b2) {
    return c.cdf2(b1, b2) - c.cdf2(a1, b2) - c.cdf2(b1, a2) + c.cdf2(a1, a2);
  };
  const double l1 = (1.0 - u1) / 3.0;
  const double r1 = (1.0 + u1) / 3.0;
  const double l3 = (3.0 - u1) / 3.0;
  const double b2lo = u2 / 2.0;
  const double b2hi = (2.0 - u2) / 2.0;
  return vol(l1, r1, 0.0, b2lo) + vol(l1, r1, b2hi, 1.0) +
         vol(l3, 1.0, 0.0, b2lo) + vol(l3, 1.0, b2hi, 1.0);
}

WTransform w1_example() {
  // |3|u-2/3|-1| as explicit linear pieces
  return WTransform::build(
      BaseDistribution::uniform(0.0, 1.0),
      piecewise_linear({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0},
                       {{-3.0, 1.0}, {3.0, -1.0}, {-3.0, 3.0}}));
}

}  // namespace

TEST_CASE("stochastic inverse of |2u-1|") {
  const auto v = fixtures::linear_vtransform(0.5);
  for (double vv : {0.1, 0.4, 0.8}) {
    CHECK(stochastic_inverse(v, vv, 0.3) ==
          doctest::Approx((1.0 - vv) / 2.0).epsilon(1e-10));
    CHECK(stochastic_inverse(v, vv, 0.9) ==
          doctest::Approx((1.0 - vv) / 2.0 + vv).epsilon(1e-10));
  }
}

TEST_CASE("stochastic inverse round trip and uniformity") {
  std::vector<WTransform> ws;
  ws.push_back(fixtures::linear_vtransform(0.4));
  ws.push_back(fixtures::zig_zag());
  ws.push_back(fixtures::inn_transform(20.0));
  RngStream rng(41, 0);
  for (const auto& w : ws) {
    std::vector<double> inv;
    for (int i = 0; i < 10000; ++i) {
      const double v = rng.uniform();
      const double u_aux = rng.uniform();
      const double u = stochastic_inverse(w, v, u_aux);
      CHECK(std::fabs(w.eval(u) - v) < 1e-10);
      inv.push_back(u);
    }
    CHECK(ks_uniform(std::move(inv)) < 1.63 / std::sqrt(10000.0));
  }
}

TEST_CASE("weights sum to one at differentiable levels") {
  std::vector<WTransform> ws;
  ws.push_back(fixtures::shuffle_identity());
  ws.push_back(fixtures::zig_zag());
  ws.push_back(fixtures::piecewise_increasing(0.3));
  ws.push_back(fixtures::tail_removal());
  RngStream rng(43, 0);
  for (const auto& w : ws) {
    for (int i = 0; i < 100; ++i) {
      const auto q = stochastic_inverse_weights(w, rng.uniform());
      CHECK(std::fabs(q.weight_sum - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("change-point pathology of the piecewise increasing example") {
  const auto w = fixtures::piecewise_increasing(0.3);
  const double v = std::pow(4.0, -0.2);
  const auto q = stochastic_inverse_weights(w, v);
  REQUIRE(q.active.size() == 1);
  CHECK(q.active[0].k == 2);
  CHECK(std::fabs(q.weight_sum - 0.6025) < 5e-3);
  CHECK_THROWS_WITH(stochastic_inverse(w, v, 0.5),
                    doctest::Contains("exception set"));
}

TEST_CASE("identity margins reproduce the base copula") {
  const auto base = Copula::clayton(Copula::clayton_theta_from_tau(0.7));
  const auto cw = make_cw(base, fixtures::sawtooth(1), fixtures::sawtooth(1));
  for (int i = 1; i < 12; ++i) {
    for (int j = 1; j < 12; ++j) {
      const double u1 = i / 12.0, u2 = j / 12.0;
      CHECK(cw.cdf2(u1, u2) == doctest::Approx(base.cdf2(u1, u2)).epsilon(1e-12));
      CHECK(cw.density2(u1, u2) ==
            doctest::Approx(base.density2(u1, u2)).epsilon(1e-9));
    }
  }
}

TEST_CASE("example pair cdf equals the four-box sum") {
  const auto base = Copula::clayton(2.0);
  const auto cw =
      make_cw(base, w1_example(), fixtures::flipped_vtransform(0.5));
  for (int i = 1; i < 16; ++i) {
    for (int j = 1; j < 16; ++j) {
      const double u1 = i / 16.0, u2 = j / 16.0;
      CHECK(cw.cdf2(u1, u2) ==
            doctest::Approx(example_pair_cdf(base, u1, u2)).epsilon(1e-10));
    }
  }
}

TEST_CASE("flipped-v margins on Clayton match a Monte Carlo cdf") {
  const auto base = Copula::clayton(Copula::clayton_theta_from_tau(0.7));
  const auto cw = make_cw(base, fixtures::flipped_vtransform(0.2),
                          fixtures::flipped_vtransform(0.8));
  const std::size_t n = 400000;
  const auto m = sample_matrix(
      [&cw](RngStream& r, std::span<double> o) { cw.sample(r, o); }, 2, n, 51,
      2);
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (m(i, 0) <= 0.5 && m(i, 1) <= 0.5) ++cnt;
  CHECK(std::fabs(cw.cdf2(0.5, 0.5) - static_cast<double>(cnt) / n) < 0.005);
}

TEST_CASE("reflection identity via a delta=1 decreasing margin") {
  const auto base = Copula::clayton(2.0);
  auto flip = WTransform::build(BaseDistribution::uniform(0.0, 1.0),
                                piecewise_linear({0.0, 1.0}, {{-1.0, 1.0}}));
  const auto cw = make_cw(base, fixtures::sawtooth(1), std::move(flip));
  for (int i = 1; i < 16; ++i) {
    for (int j = 1; j < 16; ++j) {
      const double u1 = i / 16.0, u2 = j / 16.0;
      CHECK(cw.cdf2(u1, u2) ==
            doctest::Approx(u1 - base.cdf2(u1, 1.0 - u2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("volume consistency with the cdf inclusion-exclusion") {
  const auto base = Copula::gumbel(2.1383);
  const auto cw = make_cw(base, fixtures::zig_zag(),
                          fixtures::linear_vtransform(0.4));
  RngStream rng(53, 0);
  CHECK(cw.volume(Box({0.0, 0.0}, {1.0, 1.0})) == doctest::Approx(1.0));
  CHECK(cw.volume(Box({0.3, 0.4}, {0.3, 0.4})) == doctest::Approx(0.0));
  for (int i = 0; i < 50; ++i) {
    double a1 = rng.uniform(), b1 = rng.uniform();
    double a2 = rng.uniform(), b2 = rng.uniform();
    if (a1 > b1) std::swap(a1, b1);
    if (a2 > b2) std::swap(a2, b2);
    const double incl = cw.cdf2(b1, b2) - cw.cdf2(a1, b2) - cw.cdf2(b1, a2) +
                        cw.cdf2(a1, a2);
    CHECK(std::fabs(cw.volume(Box({a1, a2}, {b1, b2})) - incl) < 1e-9);
  }
}

TEST_CASE("v-transform margins on independence keep the density at one") {
  const auto cw = make_cw(Copula::independence(),
                          fixtures::linear_vtransform(0.5),
                          fixtures::linear_vtransform(0.5));
  for (int i = 1; i < 10; ++i) {
    for (int j = 1; j < 10; ++j) {
      CHECK(cw.density2(i / 10.0 + 0.013, j / 10.0 + 0.017) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("density matches the finite-difference mixed partial") {
  const auto cw = make_cw(Copula::student_t(0.0, 1.0),
                          fixtures::linear_vtransform(0.5),
                          fixtures::linear_vtransform(0.5));
  const double h = 1e-4;
  for (const auto& [u1, u2] : std::vector<std::pair<double, double>>{
           {0.3, 0.7}, {0.42, 0.21}, {0.66, 0.83}}) {
    const double fd =
        (cw.cdf2(u1 + h, u2 + h) - cw.cdf2(u1 - h, u2 + h) -
         cw.cdf2(u1 + h, u2 - h) + cw.cdf2(u1 - h, u2 - h)) /
        (4.0 * h * h);
    const double d = cw.density2(u1, u2);
    CHECK(std::fabs(fd - d) / d < 1e-3);
  }
}

TEST_CASE("density integral over [0,u] rectangles equals the cdf") {
  const auto cw = make_cw(Copula::clayton(2.0),
                          fixtures::linear_vtransform(0.4),
                          fixtures::linear_vtransform(0.6));
  for (const auto& [u1, u2] : std::vector<std::pair<double, double>>{
           {0.35, 0.55}, {0.7, 0.8}}) {
    const int g = 200;
    double acc = 0.0;
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        acc += cw.density2(u1 * (i + 0.5) / g, u2 * (j + 0.5) / g);
      }
    }
    acc *= u1 * u2 / (g * g);
    CHECK(std::fabs(acc - cw.cdf2(u1, u2)) < 1e-3);
  }
}

TEST_CASE("density errors at a change point") {
  const auto cw = make_cw(Copula::clayton(2.0), fixtures::tail_removal(),
                          fixtures::sawtooth(1));
  CHECK_THROWS_WITH(cw.density2(0.9, 0.5),
                    doctest::Contains("nondifferentiable"));
}

TEST_CASE("sampling agrees with the analytic cdf") {
  const auto cw = make_cw(Copula::gumbel(2.1383),
                          fixtures::flipped_vtransform(0.2),
                          fixtures::flipped_vtransform(0.8));
  const std::size_t n = 200000;
  const auto m = sample_matrix(
      [&cw](RngStream& r, std::span<double> o) { cw.sample(r, o); }, 2, n, 57,
      2);
  std::vector<std::pair<double, double>> pts;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) pts.push_back({i / 5.0, j / 5.0});
  pts.push_back({0.05, 0.95});
  const auto emp = empirical_cdf2(m, pts, 2);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    CHECK(std::fabs(emp[p] - cw.cdf2(pts[p].first, pts[p].second)) <
          3.0 / std::sqrt(static_cast<double>(n)));
  }
  // margins stay uniform
  CHECK(ks_uniform(m.column(0)) < 1.63 / std::sqrt(static_cast<double>(n)));
  CHECK(ks_uniform(m.column(1)) < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("copula of (U, W(U)) for the periodic shuffle") {
  const auto w = fixtures::shuffle_identity();
  RngStream rng(59, 0);
  const int n = 100000;
  Matrix m(n, 2);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    m(static_cast<std::size_t>(i), 0) = u;
    m(static_cast<std::size_t>(i), 1) = w.eval(u);
  }
  // closed form: C(u,v) = sum_k lambda(S_k(v) intersect (0,u])
  auto cuv = [&w](double u, double v) {
    double acc = 0.0;
    for (int k = 1; k <= w.piece_count(); ++k) {
      const auto [lo, hi] = w.preimage_interval(k, v);
      acc += std::max(0.0, std::min(u, hi) - lo);
    }
    return acc;
  };
  std::vector<std::pair<double, double>> pts;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) pts.push_back({i / 5.0, j / 5.0});
  const auto emp = empirical_cdf2(m, pts, 1);
  for (std::size_t p = 0; p < pts.size(); ++p)
    CHECK(std::fabs(emp[p] - cuv(pts[p].first, pts[p].second)) <
          3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("comonotone base with a periodic shuffle margin") {
  const auto w = fixtures::shuffle_identity();
  const auto cw = make_cw(Copula::gaussian(0.999), fixtures::shuffle_identity(),
                          fixtures::sawtooth(1));
  const std::size_t n = 20000;
  const auto m = sample_matrix_serial(
      [&cw](RngStream& r, std::span<double> o) { cw.sample(r, o); }, 2, n, 61);
  // samples concentrate near the graph (first coordinate, T(second))
  std::size_t close = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(m(i, 0) - w.eval(m(i, 1))) < 0.05) ++close;
  }
  CHECK(static_cast<double>(close) / n > 0.9);
}

TEST_CASE("homogeneous transforms preserve exchangeability") {
  const auto cw = make_cw(Copula::clayton(3.0), fixtures::linear_vtransform(0.3),
                          fixtures::linear_vtransform(0.3));
  for (int i = 1; i < 12; ++i) {
    for (int j = i + 1; j < 12; ++j) {
      const double u1 = i / 12.0, u2 = j / 12.0;
      CHECK(std::fabs(cw.cdf2(u1, u2) - cw.cdf2(u2, u1)) < 1e-9);
    }
  }
}

TEST_CASE("maltese base is sent to independence") {
  const auto cw = make_cw(Copula::maltese(), fixtures::maltese_w(),
                          fixtures::maltese_w());
  for (int i = 1; i < 16; ++i) {
    for (int j = 1; j < 16; ++j) {
      const double u1 = i / 16.0, u2 = j / 16.0;
      CHECK(std::fabs(cw.cdf2(u1, u2) - u1 * u2) < 1e-9);
    }
  }
}

TEST_CASE("v-transform margins break radial symmetry of the Cauchy copula") {
  const auto cw = make_cw(Copula::student_t(0.0, 1.0),
                          fixtures::linear_vtransform(0.5),
                          fixtures::linear_vtransform(0.5));
  double worst = 0.0;
  for (int i = 1; i < 20; ++i) {
    const double u = i / 20.0;
    const double lhs = cw.cdf2(u, u);
    const double rhs = 2.0 * u - 1.0 + cw.cdf2(1.0 - u, 1.0 - u);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  CHECK(worst > 0.01);
}

TEST_CASE("mixture conditional matches the finite-difference fallback") {
  const auto cw = wos_model(2.8437, 2.0412, 21.2635);
  REQUIRE(cw.mixture_form());
  RngStream rng(63, 0);
  for (int i = 0; i < 100; ++i) {
    const double u1 = 0.02 + 0.96 * rng.uniform();
    const double u2 = 0.02 + 0.96 * rng.uniform();
    const double h = 1e-5;
    const double fd =
        (cw.cdf2(u1 + h, u2) - cw.cdf2(u1 - h, u2)) / (2.0 * h);
    CHECK(std::fabs(cw.conditional(u2, u1) - fd) < 1e-4);
  }
  // density: mixture form against the generic multi-index sum
  for (int i = 0; i < 50; ++i) {
    const double u1 = 0.02 + 0.96 * rng.uniform();
    const double u2 = 0.02 + 0.96 * rng.uniform();
    const double a = cw.density2(u1, u2);
    const double u[2] = {u1, u2};
    const double b = cw.density_generic(std::span<const double>(u, 2));
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("mixture conditional with independence components is a cdf") {
  Copula base = Copula::ordinal_sum(
      {0.0, 0.5, 1.0}, {Copula::independence(), Copula::independence()});
  std::vector<WTransform> margins;
  margins.push_back(fixtures::sawtooth(2));
  margins.push_back(fixtures::inn_transform(5.0));
  const WTransformedCopula cw(std::move(base), std::move(margins));
  double prev = 0.0;
  for (int i = 1; i < 40; ++i) {
    const double h = cw.conditional(i / 40.0, 0.37);
    CHECK(h >= prev - 1e-12);
    prev = h;
  }
  CHECK(cw.conditional(1.0, 0.37) == doctest::Approx(1.0));
}
