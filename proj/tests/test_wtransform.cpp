#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wt/fixtures.hpp"
#include "wt/parallel.hpp"
#include "wt/rng.hpp"
#include "wt/wtransform.hpp"

using namespace wt;

namespace {

WTransform abs_vtransform() {
  auto T = piecewise_linear({-1.0, 0.0, 1.0}, {{-1.0, 0.0}, {1.0, 0.0}});
  return WTransform::build(BaseDistribution::uniform(-1.0, 1.0), std::move(T));
}

// Displayed branch formula of the piecewise increasing example, alpha in [0,0.5].
double piecewise_increasing_closed(double u, double alpha) {
  const double log4 = std::log(4.0);
  const double lo = 1.0 - std::exp((alpha - 0.5) * log4);   // 1 - 0.25^(0.5-a)
  const double hi = std::exp((alpha - 0.5) * log4);         // 0.25^(0.5-a)
  const double c = std::exp((alpha - 1.0) * log4);          // 4^(a-1)
  if (u <= lo) return u;
  if (u <= 0.5) return u + c / (1.0 - u) - 0.5;
  if (u <= hi) return u - c / u + 0.5;
  return u;
}

double ks_of_transform(const std::function<double(double)>& w, int n,
                       std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = w(rng.uniform());
  return ks_uniform(std::move(v));
}

}  // namespace

TEST_CASE("symmetric uniform base with |x| gives |2u-1|") {
  const auto w = abs_vtransform();
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(w.eval(u) == doctest::Approx(std::fabs(2.0 * u - 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("T = F_X yields the identity transform") {
  const auto w = fixtures::identity_transform(BaseDistribution::two_sided_exp());
  for (int i = 1; i < 50; ++i) {
    const double u = i / 50.0;
    CHECK(std::fabs(w.eval(u) - u) < 1e-12);
  }
}

TEST_CASE("shuffle of identity has W = T") {
  const auto w = fixtures::shuffle_identity();
  for (int i = 0; i <= 200; ++i) {
    const double u = i / 200.0;
    CHECK(w.eval(u) == doctest::Approx(w.transform().eval(u)).epsilon(1e-12));
  }
}

TEST_CASE("piecewise increasing example matches its displayed branches") {
  const double alpha = 0.3;
  const auto w = fixtures::piecewise_increasing(alpha);
  CHECK(w.eval(0.5) == doctest::Approx(std::pow(4.0, -0.2)));
  for (int i = 1; i < 400; ++i) {
    const double u = i / 400.0;
    CHECK(w.eval(u) ==
          doctest::Approx(piecewise_increasing_closed(u, alpha)).epsilon(1e-10));
  }
  // injective ranges (alpha < 0) collapse to the identity
  const auto id = fixtures::piecewise_increasing(-0.3);
  for (int i = 1; i < 40; ++i) {
    const double u = i / 40.0;
    CHECK(std::fabs(id.eval(u) - u) < 1e-12);
  }
}

TEST_CASE("transformed cdf: strictly increasing T sends the median to 0.5") {
  const auto w = fixtures::piecewise_increasing(-0.3);
  const double median = BaseDistribution::two_sided_exp().quantile(0.5);
  CHECK(w.transformed_cdf(w.transform().eval(median)) == doctest::Approx(0.5));
}

TEST_CASE("transformed cdf folding identity for |x| on uniform(-1,1)") {
  const auto w = abs_vtransform();
  for (int i = 0; i <= 20; ++i) {
    const double q = i / 20.0;
    CHECK(w.transformed_cdf(q) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("zig-zag transformed cdf against a Monte Carlo oracle") {
  const auto w = fixtures::zig_zag();
  RngStream rng(11, 0);
  const int n = 1000000;
  std::vector<double> tx(n);
  for (auto& v : tx) v = w.transform().eval(rng.uniform());
  for (double y : {0.6, 0.8, 1.0, 1.05, 1.19}) {
    std::size_t cnt = 0;
    for (double v : tx)
      if (v <= y) ++cnt;
    const double emp = static_cast<double>(cnt) / n;
    CHECK(std::fabs(w.transformed_cdf(y) - emp) < 0.005);
  }
}

TEST_CASE("lazy Pareto transform matches a Monte Carlo oracle") {
  const auto w = fixtures::pareto_frac_part();
  RngStream rng(13, 0);
  const int n = 1000000;
  const auto base = BaseDistribution::pareto1(2.0);
  std::vector<double> wu(n);
  for (auto& v : wu) v = w.eval(rng.uniform());
  for (double q : {0.1, 0.35, 0.62, 0.9}) {
    std::size_t cnt = 0;
    for (double v : wu)
      if (v <= q) ++cnt;
    CHECK(std::fabs(static_cast<double>(cnt) / n - q) < 0.005);
  }
  (void)base;
  // brute-force series (1e7 terms + integral remainder) as an oracle for
  // the Euler-Maclaurin closure of F_{T(X)}
  const double y = 0.5;
  double brute = 0.0;
  const int terms = 10000000;
  for (int m = 1; m <= terms; ++m)
    brute += 1.0 / m - 1.0 / (m + y);
  brute += std::log((terms + 1.0 + y) / (terms + 1.0));
  CHECK(w.transformed_cdf(y) == doctest::Approx(brute).epsilon(1e-8));
}

TEST_CASE("published inverse anchors of the zig-zag transform") {
  const auto w = fixtures::zig_zag();
  CHECK(std::fabs(w.piece_inverse(1, 0.6) - 0.20328) < 5e-5);
  CHECK(std::fabs(w.piece_inverse(2, 0.6) - 0.29672) < 5e-5);
  CHECK(std::fabs(w.piece_inverse(3, 0.6) - 0.49343) < 5e-5);
}

TEST_CASE("partition of square property across fixtures") {
  std::vector<WTransform> fixtures_list;
  fixtures_list.push_back(fixtures::shuffle_identity());
  fixtures_list.push_back(fixtures::piecewise_increasing(0.3));
  fixtures_list.push_back(fixtures::zig_zag());
  fixtures_list.push_back(fixtures::tail_removal());
  fixtures_list.push_back(fixtures::asym_linear(0.45));
  fixtures_list.push_back(fixtures::inn_transform(20.0));
  fixtures_list.push_back(fixtures::linear_vtransform(0.4));
  RngStream rng(3, 0);
  for (const auto& w : fixtures_list) {
    for (int i = 0; i < 100; ++i) {
      const double v = rng.uniform();
      CHECK(std::fabs(w.preimage_measure(v) - v) <= 1e-9);
    }
  }
  // lazy fixture: explicit pieces plus the analytic tail
  const auto lazy = fixtures::pareto_frac_part();
  for (int i = 0; i < 20; ++i) {
    const double v = rng.uniform();
    CHECK(std::fabs(lazy.preimage_measure(v) - v) <= 1e-9);
  }
}

TEST_CASE("uniformity preservation (KS) for the transform fixtures") {
  const double n = 20000;
  const double bound = 1.63 / std::sqrt(n);
  auto check = [&](const std::function<double(double)>& f, std::uint64_t seed) {
    CHECK(ks_of_transform(f, static_cast<int>(n), seed) < bound);
  };
  check([w = fixtures::zig_zag()](double u) { return w.eval(u); }, 21);
  check([w = fixtures::pareto_frac_part()](double u) { return w.eval(u); }, 22);
  check([w = fixtures::inn_transform(20.0)](double u) { return w.eval(u); }, 23);
  check([w = fixtures::tail_removal()](double u) { return w.eval(u); }, 24);
  check([g = fixtures::mixed_gen(0.5)](double u) { return g.eval(u); }, 25);
  check([g = fixtures::bernoulli_gen(0.3, true)](double u) { return g.eval(u); },
        26);
}

TEST_CASE("stretching: |W'| >= 1 at differentiable points") {
  std::vector<WTransform> fixtures_list;
  fixtures_list.push_back(fixtures::shuffle_identity());
  fixtures_list.push_back(fixtures::zig_zag());
  fixtures_list.push_back(fixtures::piecewise_increasing(0.3));
  fixtures_list.push_back(fixtures::inn_transform(20.0));
  RngStream rng(5, 0);
  for (const auto& w : fixtures_list) {
    for (int i = 0; i < 10000; ++i) {
      const double u = rng.uniform();
      CHECK(std::fabs(w.deriv(u)) >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("pssm closed form matches the generic construction") {
  // v-transform with F_X(x)=x^2: generator G(x) = (4 sqrt(x) - x)/3
  const auto p = fixtures::pssm_vtransform_sq();
  const double delta = 0.25;
  auto G = [](double x) { return (4.0 * std::sqrt(x) - x) / 3.0; };
  for (int i = 1; i < 100; ++i) {
    const double u = i / 100.0;
    double expected;
    if (u <= delta) {
      expected = (1.0 - u) - (1.0 - delta) * G(u / delta);
    } else {
      // G^{-1} by bisection
      double lo = 0.0, hi = 1.0;
      const double target = (1.0 - u) / (1.0 - delta);
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (G(mid) < target ? lo : hi) = mid;
      }
      expected = u - delta * 0.5 * (lo + hi);
    }
    CHECK(p.eval(u) == doctest::Approx(expected).epsilon(1e-9));
  }
  // dual-path equality against the generic (F_X, T) build
  const auto gen = p.to_generic();
  for (int i = 0; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(std::fabs(p.eval(u) - gen.eval(u)) < 1e-10);
  }
}

TEST_CASE("piecewise linear pssm reduction on a uniform base") {
  const auto p = fixtures::pssm_linear_example();
  const auto gen = p.to_generic();
  // W is piecewise linear: a three-point slope probe per piece
  for (int k = 1; k <= gen.piece_count(); ++k) {
    const double a = gen.delta(k - 1);
    const double b = gen.delta(k);
    const double m = 0.5 * (a + b);
    const double q = 0.25 * (b - a);
    const double mid = gen.eval(m);
    const double lin = 0.5 * (gen.eval(m - q) + gen.eval(m + q));
    CHECK(std::fabs(mid - lin) < 1e-12);
  }
  for (int i = 0; i <= 64; ++i) {
    const double u = i / 64.0;
    CHECK(std::fabs(p.eval(u) - gen.eval(u)) < 1e-10);
  }
}

TEST_CASE("pssm dual-path equality on a kumaraswamy base") {
  const auto p = fixtures::tail_designer_pssm();
  const auto gen = p.to_generic();
  for (int i = 1; i < 64; ++i) {
    const double u = i / 64.0;
    CHECK(std::fabs(p.eval(u) - gen.eval(u)) < 1e-10);
  }
}

TEST_CASE("boundary derivatives of the pssm family") {
  const auto p = fixtures::tail_designer_pssm();
  const auto d0 = pssm_boundary_derivative(p, 0);
  CHECK(d0.lemma_applicable);
  CHECK(std::fabs(d0.value - 1.0) < 1e-3);
  const auto d1 = pssm_boundary_derivative(p, 1);
  CHECK(d1.lemma_applicable);
  CHECK(std::fabs(d1.value - 1.0) < 1e-3);
  // uniform base: finite density, lemma inapplicable; the linear reduction
  // has slope 1/(t_1 - t_0) = 4 on the first piece
  PssmWTransform lin({0.0, 0.25, 1.0}, {1, 1},
                     BaseDistribution::uniform(0.0, 1.0));
  const auto dl = pssm_boundary_derivative(lin, 0);
  CHECK_FALSE(dl.lemma_applicable);
  CHECK(dl.value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("inn transform converges to the two-tooth sawtooth") {
  const auto inn = fixtures::inn_transform(1e-6);
  const auto saw = fixtures::sawtooth(2);
  for (int i = 1; i < 100; ++i) {
    const double u = i / 100.0;
    CHECK(std::fabs(inn.eval(u) - saw.eval(u)) < 1e-4);
  }
}

TEST_CASE("generalised transform: Bernoulli branches") {
  const double p = 0.3;
  const auto dec = fixtures::bernoulli_gen(p, true);
  for (int i = 1; i <= 100; ++i) {
    const double u = i / 100.0;
    const double expected = u <= 1.0 - p ? u + p : u - 1.0 + p;
    CHECK(dec.eval(u) == doctest::Approx(expected).epsilon(1e-12));
  }
  const auto inc = fixtures::bernoulli_gen(p, false);
  for (int i = 1; i <= 100; ++i) {
    const double u = i / 100.0;
    CHECK(inc.eval(u) == doctest::Approx(u).epsilon(1e-12));
  }
  const auto eq = fixtures::bernoulli_gen_equal(p);
  CHECK(eq.eval(0.35) == doctest::Approx(0.5));            // slope 1/(1-p)
  CHECK(eq.eval(0.85) == doctest::Approx(0.5));            // slope 1/p
  CHECK(eq.jump_intervals()[0].slope == doctest::Approx(1.0 / 0.7));
  CHECK(eq.jump_intervals()[1].slope == doctest::Approx(1.0 / 0.3));
}

TEST_CASE("generalised transform: mixed-type five-branch closed form") {
  const double alpha = 0.5;
  const auto g = fixtures::mixed_gen(alpha);
  const double e5 = std::exp(-0.5);
  auto closed = [alpha, e5](double u) {
    const double b1 = 1.0 - std::exp(0.5 * (alpha - 1.0));
    const double b2 = 1.0 - e5;
    const double b3 = e5;
    const double b4 = 1.0 + e5 - std::exp(-0.5 * alpha);
    if (u <= b1) return 1.0 + e5 - u - e5 / (1.0 - u);
    if (u < b2) return 2.0 - e5 - u - e5 / (1.0 - u);
    if (u <= b3) return u - std::exp(-0.5 * alpha) + std::exp(0.5 * (alpha - 1.0));
    if (u <= b4) return u - 2.0 * e5 + e5 / (1.0 + e5 - u);
    return u + e5 / (1.0 + e5 - u) - 1.0;
  };
  for (int i = 1; i <= 1000; ++i) {
    const double u = i / 1001.0;
    CHECK(g.eval(u) == doctest::Approx(closed(u)).epsilon(1e-12));
  }
}

TEST_CASE("generalised transform: shared-image atom slopes") {
  const auto g = fixtures::three_atom_gen();
  const auto jumps = g.jump_intervals();
  REQUIRE(jumps.size() == 3);
  CHECK(jumps[0].slope == doctest::Approx(2.0));  // (0.3+0.3)/0.3
  CHECK(jumps[1].slope == doctest::Approx(1.0));
  CHECK(jumps[2].slope == doctest::Approx(2.0));
  // affine on each jump interval
  for (std::size_t j = 0; j < jumps.size(); ++j) {
    const double lo = jumps[j].lo + 1e-6;
    const double hi = jumps[j].hi - 1e-6;
    const double slope =
        (g.eval(hi) - g.eval(lo)) / (hi - lo);
    CHECK(slope == doctest::Approx(jumps[j].slope).epsilon(1e-9));
    const double mid = 0.5 * (lo + hi);
    const double lin = 0.5 * (g.eval(lo) + g.eval(hi));
    CHECK(g.eval(mid) == doctest::Approx(lin).epsilon(1e-9));
  }
}

TEST_CASE("atomic bases are rejected by the continuous construction") {
  auto T = piecewise_linear({0.0, 1.0}, {{1.0, 0.0}});
  CHECK_THROWS_WITH(
      WTransform::build(BaseDistribution::bernoulli(0.3), std::move(T)),
      doctest::Contains("GenWTransform"));
}

TEST_CASE("composition of W-transforms is pcsm and uniformity-preserving") {
  const auto outer = fixtures::shuffle_identity();
  const auto inner = fixtures::zig_zag();
  const auto composed = compose(outer, inner);
  CHECK(composed.validate().ok());
  const auto w = WTransform::build(BaseDistribution::uniform(0.0, 1.0),
                                   composed);
  const double n = 20000;
  CHECK(ks_of_transform([&w](double u) { return w.eval(u); },
                        static_cast<int>(n), 31) < 1.63 / std::sqrt(n));
}

TEST_CASE("W(0) follows the limit convention") {
  const auto v = fixtures::linear_vtransform(0.5);
  CHECK(v.eval(0.0) == doctest::Approx(1.0).epsilon(1e-9));
  const auto s = fixtures::shuffle_identity();
  CHECK(s.eval(0.0) == doctest::Approx(1.0).epsilon(1e-9));
}
