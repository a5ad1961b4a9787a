#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wt/copula.hpp"
#include "wt/measures.hpp"
#include "wt/parallel.hpp"
#include "wt/rng.hpp"

using namespace wt;

namespace {

std::vector<Copula> families() {
  std::vector<Copula> out;
  out.push_back(Copula::independence());
  out.push_back(Copula::clayton(Copula::clayton_theta_from_tau(0.7)));
  out.push_back(Copula::gumbel(2.1383));
  out.push_back(Copula::survival_gumbel(10.0 / 3.0));
  out.push_back(Copula::gaussian(0.7));
  out.push_back(Copula::student_t(0.0, 1.0));
  out.push_back(Copula::maltese());
  out.push_back(Copula::ordinal_sum(
      {0.0, 0.5, 1.0}, {Copula::survival_gumbel(10.0 / 3.0),
                        Copula::survival_gumbel(10.0 / 3.0)}));
  out.push_back(Copula::khoudraji(Copula::gumbel(4.0), 0.8, 0.4));
  return out;
}

double fd_density(const Copula& c, double u1, double u2, double h = 1e-4) {
  return (c.cdf2(u1 + h, u2 + h) - c.cdf2(u1 - h, u2 + h) -
          c.cdf2(u1 + h, u2 - h) + c.cdf2(u1 - h, u2 - h)) /
         (4.0 * h * h);
}

}  // namespace

TEST_CASE("cdf point values") {
  CHECK(Copula::independence().cdf2(0.3, 0.4) == doctest::Approx(0.12));
  // maltese: non-exchangeable by construction (the displayed branches give
  // 1/18 for the swapped argument, still different from 1/9)
  CHECK(Copula::maltese().cdf2(1.0 / 3.0, 0.5) == doctest::Approx(1.0 / 9.0));
  CHECK(Copula::maltese().cdf2(0.5, 1.0 / 3.0) == doctest::Approx(1.0 / 18.0));
  const auto os = Copula::ordinal_sum(
      {0.0, 0.5, 1.0}, {Copula::gumbel(2.0), Copula::gumbel(3.0)});
  CHECK(os.cdf2(0.25, 0.75) == doctest::Approx(0.25));
}

TEST_CASE("volume point values") {
  CHECK(Copula::independence().volume(Box({0.2, 0.1}, {0.5, 0.4})) ==
        doctest::Approx(0.09));
  CHECK(Copula::maltese().volume(Box({0.0, 0.0}, {0.75, 0.25})) ==
        doctest::Approx(0.0));
  CHECK(Copula::maltese().volume(Box({0.25, 0.75}, {1.0, 1.0})) ==
        doctest::Approx(1.0 / 6.0));
  CHECK(Copula::clayton(Copula::clayton_theta_from_tau(0.7))
            .volume(Box({0.0, 0.0}, {1.0, 1.0})) == doctest::Approx(1.0));
}

TEST_CASE("grounded and uniform margins") {
  for (const auto& c : families()) {
    for (int i = 1; i < 20; ++i) {
      const double u = i / 20.0;
      CHECK(c.cdf2(0.0, u) == 0.0);
      CHECK(c.cdf2(u, 0.0) == 0.0);
      CHECK(std::fabs(c.cdf2(u, 1.0) - u) < 1e-9);
      CHECK(std::fabs(c.cdf2(1.0, u) - u) < 1e-9);
    }
  }
}

TEST_CASE("Frechet bounds and Lipschitz continuity") {
  RngStream rng(17, 0);
  for (const auto& c : families()) {
    for (int i = 0; i < 200; ++i) {
      const double u = rng.uniform();
      const double v = rng.uniform();
      const double cv = c.cdf2(u, v);
      CHECK(cv >= std::max(u + v - 1.0, 0.0) - 1e-9);
      CHECK(cv <= std::min(u, v) + 1e-9);
      const double u2 = rng.uniform();
      const double v2 = rng.uniform();
      CHECK(std::fabs(c.cdf2(u2, v2) - cv) <=
            std::fabs(u2 - u) + std::fabs(v2 - v) + 1e-9);
    }
  }
}

TEST_CASE("density closed forms at the median point") {
  CHECK(Copula::independence().density2(0.31, 0.77) == 1.0);
  CHECK(Copula::gaussian(0.7).density2(0.5, 0.5) ==
        doctest::Approx(1.0 / std::sqrt(1.0 - 0.49)));
}

TEST_CASE("density matches the mixed partial of the cdf") {
  const struct {
    Copula c;
    double u1, u2;
  } cases[] = {
      {Copula::clayton(Copula::clayton_theta_from_tau(0.7)), 0.5, 0.5},
      {Copula::clayton(2.0), 0.3, 0.6},
      {Copula::gumbel(2.1383), 0.4, 0.7},
      {Copula::survival_gumbel(3.0), 0.35, 0.55},
      {Copula::gaussian(0.7), 0.3, 0.6},
      {Copula::student_t(0.0, 1.0), 0.25, 0.65},
      {Copula::khoudraji(Copula::gumbel(4.0), 0.8, 0.4), 0.45, 0.6},
  };
  for (const auto& [c, u1, u2] : cases) {
    const double d = c.density2(u1, u2);
    CHECK(std::fabs(fd_density(c, u1, u2) - d) / d < 1e-3);
  }
}

TEST_CASE("density integrates to the box mass") {
  // tail-dependent densities spike at the corners, so compare quadrature
  // against the exact volume of an interior box
  for (const auto& c : {Copula::clayton(2.0), Copula::gumbel(2.1383),
                        Copula::gaussian(0.7), Copula::independence()}) {
    const double lo = 0.05, hi = 0.95;
    const int g = 256;
    double acc = 0.0;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j)
        acc += c.density2(lo + (hi - lo) * (i + 0.5) / g,
                          lo + (hi - lo) * (j + 0.5) / g);
    acc *= (hi - lo) * (hi - lo) / (g * g);
    CHECK(std::fabs(acc - c.volume(Box({lo, lo}, {hi, hi}))) < 1e-3);
  }
}

TEST_CASE("conditional h-functions") {
  CHECK(Copula::independence().conditional(0.42, 0.9) ==
        doctest::Approx(0.42));
  const struct {
    Copula c;
    double u1, u2;
  } cases[] = {
      {Copula::gumbel(2.1383), 0.5, 0.5},
      {Copula::clayton(3.0), 0.4, 0.8},
      {Copula::gaussian(0.7), 0.3, 0.7},
      {Copula::student_t(0.5, 2.0), 0.6, 0.2},
      {Copula::survival_gumbel(2.5), 0.7, 0.4},
      {Copula::ordinal_sum({0.0, 0.5, 1.0},
                           {Copula::gumbel(2.0), Copula::gumbel(3.0)}),
       0.3, 0.4},
      {Copula::khoudraji(Copula::gumbel(4.0), 0.8, 0.4), 0.45, 0.6},
  };
  const double h = 1e-5;
  for (const auto& [c, u1, u2] : cases) {
    const double fd = (c.cdf2(u1 + h, u2) - c.cdf2(u1 - h, u2)) / (2.0 * h);
    CHECK(std::fabs(c.conditional(u2, u1) - fd) < 1e-4);
  }
  // nondecreasing in u2
  const auto g = Copula::gumbel(2.1383);
  double prev = 0.0;
  for (int i = 1; i < 50; ++i) {
    const double h2 = g.conditional(i / 50.0, 0.37);
    CHECK(h2 >= prev - 1e-12);
    prev = h2;
  }
}

TEST_CASE("sampling matches dependence strength") {
  const std::size_t n = 100000;
  {
    const auto m = sample_matrix_serial(
        [c = Copula::independence()](RngStream& r, std::span<double> o) {
          c.sample(r, o);
        },
        2, n, 101);
    CHECK(std::fabs(spearman_rho_sample(m.column(0), m.column(1))) < 0.01);
  }
  {
    const double theta = Copula::clayton_theta_from_tau(0.7);
    CHECK(theta == doctest::Approx(14.0 / 3.0));
    const auto m = sample_matrix_serial(
        [c = Copula::clayton(theta)](RngStream& r, std::span<double> o) {
          c.sample(r, o);
        },
        2, n, 102);
    CHECK(std::fabs(kendall_tau_sample(m.column(0), m.column(1)) - 0.7) < 0.02);
  }
  {
    const auto m = sample_matrix_serial(
        [c = Copula::gumbel(2.1383)](RngStream& r, std::span<double> o) {
          c.sample(r, o);
        },
        2, n, 103);
    CHECK(std::fabs(kendall_tau_sample(m.column(0), m.column(1)) -
                    (1.0 - 1.0 / 2.1383)) < 0.02);
  }
  // block-diagonal scatter of the ordinal sum
  {
    const auto os = Copula::ordinal_sum(
        {0.0, 0.5, 1.0}, {Copula::survival_gumbel(10.0 / 3.0),
                          Copula::survival_gumbel(10.0 / 3.0)});
    const auto m = sample_matrix_serial(
        [os](RngStream& r, std::span<double> o) { os.sample(r, o); }, 2, 20000,
        104);
    for (std::size_t i = 0; i < m.rows; ++i) {
      const bool lo = m(i, 0) <= 0.5 && m(i, 1) <= 0.5;
      const bool hi = m(i, 0) > 0.5 && m(i, 1) > 0.5;
      CHECK((lo || hi));
    }
  }
}

TEST_CASE("sampled margins are uniform") {
  for (const auto& c : families()) {
    const std::size_t n = 50000;
    const auto m = sample_matrix_serial(
        [&c](RngStream& r, std::span<double> o) { c.sample(r, o); }, 2, n,
        105);
    CHECK(ks_uniform(m.column(0)) < 1.63 / std::sqrt(static_cast<double>(n)));
    CHECK(ks_uniform(m.column(1)) < 1.63 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("volume equals Monte Carlo box mass") {
  RngStream boxes(7, 1);
  for (const auto& c : families()) {
    const std::size_t n = 200000;
    const auto m = sample_matrix_serial(
        [&c](RngStream& r, std::span<double> o) { c.sample(r, o); }, 2, n,
        106);
    for (int b = 0; b < 20; ++b) {
      double a1 = boxes.uniform(), b1 = boxes.uniform();
      double a2 = boxes.uniform(), b2 = boxes.uniform();
      if (a1 > b1) std::swap(a1, b1);
      if (a2 > b2) std::swap(a2, b2);
      const Box box({a1, a2}, {b1, b2});
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (m(i, 0) > a1 && m(i, 0) <= b1 && m(i, 1) > a2 && m(i, 1) <= b2)
          ++cnt;
      }
      const double mc = static_cast<double>(cnt) / static_cast<double>(n);
      CHECK(std::fabs(c.volume(box) - mc) <
            3.0 / std::sqrt(static_cast<double>(n)));
      CHECK(c.volume(box) >= -1e-10);
    }
  }
}

TEST_CASE("khoudraji edge shapes") {
  const auto base = Copula::gumbel(3.0);
  const auto same = Copula::khoudraji(base, 1.0, 1.0);
  const auto indep = Copula::khoudraji(base, 0.0, 0.0);
  for (int i = 1; i < 10; ++i) {
    for (int j = 1; j < 10; ++j) {
      const double u = i / 10.0, v = j / 10.0;
      CHECK(same.cdf2(u, v) == doctest::Approx(base.cdf2(u, v)));
      CHECK(indep.cdf2(u, v) == doctest::Approx(u * v));
    }
  }
}

TEST_CASE("ordinal sum contributes blockwise") {
  const auto os = Copula::ordinal_sum(
      {0.0, 0.4, 1.0}, {Copula::clayton(2.0), Copula::gumbel(3.0)});
  // inside block 1 the second component is saturated at 0
  CHECK(os.cdf2(0.2, 0.3) ==
        doctest::Approx(0.4 * Copula::clayton(2.0).cdf2(0.5, 0.75)));
  // min-coupling across blocks
  CHECK(os.cdf2(0.2, 0.8) == doctest::Approx(0.2));
  CHECK(os.density2(0.2, 0.8) == 0.0);
}

TEST_CASE("closed-form tail coefficients") {
  CHECK(Copula::independence().tail_lambda(true) == 0.0);
  CHECK(Copula::clayton(14.0 / 3.0).tail_lambda(false) ==
        doctest::Approx(std::pow(2.0, -3.0 / 14.0)));
  CHECK(Copula::gumbel(2.0).tail_lambda(true) ==
        doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(Copula::survival_gumbel(2.0).tail_lambda(false) ==
        doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK_THROWS(Copula::khoudraji(Copula::gumbel(2.0), 0.5, 0.5).tail_lambda(true));
}
