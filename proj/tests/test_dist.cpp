#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wt/dist.hpp"
#include "wt/special.hpp"

using namespace wt;

namespace {
const BaseDistribution kContinuous[] = {
    BaseDistribution::uniform(0.0, 1.0),
    BaseDistribution::uniform(-1.0, 2.0),
    BaseDistribution::pareto1(2.0),
    BaseDistribution::power_law(2.0),
    BaseDistribution::two_sided_exp(),
    BaseDistribution::kumaraswamy_like(0.5),
    BaseDistribution::tabulated({0.0, 0.25, 0.5, 1.0}, {0.0, 0.4, 0.7, 1.0}),
};
}

TEST_CASE("cdf closed forms") {
  CHECK(BaseDistribution::pareto1(2.0).cdf(2.0) == doctest::Approx(0.75));
  CHECK(BaseDistribution::uniform(0.0, 1.0).cdf(0.3) == doctest::Approx(0.3));
  CHECK(BaseDistribution::mixed_exp().cdf(0.0) ==
        doctest::Approx(std::exp(-0.5)));
  CHECK(BaseDistribution::mixed_exp().cdf_left(0.0) ==
        doctest::Approx(1.0 - std::exp(-0.5)));
}

TEST_CASE("quantile closed forms and conventions") {
  const auto bern = BaseDistribution::bernoulli(0.3);
  CHECK(bern.quantile(0.699) == 0.0);
  CHECK(bern.quantile(0.71) == 1.0);
  CHECK(bern.quantile(1.0) == 1.0);
  CHECK(BaseDistribution::uniform(0.0, 1.0).quantile(0.42) ==
        doctest::Approx(0.42));
  CHECK(BaseDistribution::pareto1(2.0).quantile(0.75) == doctest::Approx(2.0));
  CHECK_THROWS(BaseDistribution::uniform(0.0, 1.0).quantile(1.5));
  // p=1 returns the right endpoint
  CHECK(std::isinf(BaseDistribution::pareto1(2.0).quantile(1.0)));
}

TEST_CASE("pdf values and atom error") {
  CHECK(BaseDistribution::uniform(0.0, 1.0).pdf(0.5) == doctest::Approx(1.0));
  CHECK(BaseDistribution::pareto1(2.0).pdf(1.0) == doctest::Approx(2.0));
  CHECK(BaseDistribution::kumaraswamy_like(0.5).pdf(1e-12) > 1e4);
  CHECK(BaseDistribution::kumaraswamy_like(0.5).pdf_infinite_at_lo());
  CHECK_THROWS_WITH(BaseDistribution::mixed_exp().pdf(0.0),
                    doctest::Contains("atom has no density"));
}

TEST_CASE("quantile is the generalized inverse on a grid") {
  for (const auto& d : kContinuous) {
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      const double x = d.quantile(p);
      if (std::isinf(x)) continue;
      CHECK(std::fabs(d.cdf(x) - p) <= 1e-10);
    }
  }
}

TEST_CASE("pdf matches finite differences of cdf") {
  for (const auto& d : kContinuous) {
    if (d.kind() == BaseDistribution::Kind::tabulated) continue;  // kinks
    for (int i = 1; i < 40; ++i) {
      const double p = (i + 0.5) / 41.0;
      const double x = d.quantile(p);
      const double h = 1e-6 * std::max(1.0, std::fabs(x));
      const double fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
      const double f = d.pdf(x);
      if (f < 1e-8) continue;
      CHECK(std::fabs(fd - f) / f < 1e-5);
    }
  }
}

TEST_CASE("pdf integrates to one") {
  for (const auto& d : kContinuous) {
    const double tail = 1e-7;
    const double lo = d.quantile(tail);
    const double hi = d.quantile(1.0 - tail);
    const double mass =
        integrate(lo, hi, 1e-9, [&d](double x) { return d.pdf(x); });
    CHECK(std::fabs(mass - (1.0 - 2.0 * tail)) < 1e-6);
  }
}

TEST_CASE("tabulated cdf round-trips its grid exactly") {
  const auto d =
      BaseDistribution::tabulated({0.0, 0.25, 0.5, 1.0}, {0.0, 0.4, 0.7, 1.0});
  CHECK(d.cdf(0.25) == 0.4);
  CHECK(d.cdf(0.5) == 0.7);
  CHECK(std::fabs(d.quantile(0.4) - 0.25) < 1e-11);
  CHECK(std::fabs(d.quantile(0.7) - 0.5) < 1e-11);
}

TEST_CASE("mixed_exp atom bookkeeping") {
  const auto d = BaseDistribution::mixed_exp();
  REQUIRE(d.atoms().size() == 1);
  CHECK(d.atoms()[0].x == 0.0);
  CHECK(d.atoms()[0].mass == doctest::Approx(2.0 * std::exp(-0.5) - 1.0));
  // quantile lands on the atom across its probability span
  CHECK(d.quantile(0.5) == 0.0);
  CHECK(d.quantile(std::exp(-0.5) - 1e-12) == 0.0);
}

TEST_CASE("atom list validation") {
  CHECK_THROWS(BaseDistribution::discrete({{0.0, 0.5}, {0.0, 0.5}}));
  CHECK_THROWS(BaseDistribution::discrete({{0.0, 0.5}, {1.0, 0.6}}));
}
