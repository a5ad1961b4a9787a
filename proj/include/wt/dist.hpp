#pragma once

#include <string>
#include <vector>

namespace wt {

struct Atom {
  double x;
  double mass;
};

// Base distribution F_X: cdf, left-limit cdf, generalized quantile, density,
// support and atom list. Immutable after construction; safe for concurrent
// reads. Extended reals are IEEE +-infinity; cdf(-inf)=0, cdf(+inf)=1.
class BaseDistribution {
 public:
  enum class Kind {
    uniform,
    pareto1,
    power_law,
    two_sided_exp,
    kumaraswamy_like,
    bernoulli,
    mixed_exp,
    tabulated,
  };

  static BaseDistribution uniform(double a, double b);
  static BaseDistribution pareto1(double shape);
  // F(x) = x^exponent on [0,1].
  static BaseDistribution power_law(double exponent);
  // F(x) = 1 - 0.25^x on [0,0.5), 4^(x-1) on [0.5,1].
  static BaseDistribution two_sided_exp();
  // F(x) = 1 / (1 + (1/x - 1)^a) on [0,1].
  static BaseDistribution kumaraswamy_like(double a);
  static BaseDistribution bernoulli(double p);
  // Mixed-type: exponential pieces on [-1,0) and (0,1] with an atom at 0.
  static BaseDistribution mixed_exp();
  // Piecewise-linear cdf through (x[i], p[i]); x strictly increasing,
  // p nondecreasing with p.front()=0, p.back()=1.
  static BaseDistribution tabulated(std::vector<double> x,
                                    std::vector<double> p);
  // Purely atomic distribution (locations strictly increasing, masses sum
  // to 1); used by the generalised transform.
  static BaseDistribution discrete(std::vector<Atom> atoms);

  Kind kind() const { return kind_; }
  double param(int i = 0) const { return params_.at(i); }

  double cdf(double x) const;       // right-continuous
  double cdf_left(double x) const;  // F(x-)
  double quantile(double p) const;  // inf{x : F(x) >= p}; left-continuous
  double pdf(double x) const;       // throws at atoms

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool is_continuous() const { return atoms_.empty(); }
  double atom_mass_at(double x) const;

  // Density divergence flags at the support endpoints (used by the boundary
  // derivative lemma checks).
  bool pdf_infinite_at_lo() const;
  bool pdf_infinite_at_hi() const;

  std::string describe() const;

 private:
  BaseDistribution(Kind kind, std::vector<double> params, double lo, double hi,
                   std::vector<Atom> atoms = {});

  Kind kind_;
  std::vector<double> params_;
  double lo_;
  double hi_;
  std::vector<Atom> atoms_;
  std::vector<double> tab_x_, tab_p_;
};

}  // namespace wt
