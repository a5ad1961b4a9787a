#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wt/rng.hpp"

namespace wt {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box(std::vector<double> a, std::vector<double> b);
  int dim() const { return static_cast<int>(lo.size()); }
};

// Parametric base copulas, ordinal sums and Khoudraji composites.
// Immutable; sampling takes an exclusive RngStream.
class Copula {
 public:
  enum class Family {
    independence,
    clayton,
    gumbel,
    survival_gumbel,
    gaussian,
    student_t,
    maltese,
    ordinal_sum,
    khoudraji,
  };

  static Copula independence(int dim = 2);
  static Copula clayton(double theta, int dim = 2);
  static Copula gumbel(double theta, int dim = 2);
  static Copula survival_gumbel(double theta);
  static Copula gaussian(double rho);
  static Copula student_t(double rho, double nu);
  // Mass 3/4 uniform on [0,3/4]x[1/4,1] and 1/4 uniform on [3/4,1]x[0,1/4].
  static Copula maltese();
  static Copula ordinal_sum(std::vector<double> breaks,
                            std::vector<Copula> components);
  // C(u1,u2) = u1^(1-s1) u2^(1-s2) base(u1^s1, u2^s2).
  static Copula khoudraji(Copula base, double s1, double s2);

  static double clayton_theta_from_tau(double tau) {
    return 2.0 * tau / (1.0 - tau);
  }
  static double gumbel_theta_from_tau(double tau) { return 1.0 / (1.0 - tau); }

  Family family() const { return family_; }
  int dim() const { return dim_; }
  double param(int i = 0) const { return params_.at(i); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<Copula>& components() const { return components_; }

  double cdf(std::span<const double> u) const;
  double cdf2(double u1, double u2) const;
  double density(std::span<const double> u) const;
  double density2(double u1, double u2) const;
  double volume(const Box& b) const;
  void sample(RngStream& rng, std::span<double> out) const;
  // h-function P(U2 <= u2 | U1 = u1), d = 2.
  double conditional(double u2, double u1) const;

  // Closed-form tail dependence coefficient; throws for families without one.
  double tail_lambda(bool upper) const;
  bool has_tail_lambda() const;
  // Tail independence in the upper-left and lower-right corners.
  bool corner_tail_independent() const;

 private:
  Copula(Family f, int dim, std::vector<double> params);

  Family family_;
  int dim_;
  std::vector<double> params_;
  std::vector<double> breaks_;
  std::vector<Copula> components_;
};

}  // namespace wt
