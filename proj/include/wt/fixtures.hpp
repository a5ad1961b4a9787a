#pragma once

#include "wt/wtransform.hpp"

namespace wt {
namespace fixtures {

// Shuffle of the identity: three linear strips on a uniform base; W = T.
WTransform shuffle_identity();

// Two-sided exponential base with a shifted-identity second piece; the
// transform has a jump at 0.5 and an interior kink for alpha in [0, 0.5].
WTransform piecewise_increasing(double alpha);

// Four-piece zig-zag on a uniform base (exp-quadratic, linear, reciprocal).
WTransform zig_zag();

// Pareto type-I base with T(x) = x^2 - ceil(x^2) + 1: countably many pieces.
WTransform pareto_frac_part(double shape = 2.0);

// v-transform from the pssm family: F_X(x) = x^2, knots (0, 0.5, 1).
PssmWTransform pssm_vtransform_sq();

// Piecewise linear pssm map, knots (0,.1,.3,.5,.7,1), directions (0,1,0,0,1).
PssmWTransform pssm_linear_example();

// Piecewise linear transform with K equal increasing teeth: K u - ceil(K u) + 1.
WTransform sawtooth(int teeth);

// Symmetric linear v-transform |2u-1| generalised to fulcrum delta.
WTransform linear_vtransform(double delta);

// Flipped linear v-transform: u/delta, then (1-u)/(1-delta).
WTransform flipped_vtransform(double delta);

// v-transform from a generator G (continuous strictly increasing df on [0,1]).
WTransform generator_vtransform(double delta,
                                std::function<double(double)> G,
                                std::function<double(double)> G_inv);

// Three-piece map removing lower tail dependence: sqrt branches then identity.
WTransform tail_removal();

// Piecewise linear three-piece map with parameter theta in (0, 0.5).
WTransform asym_linear(double theta);

// Concave two-piece parametric transform (theta > 0) with closed-form
// branches; converges to sawtooth(2) as theta -> 0.
WTransform inn_transform(double theta);

// Two-piece map sending the maltese copula to independence.
WTransform maltese_w();

// T = F_X, the identity transform.
WTransform identity_transform(BaseDistribution base);

// pssm with all-increasing directions on a Kumaraswamy-like base; boundary
// derivatives equal 1 (diverging density at both endpoints).
PssmWTransform tail_designer_pssm(double a = 0.5,
                                  std::vector<double> t = {0.0, 0.1, 0.9, 1.0});

// Generalised transforms.
GenWTransform bernoulli_gen(double p, bool t1_less_t0);
GenWTransform bernoulli_gen_equal(double p);  // T(1) = T(0)
GenWTransform mixed_gen(double alpha);
GenWTransform three_atom_gen();  // atoms at -1, 0, 1; T = |x|

// Nogueira interval-exchange map (alpha irrational in (0,1/3)): not periodic.
WTransform nogueira(double alpha);

}  // namespace fixtures
}  // namespace wt
