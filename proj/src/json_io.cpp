#include "wt/json_io.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "wt/fixtures.hpp"

namespace wt {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

BaseDistribution dist_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform")
    return BaseDistribution::uniform(j.value("a", 0.0), j.value("b", 1.0));
  if (kind == "pareto1")
    return BaseDistribution::pareto1(j.at("shape").get<double>());
  if (kind == "powerlaw")
    return BaseDistribution::power_law(j.at("exponent").get<double>());
  if (kind == "two_sided_exp") return BaseDistribution::two_sided_exp();
  if (kind == "kumaraswamy_like")
    return BaseDistribution::kumaraswamy_like(j.at("a").get<double>());
  if (kind == "bernoulli")
    return BaseDistribution::bernoulli(j.at("p").get<double>());
  if (kind == "mixed_exp") return BaseDistribution::mixed_exp();
  if (kind == "tabulated")
    return BaseDistribution::tabulated(j.at("x").get<std::vector<double>>(),
                                       j.at("p").get<std::vector<double>>());
  throw std::invalid_argument("unknown distribution kind: " + kind);
}

PcsmFunction pcsm_from_json(const Json& j) {
  const auto t = j.at("change_points").get<std::vector<double>>();
  std::vector<Piece> pieces;
  for (const auto& pj : j.at("pieces")) {
    const std::string form = pj.at("form").get<std::string>();
    if (form == "linear") {
      pieces.push_back(Piece::linear(pj.at("slope").get<double>(),
                                     pj.at("intercept").get<double>()));
    } else if (form == "exp_quad") {
      pieces.push_back(Piece::exp_quad(pj.at("increasing").get<bool>()));
    } else if (form == "reciprocal") {
      pieces.push_back(Piece::reciprocal());
    } else if (form == "abs") {
      pieces.push_back(Piece::abs_value(pj.at("increasing").get<bool>()));
    } else {
      throw std::invalid_argument("unknown piece form: " + form);
    }
  }
  PcsmFunction f(t, std::move(pieces));
  if (j.contains("overrides")) {
    for (const auto& ov : j.at("overrides"))
      f.set_value_at_change_point(ov.at("k").get<int>(),
                                  ov.at("value").get<double>());
  }
  return f;
}

WTransform transform_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "generic")
    return WTransform::build(dist_from_json(j.at("base")),
                             pcsm_from_json(j.at("T")));
  if (type == "pssm") {
    PssmWTransform p(j.at("t").get<std::vector<double>>(),
                     j.at("r").get<std::vector<int>>(),
                     dist_from_json(j.at("base")));
    return p.to_generic();
  }
  if (type == "vtransform") {
    const double delta = j.at("delta").get<double>();
    const bool flipped = j.value("flipped", false);
    const Json gen = j.value("generator", Json{{"kind", "linear"}});
    const std::string gk = gen.at("kind").get<std::string>();
    if (gk == "linear")
      return flipped ? fixtures::flipped_vtransform(delta)
                     : fixtures::linear_vtransform(delta);
    if (gk == "mcneil") {
      if (flipped)
        throw std::invalid_argument("vtransform: flipped mcneil unsupported");
      const double kappa = gen.at("kappa").get<double>();
      const double xi = gen.at("xi").get<double>();
      auto G = [kappa, xi](double x) {
        return std::exp(-kappa * std::pow(-std::log(x), xi));
      };
      auto Ginv = [kappa, xi](double p) {
        return std::exp(-std::pow(-std::log(p) / kappa, 1.0 / xi));
      };
      return fixtures::generator_vtransform(delta, G, Ginv);
    }
    throw std::invalid_argument("unknown v-transform generator: " + gk);
  }
  if (type == "inn") return fixtures::inn_transform(j.at("theta").get<double>());
  if (type == "sawtooth")
    return fixtures::sawtooth(j.at("teeth").get<int>());
  if (type == "asym_linear")
    return fixtures::asym_linear(j.at("theta").get<double>());
  if (type == "fixture") {
    const std::string name = j.at("name").get<std::string>();
    if (name == "shuffle_identity") return fixtures::shuffle_identity();
    if (name == "zig_zag") return fixtures::zig_zag();
    if (name == "tail_removal") return fixtures::tail_removal();
    if (name == "maltese_w") return fixtures::maltese_w();
    if (name == "pareto_frac_part") return fixtures::pareto_frac_part();
    throw std::invalid_argument("unknown fixture: " + name);
  }
  throw std::invalid_argument("unknown transform type: " + type);
}

std::function<double(double)> map_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "mixed_gen") {
    const auto g = std::make_shared<GenWTransform>(
        fixtures::mixed_gen(j.at("alpha").get<double>()));
    return [g](double u) { return g->eval(u); };
  }
  if (type == "bernoulli_gen") {
    const double p = j.at("p").get<double>();
    const std::string variant = j.value("variant", "decreasing");
    std::shared_ptr<GenWTransform> g;
    if (variant == "equal")
      g = std::make_shared<GenWTransform>(fixtures::bernoulli_gen_equal(p));
    else
      g = std::make_shared<GenWTransform>(
          fixtures::bernoulli_gen(p, variant == "decreasing"));
    return [g](double u) { return g->eval(u); };
  }
  const auto w = std::make_shared<WTransform>(transform_from_json(j));
  return [w](double u) { return w->eval(u); };
}

Copula copula_from_json(const Json& j) {
  const std::string family = j.at("family").get<std::string>();
  const int dim = j.value("dim", 2);
  if (family == "independence") return Copula::independence(dim);
  if (family == "clayton") {
    if (j.contains("tau"))
      return Copula::clayton(
          Copula::clayton_theta_from_tau(j.at("tau").get<double>()), dim);
    return Copula::clayton(j.at("theta").get<double>(), dim);
  }
  if (family == "gumbel") {
    if (j.contains("tau"))
      return Copula::gumbel(
          Copula::gumbel_theta_from_tau(j.at("tau").get<double>()), dim);
    return Copula::gumbel(j.at("theta").get<double>(), dim);
  }
  if (family == "survival_gumbel") {
    if (j.contains("tau"))
      return Copula::survival_gumbel(
          Copula::gumbel_theta_from_tau(j.at("tau").get<double>()));
    return Copula::survival_gumbel(j.at("theta").get<double>());
  }
  if (family == "gaussian") return Copula::gaussian(j.at("rho").get<double>());
  if (family == "student_t")
    return Copula::student_t(j.at("rho").get<double>(),
                             j.at("nu").get<double>());
  if (family == "maltese") return Copula::maltese();
  if (family == "ordinal_sum") {
    std::vector<Copula> comps;
    for (const auto& cj : j.at("components"))
      comps.push_back(copula_from_json(cj));
    return Copula::ordinal_sum(j.at("breaks").get<std::vector<double>>(),
                               std::move(comps));
  }
  if (family == "khoudraji") {
    const auto shapes = j.at("shapes").get<std::vector<double>>();
    if (shapes.size() != 2)
      throw std::invalid_argument("khoudraji: need two shapes");
    return Copula::khoudraji(copula_from_json(j.at("base")), shapes[0],
                             shapes[1]);
  }
  throw std::invalid_argument("unknown copula family: " + family);
}

WTransformedCopula model_from_json(const Json& j) {
  if (j.contains("family")) {
    // bare copula: wrap with identity margins
    Copula base = copula_from_json(j);
    std::vector<WTransform> margins;
    for (int k = 0; k < base.dim(); ++k)
      margins.push_back(fixtures::sawtooth(1));
    return WTransformedCopula(std::move(base), std::move(margins));
  }
  Copula base = copula_from_json(j.at("base"));
  std::vector<WTransform> margins;
  for (const auto& mj : j.at("margins"))
    margins.push_back(transform_from_json(mj));
  return WTransformedCopula(std::move(base), std::move(margins));
}

}  // namespace wt
