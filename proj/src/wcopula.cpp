#include "wt/wcopula.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wt {

namespace {
constexpr int kMaxPiecesPerMargin = 64;
constexpr double kBoundaryTol = 1e-12;
}  // namespace

StochasticInverseQuery stochastic_inverse_weights(const WTransform& w,
                                                  double v) {
  StochasticInverseQuery out{v, {}, 0.0};
  for (int k = 1; k <= w.piece_count(); ++k) {
    const double x = w.piece_inverse(k, v);
    if (x <= w.delta(k - 1) + kBoundaryTol || x >= w.delta(k) - kBoundaryTol)
      continue;
    // left derivative in v: the u-side flips on decreasing pieces
    const int dir = w.piece_increasing(k) ? -1 : +1;
    const double slope = w.deriv(x, dir);
    if (slope == 0.0) continue;
    const double p = 1.0 / std::fabs(slope);
    out.active.push_back({k, x, p});
    out.weight_sum += p;
  }
  return out;
}

double stochastic_inverse(const WTransform& w, double v, double u_aux) {
  const auto q = stochastic_inverse_weights(w, v);
  // genuine exception-set levels lose a whole piece's weight; 1e-6 leaves
  // headroom for derivative noise next to soft kinks (T' -> 0)
  if (std::fabs(q.weight_sum - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "stochastic_inverse: v=" << v
        << " lies in the exception set (weights sum to " << q.weight_sum
        << "); nearest valid candidates are v-1e-9 and v+1e-9";
    throw std::runtime_error(msg.str());
  }
  double acc = 0.0;
  for (const auto& pw : q.active) {
    acc += pw.weight;
    if (u_aux <= acc) return pw.preimage;
  }
  return q.active.back().preimage;
}

WTransformedCopula::WTransformedCopula(Copula base,
                                       std::vector<WTransform> margins)
    : base_(std::move(base)), margins_(std::move(margins)) {
  if (static_cast<int>(margins_.size()) != base_.dim())
    throw std::invalid_argument(
        "WTransformedCopula: need one margin per dimension");
  for (const auto& m : margins_) {
    if (m.piece_count() > kMaxPiecesPerMargin)
      throw std::invalid_argument(
          "WTransformedCopula: margin exceeds the 64-piece cap");
  }
  mixture_ = detect_mixture();
}

bool WTransformedCopula::detect_mixture() const {
  if (base_.family() != Copula::Family::ordinal_sum || base_.dim() != 2)
    return false;
  const auto& brk = base_.breaks();
  for (const auto& m : margins_) {
    if (m.piece_count() != static_cast<int>(brk.size()) - 1) return false;
    for (int k = 0; k <= m.piece_count(); ++k) {
      if (std::fabs(m.delta(k) - brk[static_cast<std::size_t>(k)]) > 1e-12)
        return false;
    }
    for (int k = 1; k <= m.piece_count(); ++k) {
      if (!m.piece_increasing(k)) return false;
      const auto [vlo, vhi] = m.piece_image(k);
      if (vlo > 1e-9 || vhi < 1.0 - 1e-9) return false;  // not surjective
    }
  }
  return true;
}

double WTransformedCopula::cdf2(double u1, double u2) const {
  const double u[2] = {u1, u2};
  return cdf(std::span<const double>(u, 2));
}

double WTransformedCopula::density2(double u1, double u2) const {
  const double u[2] = {u1, u2};
  return density(std::span<const double>(u, 2));
}

double WTransformedCopula::cdf(std::span<const double> u) const {
  const int d = dim();
  if (static_cast<int>(u.size()) != d)
    throw std::invalid_argument("cdf: dimension mismatch");
  std::vector<std::vector<std::pair<double, double>>> intervals(
      static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto& m = margins_[static_cast<std::size_t>(j)];
    for (int k = 1; k <= m.piece_count(); ++k) {
      const auto [lo, hi] = m.preimage_interval(k, u[static_cast<std::size_t>(j)]);
      if (hi - lo > 0.0) intervals[static_cast<std::size_t>(j)].push_back({lo, hi});
    }
    if (intervals[static_cast<std::size_t>(j)].empty()) return 0.0;
  }
  // odometer over one interval per margin
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  double acc = 0.0;
  for (;;) {
    std::vector<double> lo(static_cast<std::size_t>(d));
    std::vector<double> hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      const auto& iv = intervals[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      lo[static_cast<std::size_t>(j)] = iv.first;
      hi[static_cast<std::size_t>(j)] = iv.second;
    }
    acc += base_.volume(Box(std::move(lo), std::move(hi)));
    int j = 0;
    for (; j < d; ++j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < intervals[static_cast<std::size_t>(j)].size()) break;
      i = 0;
    }
    if (j == d) break;
  }
  return std::clamp(acc, 0.0, 1.0);
}

double WTransformedCopula::volume(const Box& b) const {
  const int d = dim();
  if (b.dim() != d) throw std::invalid_argument("volume: dimension mismatch");
  std::vector<std::vector<std::pair<double, double>>> intervals(
      static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const auto& m = margins_[static_cast<std::size_t>(j)];
    const double a = b.lo[static_cast<std::size_t>(j)];
    const double bb = b.hi[static_cast<std::size_t>(j)];
    for (int k = 1; k <= m.piece_count(); ++k) {
      double lo;
      double hi;
      if (m.piece_increasing(k)) {
        lo = m.piece_inverse(k, a);
        hi = m.piece_inverse(k, bb);
      } else {
        lo = m.piece_inverse(k, bb);
        hi = m.piece_inverse(k, a);
      }
      if (hi - lo > 0.0)
        intervals[static_cast<std::size_t>(j)].push_back({lo, hi});
    }
    if (intervals[static_cast<std::size_t>(j)].empty()) return 0.0;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  double acc = 0.0;
  for (;;) {
    std::vector<double> lo(static_cast<std::size_t>(d));
    std::vector<double> hi(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      const auto& iv = intervals[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      lo[static_cast<std::size_t>(j)] = iv.first;
      hi[static_cast<std::size_t>(j)] = iv.second;
    }
    acc += base_.volume(Box(std::move(lo), std::move(hi)));
    int j = 0;
    for (; j < d; ++j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < intervals[static_cast<std::size_t>(j)].size()) break;
      i = 0;
    }
    if (j == d) break;
  }
  return std::max(acc, 0.0);
}

double WTransformedCopula::density_generic(std::span<const double> u) const {
  const int d = dim();
  if (static_cast<int>(u.size()) != d)
    throw std::invalid_argument("density: dimension mismatch");
  // active sets N_j(u_j) with preimages strictly inside their piece
  std::vector<std::vector<std::pair<double, double>>> act(
      static_cast<std::size_t>(d));  // (preimage, 1/|W'|)
  for (int j = 0; j < d; ++j) {
    const auto& m = margins_[static_cast<std::size_t>(j)];
    const double uj = u[static_cast<std::size_t>(j)];
    for (int k = 1; k <= m.piece_count(); ++k) {
      const auto [vlo, vhi] = m.piece_image(k);
      if ((std::fabs(uj - vlo) <= 1e-11 && vlo > 1e-9) ||
          (std::fabs(uj - vhi) <= 1e-11 && vhi < 1.0 - 1e-9))
        throw std::domain_error("density: nondifferentiable point");
      if (uj > vlo + 1e-11 && uj < vhi - 1e-11) {
        const double x = m.piece_inverse(k, uj);
        if (x <= m.delta(k - 1) + kBoundaryTol ||
            x >= m.delta(k) - kBoundaryTol)
          continue;
        act[static_cast<std::size_t>(j)].push_back(
            {x, 1.0 / std::fabs(m.deriv(x, 0))});
      }
    }
    if (act[static_cast<std::size_t>(j)].empty()) return 0.0;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> uw(static_cast<std::size_t>(d));
  double acc = 0.0;
  for (;;) {
    double weight = 1.0;
    for (int j = 0; j < d; ++j) {
      const auto& a = act[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
      uw[static_cast<std::size_t>(j)] = a.first;
      weight *= a.second;
    }
    acc += weight * base_.density(uw);
    int j = 0;
    for (; j < d; ++j) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < act[static_cast<std::size_t>(j)].size()) break;
      i = 0;
    }
    if (j == d) break;
  }
  return acc;
}

double WTransformedCopula::density(std::span<const double> u) const {
  if (mixture_ && u.size() == 2) return mixture_density2(u[0], u[1]);
  return density_generic(u);
}

void WTransformedCopula::sample(RngStream& rng, std::span<double> out) const {
  base_.sample(rng, out);
  for (int j = 0; j < dim(); ++j)
    out[static_cast<std::size_t>(j)] =
        margins_[static_cast<std::size_t>(j)].eval(out[static_cast<std::size_t>(j)]);
}

double WTransformedCopula::mixture_G(int j, int k, double u) const {
  const auto& m = margins_.at(static_cast<std::size_t>(j));
  const double dlo = m.delta(k - 1);
  const double dhi = m.delta(k);
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return (m.piece_inverse(k, u) - dlo) / (dhi - dlo);
}

double WTransformedCopula::mixture_g(int j, int k, double u) const {
  const auto& m = margins_.at(static_cast<std::size_t>(j));
  const double width = m.delta(k) - m.delta(k - 1);
  const double x = m.piece_inverse(k, std::clamp(u, 1e-12, 1.0 - 1e-12));
  return 1.0 / (std::fabs(m.deriv(x, 0)) * width);
}

double WTransformedCopula::mixture_density2(double u1, double u2) const {
  const auto& brk = base_.breaks();
  double acc = 0.0;
  for (int k = 1; k < static_cast<int>(brk.size()); ++k) {
    const double w = brk[static_cast<std::size_t>(k)] -
                     brk[static_cast<std::size_t>(k - 1)];
    const double g1 = mixture_G(0, k, u1);
    const double g2 = mixture_G(1, k, u2);
    acc += w * base_.components()[static_cast<std::size_t>(k - 1)].density2(g1, g2) *
           mixture_g(0, k, u1) * mixture_g(1, k, u2);
  }
  return acc;
}

double WTransformedCopula::conditional(double u2, double u1) const {
  if (dim() != 2) throw std::invalid_argument("conditional: d=2 only");
  if (mixture_) {
    const auto& brk = base_.breaks();
    double acc = 0.0;
    for (int k = 1; k < static_cast<int>(brk.size()); ++k) {
      const double w = brk[static_cast<std::size_t>(k)] -
                       brk[static_cast<std::size_t>(k - 1)];
      const double wk = w * mixture_g(0, k, u1);
      acc += wk * base_.components()[static_cast<std::size_t>(k - 1)].conditional(
                      mixture_G(1, k, u2), mixture_G(0, k, u1));
    }
    return std::clamp(acc, 0.0, 1.0);
  }
  const double h = 1e-5;
  const double a = std::clamp(u1 - h, 0.0, 1.0);
  const double b = std::clamp(u1 + h, 0.0, 1.0);
  return std::clamp((cdf2(b, u2) - cdf2(a, u2)) / (b - a), 0.0, 1.0);
}

}  // namespace wt
