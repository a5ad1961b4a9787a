#include "wt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wt {

int effective_threads(int requested) {
#ifdef _OPENMP
  if (requested <= 0) return omp_get_max_threads();
  return requested;
#else
  (void)requested;
  return 1;
#endif
}

namespace {

void fill_chunk(const MatrixRowSampler& sampler, Matrix& out, std::size_t chunk,
                std::uint64_t seed) {
  RngStream rng(seed, chunk);
  const std::size_t lo = chunk * kSampleChunk;
  const std::size_t hi = std::min(out.rows, lo + kSampleChunk);
  for (std::size_t r = lo; r < hi; ++r)
    sampler(rng, std::span<double>(out.row(r), out.cols));
}

}  // namespace

Matrix sample_matrix_serial(const MatrixRowSampler& sampler, int dim,
                            std::size_t n, std::uint64_t seed) {
  Matrix out(n, static_cast<std::size_t>(dim));
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  for (std::size_t c = 0; c < chunks; ++c) fill_chunk(sampler, out, c, seed);
  return out;
}

Matrix sample_matrix(const MatrixRowSampler& sampler, int dim, std::size_t n,
                     std::uint64_t seed, int threads) {
  if (effective_threads(threads) <= 1)
    return sample_matrix_serial(sampler, dim, n, seed);
  Matrix out(n, static_cast<std::size_t>(dim));
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads(threads))
#endif
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c)
    fill_chunk(sampler, out, static_cast<std::size_t>(c), seed);
  return out;
}

std::vector<double> empirical_cdf2_serial(
    const Matrix& sample, const std::vector<std::pair<double, double>>& pts) {
  if (sample.cols != 2)
    throw std::invalid_argument("empirical_cdf2: need a 2-column sample");
  std::vector<double> out(pts.size(), 0.0);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    std::size_t cnt = 0;
    for (std::size_t r = 0; r < sample.rows; ++r) {
      if (sample(r, 0) <= pts[p].first && sample(r, 1) <= pts[p].second) ++cnt;
    }
    out[p] = static_cast<double>(cnt) / static_cast<double>(sample.rows);
  }
  return out;
}

std::vector<double> empirical_cdf2(
    const Matrix& sample, const std::vector<std::pair<double, double>>& pts,
    int threads) {
  if (effective_threads(threads) <= 1)
    return empirical_cdf2_serial(sample, pts);
  if (sample.cols != 2)
    throw std::invalid_argument("empirical_cdf2: need a 2-column sample");
  std::vector<double> out(pts.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads(threads))
#endif
  for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(pts.size()); ++p) {
    std::size_t cnt = 0;
    for (std::size_t r = 0; r < sample.rows; ++r) {
      if (sample(r, 0) <= pts[static_cast<std::size_t>(p)].first &&
          sample(r, 1) <= pts[static_cast<std::size_t>(p)].second)
        ++cnt;
    }
    out[static_cast<std::size_t>(p)] =
        static_cast<double>(cnt) / static_cast<double>(sample.rows);
  }
  return out;
}

double ks_uniform(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::clamp(values[i], 0.0, 1.0);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - v);
    d = std::max(d, v - static_cast<double>(i) / n);
  }
  return d;
}

}  // namespace wt
