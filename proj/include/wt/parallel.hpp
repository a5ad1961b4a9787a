#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wt/matrix.hpp"
#include "wt/rng.hpp"

namespace wt {

// Row sampler writing one draw of dimension dim into the output span.
using MatrixRowSampler = std::function<void(RngStream&, std::span<double>)>;

// Rows are generated in fixed chunks of kSampleChunk; chunk c draws from
// RngStream(seed, c). The parallel kernel distributes chunks over OpenMP
// threads and produces output bit-identical to the serial reference for
// every thread count.
inline constexpr std::size_t kSampleChunk = 8192;

Matrix sample_matrix_serial(const MatrixRowSampler& sampler, int dim,
                            std::size_t n, std::uint64_t seed);
Matrix sample_matrix(const MatrixRowSampler& sampler, int dim, std::size_t n,
                     std::uint64_t seed, int threads);

// Empirical cdf of an n x 2 sample at the given evaluation points.
std::vector<double> empirical_cdf2_serial(
    const Matrix& sample, const std::vector<std::pair<double, double>>& pts);
std::vector<double> empirical_cdf2(
    const Matrix& sample, const std::vector<std::pair<double, double>>& pts,
    int threads);

// Kolmogorov-Smirnov distance of a sample from U(0,1).
double ks_uniform(std::vector<double> values);

int effective_threads(int requested);

}  // namespace wt
