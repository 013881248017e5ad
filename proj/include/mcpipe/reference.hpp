#pragma once

#include <span>
#include <vector>

#include "mcpipe/cir.hpp"
#include "mcpipe/signal.hpp"

namespace mcpipe::ref {

// Serial reference implementations of the hot kernels, kept for testing and
// benchmarking against the production (policy-driven) versions.

// Scatter-form PAM synthesis: loop over symbols, add the tap vector.
std::vector<double> pam_synthesize(std::span<const std::uint8_t> bits, std::span<const double> h,
                                   int I);

// Plain loop over the grid.
std::vector<double> sample_cir(const CirModel& m, double t_begin, double step, std::size_t n);

// Trellis search with branch metrics accumulated directly as per-interval
// sums of squared errors (no precomputed tables). Exponential in N; intended
// for small N.
std::vector<std::uint8_t> viterbi_direct(std::span<const double> r, std::span<const double> h,
                                         std::span<const std::uint8_t> training_bits, int Ki,
                                         int N, int I, double* objective = nullptr);

}  // namespace mcpipe::ref
