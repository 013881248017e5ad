#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mcpipe/estimation.hpp"
#include "mcpipe/reference.hpp"
#include "mcpipe/rng.hpp"
#include "mcpipe/signal.hpp"

namespace helpers {

// Brute-force minimizer of the sequence criterion: enumerates all 2^Ki
// information sequences and scores them through the plain scatter-form PAM
// synthesis. First strict minimum wins, so the all-zero sequence is the tie
// default. Independent of the trellis implementation.
inline std::vector<std::uint8_t> exhaustive_search(std::span<const double> record,
                                                   std::span<const double> taps,
                                                   std::span<const std::uint8_t> training, int Ki,
                                                   int I, double* objective = nullptr) {
    const std::size_t n_seq = std::size_t{1} << Ki;
    double best = 0.0;
    std::vector<std::uint8_t> best_bits;
    std::vector<std::uint8_t> full(training.begin(), training.end());
    full.resize(training.size() + static_cast<std::size_t>(Ki));
    for (std::size_t v = 0; v < n_seq; ++v) {
        for (int k = 0; k < Ki; ++k)
            full[training.size() + static_cast<std::size_t>(k)] =
                static_cast<std::uint8_t>(v >> k & 1u);
        const std::vector<double> s = mcpipe::ref::pam_synthesize(full, taps, I);
        double obj = 0.0;
        for (std::size_t i = 0; i < record.size(); ++i) {
            const double model = i < s.size() ? s[i] : 0.0;
            const double diff = record[i] - model;
            obj += diff * diff;
        }
        if (best_bits.empty() || obj < best) {
            best = obj;
            best_bits.assign(full.begin() + static_cast<long long>(training.size()), full.end());
        }
    }
    if (objective) *objective = best;
    return best_bits;
}

// Ridge-regularized normal equations solved by hand-rolled Cholesky; the
// dense solver oracle for the least-squares fit.
inline std::vector<double> ridge_normal_solve(const mcpipe::DesignMatrix& dm,
                                              std::span<const double> r, double lambda) {
    const std::size_t n = dm.cols;
    const std::vector<double> dense = dm.dense();
    std::vector<double> G(n * n, 0.0);
    for (std::size_t row = 0; row < dm.rows; ++row)
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = dense[row * n + i];
            if (ai == 0.0) continue;
            for (std::size_t j = 0; j <= i; ++j) G[i * n + j] += ai * dense[row * n + j];
        }
    for (std::size_t i = 0; i < n; ++i) G[i * n + i] += lambda;
    std::vector<double> b = dm.apply_transpose(r);

    // Cholesky G = L L^T (lower triangle of G)
    std::vector<double> L(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = G[i * n + j];
            for (std::size_t k = 0; k < j; ++k) sum -= L[i * n + k] * L[j * n + k];
            L[i * n + j] = (i == j) ? std::sqrt(sum) : sum / L[j * n + j];
        }
    }
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= L[i * n + k] * y[k];
        y[i] = sum / L[i * n + i];
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) sum -= L[k * n + ii] * x[k];
        x[ii] = sum / L[ii * n + ii];
    }
    return x;
}

inline double sum_sq_residual(const mcpipe::DesignMatrix& dm, std::span<const double> r,
                              std::span<const double> h) {
    const std::vector<double> model = dm.apply(h);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double diff = r[i] - model[i];
        acc += diff * diff;
    }
    return acc;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t i, double lo,
                      double hi) {
    return lo + (hi - lo) * mcpipe::rng_u01(seed, stream, i);
}

}  // namespace helpers
