#include "mcpipe/reference.hpp"

#include <algorithm>
#include <limits>

#include "mcpipe/errors.hpp"

namespace mcpipe::ref {

std::vector<double> pam_synthesize(std::span<const std::uint8_t> bits, std::span<const double> h,
                                   int I) {
    if (I < 1) throw ConfigError("ref::pam_synthesize: I must be >= 1");
    if (bits.empty() || h.empty()) return {};
    std::vector<double> out((bits.size() - 1) * static_cast<std::size_t>(I) + h.size(), 0.0);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (!bits[k]) continue;
        const std::size_t base = k * static_cast<std::size_t>(I);
        for (std::size_t j = 0; j < h.size(); ++j) out[base + j] += h[j];
    }
    return out;
}

std::vector<double> sample_cir(const CirModel& m, double t_begin, double step, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = cir_eval(m, t_begin + static_cast<double>(j) * step);
    return out;
}

std::vector<std::uint8_t> viterbi_direct(std::span<const double> r, std::span<const double> h,
                                         std::span<const std::uint8_t> training_bits, int Ki,
                                         int N, int I, double* objective) {
    if (Ki < 1 || N < 1 || I < 1) throw ConfigError("ref::viterbi_direct: bad dimensions");
    if (N > 20) throw ConfigError("ref::viterbi_direct: N too large for the direct form");
    const int Kt = static_cast<int>(training_bits.size());
    const std::size_t need = static_cast<std::size_t>(Kt + Ki) * static_cast<std::size_t>(I);
    if (r.size() < need || h.size() < static_cast<std::size_t>(N) * static_cast<std::size_t>(I))
        throw ConfigError("ref::viterbi_direct: record or taps too short");

    // interval metric for symbol index k under window w (bit m of w = a[k-m])
    const auto interval_metric = [&](int k, std::size_t w) {
        double acc = 0.0;
        for (int j = 0; j < I; ++j) {
            double model = 0.0;
            for (int m = 0; m < N; ++m)
                if (w >> m & 1u) model += h[static_cast<std::size_t>(m * I + j)];
            const double diff = r[static_cast<std::size_t>(k * I + j)] - model;
            acc += diff * diff;
        }
        return acc;
    };

    // fixed cost of the training intervals
    double fixed = 0.0;
    for (int k = 0; k < Kt; ++k) {
        std::size_t w = 0;
        for (int m = 0; m < N; ++m) {
            const int idx = k - m;
            if (idx >= 0 && training_bits[static_cast<std::size_t>(idx)])
                w |= std::size_t{1} << m;
        }
        fixed += interval_metric(k, w);
    }

    const std::size_t n_states = std::size_t{1} << (N - 1);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> pm_old(n_states, inf), pm_new(n_states);
    std::size_t init_state = 0;
    for (int m = 1; m < N; ++m) {
        const int k = Kt - m;
        if (k >= 0 && training_bits[static_cast<std::size_t>(k)])
            init_state |= std::size_t{1} << (m - 1);
    }
    pm_old[init_state] = 0.0;

    std::vector<std::vector<std::uint8_t>> back(static_cast<std::size_t>(Ki),
                                                std::vector<std::uint8_t>(n_states, 0));
    for (int step = 0; step < Ki; ++step) {
        const int k = Kt + step;
        for (std::size_t s = 0; s < n_states; ++s) {
            const std::size_t w0 = s;
            const std::size_t w1 = s | (std::size_t{1} << (N - 1));
            const double m0 = pm_old[w0 >> 1] + interval_metric(k, w0);
            const double m1 = pm_old[w1 >> 1] + interval_metric(k, w1);
            if (m1 < m0) {
                pm_new[s] = m1;
                back[static_cast<std::size_t>(step)][s] = 1;
            } else {
                pm_new[s] = m0;
            }
        }
        pm_old.swap(pm_new);
    }

    std::size_t state = 0;
    for (std::size_t s = 1; s < n_states; ++s)
        if (pm_old[s] < pm_old[state]) state = s;
    if (objective) *objective = fixed + pm_old[state];

    std::vector<std::uint8_t> bits(static_cast<std::size_t>(Ki), 0);
    for (int step = Ki - 1; step >= 0; --step) {
        const std::uint8_t dropped = back[static_cast<std::size_t>(step)][state];
        if (N == 1) {
            bits[static_cast<std::size_t>(step)] = dropped;
        } else {
            const std::size_t w = state | (static_cast<std::size_t>(dropped) << (N - 1));
            bits[static_cast<std::size_t>(step)] = static_cast<std::uint8_t>(w & 1u);
            state = w >> 1;
        }
    }
    return bits;
}

}  // namespace mcpipe::ref
