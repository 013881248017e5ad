#include "mcpipe/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcpipe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed cost of the training intervals: every hypothesis shares it, so it is
// added to the objective once.
double training_cost(std::span<const double> record, std::span<const double> taps,
                     const SymbolSequence& at, int I) {
    const int Kt = at.kt;
    if (Kt == 0) return 0.0;
    SymbolSequence train;
    train.bits.assign(at.bits.begin(), at.bits.begin() + Kt);
    train.kt = Kt;
    const RegularSignal s = pam_synthesize(train, taps, I, 0.1, Exec::serial);
    double acc = 0.0;
    const std::size_t n = static_cast<std::size_t>(Kt) * static_cast<std::size_t>(I);
    for (std::size_t i = 0; i < n; ++i) {
        const double model = i < s.values.size() ? s.values[i] : 0.0;
        const double diff = record[i] - model;
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

DetectionResult viterbi_detect(const RegularSignal& r, const ChannelEstimate& h,
                               const SymbolSequence& at, int Ki, int N, int I, Exec exec,
                               bool want_trace) {
    if (Ki < 1) throw ConfigError("viterbi_detect: Ki must be >= 1");
    if (N < 1 || I < 1) throw ConfigError("viterbi_detect: N and I must be >= 1");
    if (N > 26) throw ConfigError("viterbi_detect: trellis too large (N > 26)");
    at.validate();
    const std::size_t n_taps = static_cast<std::size_t>(N) * static_cast<std::size_t>(I);
    if (h.taps.size() < n_taps)
        throw ConfigError("viterbi_detect: N*I exceeds CIR estimate length");
    const int Kt = at.kt;
    const std::size_t need =
        static_cast<std::size_t>(Kt + Ki) * static_cast<std::size_t>(I);
    if (r.values.size() < need) throw ConfigError("viterbi_detect: record shorter than (Kt+Ki)*I");

    const std::span<const double> record(r.values.data(), need);
    const std::span<const double> taps(h.taps.data(), n_taps);

    const std::size_t n_windows = std::size_t{1} << N;       // symbol windows
    const std::size_t n_states = std::size_t{1} << (N - 1);  // trellis states

    // ||model(w)||^2 over one symbol interval, for every window w
    std::vector<double> w_energy(n_windows);
    parallel_for(exec, n_windows, [&](std::size_t w) {
        double acc = 0.0;
        for (int j = 0; j < I; ++j) {
            double v = 0.0;
            for (int m = 0; m < N; ++m)
                if (w >> m & 1u) v += taps[static_cast<std::size_t>(m * I + j)];
            acc += v * v;
        }
        w_energy[w] = acc;
    });

    const double fixed = training_cost(record, taps, at, I);

    // initial state from the tail of the training prefix (absent symbols are 0)
    std::size_t init_state = 0;
    for (int m = 1; m < N; ++m) {
        const int k = Kt - m;
        if (k >= 0 && at.bits[static_cast<std::size_t>(k)])
            init_state |= std::size_t{1} << (m - 1);
    }

    std::vector<double> pm_old(n_states, kInf), pm_new(n_states);
    pm_old[init_state] = 0.0;

    const std::size_t words_per_step = (n_states + 63) / 64;
    std::vector<std::uint64_t> backbits(static_cast<std::size_t>(Ki) * words_per_step, 0);
    std::vector<double> dot(n_windows);
    std::vector<double> corr(static_cast<std::size_t>(N));
    std::vector<double> trace;
    if (want_trace) trace.reserve(static_cast<std::size_t>(Ki));

    for (int step = 0; step < Ki; ++step) {
        const int k = Kt + step;
        const std::size_t base = static_cast<std::size_t>(k) * static_cast<std::size_t>(I);

        double r2 = 0.0;
        for (int j = 0; j < I; ++j) r2 += record[base + j] * record[base + j];
        for (int m = 0; m < N; ++m) {
            double c = 0.0;
            for (int j = 0; j < I; ++j) c += record[base + j] * taps[static_cast<std::size_t>(m * I + j)];
            corr[static_cast<std::size_t>(m)] = c;
        }

        // subset sums <r_k, model(w)> by doubling over the window bits
        dot[0] = 0.0;
        for (int m = 0; m < N; ++m) {
            const std::size_t block = std::size_t{1} << m;
            const double c = corr[static_cast<std::size_t>(m)];
            if (block >= (std::size_t{1} << 15)) {
                parallel_for(exec, block, [&](std::size_t w) { dot[block + w] = dot[w] + c; });
            } else {
                for (std::size_t w = 0; w < block; ++w) dot[block + w] = dot[w] + c;
            }
        }

        // add-compare-select, one 64-state word per work item so the packed
        // backpointer writes stay race-free
        std::uint64_t* step_words = backbits.data() + static_cast<std::size_t>(step) * words_per_step;
        parallel_for(exec, words_per_step, [&](std::size_t word) {
            std::uint64_t bits = 0;
            const std::size_t s_lo = word * 64;
            const std::size_t s_hi = std::min(n_states, s_lo + 64);
            for (std::size_t s = s_lo; s < s_hi; ++s) {
                const std::size_t w0 = s;                              // dropped oldest bit 0
                const std::size_t w1 = s | (std::size_t{1} << (N - 1));  // dropped oldest bit 1
                const double m0 = pm_old[w0 >> 1] + (r2 - 2.0 * dot[w0] + w_energy[w0]);
                const double m1 = pm_old[w1 >> 1] + (r2 - 2.0 * dot[w1] + w_energy[w1]);
                if (m1 < m0) {
                    pm_new[s] = m1;
                    bits |= std::uint64_t{1} << (s - s_lo);
                } else {
                    pm_new[s] = m0;  // ties keep the 0 branch
                }
            }
            step_words[word] = bits;
        });
        pm_old.swap(pm_new);
        if (want_trace) trace.push_back(*std::min_element(pm_old.begin(), pm_old.end()));
    }

    // best end state; ties resolve to the smallest index (all-newer-zeros)
    std::size_t state = 0;
    for (std::size_t s = 1; s < n_states; ++s)
        if (pm_old[s] < pm_old[state]) state = s;

    DetectionResult res;
    res.objective = fixed + pm_old[state];
    res.bits.assign(static_cast<std::size_t>(Ki), 0);
    for (int step = Ki - 1; step >= 0; --step) {
        const std::uint64_t* step_words =
            backbits.data() + static_cast<std::size_t>(step) * words_per_step;
        const std::uint64_t dropped = step_words[state / 64] >> (state % 64) & 1u;
        if (N == 1) {
            res.bits[static_cast<std::size_t>(step)] = static_cast<std::uint8_t>(dropped);
        } else {
            const std::size_t w = state | (static_cast<std::size_t>(dropped) << (N - 1));
            res.bits[static_cast<std::size_t>(step)] = static_cast<std::uint8_t>(w & 1u);
            state = w >> 1;
        }
    }
    if (want_trace) res.path_metrics = std::move(trace);
    return res;
}

IncreaseParams increase_params(const CirModel& m, int I, double dt, const BetaInit& assumed) {
    if (I < 1) throw ConfigError("increase_params: I must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("increase_params: dt must be positive");
    CirModel ma = m;
    ma.init = assumed;
    ma.validate();
    const double t0 = t_start(ma);
    const int i_peak = static_cast<int>(std::floor((t_peak(ma) - t0) / dt + 0.5));
    IncreaseParams p;
    p.i_off = std::min(I - 1, i_peak);
    p.xi = h_peak(ma) / 20.0;
    return p;
}

DetectionResult increase_detect(const RegularSignal& r, const IncreaseParams& p, int K, int I) {
    if (K < 1 || I < 1) throw ConfigError("increase_detect: K and I must be >= 1");
    if (!(p.xi > 0.0)) throw ConfigError("increase_detect: xi must be positive");
    if (p.i_off < 0 || p.i_off >= I) throw ConfigError("increase_detect: i_off out of [0, I)");
    const std::size_t need =
        static_cast<std::size_t>(K - 1) * static_cast<std::size_t>(I) +
        static_cast<std::size_t>(p.i_off) + 1;
    if (r.values.size() < need) throw ConfigError("increase_detect: record too short");

    DetectionResult res;
    res.bits.assign(static_cast<std::size_t>(K), 0);
    for (int k = 0; k < K; ++k) {
        const std::size_t i1 = static_cast<std::size_t>(k) * static_cast<std::size_t>(I);
        const std::size_t i2 = i1 + static_cast<std::size_t>(p.i_off);
        if (r.values[i2] - r.values[i1] > p.xi) res.bits[static_cast<std::size_t>(k)] = 1;
    }
    return res;
}

int count_errors(std::span<const std::uint8_t> bits_hat, std::span<const std::uint8_t> bits_true,
                 int skip) {
    if (bits_hat.size() != bits_true.size()) throw ConfigError("count_errors: length mismatch");
    if (skip < 0 || static_cast<std::size_t>(skip) > bits_hat.size())
        throw ConfigError("count_errors: skip out of range");
    int errors = 0;
    for (std::size_t i = static_cast<std::size_t>(skip); i < bits_hat.size(); ++i)
        if (bits_hat[i] != bits_true[i]) ++errors;
    return errors;
}

}  // namespace mcpipe
