// Timing comparison: serial reference vs the policy kernels (serial / OpenMP)
// on representative problem sizes. Checks agreement while timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mcpipe/cir.hpp"
#include "mcpipe/detection.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/parallel.hpp"
#include "mcpipe/reference.hpp"
#include "mcpipe/rng.hpp"
#include "mcpipe/signal.hpp"

using namespace mcpipe;

namespace {

template <typename F>
double time_of(F&& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, secs);
    }
    return best;
}

void row(const char* name, double t_ref, double t_serial, double t_par) {
    if (t_ref > 0.0)
        std::printf("%-26s %10.4f s %10.4f s %10.4f s   x%.2f\n", name, t_ref, t_serial, t_par,
                    t_par > 0.0 ? t_serial / t_par : 0.0);
    else
        std::printf("%-26s %12s %10.4f s %10.4f s   x%.2f\n", name, "-", t_serial, t_par,
                    t_par > 0.0 ? t_serial / t_par : 0.0);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", max_threads());
    std::printf("%-26s %12s %12s %12s   %s\n", "kernel", "reference", "serial", "openmp",
                "serial/openmp");

    {  // response grid evaluation
        CirModel m{TestbedConfig{}, 0.10, BetaInit{3.41, 3.28}, 5e-3};
        const std::size_t n = 400000;
        std::vector<double> sink;
        const double t_ref = time_of([&] { sink = ref::sample_cir(m, 0.5, 1e-5, n); });
        const double t_s = time_of([&] { sink = sample_cir(m, 0.5, 1e-5, n, Exec::serial); });
        const double t_p = time_of([&] { sink = sample_cir(m, 0.5, 1e-5, n, Exec::par); });
        row("cir grid (400k points)", t_ref, t_s, t_p);
    }

    {  // PAM synthesis
        SymbolSequence a;
        a.bits.resize(4000);
        for (std::size_t k = 0; k < a.bits.size(); ++k)
            a.bits[k] = static_cast<std::uint8_t>(rng_bit(1, 1, k));
        std::vector<double> h(2000);
        for (std::size_t j = 0; j < h.size(); ++j) h[j] = std::sin(0.01 * static_cast<double>(j));
        std::vector<double> sink;
        RegularSignal sink2;
        const double t_ref = time_of([&] { sink = ref::pam_synthesize(a.bits, h, 10); });
        const double t_s = time_of([&] { sink2 = pam_synthesize(a, h, 10, 0.1, Exec::serial); });
        const double t_p = time_of([&] { sink2 = pam_synthesize(a, h, 10, 0.1, Exec::par); });
        row("pam synth (4k x 2k)", t_ref, t_s, t_p);
    }

    {  // receiver simulation
        CirModel m{TestbedConfig{}, 0.10, BetaInit{3.0, 3.0}, 0.0};
        SymbolSequence a;
        a.bits.resize(400);
        a.bits[0] = 1;
        for (std::size_t k = 1; k < a.bits.size(); ++k)
            a.bits[k] = static_cast<std::uint8_t>(rng_bit(2, 1, k));
        RxOptions opt;
        opt.noise_sigma = 0.05;
        opt.seed = 3;
        opt.taps_symbols = 20;
        SampledSignal sink;
        const double t_s = time_of([&] { sink = simulate_rx(m, a, opt, Exec::serial); });
        const double t_p = time_of([&] { sink = simulate_rx(m, a, opt, Exec::par); });
        row("simulate rx (400 sym)", 0.0, t_s, t_p);
    }

    {  // trellis detection, moderate memory
        const int Kt = 3, Ki = 150, N = 14, I = 10;
        SymbolSequence seq;
        seq.bits.resize(static_cast<std::size_t>(Kt + Ki));
        for (std::size_t k = 0; k < seq.bits.size(); ++k)
            seq.bits[k] = static_cast<std::uint8_t>(rng_bit(4, 1, k));
        seq.kt = Kt;
        std::vector<double> taps(static_cast<std::size_t>(N) * I);
        for (std::size_t j = 0; j < taps.size(); ++j)
            taps[j] = 0.5 * rng_u01(5, 1, j);
        const std::vector<double> clean = ref::pam_synthesize(seq.bits, taps, I);
        RegularSignal r;
        r.dt = 0.1;
        r.values.assign(static_cast<std::size_t>(Kt + Ki) * I, 0.0);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            r.values[i] = (i < clean.size() ? clean[i] : 0.0) + 0.02 * rng_gauss(6, 1, i);
        ChannelEstimate est;
        est.taps = taps;
        est.n_symbols = N;
        est.oversampling = I;
        SymbolSequence at;
        at.bits.assign(seq.bits.begin(), seq.bits.begin() + Kt);
        at.kt = Kt;

        DetectionResult out_s, out_p;
        const double t_s =
            time_of([&] { out_s = viterbi_detect(r, est, at, Ki, N, I, Exec::serial); }, 2);
        const double t_p =
            time_of([&] { out_p = viterbi_detect(r, est, at, Ki, N, I, Exec::par); }, 2);
        if (out_s.bits != out_p.bits) std::printf("!! viterbi policy mismatch\n");
        row("viterbi (N=14, 150 sym)", 0.0, t_s, t_p);
    }

    {  // multi-start model fit
        const TestbedConfig cfg;
        const int N = 15, I = 10, Kt = 15;
        SymbolSequence at;
        at.bits.assign(Kt, 0);
        at.bits[0] = 1;
        for (int k = 1; k < Kt; ++k)
            at.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(rng_bit(7, 1, k));
        at.kt = Kt;
        CirModel m{cfg, 0.10, BetaInit{3.0, 3.0}, 0.0};
        std::vector<double> taps = limit_taps(m, static_cast<std::size_t>(N) * I, cfg.dt);
        const RegularSignal full = pam_synthesize(at, taps, I, cfg.dt);
        RegularSignal rt;
        rt.dt = cfg.dt;
        rt.values.assign(full.values.begin(), full.values.begin() + Kt * I);

        ChannelEstimate out_s, out_p;
        const double t_s =
            time_of([&] { out_s = fit_model(rt, at, cfg, 0.10, N, I, {}, Exec::serial); }, 2);
        const double t_p =
            time_of([&] { out_p = fit_model(rt, at, cfg, 0.10, N, I, {}, Exec::par); }, 2);
        if (out_s.fitted->alpha != out_p.fitted->alpha) std::printf("!! fit policy mismatch\n");
        row("model fit (25 starts)", 0.0, t_s, t_p);
    }

    return 0;
}
