#include "doctest.h"
#include "helpers.hpp"
#include "mcpipe/cir.hpp"
#include "mcpipe/detection.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/parallel.hpp"
#include "mcpipe/signal.hpp"

using namespace mcpipe;

TEST_SUITE("parallel") {

TEST_CASE("parallel_for covers every index once") {
    std::vector<int> hits(10000, 0);
    parallel_for(Exec::par, hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("cir sampling is policy-invariant") {
    CirModel m{TestbedConfig{}, 0.10, BetaInit{3.41, 3.28}, 0.0};
    const auto serial = sample_cir(m, 0.5, 0.01, 5000, Exec::serial);
    const auto par = sample_cir(m, 0.5, 0.01, 5000, Exec::par);
    REQUIRE(serial.size() == par.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == par[i]);

    const auto r = ref::sample_cir(m, 0.5, 0.01, 5000);
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == r[i]);
}

TEST_CASE("pam synthesis is policy-invariant") {
    SymbolSequence a;
    a.bits.resize(200);
    for (std::size_t k = 0; k < a.bits.size(); ++k)
        a.bits[k] = static_cast<std::uint8_t>(rng_bit(1, 1, k));
    std::vector<double> h(150);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = helpers::uniform(2, 1, j, -1.0, 1.0);

    const RegularSignal serial = pam_synthesize(a, h, 10, 0.1, Exec::serial);
    const RegularSignal par = pam_synthesize(a, h, 10, 0.1, Exec::par);
    REQUIRE(serial.values.size() == par.values.size());
    for (std::size_t i = 0; i < serial.values.size(); ++i)
        CHECK(serial.values[i] == par.values[i]);
}

TEST_CASE("receiver simulation is policy-invariant") {
    CirModel m{TestbedConfig{}, 0.10, BetaInit{3.0, 3.0}, 0.0};
    SymbolSequence a;
    a.bits.resize(50);
    a.bits[0] = 1;
    for (std::size_t k = 1; k < a.bits.size(); ++k)
        a.bits[k] = static_cast<std::uint8_t>(rng_bit(3, 1, k));
    RxOptions opt;
    opt.noise_sigma = 0.05;
    opt.jitter_sigma = 0.005;
    opt.seed = 31;
    opt.taps_symbols = 10;

    const SampledSignal serial = simulate_rx(m, a, opt, Exec::serial);
    const SampledSignal par = simulate_rx(m, a, opt, Exec::par);
    REQUIRE(serial.values.size() == par.values.size());
    for (std::size_t i = 0; i < serial.values.size(); ++i) {
        CHECK(serial.timestamps[i] == par.timestamps[i]);
        CHECK(serial.values[i] == par.values[i]);
    }
}

TEST_CASE("viterbi is policy-invariant") {
    // noisy medium-size instance
    const int kt = 3, ki = 60, n = 9, I = 10;
    SymbolSequence seq;
    seq.bits.resize(static_cast<std::size_t>(kt + ki));
    for (std::size_t k = 0; k < seq.bits.size(); ++k)
        seq.bits[k] = static_cast<std::uint8_t>(rng_bit(4, 1, k));
    seq.kt = kt;
    std::vector<double> taps(static_cast<std::size_t>(n) * I);
    for (std::size_t j = 0; j < taps.size(); ++j)
        taps[j] = helpers::uniform(5, 1, j, -0.3, 1.0);
    const std::vector<double> clean = ref::pam_synthesize(seq.bits, taps, I);
    RegularSignal r;
    r.dt = 0.1;
    r.values.assign(static_cast<std::size_t>(kt + ki) * I, 0.0);
    for (std::size_t i = 0; i < r.values.size(); ++i)
        r.values[i] = (i < clean.size() ? clean[i] : 0.0) + 0.1 * rng_gauss(6, 1, i);

    ChannelEstimate est;
    est.taps = taps;
    est.n_symbols = n;
    est.oversampling = I;
    SymbolSequence at;
    at.bits.assign(seq.bits.begin(), seq.bits.begin() + kt);
    at.kt = kt;

    const DetectionResult serial = viterbi_detect(r, est, at, ki, n, I, Exec::serial);
    const DetectionResult par = viterbi_detect(r, est, at, ki, n, I, Exec::par);
    CHECK(serial.bits == par.bits);
    CHECK(serial.objective == par.objective);
}

TEST_CASE("model fit is policy-invariant") {
    const TestbedConfig cfg;
    const int N = 8, I = 10, Kt = 12;
    SymbolSequence at;
    at.bits.assign(Kt, 0);
    at.bits[0] = 1;
    for (int k = 1; k < Kt; ++k)
        at.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(rng_bit(7, 1, k));
    at.kt = Kt;

    CirModel m{cfg, 0.10, BetaInit{2.8, 3.6}, 0.0};
    std::vector<double> taps = limit_taps(m, static_cast<std::size_t>(N) * I, cfg.dt);
    const RegularSignal full = pam_synthesize(at, taps, I, cfg.dt);
    RegularSignal rt;
    rt.dt = cfg.dt;
    rt.values.assign(full.values.begin(), full.values.begin() + Kt * I);
    for (std::size_t i = 0; i < rt.values.size(); ++i)
        rt.values[i] += 0.02 * scale(m) * rng_gauss(8, 1, i);

    const ChannelEstimate serial = fit_model(rt, at, cfg, 0.10, N, I, {}, Exec::serial);
    const ChannelEstimate par = fit_model(rt, at, cfg, 0.10, N, I, {}, Exec::par);
    REQUIRE(serial.fitted.has_value());
    REQUIRE(par.fitted.has_value());
    CHECK(serial.fitted->alpha == par.fitted->alpha);
    CHECK(serial.fitted->beta == par.fitted->beta);
    CHECK(serial.fitted->gamma == par.fitted->gamma);
    CHECK(serial.residual == par.residual);
}

}  // TEST_SUITE
