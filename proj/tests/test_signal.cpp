#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "mcpipe/signal.hpp"

using namespace mcpipe;

namespace {

CirModel default_model(double d = 0.10) {
    CirModel m{TestbedConfig{}, d, BetaInit{3.0, 3.0}, 0.0};
    m.validate();
    return m;
}

SymbolSequence seq_of(std::initializer_list<int> bits, int kt = 0) {
    SymbolSequence s;
    for (int b : bits) s.bits.push_back(static_cast<std::uint8_t>(b));
    s.kt = kt;
    return s;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("pam synthesis basics") {
    std::vector<double> h(30);
    for (std::size_t j = 0; j < h.size(); ++j)
        h[j] = helpers::uniform(31, 1, j, -1.0, 1.0);

    SUBCASE("single pulse reproduces the taps") {
        const RegularSignal s = pam_synthesize(seq_of({1}), h, 10);
        REQUIRE(s.values.size() == h.size());
        for (std::size_t j = 0; j < h.size(); ++j) CHECK(s.values[j] == h[j]);
    }
    SUBCASE("all zeros synthesize to zero") {
        const RegularSignal s = pam_synthesize(seq_of({0, 0, 0, 0}), h, 10);
        for (double v : s.values) CHECK(v == 0.0);
    }
    SUBCASE("two pulses superpose") {
        const RegularSignal s = pam_synthesize(seq_of({1, 1}), h, 10);
        REQUIRE(s.values.size() == 10 + h.size());
        CHECK(s.values[15] == doctest::Approx(h[15] + h[5]).epsilon(1e-15));
        CHECK(s.values[3] == h[3]);  // before the second pulse arrives
    }
    SUBCASE("matches the scatter-form reference") {
        const SymbolSequence a = seq_of({1, 0, 1, 1, 0, 1});
        const RegularSignal s = pam_synthesize(a, h, 7);
        const std::vector<double> r = ref::pam_synthesize(a.bits, h, 7);
        REQUIRE(s.values.size() == r.size());
        for (std::size_t j = 0; j < r.size(); ++j)
            CHECK(s.values[j] == doctest::Approx(r[j]).epsilon(1e-15));
    }
}

TEST_CASE("pam linearity on disjoint supports") {
    std::vector<double> h(25);
    for (std::size_t j = 0; j < h.size(); ++j)
        h[j] = helpers::uniform(32, 1, j, 0.0, 2.0);
    const SymbolSequence a1 = seq_of({1, 0, 0, 0, 1, 0});
    const SymbolSequence a2 = seq_of({0, 1, 0, 1, 0, 0});
    SymbolSequence sum;
    for (std::size_t k = 0; k < a1.bits.size(); ++k)
        sum.bits.push_back(static_cast<std::uint8_t>(a1.bits[k] + a2.bits[k]));
    const RegularSignal s1 = pam_synthesize(a1, h, 5);
    const RegularSignal s2 = pam_synthesize(a2, h, 5);
    const RegularSignal s12 = pam_synthesize(sum, h, 5);
    for (std::size_t j = 0; j < s12.values.size(); ++j)
        CHECK(s12.values[j] == doctest::Approx(s1.values[j] + s2.values[j]).epsilon(1e-14));
}

TEST_CASE("simulated receiver equals pam on the aligned grid when clean") {
    const CirModel m = default_model();
    const SymbolSequence a = seq_of({1, 0, 1, 1, 0, 0, 1, 0});
    RxOptions opt;
    opt.seed = 9;
    opt.taps_symbols = 6;
    const double onset = support_start(m);
    opt.grid_phase = std::fmod(opt.quiet + onset, m.cfg.dt);

    const SampledSignal rx = simulate_rx(m, a, opt);
    rx.validate();

    const int I = m.cfg.oversampling();
    const auto taps = limit_taps(m, static_cast<std::size_t>(opt.taps_symbols) * I, m.cfg.dt);
    const RegularSignal s = pam_synthesize(a, taps, I);

    const auto i0 = static_cast<std::size_t>(
        std::llround((opt.quiet + onset - opt.grid_phase) / m.cfg.dt));
    REQUIRE(rx.values.size() > i0 + s.values.size());
    for (std::size_t j = 0; j < i0; ++j) CHECK(rx.values[j] == 0.0);  // quiet prefix
    for (std::size_t j = 0; j < s.values.size(); ++j)
        CHECK(rx.values[i0 + j] ==
              doctest::Approx(s.values[j]).epsilon(1e-12).scale(scale(m)));
}

TEST_CASE("simulation determinism") {
    const CirModel m = default_model();
    const SymbolSequence a = seq_of({1, 1, 0, 1});
    RxOptions opt;
    opt.noise_sigma = 0.1;
    opt.jitter_sigma = 0.01;
    opt.seed = 1234;
    opt.taps_symbols = 5;
    const SampledSignal x = simulate_rx(m, a, opt);
    const SampledSignal y = simulate_rx(m, a, opt);
    REQUIRE(x.values.size() == y.values.size());
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        CHECK(x.values[i] == y.values[i]);
        CHECK(x.timestamps[i] == y.timestamps[i]);
    }
    RxOptions other = opt;
    other.seed = 1235;
    const SampledSignal z = simulate_rx(m, a, other);
    bool any_diff = false;
    for (std::size_t i = 0; i < x.values.size() && !any_diff; ++i)
        any_diff = x.values[i] != z.values[i];
    CHECK(any_diff);
}

TEST_CASE("noise level matches the requested variance") {
    const CirModel m = default_model();
    SymbolSequence a;
    a.bits.assign(200, 1);
    RxOptions clean;
    clean.taps_symbols = 10;
    clean.seed = 77;
    RxOptions noisy = clean;
    noisy.noise_sigma = 0.05;
    const SampledSignal x0 = simulate_rx(m, a, clean);
    const SampledSignal x1 = simulate_rx(m, a, noisy);
    REQUIRE(x0.values.size() == x1.values.size());
    REQUIRE(x0.values.size() >= 2000);
    double mean = 0.0;
    for (std::size_t i = 0; i < x0.values.size(); ++i) mean += x1.values[i] - x0.values[i];
    mean /= static_cast<double>(x0.values.size());
    double var = 0.0;
    for (std::size_t i = 0; i < x0.values.size(); ++i) {
        const double dvi = x1.values[i] - x0.values[i] - mean;
        var += dvi * dvi;
    }
    var /= static_cast<double>(x0.values.size() - 1);
    const double expected = 0.05 * scale(m) * 0.05 * scale(m);
    CHECK(std::abs(var - expected) < 0.2 * expected);
}

TEST_CASE("excessive jitter raises") {
    const CirModel m = default_model();
    const SymbolSequence a = seq_of({1});
    RxOptions opt;
    opt.jitter_sigma = 0.2;  // 3 sigma spans several sample intervals
    opt.seed = 5;
    opt.taps_symbols = 3;
    CHECK_THROWS_AS(simulate_rx(m, a, opt), NumericError);
}

TEST_CASE("resampling") {
    SUBCASE("identity on grid input") {
        SampledSignal x;
        for (int i = 0; i < 25; ++i) {
            x.timestamps.push_back(i * 0.1);
            x.values.push_back(helpers::uniform(33, 1, static_cast<std::uint64_t>(i), -1.0, 1.0));
        }
        const RegularSignal r = resample_linear(x, 0.1);
        REQUIRE(r.values.size() == x.values.size());
        CHECK(r.origin == 0);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            CHECK(r.values[i] == doctest::Approx(x.values[i]).epsilon(1e-12));
    }
    SUBCASE("linear ramp is reproduced exactly") {
        SampledSignal x;
        double t = 0.3;
        for (int i = 0; i < 40; ++i) {
            x.timestamps.push_back(t);
            x.values.push_back(3.0 * t - 1.0);
            t += 0.05 + 0.1 * rng_u01(34, 1, static_cast<std::uint64_t>(i));
        }
        const RegularSignal r = resample_linear(x, 0.1);
        for (std::size_t k = 0; k < r.values.size(); ++k)
            CHECK(r.values[k] == doctest::Approx(3.0 * r.time_at(k) - 1.0).epsilon(1e-10));
    }
    SUBCASE("hand-checked interior point") {
        SampledSignal x;
        x.timestamps = {0.0, 0.15};
        x.values = {0.0, 3.0};
        const RegularSignal r = resample_linear(x, 0.1);
        REQUIRE(r.values.size() == 2);
        CHECK(r.values[0] == 0.0);
        CHECK(r.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("no extrapolation beyond the endpoints") {
        SampledSignal x;
        x.timestamps = {0.05, 0.31};
        x.values = {1.0, 2.0};
        const RegularSignal r = resample_linear(x, 0.1);
        CHECK(r.origin == 1);            // first grid point at 0.1, not 0.0
        CHECK(r.values.size() == 3);     // 0.1, 0.2, 0.3
    }
    SUBCASE("idempotent on regular input") {
        SampledSignal x;
        for (int i = 0; i < 30; ++i) {
            x.timestamps.push_back(0.4 + i * 0.1);
            x.values.push_back(std::sin(0.3 * i));
        }
        const RegularSignal once = resample_linear(x, 0.1);
        SampledSignal again;
        for (std::size_t k = 0; k < once.values.size(); ++k) {
            again.timestamps.push_back(once.time_at(k));
            again.values.push_back(once.values[k]);
        }
        const RegularSignal twice = resample_linear(again, 0.1);
        REQUIRE(once.values.size() == twice.values.size());
        for (std::size_t k = 0; k < once.values.size(); ++k)
            CHECK(once.values[k] == doctest::Approx(twice.values[k]).epsilon(1e-13));
    }
    SUBCASE("fewer than two samples raise") {
        SampledSignal x;
        x.timestamps = {0.1};
        x.values = {1.0};
        CHECK_THROWS_AS(resample_linear(x, 0.1), ConfigError);
    }
}

TEST_CASE("synchronization") {
    SUBCASE("clean pulse onset") {
        RegularSignal x;
        x.dt = 0.1;
        x.values.assign(50, 0.0);
        for (int i = 0; i < 20; ++i) x.values[static_cast<std::size_t>(20 + i)] = 1.0 + i * 0.1;
        const auto sync = synchronize(x);
        REQUIRE(sync.has_value());
        CHECK(sync->i_start == 20);
        CHECK(sync->shifted.values[0] == 1.0);
        CHECK(sync->shifted.origin == 20);
    }
    SUBCASE("all-zero signal has no onset") {
        RegularSignal x;
        x.values.assign(40, 0.0);
        CHECK_FALSE(synchronize(x).has_value());
    }
    SUBCASE("short blip is skipped, sustained rise found") {
        RegularSignal x;
        x.values.assign(80, 0.0);
        for (int i = 0; i < 9; ++i) x.values[static_cast<std::size_t>(5 + i)] = 1.0;  // 9 < 10
        for (int i = 0; i < 30; ++i) x.values[static_cast<std::size_t>(40 + i)] = 1.0;
        const auto sync = synchronize(x);
        REQUIRE(sync.has_value());
        CHECK(sync->i_start == 40);
    }
    SUBCASE("shift equivariance") {
        RegularSignal x;
        x.values.assign(60, 0.0);
        for (int i = 25; i < 60; ++i) x.values[static_cast<std::size_t>(i)] = 2.0;
        const auto base = synchronize(x);
        RegularSignal shifted;
        shifted.dt = x.dt;
        shifted.values.assign(7, 0.0);
        shifted.values.insert(shifted.values.end(), x.values.begin(), x.values.end());
        const auto moved = synchronize(shifted);
        REQUIRE(base.has_value());
        REQUIRE(moved.has_value());
        CHECK(moved->i_start == base->i_start + 7);
    }
}

TEST_CASE("rmse") {
    std::vector<double> r(4000, 0.0);
    std::vector<double> s(4000, 0.0);
    const double c = 2.9e-4;
    CHECK(rmse(r, s, 400, c) == 0.0);

    for (auto& v : r) v = c;
    CHECK(rmse(r, s, 400, c) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));

    // homogeneity
    std::vector<double> r2 = r, s2 = s;
    for (auto& v : r2) v *= 3.0;
    for (auto& v : s2) v *= 3.0;
    CHECK(rmse(r2, s2, 400, c) == doctest::Approx(3.0 * rmse(r, s, 400, c)).epsilon(1e-12));

    std::vector<double> shorter(10, 0.0);
    CHECK_THROWS_AS(rmse(r, shorter, 400, c), ConfigError);
}

}  // TEST_SUITE
