#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mcpipe/cir.hpp"

using namespace mcpipe;

namespace {

CirModel model_with(double d, double alpha, double beta, double lz = 0.0) {
    CirModel m{TestbedConfig{}, d, BetaInit{alpha, beta}, lz};
    m.validate();
    return m;
}

// coarse grid argmax then golden-section refinement, tolerance 1e-6 * t0
double argmax_by_search(const CirModel& m) {
    const double t0 = t_start(m);
    const double hi = 5.0 * t_peak(m) + t0;
    const int grid = 2000;
    double best_t = t0;
    double best_h = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double t = t0 + (hi - t0) * i / grid;
        const double h = cir_limit(m, t);
        if (h > best_h) {
            best_h = h;
            best_t = t;
        }
    }
    const double step = (hi - t0) / grid;
    double a = best_t - step, b = best_t + step;
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = cir_limit(m, x1), f2 = cir_limit(m, x2);
    while (b - a > 1e-6 * t0) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = cir_limit(m, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = cir_limit(m, x1);
        }
    }
    return 0.5 * (a + b);
}

double loglog_tail_slope(const CirModel& m) {
    const double t0 = t_start(m);
    const int n = 200;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 20.0 * t0 * std::pow(10.0, i / (n - 1.0));  // up to 200 t0
        const double x = std::log(t);
        const double y = std::log(cir_limit(m, t));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_SUITE("cir") {

TEST_CASE("onset time") {
    const CirModel m = model_with(0.10, 3.0, 3.0);
    CHECK(std::abs(t_start(m) - 1.060) < 0.005);

    const CirModel far = model_with(0.20, 3.0, 3.0);
    CHECK(t_start(far) == doctest::Approx(2.0 * t_start(m)).epsilon(1e-15));
    CHECK(t_peak(far) == doctest::Approx(2.0 * t_peak(m)).epsilon(1e-12));
}

TEST_CASE("limit form closed cases") {
    const CirModel uniform = model_with(0.10, 1.0, 1.0);
    const double c = scale(uniform);
    const double t0 = t_start(uniform);
    CHECK(cir_limit(uniform, t0) == doctest::Approx(c).epsilon(1e-12));
    for (int i = 1; i <= 40; ++i) {
        const double t = t0 * (1.0 + 0.25 * i);
        CHECK(cir_limit(uniform, t) == doctest::Approx(c * t0 / t).epsilon(1e-12));
    }
    CHECK(cir_limit(uniform, t0 * (1.0 - 1e-12)) == 0.0);

    const CirModel profile = model_with(0.10, 1.0, 2.0);
    CHECK(cir_limit(profile, t_start(profile)) == doctest::Approx(2.0 * c).epsilon(1e-12));
}

TEST_CASE("peak analytics") {
    const CirModel m = model_with(0.10, 3.0, 3.0);
    const double t0 = t_start(m);
    CHECK(t_peak(m) == doctest::Approx(t0 * 5.0 / 3.0).epsilon(1e-15));
    // with the rounded literature onset of 1.09 s the peak lands at 1.82 s
    CHECK(std::abs(t_peak(m) / t0 * 1.09 - 1.82) < 0.01);

    CHECK(h_peak(m) == doctest::Approx(1.0368 * scale(m)).epsilon(1e-3));
    CHECK(h_peak(m) == doctest::Approx(cir_limit(m, t_peak(m))).epsilon(1e-9));

    const CirModel jump = model_with(0.10, 1.0, 2.0);
    CHECK(t_peak(jump) == t_start(jump));
    const CirModel flat = model_with(0.10, 1.0, 1.0);
    CHECK(h_peak(flat) == doctest::Approx(scale(flat)).epsilon(1e-12));

    SUBCASE("peak height times distance is constant") {
        const double ref = h_peak(model_with(0.05, 3.0, 3.0)) * 0.05;
        for (double d : {0.10, 0.20, 0.40})
            CHECK(h_peak(model_with(d, 3.0, 3.0)) * d == doctest::Approx(ref).epsilon(1e-9));
    }

    SUBCASE("grid + golden section argmax agrees") {
        for (auto [a, b] : {std::pair{3.0, 3.0}, std::pair{2.0, 5.0}, std::pair{3.41, 3.28}}) {
            const CirModel mm = model_with(0.10, a, b);
            CHECK(std::abs(argmax_by_search(mm) - t_peak(mm)) < 1e-5 * t_start(mm));
        }
    }
}

TEST_CASE("tail decays as 1/t^beta") {
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}, std::pair{3.0, 3.0},
                        std::pair{3.5, 3.5}}) {
        const CirModel m = model_with(0.10, a, b);
        CHECK(loglog_tail_slope(m) == doctest::Approx(-b).epsilon(0.02));
    }
}

TEST_CASE("limit form is nonnegative and causal") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const CirModel m = model_with(helpers::uniform(5, 1, i, 0.02, 0.5),
                                      helpers::uniform(5, 2, i, 1.0, 6.0),
                                      helpers::uniform(5, 3, i, 1.0, 6.0));
        const double t0 = t_start(m);
        const double t = helpers::uniform(5, 4, i, 0.0, 30.0);
        const double h = cir_limit(m, t);
        CHECK(h >= 0.0);
        if (t < t0) CHECK(h == 0.0);
    }
}

TEST_CASE("windowed form") {
    const CirModel m = model_with(0.10, 3.0, 3.0, 5e-3);
    const double onset = support_start(m);
    CHECK(onset < t_start(m));
    CHECK(cir_windowed(m, onset * 0.999) == 0.0);
    CHECK(cir_windowed(m, -1.0) == 0.0);
    CHECK(cir_windowed(m, 1e9) < 1e-12 * scale(m));

    SUBCASE("matches the limit form at the peak for a short window") {
        const CirModel lim = model_with(0.10, 3.0, 3.0);
        const double rel =
            std::abs(cir_windowed(m, t_peak(lim)) - h_peak(lim)) / h_peak(lim);
        CHECK(rel < 0.03);
    }

    SUBCASE("window shrink converges monotonically to the limit form") {
        const CirModel lim = model_with(0.10, 3.0, 3.0);
        const double t0 = t_start(lim);
        double prev = -1.0;
        bool first = true;
        for (double lz_mm : {20.0, 10.0, 5.0, 1.0, 0.1}) {
            const CirModel w = model_with(0.10, 3.0, 3.0, lz_mm * 1e-3);
            double dev = 0.0;
            for (int i = 0; i <= 500; ++i) {
                const double t = t0 * (1.01 + (20.0 - 1.01) * i / 500.0);
                const double ref = cir_limit(lim, t);
                dev = std::max(dev, std::abs(cir_windowed(w, t) - ref) / ref);
            }
            if (!first) CHECK(dev < prev);
            prev = dev;
            first = false;
        }
    }

    SUBCASE("alpha = 1 reduces to the power-difference form") {
        for (double beta : {1.0, 2.0, 3.5}) {
            const CirModel w = model_with(0.10, 1.0, beta, 8e-3);
            const double u0 = max_velocity(w.cfg);
            for (std::uint64_t i = 0; i < 50; ++i) {
                const double t = helpers::uniform(6, 17, i, 0.5, 15.0);
                const double far = std::min(1.0, (w.d + w.lz / 2.0) / (u0 * t));
                const double near = std::min(1.0, (w.d - w.lz / 2.0) / (u0 * t));
                const double expected =
                    scale(w) * w.d / w.lz * (std::pow(far, beta) - std::pow(near, beta));
                CHECK(cir_windowed(w, t) == doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("grid sampling matches pointwise evaluation") {
    const CirModel m = model_with(0.10, 3.0, 3.0);
    const auto grid = sample_cir(m, 1.0, 0.05, 300, Exec::serial);
    for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(grid[j] == cir_eval(m, 1.0 + 0.05 * static_cast<double>(j)));

    const auto taps = limit_taps(m, 100, 0.1, Exec::serial);
    CHECK(taps[0] == 0.0);  // alpha > 1: nothing at the onset instant
    CHECK(taps[50] == cir_limit(m, t_start(m) + 5.0));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(model_with(-0.1, 3.0, 3.0), ConfigError);
    CHECK_THROWS_AS(model_with(0.10, 0.5, 3.0), ConfigError);
    CHECK_THROWS_AS(model_with(0.10, 3.0, 3.0, -1e-3), ConfigError);
    CHECK_THROWS_AS(model_with(0.002, 3.0, 3.0, 5e-3), ConfigError);  // window reaches the source
    CHECK_THROWS_AS(cir_windowed(model_with(0.1, 3.0, 3.0), 2.0), ConfigError);  // lz = 0
}

}  // TEST_SUITE
