#pragma once

#include <cstddef>
#include <vector>

#include "mcpipe/beta_dist.hpp"
#include "mcpipe/config.hpp"
#include "mcpipe/parallel.hpp"

namespace mcpipe {

// Analytic channel impulse response for one injection: laminar advection of
// an initial Beta cross-section distribution past a rectangular receiver
// window of length lz centered at distance d. lz = 0 selects the closed-form
// zero-window limit.
struct CirModel {
    TestbedConfig cfg;
    double d = 0.10;   // transmitter-receiver distance [m]
    BetaInit init;
    double lz = 0.0;   // receiver window length [m]

    void validate() const;
};

double scale(const CirModel& m);          // c_d = chi_ref Vi / (pi a^2 d)
double t_start(const CirModel& m);        // t0 = d / u0
double support_start(const CirModel& m);  // (d - lz/2) / u0; equals t0 for lz = 0
double t_peak(const CirModel& m);         // t0 (1 + (alpha-1)/beta); t0 when alpha = 1
double h_peak(const CirModel& m);         // peak of the limit form

// Zero-window limit form. Zero for t < t0; at t = t0 the alpha = 1 case jumps
// to c_d / B(1, beta) (0^0 taken as 1).
double cir_limit(const CirModel& m, double t);

// Finite-window form, h = c_d d/lz (F_s(s1) - F_s(s2)). Requires lz > 0.
double cir_windowed(const CirModel& m, double t);

// Dispatch: windowed when lz > 0, limit otherwise.
double cir_eval(const CirModel& m, double t);

// Time after which the response stays below fraction * h_peak (bisection on
// the decaying flank).
double support_end(const CirModel& m, double fraction = 0.01);

// h at t_begin + j*step for j in [0, n).
std::vector<double> sample_cir(const CirModel& m, double t_begin, double step, std::size_t n,
                               Exec exec = Exec::par);

// Limit-form taps on the estimation grid, h[i] = cir_limit(t0 + i*dt).
std::vector<double> limit_taps(const CirModel& m, std::size_t n, double dt,
                               Exec exec = Exec::par);

}  // namespace mcpipe
