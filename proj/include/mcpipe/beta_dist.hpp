#pragma once

#include "mcpipe/errors.hpp"

namespace mcpipe {

// Two-parameter initial cross-section distribution over s = (rho/a)^2.
// alpha = beta = 1 is uniform; alpha >= 1, beta >= 1 keeps the density
// unimodal.
struct BetaInit {
    double alpha = 3.0;
    double beta = 3.0;

    void validate() const;
};

double log_beta(double a, double b);
double beta_norm(double a, double b);  // B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b)

// Density f_s(s) on [0,1].
double beta_pdf(const BetaInit& init, double s);

// Radial density f_rho(rho) on [0, a_tube], per meter.
double radial_pdf(const BetaInit& init, double a_tube, double rho);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation with
// the symmetry split at x = (a+1)/(a+b+2).
double reg_inc_beta(double a, double b, double x);

// F_s(s) = I_s(alpha, beta); s is clamped to [0,1].
double beta_cdf(const BetaInit& init, double s);

}  // namespace mcpipe
