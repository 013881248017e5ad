#include "mcpipe/beta_dist.hpp"

#include <cmath>
#include <string>

namespace mcpipe {

void BetaInit::validate() const {
    if (!(alpha >= 1.0) || !(beta >= 1.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw ConfigError("BetaInit: alpha and beta must be >= 1 (unimodality)");
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("log_beta: parameters must be positive");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_norm(double a, double b) {
    return std::exp(log_beta(a, b));
}

double beta_pdf(const BetaInit& init, double s) {
    if (s < 0.0 || s > 1.0) return 0.0;
    // pow(0,0) = 1 covers the alpha = 1 (beta = 1) endpoints
    return std::pow(s, init.alpha - 1.0) * std::pow(1.0 - s, init.beta - 1.0) /
           beta_norm(init.alpha, init.beta);
}

double radial_pdf(const BetaInit& init, double a_tube, double rho) {
    if (!(a_tube > 0.0)) throw ConfigError("radial_pdf: tube radius must be positive");
    if (rho < 0.0 || rho > a_tube) return 0.0;
    const double x = rho / a_tube;
    return 2.0 / (a_tube * beta_norm(init.alpha, init.beta)) * std::pow(x, 2.0 * init.alpha - 1.0) *
           std::pow(1.0 - x * x, init.beta - 1.0);
}

namespace {

// Lentz continued fraction for I_x(a,b); valid for x <= (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 400;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double f = d;

    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        // even step
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        f *= d * c;
        // odd step
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::fabs(delta - 1.0) < 3e-16) return f;
    }
    throw NumericError("reg_inc_beta: continued fraction did not converge (a=" +
                       std::to_string(a) + ", b=" + std::to_string(b) + ", x=" +
                       std::to_string(x) + ")");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("reg_inc_beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_cdf(const BetaInit& init, double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return reg_inc_beta(init.alpha, init.beta, s);
}

}  // namespace mcpipe
