#include "mcpipe/quadrature.hpp"

#include <cmath>

#include "mcpipe/errors.hpp"

namespace mcpipe {

namespace {

struct Simpson {
    const std::function<double(double)>& f;
    const QuadratureOptions& opt;

    double recurse(double a, double b, double fa, double fm, double fb, double whole,
                   int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::fabs(delta) <= 15.0 * (opt.abs_tol + opt.rel_tol * std::fabs(left + right)))
            return left + right + delta / 15.0;
        if (depth >= opt.max_depth)
            throw NumericError("adaptive_simpson: tolerance not met at max depth");
        return recurse(a, m, fa, flm, fm, left, depth + 1) +
               recurse(m, b, fm, frm, fb, right, depth + 1);
    }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opt) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Simpson{f, opt}.recurse(a, b, fa, fm, fb, whole, 0);
}

}  // namespace mcpipe
