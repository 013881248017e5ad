#include "mcpipe/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>

#include "mcpipe/cir.hpp"

namespace mcpipe {

std::vector<double> DesignMatrix::apply(std::span<const double> h) const {
    std::vector<double> out(rows, 0.0);
    for (int off : active_offsets) {
        const std::size_t r_lo = static_cast<std::size_t>(off);
        const std::size_t r_hi = std::min(rows, r_lo + cols);
        for (std::size_t r = r_lo; r < r_hi; ++r) out[r] += h[r - r_lo];
    }
    return out;
}

std::vector<double> DesignMatrix::apply_transpose(std::span<const double> r) const {
    std::vector<double> out(cols, 0.0);
    for (int off : active_offsets) {
        const std::size_t r_lo = static_cast<std::size_t>(off);
        const std::size_t r_hi = std::min(rows, r_lo + cols);
        for (std::size_t row = r_lo; row < r_hi; ++row) out[row - r_lo] += r[row];
    }
    return out;
}

std::vector<double> DesignMatrix::dense() const {
    std::vector<double> out(rows * cols, 0.0);
    for (int off : active_offsets) {
        const std::size_t r_lo = static_cast<std::size_t>(off);
        const std::size_t r_hi = std::min(rows, r_lo + cols);
        for (std::size_t r = r_lo; r < r_hi; ++r) out[r * cols + (r - r_lo)] += 1.0;
    }
    return out;
}

DesignMatrix build_design(const SymbolSequence& at, int N, int I, std::size_t rows) {
    if (N < 1 || I < 1) throw ConfigError("build_design: N and I must be >= 1");
    at.validate();
    DesignMatrix dm;
    dm.rows = rows;
    dm.cols = static_cast<std::size_t>(N) * static_cast<std::size_t>(I);
    for (int k = 0; k < at.kt; ++k)
        if (at.bits[static_cast<std::size_t>(k)]) dm.active_offsets.push_back(k * I);
    return dm;
}

namespace {

struct NmResult {
    double x = 0.0, y = 0.0, value = 0.0;
    bool converged = false;
};

// Nelder-Mead on a clamped box; derivative-free, good enough for the smooth
// 2-D landscape left after eliminating the linear scale.
template <typename F>
NmResult nelder_mead_2d(const F& f, double x0, double y0, double step, double lo, double hi,
                        double tol, int max_evals) {
    struct Pt {
        double x, y, v;
    };
    auto clamp = [&](double v) { return std::clamp(v, lo, hi); };
    int evals = 0;
    auto eval = [&](double x, double y) {
        ++evals;
        return f(clamp(x), clamp(y));
    };

    std::array<Pt, 3> s = {Pt{x0, y0, 0.0},
                           Pt{clamp(x0 + step), y0, 0.0},
                           Pt{x0, clamp(y0 + step), 0.0}};
    for (auto& p : s) {
        p.x = clamp(p.x);
        p.y = clamp(p.y);
        p.v = eval(p.x, p.y);
    }

    NmResult res;
    while (evals < max_evals) {
        std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.v < b.v; });
        const double size = std::max(std::max(std::fabs(s[1].x - s[0].x), std::fabs(s[2].x - s[0].x)),
                                     std::max(std::fabs(s[1].y - s[0].y), std::fabs(s[2].y - s[0].y)));
        if (size < tol) {
            res.converged = true;
            break;
        }
        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        Pt refl{clamp(cx + (cx - s[2].x)), clamp(cy + (cy - s[2].y)), 0.0};
        refl.v = eval(refl.x, refl.y);
        if (refl.v < s[0].v) {
            Pt exp_{clamp(cx + 2.0 * (cx - s[2].x)), clamp(cy + 2.0 * (cy - s[2].y)), 0.0};
            exp_.v = eval(exp_.x, exp_.y);
            s[2] = exp_.v < refl.v ? exp_ : refl;
        } else if (refl.v < s[1].v) {
            s[2] = refl;
        } else {
            Pt contr{clamp(cx + 0.5 * (s[2].x - cx)), clamp(cy + 0.5 * (s[2].y - cy)), 0.0};
            contr.v = eval(contr.x, contr.y);
            if (contr.v < s[2].v) {
                s[2] = contr;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = clamp(s[0].x + 0.5 * (s[i].x - s[0].x));
                    s[i].y = clamp(s[0].y + 0.5 * (s[i].y - s[0].y));
                    s[i].v = eval(s[i].x, s[i].y);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.v < b.v; });
    res.x = s[0].x;
    res.y = s[0].y;
    res.value = s[0].v;
    return res;
}

struct GammaFit {
    double gamma = 0.0;
    double objective = 0.0;
};

}  // namespace

ChannelEstimate fit_model(const RegularSignal& rt, const SymbolSequence& at,
                          const TestbedConfig& cfg, double d, int N, int I,
                          const FitModelOptions& opt, Exec exec) {
    if (N < 1 || I < 1) throw ConfigError("fit_model: N and I must be >= 1");
    if (rt.values.empty()) throw ConfigError("fit_model: empty training signal");
    at.validate();
    SymbolSequence train;
    train.bits.assign(at.bits.begin(), at.bits.begin() + at.kt);
    train.kt = at.kt;
    if (std::none_of(train.bits.begin(), train.bits.end(), [](std::uint8_t b) { return b == 1; }))
        throw ConfigError("fit_model: training sequence carries no signal energy");

    const std::size_t window = rt.values.size();
    const std::size_t n_taps = static_cast<std::size_t>(N) * static_cast<std::size_t>(I);
    CirModel base{cfg, d, BetaInit{}, 0.0};
    base.validate();

    // gamma has a closed-form optimum for fixed (alpha, beta)
    const auto fit_gamma = [&](double alpha, double beta) {
        CirModel m = base;
        m.init = BetaInit{alpha, beta};
        const std::vector<double> taps = limit_taps(m, n_taps, cfg.dt, Exec::serial);
        const RegularSignal s1 = pam_synthesize(train, taps, I, cfg.dt, Exec::serial);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double si = i < s1.values.size() ? s1.values[i] : 0.0;
            num += rt.values[i] * si;
            den += si * si;
        }
        GammaFit g;
        g.gamma = (num > 0.0 && den > 0.0) ? num / den : 0.0;
        double obj = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double si = i < s1.values.size() ? s1.values[i] : 0.0;
            const double diff = rt.values[i] - g.gamma * si;
            obj += diff * diff;
        }
        g.objective = obj;
        return g;
    };
    const auto objective = [&](double alpha, double beta) { return fit_gamma(alpha, beta).objective; };

    const std::size_t n_starts = opt.start_grid.size() * opt.start_grid.size();
    std::vector<NmResult> results(n_starts);
    parallel_for(exec, n_starts, [&](std::size_t s) {
        const double a0 = opt.start_grid[s / opt.start_grid.size()];
        const double b0 = opt.start_grid[s % opt.start_grid.size()];
        results[s] = nelder_mead_2d(objective, a0, b0, 0.5, opt.lo, opt.hi, opt.param_tol,
                                    opt.max_evals);
    });

    const NmResult* best = nullptr;
    bool any_converged = false;
    for (const auto& r : results) {
        any_converged = any_converged || r.converged;
        if (!best || r.value < best->value ||
            (r.value == best->value && (r.x < best->x || (r.x == best->x && r.y < best->y))))
            best = &r;
    }
    if (!any_converged)
        throw NumericError("fit_model: no start converged within the evaluation budget");

    const GammaFit g = fit_gamma(best->x, best->y);
    CirModel m = base;
    m.init = BetaInit{best->x, best->y};
    ChannelEstimate est;
    est.method = EstimatorMethod::model;
    est.n_symbols = N;
    est.oversampling = I;
    est.fitted = FittedParams{best->x, best->y, g.gamma};
    est.taps = limit_taps(m, n_taps, cfg.dt, Exec::serial);
    for (auto& v : est.taps) v *= g.gamma;
    est.residual = g.objective;
    return est;
}

ChannelEstimate fit_samples(const RegularSignal& rt, const SymbolSequence& at, int N, int I,
                            double ridge) {
    if (rt.values.empty()) throw ConfigError("fit_samples: empty training signal");
    if (ridge < 0.0) throw ConfigError("fit_samples: ridge must be >= 0");
    const std::size_t rows = rt.values.size();
    const DesignMatrix dm = build_design(at, N, I, rows);
    const std::size_t cols = dm.cols;

    const std::size_t aug = ridge > 0.0 ? rows + cols : rows;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(aug),
                                              static_cast<Eigen::Index>(cols));
    const std::vector<double> dense = dm.dense();
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = dense[r * cols + c];
    if (ridge > 0.0) {
        const double sr = std::sqrt(ridge);
        for (std::size_t c = 0; c < cols; ++c)
            A(static_cast<Eigen::Index>(rows + c), static_cast<Eigen::Index>(c)) = sr;
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(aug));
    for (std::size_t r = 0; r < rows; ++r) b(static_cast<Eigen::Index>(r)) = rt.values[r];

    // column-pivoted complete orthogonal factorization: minimum-norm solution
    // on rank-deficient designs
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    const Eigen::VectorXd h = cod.solve(b);

    ChannelEstimate est;
    est.method = EstimatorMethod::samples;
    est.n_symbols = N;
    est.oversampling = I;
    est.taps.assign(h.data(), h.data() + cols);
    const std::vector<double> model = dm.apply(est.taps);
    double res = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double diff = rt.values[r] - model[r];
        res += diff * diff;
    }
    est.residual = res;
    return est;
}

}  // namespace mcpipe
