#include "becpol/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "becpol/errors.hpp"

namespace becpol {

namespace {

constexpr int kGridPoints = 4097;
constexpr double kGoldenTol = 1e-12;

// z^a (1+z)^b + (2-z)^a (1-z)^b; std::pow(0,0) == 1 covers the endpoint
// convention.
double inner_objective(double z, double alpha, double beta) {
    return std::pow(z, alpha) * std::pow(1.0 + z, beta) +
           std::pow(2.0 - z, alpha) * std::pow(1.0 - z, beta);
}

ZetaResult zeta_on_grid(const ZetaParams& params, int grid_points) {
    const double alpha = params.alpha, beta = params.beta;
    double best_f = -1.0;
    int best_i = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double z = static_cast<double>(i) / (grid_points - 1);
        const double f = inner_objective(z, alpha, beta);
        if (f > best_f) {
            best_f = f;
            best_i = i;
        }
    }

    // golden-section refinement inside the best bracket
    const double golden = 0.6180339887498949;
    double lo = static_cast<double>(std::max(best_i - 1, 0)) / (grid_points - 1);
    double hi = static_cast<double>(std::min(best_i + 1, grid_points - 1)) / (grid_points - 1);
    double c = hi - golden * (hi - lo);
    double d = lo + golden * (hi - lo);
    double fc = inner_objective(c, alpha, beta);
    double fd = inner_objective(d, alpha, beta);
    while (hi - lo > kGoldenTol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - golden * (hi - lo);
            fc = inner_objective(c, alpha, beta);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + golden * (hi - lo);
            fd = inner_objective(d, alpha, beta);
        }
    }
    double argmax = 0.5 * (lo + hi);
    double f_ref = inner_objective(argmax, alpha, beta);
    if (best_f > f_ref) {
        argmax = static_cast<double>(best_i) / (grid_points - 1);
        f_ref = best_f;
    }

    ZetaResult out;
    out.params = params;
    out.zeta = 0.5 * f_ref;
    out.argmax_z = argmax;
    out.bound_bits = std::log2(out.zeta);
    return out;
}

double objective_bits(double alpha, double beta) {
    return zeta_on_grid({std::max(alpha, 0.0), std::max(beta, 0.0)}, kGridPoints).bound_bits;
}

struct SimplexPoint {
    double x, y, f;
};

// plain 2-D Nelder-Mead on log2 zeta, parameters clamped to >= 0 inside
// the objective
SimplexPoint nelder_mead(double x0, double y0, int max_iter, double xtol, bool* converged) {
    const double step = 0.25;
    std::array<SimplexPoint, 3> s{{{x0, y0, objective_bits(x0, y0)},
                                   {x0 + step, y0, objective_bits(x0 + step, y0)},
                                   {x0, y0 + step, objective_bits(x0, y0 + step)}}};
    *converged = false;
    for (int it = 0; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(),
                  [](const SimplexPoint& p, const SimplexPoint& q) { return p.f < q.f; });
        const double size = std::max(
            std::max(std::abs(s[1].x - s[0].x), std::abs(s[2].x - s[0].x)),
            std::max(std::abs(s[1].y - s[0].y), std::abs(s[2].y - s[0].y)));
        if (size < xtol) {
            *converged = true;
            break;
        }
        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        const double rx = cx + (cx - s[2].x), ry = cy + (cy - s[2].y);
        const double fr = objective_bits(rx, ry);
        if (fr < s[0].f) {
            const double ex = cx + 2.0 * (cx - s[2].x), ey = cy + 2.0 * (cy - s[2].y);
            const double fe = objective_bits(ex, ey);
            s[2] = fe < fr ? SimplexPoint{ex, ey, fe} : SimplexPoint{rx, ry, fr};
        } else if (fr < s[1].f) {
            s[2] = {rx, ry, fr};
        } else {
            const double kx = cx + 0.5 * (s[2].x - cx), ky = cy + 0.5 * (s[2].y - cy);
            const double fk = objective_bits(kx, ky);
            if (fk < s[2].f) {
                s[2] = {kx, ky, fk};
            } else {  // shrink toward the best point
                for (int i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
                    s[i].f = objective_bits(s[i].x, s[i].y);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(),
              [](const SimplexPoint& p, const SimplexPoint& q) { return p.f < q.f; });
    return s[0];
}

}  // namespace

ZetaResult zeta(const ZetaParams& params) {
    if (params.alpha < 0.0 || params.beta < 0.0)
        throw std::invalid_argument("zeta: alpha and beta must be >= 0");
    return zeta_on_grid(params, kGridPoints);
}

ZetaResult minimize_zeta(const MinimizeOptions& opts) {
    if (opts.starts < 1 || !(opts.box_hi > opts.box_lo))
        throw std::invalid_argument("minimize_zeta: bad search box");

    // fixed Latin hypercube: stratum k on the alpha axis paired with
    // stratum perm[k] on the beta axis
    static constexpr std::array<int, 16> perm{9, 3, 14, 0, 6, 11, 1, 13, 4, 8, 15, 5, 10, 2, 12, 7};
    const double range = opts.box_hi - opts.box_lo;

    SimplexPoint best{0.0, 0.0, 1e300};
    bool best_converged = false;
    for (int k = 0; k < opts.starts; ++k) {
        const double fx = (k + 0.5) / opts.starts;
        const double fy = (perm[static_cast<std::size_t>(k) % perm.size()] + 0.5) / perm.size();
        const double x0 = opts.box_lo + fx * range;
        const double y0 = opts.box_lo + fy * range;
        bool converged = false;
        const SimplexPoint r = nelder_mead(x0, y0, opts.max_iter, opts.xtol, &converged);
        if (r.f < best.f) {
            best = r;
            best_converged = converged;
        }
    }

    ZetaResult out = zeta_on_grid({std::max(best.x, 0.0), std::max(best.y, 0.0)}, kGridPoints);
    out.starts = opts.starts;
    out.converged = best_converged;
    return out;
}

double markov_tail_constant(const TargetInterval& target, const ZetaParams& params) {
    if (params.alpha < 0.0 || params.beta < 0.0)
        throw std::invalid_argument("markov_tail_constant: alpha and beta must be >= 0");
    auto q = [&](double z) {
        return std::pow(z, params.alpha) * std::pow(1.0 - z, params.beta);
    };
    const double qmin = std::min(q(target.a), q(target.b));
    if (!(qmin > 0.0))
        throw numerical_error("markov_tail_constant: q vanishes on the window endpoints");
    return 1.0 / qmin;
}

}  // namespace becpol
