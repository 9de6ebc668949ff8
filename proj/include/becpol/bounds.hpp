#pragma once

#include "becpol/process.hpp"

namespace becpol {

struct ZetaParams {
    double alpha;
    double beta;
};

struct ZetaResult {
    ZetaParams params;
    double zeta;        // in (0, 1] for the relevant parameter range
    double argmax_z;    // inner maximizer in [0,1]
    double bound_bits;  // log2(zeta)
    int starts = 0;     // multistart count (minimize_zeta only)
    bool converged = true;
};

// zeta(alpha,beta) = 1/2 max_z { z^a (1+z)^b + (2-z)^a (1-z)^b } on [0,1].
// Inner max by a 4097-point grid plus golden-section refinement of the
// best bracket (|dz| < 1e-12); 0^0 evaluates to 1 per IEEE pow, which is
// the convention the endpoints need.
ZetaResult zeta(const ZetaParams& params);

struct MinimizeOptions {
    double box_lo = 0.0;
    double box_hi = 4.0;
    int starts = 16;       // Latin-hypercube multistart
    int max_iter = 400;    // Nelder-Mead iterations per start
    double xtol = 1e-9;    // simplex size tolerance in (alpha, beta)
};

// Minimizes log2 zeta over (alpha, beta) >= 0 by multistart Nelder-Mead.
// Deterministic: the start set is fixed.
ZetaResult minimize_zeta(const MinimizeOptions& opts = {});

// c = 1 / min_{z in [a,b]} z^alpha (1-z)^beta, so that
// P^z(Z_n in [a,b]) <= c * zeta(alpha,beta)^n. The integrand is unimodal,
// so the minimum sits at an endpoint of the window.
double markov_tail_constant(const TargetInterval& target, const ZetaParams& params);

}  // namespace becpol
