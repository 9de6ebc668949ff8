#include <doctest.h>

#include <cmath>

#include "becpol/bounds.hpp"
#include "becpol/exact.hpp"

using namespace becpol;

TEST_CASE("zeta closed-form cases") {
    const ZetaResult linear = zeta({1.0, 0.0});
    CHECK(linear.zeta == doctest::Approx(1.0).epsilon(1e-12));  // f == 2

    const ZetaResult trivial = zeta({0.0, 0.0});
    CHECK(trivial.zeta == doctest::Approx(1.0).epsilon(1e-12));

    const ZetaResult half = zeta({0.5, 0.5});
    CHECK(std::abs(half.zeta - std::sqrt(3.0) / 2.0) < 1e-9);
    CHECK(std::abs(half.bound_bits - 0.5 * std::log2(0.75)) < 1e-6);
    // the max is quadratically flat, so the locatable resolution is
    // sqrt(eps) even though the bracket shrinks to 1e-12
    CHECK(std::abs(half.argmax_z - 0.5) < 1e-7);

    CHECK_THROWS_AS(zeta({-0.1, 0.5}), std::invalid_argument);
}

TEST_CASE("zeta symmetry in (alpha, beta)") {
    for (const double a : {0.3, 0.65, 1.5}) {
        for (const double b : {0.2, 0.9}) {
            const ZetaResult ab = zeta({a, b});
            const ZetaResult ba = zeta({b, a});
            // f_{b,a}(z) = f_{a,b}(1-z), so the max values agree
            CHECK(ab.zeta == doctest::Approx(ba.zeta).epsilon(1e-12));
            const double mirrored = 1.0 - ba.argmax_z;
            const bool paired = std::abs(ab.argmax_z - ba.argmax_z) < 1e-6 ||
                                std::abs(ab.argmax_z - mirrored) < 1e-6;
            CHECK(paired);
        }
    }
    // on the diagonal the objective is symmetric about 1/2; the centre is
    // the maximizer while it is still unimodal
    for (const double a : {0.3, 0.5, 0.6}) {
        CHECK(std::abs(zeta({a, a}).argmax_z - 0.5) < 1e-7);
    }
    // past the bifurcation the maximizer splits into a symmetric pair
    const ZetaResult split = zeta({0.65, 0.65});
    const double f_here = std::pow(split.argmax_z, 0.65) * std::pow(1 + split.argmax_z, 0.65) +
                          std::pow(2 - split.argmax_z, 0.65) * std::pow(1 - split.argmax_z, 0.65);
    const double zm = 1.0 - split.argmax_z;
    const double f_mirror = std::pow(zm, 0.65) * std::pow(1 + zm, 0.65) +
                            std::pow(2 - zm, 0.65) * std::pow(1 - zm, 0.65);
    CHECK(f_here == doctest::Approx(f_mirror).epsilon(1e-9));
}

TEST_CASE("minimize_zeta reproduces the optimized bound") {
    const ZetaResult best = minimize_zeta();
    CHECK(best.bound_bits <= -0.2669 + 1e-3);
    CHECK(best.bound_bits >= kEscapeLowerBoundBits);
    CHECK(best.starts == 16);

    // never worse than a coarse grid scan of the box
    double grid_best = 1e9;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j)
            grid_best = std::min(grid_best, zeta({i * 0.1, j * 0.1}).bound_bits);
    CHECK(best.bound_bits <= grid_best + 1e-9);

    // restricting the search to the diagonal cannot do better
    double diag_best = 1e9;
    for (int i = 0; i <= 400; ++i)
        diag_best = std::min(diag_best, zeta({i * 0.01, i * 0.01}).bound_bits);
    CHECK(diag_best >= best.bound_bits - 1e-9);
}

TEST_CASE("markov_tail_constant") {
    const TargetInterval canon = TargetInterval::canonical();
    const double c = markov_tail_constant(canon, {0.5, 0.5});
    CHECK(c == doctest::Approx(1.0 / std::sqrt(3.0 / 16.0)).epsilon(1e-12));

    CHECK(markov_tail_constant(TargetInterval(0.5, 0.5), {0.5, 0.5}) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // grid-minimization oracle
    for (const auto& params : {ZetaParams{0.5, 0.5}, ZetaParams{0.7, 0.4}}) {
        double qmin = 1e300;
        for (int i = 0; i <= 20000; ++i) {
            const double z = 0.25 + 0.5 * i / 20000.0;
            qmin = std::min(qmin, std::pow(z, params.alpha) * std::pow(1.0 - z, params.beta));
        }
        CHECK(markov_tail_constant(canon, params) ==
              doctest::Approx(1.0 / qmin).epsilon(1e-6));
    }
}

TEST_CASE("bound chain dominates the exact mass (n <= 10)") {
    const TargetInterval canon = TargetInterval::canonical();
    const ZetaResult best = minimize_zeta();
    const double c = markov_tail_constant(canon, best.params);
    for (int i = 1; i < 20; ++i) {
        const double z = i / 20.0;
        for (int n = 0; n <= 10; n += 2)
            CHECK(exact_pn(z, n, canon) <= c * std::pow(best.zeta, n) + 1e-12);
    }
}

TEST_CASE("grid refinement never loses the max") {
    // zeta uses a fixed grid; a finer reference scan plus refinement must
    // not fall below it
    for (const auto& params : {ZetaParams{0.5, 0.5}, ZetaParams{0.66, 0.66},
                               ZetaParams{1.2, 0.3}}) {
        const ZetaResult base = zeta(params);
        double scan = 0.0;
        for (int i = 0; i <= 65536; ++i) {
            const double z = static_cast<double>(i) / 65536;
            scan = std::max(scan, std::pow(z, params.alpha) * std::pow(1.0 + z, params.beta) +
                                      std::pow(2.0 - z, params.alpha) *
                                          std::pow(1.0 - z, params.beta));
        }
        CHECK(base.zeta >= 0.5 * scan - 1e-9);
    }
}
