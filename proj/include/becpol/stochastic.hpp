#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "becpol/process.hpp"
#include "becpol/rng.hpp"

namespace becpol {

struct MCEstimate {
    double mean;
    double std_error;  // sample std / sqrt(samples)
    std::uint64_t samples;
};

struct ThresholdSample {
    double value;
    int depth;
};

struct LyapunovEstimate {
    double mean_bits;
    double mean_nats;
    double std_error;  // nats
    std::uint64_t steps;
    std::uint64_t burnin;
};

struct KsResult {
    double statistic;
    double threshold;  // c(alpha)/sqrt(N)
    bool pass;
    std::size_t samples;
};

struct QnGrowth {
    double alpha, beta;
    double mean_qn;
    double std_error;
    double growth;      // (E Q_n)^(1/n)
    double growth_se;   // delta-method propagation of std_error
    double zeta_ref;    // zeta(alpha, beta)
    bool within_bound;  // growth <= zeta_ref + 4 growth_se
};

// One n-step realization of the Bhattacharyya process from z;
// distribution identical to apply_word with a uniform random word.
double sample_trajectory(double z, int n, const RngSpec& rng, std::uint64_t element = 0);

// Indicator-mean Monte Carlo estimate of P^z(Z_n in [a,b]).
MCEstimate mc_pn(double z, int n, const TargetInterval& target, std::uint64_t samples,
                 const RngSpec& rng, int threads = 0);

// Backward composition of `depth` random inverse maps applied to 1/2;
// converges to the realization's threshold point doubly exponentially.
ThresholdSample sample_threshold(int depth, const RngSpec& rng, std::uint64_t element = 0);

// count independent threshold samples (elements 0..count-1)
std::vector<double> threshold_samples(int depth, std::uint64_t count, const RngSpec& rng,
                                      int threads = 0);

// One-sample Kolmogorov-Smirnov statistic against Uniform[0,1];
// pass when statistic < c(alpha)/sqrt(N) with the asymptotic critical
// value c(alpha) = sqrt(-ln(alpha/2)/2). Needs >= 100 samples.
KsResult ks_uniformity(std::span<const double> samples, double alpha = 0.01);

// The reverse chain x <- T_b^{-1}(x): returns the `steps` consecutive
// states after z0 (z0 itself not included). Its unique invariant law is
// uniform; consecutive states are strongly correlated, so tests thin the
// output before applying ks_uniformity.
std::vector<double> reverse_chain(double z0, std::uint64_t steps, const RngSpec& rng);

// Ergodic average of ln (T_b^{-1})' along the reverse chain, derivative
// evaluated at the state before each step. Reports nats and bits.
LyapunovEstimate lyapunov_estimate(double z0, std::uint64_t steps, std::uint64_t burnin,
                                   const RngSpec& rng);

// Estimates the per-step growth (E Q_n)^(1/n) of Q_n = Z_n^alpha (1-Z_n)^beta
// and compares it against the one-step bound zeta(alpha, beta).
QnGrowth qn_ratio_check(double alpha, double beta, double z, int n, std::uint64_t samples,
                        const RngSpec& rng, int threads = 0);

}  // namespace becpol
