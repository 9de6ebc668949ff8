#include "becpol/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "becpol/bounds.hpp"
#include "becpol/errors.hpp"
#include "becpol/parallel.hpp"
#include "becpol/summation.hpp"

namespace becpol {

namespace {

constexpr std::uint64_t kSampleChunk = std::uint64_t(1) << 16;

std::uint64_t chunk_count(std::uint64_t samples) {
    return (samples + kSampleChunk - 1) / kSampleChunk;
}

}  // namespace

double sample_trajectory(double z, int n, const RngSpec& rng, std::uint64_t element) {
    if (n < 0) throw std::invalid_argument("sample_trajectory: n must be >= 0");
    BitSource bits(rng, element);
    for (int i = 0; i < n; ++i) z = t_apply(bits.branch(), z);
    return z;
}

MCEstimate mc_pn(double z, int n, const TargetInterval& target, std::uint64_t samples,
                 const RngSpec& rng, int threads) {
    if (samples < 1) throw std::invalid_argument("mc_pn: need samples >= 1");
    const std::uint64_t chunks = chunk_count(samples);
    std::vector<std::uint64_t> hits(chunks, 0);
    for_each_chunk(chunks, threads, [&](std::uint64_t c) {
        const std::uint64_t lo = c * kSampleChunk;
        const std::uint64_t hi = std::min(samples, lo + kSampleChunk);
        std::uint64_t h = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            BitSource bits(rng, i);
            double x = z;
            for (int k = 0; k < n; ++k) x = t_apply(bits.branch(), x);
            if (target.contains(x)) ++h;
        }
        hits[c] = h;
    });
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    const double mean = static_cast<double>(total) / static_cast<double>(samples);
    double se = 0.0;
    if (samples > 1)
        se = std::sqrt(mean * (1.0 - mean) / static_cast<double>(samples - 1));
    return MCEstimate{mean, se, samples};
}

ThresholdSample sample_threshold(int depth, const RngSpec& rng, std::uint64_t element) {
    if (depth < 1) throw std::invalid_argument("sample_threshold: need depth >= 1");
    BitSource bits(rng, element);
    double x = 0.5;  // any anchor in (0,1) works; 1/2 is farthest from the endpoints
    for (int i = 0; i < depth; ++i) x = t_inverse(bits.branch(), x);
    return ThresholdSample{x, depth};
}

std::vector<double> threshold_samples(int depth, std::uint64_t count, const RngSpec& rng,
                                      int threads) {
    if (depth < 1) throw std::invalid_argument("threshold_samples: need depth >= 1");
    std::vector<double> out(count);
    const std::uint64_t chunks = chunk_count(count);
    for_each_chunk(chunks, threads, [&](std::uint64_t c) {
        const std::uint64_t lo = c * kSampleChunk;
        const std::uint64_t hi = std::min(count, lo + kSampleChunk);
        for (std::uint64_t i = lo; i < hi; ++i) {
            BitSource bits(rng, i);
            double x = 0.5;
            for (int k = 0; k < depth; ++k) x = t_inverse(bits.branch(), x);
            out[i] = x;
        }
    });
    return out;
}

KsResult ks_uniformity(std::span<const double> samples, double alpha) {
    if (samples.size() < 100) throw numerical_error("ks_uniformity: need at least 100 samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ks_uniformity: alpha must be in (0,1)");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - xs[i];
        const double lo = xs[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);  // c(0.01) ~ 1.628
    const double threshold = c / std::sqrt(n);
    return KsResult{d, threshold, d < threshold, xs.size()};
}

std::vector<double> reverse_chain(double z0, std::uint64_t steps, const RngSpec& rng) {
    if (!(0.0 < z0 && z0 < 1.0)) throw std::invalid_argument("reverse_chain: need z0 in (0,1)");
    std::vector<double> out;
    out.reserve(steps);
    BitSource bits(rng, 0);
    double x = z0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        x = t_inverse(bits.branch(), x);
        out.push_back(x);
    }
    return out;
}

LyapunovEstimate lyapunov_estimate(double z0, std::uint64_t steps, std::uint64_t burnin,
                                   const RngSpec& rng) {
    if (!(0.0 < z0 && z0 < 1.0))
        throw std::invalid_argument("lyapunov_estimate: need z0 in (0,1)");
    if (steps <= burnin) throw std::invalid_argument("lyapunov_estimate: need steps > burnin");

    BitSource bits(rng, 0);
    double x = z0;
    NeumaierSum sum, sumsq;
    for (std::uint64_t i = 0; i < steps; ++i) {
        const Branch b = bits.branch();
        if (i >= burnin) {
            // derivative at the state before the step, per the chain rule
            const double v = std::log(t_inverse_derivative(b, x));
            sum.add(v);
            sumsq.add(v * v);
        }
        x = t_inverse(b, x);
    }
    const auto count = static_cast<double>(steps - burnin);
    const double mean = sum.value() / count;
    double se = 0.0;
    if (count > 1.5) {
        const double var = std::max(0.0, (sumsq.value() - count * mean * mean) / (count - 1.0));
        se = std::sqrt(var / count);
    }
    return LyapunovEstimate{mean / std::numbers::ln2, mean, se, steps, burnin};
}

QnGrowth qn_ratio_check(double alpha, double beta, double z, int n, std::uint64_t samples,
                        const RngSpec& rng, int threads) {
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("qn_ratio_check: alpha and beta must be >= 0");
    if (alpha == 0.0 && beta == 0.0)
        throw std::invalid_argument("qn_ratio_check: (0,0) makes Q identically 1");
    if (samples < 2) throw std::invalid_argument("qn_ratio_check: need samples >= 2");
    if (n < 1) throw std::invalid_argument("qn_ratio_check: need n >= 1");

    const std::uint64_t chunks = chunk_count(samples);
    std::vector<NeumaierSum> q_sums(chunks), q2_sums(chunks);
    for_each_chunk(chunks, threads, [&](std::uint64_t c) {
        const std::uint64_t lo = c * kSampleChunk;
        const std::uint64_t hi = std::min(samples, lo + kSampleChunk);
        NeumaierSum q, q2;
        for (std::uint64_t i = lo; i < hi; ++i) {
            BitSource bits(rng, i);
            double x = z;
            for (int k = 0; k < n; ++k) x = t_apply(bits.branch(), x);
            const double v = std::pow(x, alpha) * std::pow(1.0 - x, beta);
            q.add(v);
            q2.add(v * v);
        }
        q_sums[c] = q;
        q2_sums[c] = q2;
    });

    NeumaierSum q, q2;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        q.merge(q_sums[c]);
        q2.merge(q2_sums[c]);
    }
    const auto count = static_cast<double>(samples);
    const double mean = q.value() / count;
    const double var = std::max(0.0, (q2.value() - count * mean * mean) / (count - 1.0));
    const double se = std::sqrt(var / count);

    double growth = 0.0, growth_se = 0.0;
    if (mean > 0.0) {
        growth = std::pow(mean, 1.0 / n);
        growth_se = se * std::pow(mean, 1.0 / n - 1.0) / n;
    }
    const double zeta_ref = zeta(ZetaParams{alpha, beta}).zeta;
    return QnGrowth{alpha, beta,   mean,     se,
                    growth, growth_se, zeta_ref, growth <= zeta_ref + 4.0 * growth_se};
}

}  // namespace becpol
