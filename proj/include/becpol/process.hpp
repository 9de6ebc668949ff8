#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "becpol/errors.hpp"

namespace becpol {

// One polarization step. `plus` is the W+ branch (squaring map),
// `minus` the W- branch. Sub-channel indices use bit 1 = plus.
enum class Branch : std::uint8_t { minus = 0, plus = 1 };

// b_1 first. The empty word is the identity map.
using BranchWord = std::vector<Branch>;

// T1(x) = x^2,  T0(x) = 2x - x^2.
// T0 is evaluated piecewise: x(2-x) below 1/2 (1-(1-x)^2 would absorb a
// tiny x into the rounding of 1-x and collapse it to 0, inverting the
// T1 <= T0 order), and 1-(1-x)^2 above, where 1-x is exact. Both pieces
// round monotonically, so word images never leave the all-plus/all-minus
// envelope.
inline double t_apply(Branch b, double x) {
    if (b == Branch::plus) return x * x;
    if (x < 0.5) return x * (2.0 - x);
    const double u = 1.0 - x;
    return 1.0 - u * u;
}

// T1^{-1}(y) = sqrt(y).
// T0^{-1}(y) = 1 - sqrt(1-y), evaluated as y / (1 + sqrt(1-y)) to avoid
// cancellation for small y.
inline double t_inverse(Branch b, double y) {
    if (b == Branch::plus) return std::sqrt(y);
    return y / (1.0 + std::sqrt(1.0 - y));
}

// (T1^{-1})'(y) = 1/(2 sqrt(y)),  (T0^{-1})'(y) = 1/(2 sqrt(1-y)).
// Diverges at y=0 (plus) and y=1 (minus).
inline double t_inverse_derivative(Branch b, double y) {
    if (b == Branch::plus) {
        if (y <= 0.0) throw std::domain_error("t_inverse_derivative: y=0 on the plus branch");
        return 1.0 / (2.0 * std::sqrt(y));
    }
    if (y >= 1.0) throw std::domain_error("t_inverse_derivative: y=1 on the minus branch");
    return 1.0 / (2.0 * std::sqrt(1.0 - y));
}

// phi_w = T_{b_n} o ... o T_{b_1}: b_1 acts first.
inline double apply_word(std::span<const Branch> word, double z) {
    for (Branch b : word) z = t_apply(b, z);
    return z;
}

// phi_w^{-1} = T_{b_1}^{-1} o ... o T_{b_n}^{-1}: the last branch's inverse
// acts first.
inline double apply_inverse_word(std::span<const Branch> word, double y) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) y = t_inverse(*it, y);
    return y;
}

struct ReachBounds {
    double lo;
    double hi;
};

// Envelope of every m-step image of x: [x^(2^m), 1-(1-x)^(2^m)].
// The extremes are the all-plus and all-minus words; both are computed by
// literally iterating t_apply so the envelope matches the corresponding
// leaf values bit for bit.
inline ReachBounds reach_bounds(double x, int m) {
    double lo = x, hi = x;
    for (int i = 0; i < m; ++i) {
        lo = t_apply(Branch::plus, lo);
        hi = t_apply(Branch::minus, hi);
    }
    return {lo, hi};
}

// Escape window [a,b] in (0,1), closed on both ends.
// `consistent` records the a <= b^2 condition under which the escape-rate
// limits do not depend on the window.
struct TargetInterval {
    double a;
    double b;
    bool consistent;

    TargetInterval(double a_, double b_) : a(a_), b(b_), consistent(a_ <= b_ * b_) {
        if (!(0.0 < a_ && a_ <= b_ && b_ < 1.0))
            throw std::invalid_argument("TargetInterval: need 0 < a <= b < 1");
    }
    bool contains(double x) const { return a <= x && x <= b; }
    double width() const { return b - a; }
    static TargetInterval canonical() { return {0.25, 0.75}; }
};

// Forward or backward orbit set of a point, all word lengths 0..depth,
// sorted and deduplicated to 4 ulp.
struct SetSample {
    double origin;
    int depth;
    std::vector<double> values;
};

inline constexpr std::uint64_t kDefaultSetBudget = std::uint64_t(1) << 21;  // n <= 20

SetSample forward_set(double z, int n, std::uint64_t budget = kDefaultSetBudget);
SetSample backward_set(double z, int n, std::uint64_t budget = kDefaultSetBudget);

// Sub-channel index convention: index i at depth n has binary expansion
// b_1 ... b_n with b_1 the most significant bit.
BranchWord word_from_index(std::uint64_t index, int n);
std::uint64_t index_of_word(const BranchWord& word);

}  // namespace becpol
