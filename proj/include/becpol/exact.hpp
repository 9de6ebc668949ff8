#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "becpol/process.hpp"

namespace becpol {

// Analytic bracket for the escape rate of the canonical window, in bits:
// the ergodic lower bound 1/(2 ln 2) - 1 and the optimized supermartingale
// upper bound (minimize_zeta() to four digits).
inline constexpr double kEscapeLowerBoundBits = 1.0 / (2.0 * std::numbers::ln2) - 1.0;
inline constexpr double kEscapeUpperBoundBits = -0.2669;

struct EnumerationOptions {
    std::uint64_t budget = std::uint64_t(1) << 31;  // surviving-branch cap
    double tol = 1e-14;                             // preimage pruning tolerance
    int threads = 0;                                // 0 = all hardware threads
};

// P^z(Z_n in [a,b]) by exact depth-first counting over the 2^n branch
// words, with subtrees cut when even the extreme all-plus / all-minus
// continuations cannot reach [a,b]. The cut changes nothing: the result
// equals full enumeration bit for bit. Always an integer multiple of 2^-n.
double exact_pn(double z, int n, const TargetInterval& target,
                const EnumerationOptions& opts = {});

// One preimage interval phi_w^{-1}([a,b]). Words are packed with b_1 at
// the most significant of the low `word_len` bits (same convention as
// word_from_index).
struct PreimageCell {
    std::uint64_t word_bits;
    std::uint32_t word_len;
    double lo;
    double hi;

    BranchWord word() const { return word_from_index(word_bits, static_cast<int>(word_len)); }
    double length() const { return hi - lo; }
};

struct PreimageEnumeration {
    int depth;
    TargetInterval target;
    double tol;
    std::vector<PreimageCell> cells;
    std::uint64_t pruned_words = 0;
    double pruned_mass_bound = 0.0;   // conservative: pruned length x leaves below
    double total_length = 0.0;        // compensated sum of retained cell lengths
    std::uint64_t nodes_visited = 0;
    std::uint64_t length_checks = 0;  // cells below 1e-10 cross-checked
    double max_length_discrepancy = 0.0;
    bool discrepancy_flagged = false;

    // b_n-style exponent of the retained mass, bits
    double exponent_bits() const;
};

// Materializes every surviving depth-n cell. A subtree is dropped once its
// interval is shorter than tol, adding length x 2^(levels below) to
// pruned_mass_bound. tol = 0 disables pruning entirely.
PreimageEnumeration preimage_cells(int n, const TargetInterval& target, double tol,
                                   const EnumerationOptions& opts = {});

struct SupTheta {
    double exponent_bits;       // (1/n) log2(max_count / 2^n)
    double argmax_z;            // midpoint of the first maximizing plateau
    std::uint64_t max_count;    // peak number of overlapping cells in the region
    std::uint64_t cells_in_region;
};

// sup of theta_n over the region: sweep line over the cell endpoints,
// opening events before closing events at ties so closed-interval overlap
// is counted correctly. Requires n >= 1.
SupTheta sup_theta(int n, const TargetInterval& target, const TargetInterval& region,
                   const EnumerationOptions& opts = {});

// Same sweep over an already materialized enumeration.
SupTheta sup_theta(const PreimageEnumeration& enumeration, const TargetInterval& region);

// b_n = (1/n) log2( 2^-n sum of cell lengths ) = (1/n) log2 E|phi^{-1}[a,b]|,
// streamed without materializing cells. Requires n >= 1.
double integral_bn(int n, const TargetInterval& target, const EnumerationOptions& opts = {});

// The one-step window split behind p_{n+1}^{a,b} = (p_n^{outer} + p_n^{inner})/2:
// outer = [1-sqrt(1-a), sqrt(b)], inner = [sqrt(a), 1-sqrt(1-b)].
// Throws numerical_error when sqrt(a) > 1-sqrt(1-b) (inner no longer an
// interval); the caller falls back to the two-piece union form.
struct SplitTargets {
    TargetInterval outer;
    TargetInterval inner;
};
SplitTargets recursion_split(const TargetInterval& target);

struct CurvePoint {
    int n;
    double exponent_bits;
};

struct EscapeCurve {
    enum class Kind { theta_at_z, a_n_sup, b_n_integral };
    Kind kind;
    std::vector<CurvePoint> points;
    int tail_lo = 0;  // extrapolation window, inclusive
    int tail_hi = 0;
    double tail_estimate = std::numeric_limits<double>::quiet_NaN();
};

EscapeCurve theta_curve(double z, int n_lo, int n_hi, const TargetInterval& target,
                        const EnumerationOptions& opts = {});
EscapeCurve an_curve(int n_lo, int n_hi, const TargetInterval& target,
                     const TargetInterval& region, const EnumerationOptions& opts = {});
EscapeCurve bn_curve(int n_lo, int n_hi, const TargetInterval& target,
                     const EnumerationOptions& opts = {});

struct RateBracket {
    double lower_bits = kEscapeLowerBoundBits;
    double upper_bits = kEscapeUpperBoundBits;
    double point_bits = std::numeric_limits<double>::quiet_NaN();
    double slope = 0.0;  // fitted c in exponent(n) = lambda + c/n
    int points_used = 0;
};

// Least-squares fit of exponent(n) = lambda + c/n over the curve's tail
// window. Needs at least 4 finite points there.
RateBracket extrapolate_rate(const EscapeCurve& curve);

}  // namespace becpol
