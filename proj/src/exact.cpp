#include "becpol/exact.hpp"

#include <algorithm>
#include <cmath>

#include "becpol/parallel.hpp"
#include "becpol/summation.hpp"

namespace becpol {

namespace {

// Fixed fan-out depth for parallel splits. Chunk boundaries depend only on
// n, never on the worker count, so every reduction below is reproducible.
constexpr int kChunkDepth = 10;

int chunk_depth(int n) { return std::min(n, kChunkDepth); }

double mass_exponent_bits(double total, int n) {
    if (n <= 0) return std::numeric_limits<double>::quiet_NaN();
    if (!(total > 0.0)) return -std::numeric_limits<double>::infinity();
    return (std::log2(total) - n) / n;
}

// ---------------------------------------------------------------------
// exact_pn: forward branch counting

struct ForwardCounter {
    double a, b;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    std::uint64_t hits = 0;

    void count(double x, int m) {
        if (++nodes > budget)
            throw budget_error("exact_pn: branch budget exceeded", nodes, budget);
        const ReachBounds r = reach_bounds(x, m);
        if (r.hi < a || r.lo > b) return;
        if (m == 0) {
            ++hits;
            return;
        }
        count(t_apply(Branch::minus, x), m - 1);
        count(t_apply(Branch::plus, x), m - 1);
    }
};

// ---------------------------------------------------------------------
// inverse walk shared by preimage_cells / integral_bn / sup_theta

struct WalkStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    std::uint64_t pruned_words = 0;
    NeumaierSum pruned_mass;
    NeumaierSum total_length;
    std::uint64_t length_checks = 0;
    double max_disc = 0.0;

    void merge(const WalkStats& o) {
        nodes += o.nodes;
        leaves += o.leaves;
        pruned_words += o.pruned_words;
        pruned_mass.merge(o.pruned_mass);
        total_length.merge(o.total_length);
        length_checks += o.length_checks;
        max_disc = std::max(max_disc, o.max_disc);
    }
};

// Depth-first walk over inverse words. A node at depth d holds the exact
// interval T^{-1}-composition of [a,b] along the suffix chosen so far;
// depth-n leaves are the preimage cells. `prod` tracks the product of
// inverse derivatives at the running interval midpoints, used to
// cross-check suspiciously short cells.
template <class LeafFn>
struct InverseWalker {
    double a, b;
    int n;
    double tol;
    std::uint64_t budget;
    LeafFn leaf;
    WalkStats stats;

    void take_leaf(std::uint64_t bits, double lo, double hi, double prod) {
        ++stats.leaves;
        const double len = hi - lo;
        stats.total_length.add(len);
        if (len < 1e-10) {
            ++stats.length_checks;
            const double cross = (b - a) * prod;
            const double denom = std::max(cross, len);
            if (denom > 0.0)
                stats.max_disc = std::max(stats.max_disc, std::abs(cross - len) / denom);
        }
        leaf(bits, lo, hi);
    }

    void prune(double lo, double hi, int depth) {
        const int left = n - depth;
        stats.pruned_words += std::uint64_t(1) << left;
        stats.pruned_mass.add(std::ldexp(hi - lo, left));
    }

    void walk(double lo, double hi, double prod, int depth, std::uint64_t bits) {
        if (++stats.nodes > budget)
            throw budget_error("preimage enumeration: branch budget exceeded", stats.nodes,
                               budget);
        if (tol > 0.0 && hi - lo < tol) {
            prune(lo, hi, depth);
            return;
        }
        if (depth == n) {
            take_leaf(bits, lo, hi, prod);
            return;
        }
        // level depth+1 picks b_j with j = n-depth; its bit lives at
        // position n-j = depth of the packed word
        const double mid = 0.5 * (lo + hi);
        walk(t_inverse(Branch::minus, lo), t_inverse(Branch::minus, hi),
             prod * t_inverse_derivative(Branch::minus, mid), depth + 1, bits);
        walk(t_inverse(Branch::plus, lo), t_inverse(Branch::plus, hi),
             prod * t_inverse_derivative(Branch::plus, mid), depth + 1,
             bits | (std::uint64_t(1) << depth));
    }
};

struct PrefixState {
    double lo, hi, prod;
    std::uint64_t bits;
    int depth;
    bool pruned;
    bool record;  // true on the single chunk that owns the pruned ancestor
};

// Walks the first dc levels along chunk c's bits (level k's choice is bit
// dc-k of c). If the path hits a pruned ancestor, only the chunk whose
// remaining suffix bits are all zero reports it, so the shared ancestor is
// recorded exactly once.
PrefixState descend_prefix(double a, double b, double tol, int dc, std::uint64_t c) {
    double lo = a, hi = b, prod = 1.0;
    std::uint64_t bits = 0;
    for (int k = 1; k <= dc; ++k) {
        if (tol > 0.0 && hi - lo < tol) {
            bool record = true;
            for (int j = k; j <= dc; ++j)
                if ((c >> (dc - j)) & 1u) {
                    record = false;
                    break;
                }
            return {lo, hi, prod, bits, k - 1, true, record};
        }
        const unsigned beta = (c >> (dc - k)) & 1u;
        const Branch br = beta ? Branch::plus : Branch::minus;
        const double mid = 0.5 * (lo + hi);
        prod *= t_inverse_derivative(br, mid);
        lo = t_inverse(br, lo);
        hi = t_inverse(br, hi);
        if (beta) bits |= std::uint64_t(1) << (k - 1);
    }
    return {lo, hi, prod, bits, dc, false, false};
}

void check_depth(int n) {
    if (n < 0 || n > 60) throw std::invalid_argument("depth n must be in [0, 60]");
}

// Runs the inverse walk chunked over 2^min(n,10) prefixes; make_leaf(c)
// builds the chunk-local leaf consumer. Returns merged stats.
template <class MakeLeaf>
WalkStats run_inverse_walk(int n, const TargetInterval& target, double tol,
                           const EnumerationOptions& opts, MakeLeaf&& make_leaf) {
    const int dc = chunk_depth(n);
    const std::uint64_t n_chunks = std::uint64_t(1) << dc;
    std::vector<WalkStats> stats(n_chunks);

    for_each_chunk(n_chunks, opts.threads, [&](std::uint64_t c) {
        const PrefixState p = descend_prefix(target.a, target.b, tol, dc, c);
        auto leaf = make_leaf(c);
        InverseWalker<decltype(leaf)> w{target.a, target.b, n, tol, opts.budget,
                                        std::move(leaf), {}};
        if (p.pruned) {
            if (p.record) {
                ++w.stats.nodes;
                w.stats.pruned_words += std::uint64_t(1) << (n - p.depth);
                w.stats.pruned_mass.add(std::ldexp(p.hi - p.lo, n - p.depth));
            }
        } else {
            w.walk(p.lo, p.hi, p.prod, p.depth, p.bits);
        }
        stats[c] = w.stats;
    });

    WalkStats merged;
    for (const auto& s : stats) merged.merge(s);
    if (merged.nodes > opts.budget)
        throw budget_error("preimage enumeration: branch budget exceeded", merged.nodes,
                           opts.budget);
    return merged;
}

struct SweepResult {
    std::uint64_t max_count = 0;
    double witness = std::numeric_limits<double>::quiet_NaN();
};

// Max closed-interval overlap: ascending event sweep with opens processed
// before closes at coincident positions.
SweepResult sweep_max_overlap(std::vector<double>& opens, std::vector<double>& closes) {
    std::sort(opens.begin(), opens.end());
    std::sort(closes.begin(), closes.end());
    SweepResult out;
    std::size_t i = 0, j = 0;
    std::uint64_t cur = 0;
    while (j < closes.size()) {
        if (i < opens.size() && opens[i] <= closes[j]) {
            const double p = opens[i];
            while (i < opens.size() && opens[i] == p) {
                ++i;
                ++cur;
            }
            if (cur > out.max_count) {
                out.max_count = cur;
                if (closes[j] == p) {
                    out.witness = p;  // a cell closes right here: point spike
                } else {
                    double q = (i < opens.size()) ? opens[i] : closes[j];
                    if (closes[j] < q) q = closes[j];
                    out.witness = 0.5 * (p + q);
                }
            }
        } else {
            --cur;
            ++j;
        }
    }
    return out;
}

SupTheta sup_from_events(std::vector<double>& opens, std::vector<double>& closes, int n) {
    const std::uint64_t cells = opens.size();
    const SweepResult s = sweep_max_overlap(opens, closes);
    double exponent = -std::numeric_limits<double>::infinity();
    if (s.max_count > 0)
        exponent = (std::log2(static_cast<double>(s.max_count)) - n) / n;
    return SupTheta{exponent, s.witness, s.max_count, cells};
}

}  // namespace

double exact_pn(double z, int n, const TargetInterval& target, const EnumerationOptions& opts) {
    check_depth(n);
    if (!(0.0 <= z && z <= 1.0)) throw std::invalid_argument("exact_pn: z must be in [0,1]");

    const int dc = chunk_depth(n);
    const std::uint64_t n_chunks = std::uint64_t(1) << dc;
    std::vector<std::uint64_t> hits(n_chunks, 0);
    std::vector<std::uint64_t> nodes(n_chunks, 0);

    for_each_chunk(n_chunks, opts.threads, [&](std::uint64_t c) {
        double x = z;
        for (int k = 0; k < dc; ++k)
            x = t_apply(static_cast<Branch>((c >> (dc - 1 - k)) & 1u), x);
        ForwardCounter counter{target.a, target.b, opts.budget};
        counter.count(x, n - dc);
        hits[c] = counter.hits;
        nodes[c] = counter.nodes;
    });

    std::uint64_t total_hits = 0, total_nodes = 0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        total_hits += hits[c];
        total_nodes += nodes[c];
    }
    if (total_nodes > opts.budget)
        throw budget_error("exact_pn: branch budget exceeded", total_nodes, opts.budget);
    return std::ldexp(static_cast<double>(total_hits), -n);
}

double PreimageEnumeration::exponent_bits() const {
    return mass_exponent_bits(total_length, depth);
}

PreimageEnumeration preimage_cells(int n, const TargetInterval& target, double tol,
                                   const EnumerationOptions& opts) {
    check_depth(n);
    if (tol < 0.0) throw std::invalid_argument("preimage_cells: tol must be >= 0");
    if ((std::uint64_t(1) << n) > opts.budget)
        throw budget_error("preimage_cells: 2^n cells exceed the budget",
                           std::uint64_t(1) << n, opts.budget);

    const int dc = chunk_depth(n);
    std::vector<std::vector<PreimageCell>> chunk_cells(std::uint64_t(1) << dc);
    const auto wlen = static_cast<std::uint32_t>(n);

    WalkStats stats = run_inverse_walk(n, target, tol, opts, [&](std::uint64_t c) {
        auto& sink = chunk_cells[c];
        return [&sink, wlen](std::uint64_t bits, double lo, double hi) {
            sink.push_back(PreimageCell{bits, wlen, lo, hi});
        };
    });

    PreimageEnumeration out{n, target, tol, {}};
    std::size_t total = 0;
    for (const auto& v : chunk_cells) total += v.size();
    out.cells.reserve(total);
    for (auto& v : chunk_cells) {
        out.cells.insert(out.cells.end(), v.begin(), v.end());
        v.clear();
        v.shrink_to_fit();
    }
    out.pruned_words = stats.pruned_words;
    out.pruned_mass_bound = stats.pruned_mass.value();
    out.total_length = stats.total_length.value();
    out.nodes_visited = stats.nodes;
    out.length_checks = stats.length_checks;
    out.max_length_discrepancy = stats.max_disc;
    out.discrepancy_flagged = stats.max_disc > 0.5;
    return out;
}

SupTheta sup_theta(int n, const TargetInterval& target, const TargetInterval& region,
                   const EnumerationOptions& opts) {
    check_depth(n);
    if (n < 1) throw std::invalid_argument("sup_theta: need n >= 1");
    if ((std::uint64_t(1) << n) > opts.budget)
        throw budget_error("sup_theta: 2^n cells exceed the budget", std::uint64_t(1) << n,
                           opts.budget);

    const int dc = chunk_depth(n);
    const std::uint64_t n_chunks = std::uint64_t(1) << dc;
    std::vector<std::vector<double>> chunk_opens(n_chunks), chunk_closes(n_chunks);
    const double rlo = region.a, rhi = region.b;

    run_inverse_walk(n, target, opts.tol, opts, [&](std::uint64_t c) {
        auto* opens = &chunk_opens[c];
        auto* closes = &chunk_closes[c];
        return [opens, closes, rlo, rhi](std::uint64_t, double lo, double hi) {
            if (hi < rlo || lo > rhi) return;
            opens->push_back(std::max(lo, rlo));
            closes->push_back(std::min(hi, rhi));
        };
    });

    std::vector<double> opens, closes;
    std::size_t total = 0;
    for (const auto& v : chunk_opens) total += v.size();
    opens.reserve(total);
    closes.reserve(total);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        opens.insert(opens.end(), chunk_opens[c].begin(), chunk_opens[c].end());
        closes.insert(closes.end(), chunk_closes[c].begin(), chunk_closes[c].end());
        chunk_opens[c].clear();
        chunk_opens[c].shrink_to_fit();
        chunk_closes[c].clear();
        chunk_closes[c].shrink_to_fit();
    }
    return sup_from_events(opens, closes, n);
}

SupTheta sup_theta(const PreimageEnumeration& enumeration, const TargetInterval& region) {
    if (enumeration.depth < 1) throw std::invalid_argument("sup_theta: need n >= 1");
    std::vector<double> opens, closes;
    opens.reserve(enumeration.cells.size());
    closes.reserve(enumeration.cells.size());
    for (const PreimageCell& cell : enumeration.cells) {
        if (cell.hi < region.a || cell.lo > region.b) continue;
        opens.push_back(std::max(cell.lo, region.a));
        closes.push_back(std::min(cell.hi, region.b));
    }
    return sup_from_events(opens, closes, enumeration.depth);
}

double integral_bn(int n, const TargetInterval& target, const EnumerationOptions& opts) {
    check_depth(n);
    if (n < 1) throw std::invalid_argument("integral_bn: need n >= 1");
    WalkStats stats = run_inverse_walk(n, target, opts.tol, opts, [](std::uint64_t) {
        return [](std::uint64_t, double, double) {};
    });
    return mass_exponent_bits(stats.total_length.value(), n);
}

SplitTargets recursion_split(const TargetInterval& target) {
    const double a1 = t_inverse(Branch::minus, target.a);
    const double b1 = t_inverse(Branch::minus, target.b);
    const double a2 = t_inverse(Branch::plus, target.a);
    const double b2 = t_inverse(Branch::plus, target.b);
    if (a2 > b1)
        throw numerical_error("recursion_split: sqrt(a) > 1-sqrt(1-b), inner piece is not an interval");
    return SplitTargets{TargetInterval(a1, b2), TargetInterval(a2, b1)};
}

namespace {

void check_curve_range(int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("curve: need 1 <= n_lo <= n_hi");
}

EscapeCurve make_curve(EscapeCurve::Kind kind, int n_lo, int n_hi) {
    EscapeCurve curve;
    curve.kind = kind;
    curve.tail_lo = std::max(16, n_lo);
    curve.tail_hi = n_hi;
    return curve;
}

}  // namespace

EscapeCurve theta_curve(double z, int n_lo, int n_hi, const TargetInterval& target,
                        const EnumerationOptions& opts) {
    check_curve_range(n_lo, n_hi);
    EscapeCurve curve = make_curve(EscapeCurve::Kind::theta_at_z, n_lo, n_hi);
    for (int n = n_lo; n <= n_hi; ++n) {
        const double p = exact_pn(z, n, target, opts);
        const double exponent =
            p > 0.0 ? std::log2(p) / n : -std::numeric_limits<double>::infinity();
        curve.points.push_back({n, exponent});
    }
    return curve;
}

EscapeCurve an_curve(int n_lo, int n_hi, const TargetInterval& target,
                     const TargetInterval& region, const EnumerationOptions& opts) {
    check_curve_range(n_lo, n_hi);
    EscapeCurve curve = make_curve(EscapeCurve::Kind::a_n_sup, n_lo, n_hi);
    for (int n = n_lo; n <= n_hi; ++n)
        curve.points.push_back({n, sup_theta(n, target, region, opts).exponent_bits});
    return curve;
}

EscapeCurve bn_curve(int n_lo, int n_hi, const TargetInterval& target,
                     const EnumerationOptions& opts) {
    check_curve_range(n_lo, n_hi);
    EscapeCurve curve = make_curve(EscapeCurve::Kind::b_n_integral, n_lo, n_hi);
    for (int n = n_lo; n <= n_hi; ++n)
        curve.points.push_back({n, integral_bn(n, target, opts)});
    return curve;
}

RateBracket extrapolate_rate(const EscapeCurve& curve) {
    std::vector<CurvePoint> tail;
    for (const CurvePoint& p : curve.points)
        if (p.n >= curve.tail_lo && p.n <= curve.tail_hi && std::isfinite(p.exponent_bits))
            tail.push_back(p);
    if (tail.size() < 4)
        throw numerical_error("extrapolate_rate: need at least 4 finite points in the tail window");

    // least squares for exponent(n) = lambda + c * (1/n)
    double mx = 0.0, my = 0.0;
    for (const CurvePoint& p : tail) {
        mx += 1.0 / p.n;
        my += p.exponent_bits;
    }
    mx /= static_cast<double>(tail.size());
    my /= static_cast<double>(tail.size());
    double sxx = 0.0, sxy = 0.0;
    for (const CurvePoint& p : tail) {
        const double dx = 1.0 / p.n - mx;
        sxx += dx * dx;
        sxy += dx * (p.exponent_bits - my);
    }
    if (!(sxx > 0.0))
        throw numerical_error("extrapolate_rate: tail window has no spread in n");

    RateBracket out;
    out.slope = sxy / sxx;
    out.point_bits = my - out.slope * mx;
    out.points_used = static_cast<int>(tail.size());
    return out;
}

}  // namespace becpol
