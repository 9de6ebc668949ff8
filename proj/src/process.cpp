#include "becpol/process.hpp"

#include <algorithm>
#include <limits>

namespace becpol {

namespace {

SetSample orbit_set(double z, int n, std::uint64_t budget, bool backward) {
    if (n < 0) throw std::invalid_argument("orbit set: depth must be >= 0");
    const std::uint64_t need = (n >= 63) ? ~std::uint64_t(0) : (std::uint64_t(1) << (n + 1));
    if (need > budget)
        throw budget_error("orbit set: 2^(n+1) values exceed the budget", need, budget);

    std::vector<double> values;
    values.reserve(need);
    values.push_back(z);
    std::size_t level_begin = 0;
    for (int k = 0; k < n; ++k) {
        const std::size_t level_end = values.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            const double v = values[i];
            if (backward) {
                values.push_back(t_inverse(Branch::minus, v));
                values.push_back(t_inverse(Branch::plus, v));
            } else {
                values.push_back(t_apply(Branch::minus, v));
                values.push_back(t_apply(Branch::plus, v));
            }
        }
        level_begin = level_end;
    }

    std::sort(values.begin(), values.end());
    // merge values within 4 ulp: distinct words can land on the same point
    // up to rounding
    std::vector<double> dedup;
    dedup.reserve(values.size());
    for (double v : values) {
        if (!dedup.empty()) {
            const double last = dedup.back();
            const double ulp = std::nextafter(last, std::numeric_limits<double>::infinity()) - last;
            if (v - last <= 4.0 * ulp) continue;
        }
        dedup.push_back(v);
    }
    return SetSample{z, n, std::move(dedup)};
}

}  // namespace

SetSample forward_set(double z, int n, std::uint64_t budget) {
    return orbit_set(z, n, budget, false);
}

SetSample backward_set(double z, int n, std::uint64_t budget) {
    return orbit_set(z, n, budget, true);
}

BranchWord word_from_index(std::uint64_t index, int n) {
    if (n < 0 || n > 63) throw std::invalid_argument("word_from_index: need 0 <= n <= 63");
    BranchWord w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = static_cast<Branch>((index >> (n - 1 - i)) & 1u);
    return w;
}

std::uint64_t index_of_word(const BranchWord& word) {
    std::uint64_t idx = 0;
    for (Branch b : word) idx = (idx << 1) | static_cast<std::uint64_t>(b);
    return idx;
}

}  // namespace becpol
