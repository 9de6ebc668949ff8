#include "becpol/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "becpol/parallel.hpp"
#include "becpol/summation.hpp"

namespace becpol {

namespace {

// index block [base, base+len) gets the sub-tree rooted at x; the minus
// branch fills the lower half
void fill_block(std::vector<double>& values, double x, std::size_t base, std::size_t len) {
    if (len == 1) {
        values[base] = x;
        return;
    }
    fill_block(values, t_apply(Branch::minus, x), base, len / 2);
    fill_block(values, t_apply(Branch::plus, x), base + len / 2, len / 2);
}

}  // namespace

SubchannelTable enumerate_subchannels(double z, int n, const DesignOptions& opts) {
    if (n < 0) throw std::invalid_argument("enumerate_subchannels: n must be >= 0");
    if (!(0.0 <= z && z <= 1.0))
        throw std::invalid_argument("enumerate_subchannels: z must be in [0,1]");
    if (n > opts.max_depth)
        throw budget_error("enumerate_subchannels: depth exceeds the configured cap",
                           static_cast<std::uint64_t>(n),
                           static_cast<std::uint64_t>(opts.max_depth));

    SubchannelTable table{n, z, std::vector<double>(std::size_t(1) << n)};
    const int dc = std::min(n, 6);
    const std::size_t n_chunks = std::size_t(1) << dc;
    const std::size_t block = table.values.size() >> dc;
    for_each_chunk(n_chunks, opts.threads, [&](std::uint64_t c) {
        double x = z;
        for (int k = 0; k < dc; ++k)
            x = t_apply(static_cast<Branch>((c >> (dc - 1 - k)) & 1u), x);
        fill_block(table.values, x, static_cast<std::size_t>(c) * block, block);
    });
    return table;
}

double unpolarized_fraction(const SubchannelTable& table, const TargetInterval& target) {
    std::uint64_t hits = 0;
    for (double v : table.values)
        if (target.contains(v)) ++hits;
    return std::ldexp(static_cast<double>(hits), -table.n);
}

std::vector<std::uint64_t> CodeSelection::frozen_set() const {
    std::vector<std::uint64_t> frozen;
    const std::uint64_t size = std::uint64_t(1) << n;
    frozen.reserve(static_cast<std::size_t>(size) - info_set.size());
    std::size_t k = 0;
    for (std::uint64_t i = 0; i < size; ++i) {
        if (k < info_set.size() && info_set[k] == i)
            ++k;
        else
            frozen.push_back(i);
    }
    return frozen;
}

CodeSelection select_information_set(const SubchannelTable& table, SelectionMode mode,
                                     double parameter) {
    const std::size_t size = table.values.size();
    if (mode == SelectionMode::rate) {
        if (!(parameter > 0.0 && parameter <= 1.0))
            throw std::invalid_argument("select_information_set: rate must be in (0,1]");
    } else if (!(parameter > 0.0 && parameter < 1.0)) {
        throw std::invalid_argument("select_information_set: block error must be in (0,1)");
    }

    std::vector<std::uint64_t> order(size);
    std::iota(order.begin(), order.end(), std::uint64_t(0));
    std::sort(order.begin(), order.end(), [&](std::uint64_t i, std::uint64_t j) {
        const double vi = table.values[static_cast<std::size_t>(i)];
        const double vj = table.values[static_cast<std::size_t>(j)];
        return vi != vj ? vi < vj : i < j;
    });

    CodeSelection sel{table.n, mode, parameter, {}, 0.0};
    NeumaierSum bound;
    if (mode == SelectionMode::rate) {
        const auto k = static_cast<std::size_t>(
            std::floor(parameter * static_cast<double>(size)));
        sel.info_set.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(sel.info_set.begin(), sel.info_set.end());
        for (std::uint64_t i : sel.info_set) bound.add(table.values[static_cast<std::size_t>(i)]);
    } else {
        for (std::uint64_t i : order) {
            NeumaierSum trial = bound;
            trial.add(table.values[static_cast<std::size_t>(i)]);
            if (trial.value() > parameter) break;
            bound = trial;
            sel.info_set.push_back(i);
        }
        std::sort(sel.info_set.begin(), sel.info_set.end());
    }
    sel.union_bound = bound.value();
    return sel;
}

}  // namespace becpol
