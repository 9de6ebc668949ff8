#pragma once

#include <cstdint>
#include <vector>

#include "becpol/process.hpp"

namespace becpol {

// All 2^n sub-channel Bhattacharyya parameters for a BEC(z) design.
// values[i] = apply_word(word_from_index(i, n), z); index 0 is the
// all-minus word.
struct SubchannelTable {
    int n;
    double z;
    std::vector<double> values;
};

struct DesignOptions {
    int max_depth = 24;
    int threads = 0;
};

SubchannelTable enumerate_subchannels(double z, int n, const DesignOptions& opts = {});

// Fraction of sub-channels still inside the escape window; agrees with
// exact_pn(z, n, target) bit for bit.
double unpolarized_fraction(const SubchannelTable& table, const TargetInterval& target);

enum class SelectionMode { rate, block_error };

struct CodeSelection {
    int n;
    SelectionMode mode;
    double parameter;                     // R in rate mode, epsilon in error mode
    std::vector<std::uint64_t> info_set;  // ascending indices
    double union_bound;                   // sum of Z_i over the information set

    std::vector<std::uint64_t> frozen_set() const;
};

// rate mode: the floor(R * 2^n) most reliable sub-channels, ties broken by
// lower index. error mode: greedily add the most reliable sub-channels
// while the union bound stays <= epsilon; empty when even the best channel
// exceeds it.
CodeSelection select_information_set(const SubchannelTable& table, SelectionMode mode,
                                     double parameter);

}  // namespace becpol
