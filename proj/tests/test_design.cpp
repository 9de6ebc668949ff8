#include <doctest.h>

#include <cmath>

#include "becpol/design.hpp"
#include "becpol/exact.hpp"
#include "becpol/rng.hpp"
#include "becpol/summation.hpp"

using namespace becpol;

namespace {
const TargetInterval kCanon = TargetInterval::canonical();
}

TEST_CASE("table layout and values") {
    const SubchannelTable t1 = enumerate_subchannels(0.5, 1);
    REQUIRE(t1.values.size() == 2);
    CHECK(t1.values[0] == 0.75);  // index 0 = word (0) = minus branch
    CHECK(t1.values[1] == 0.25);

    // values[i] is exactly apply_word(word(i), z)
    const SubchannelTable t = enumerate_subchannels(0.37, 10);
    BitSource bits(RngSpec{31, 0});
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t i = bits.next64() % t.values.size();
        CHECK(t.values[i] == apply_word(word_from_index(i, 10), 0.37));
    }

    CHECK_THROWS_AS(enumerate_subchannels(0.5, 30), budget_error);
}

TEST_CASE("martingale conservation of the table mean") {
    for (const double z : {0.1, 0.5, 0.9}) {
        const SubchannelTable t = enumerate_subchannels(z, 16);
        NeumaierSum sum;
        for (double v : t.values) sum.add(v);
        const double mean = sum.value() / static_cast<double>(t.values.size());
        CHECK(std::abs(mean - z) < 1e-12);
    }
}

TEST_CASE("unpolarized fraction equals exact_pn") {
    const SubchannelTable t0 = enumerate_subchannels(0.5, 0);
    CHECK(unpolarized_fraction(t0, kCanon) == 1.0);

    for (const double z : {0.3, 0.5, 0.8}) {
        for (int n = 1; n <= 16; n += 5) {
            const SubchannelTable t = enumerate_subchannels(z, n);
            CHECK(unpolarized_fraction(t, kCanon) == exact_pn(z, n, kCanon));
        }
    }

    // capacity split is exact: below + inside + above = 1
    const SubchannelTable t = enumerate_subchannels(0.5, 14);
    std::uint64_t below = 0, inside = 0, above = 0;
    for (double v : t.values) {
        if (v < kCanon.a)
            ++below;
        else if (v <= kCanon.b)
            ++inside;
        else
            ++above;
    }
    CHECK(below + inside + above == t.values.size());
    CHECK(std::ldexp(static_cast<double>(inside), -14) == unpolarized_fraction(t, kCanon));
}

TEST_CASE("fraction decays with depth at z=1/2") {
    double prev = 2.0;
    for (int n = 2; n <= 16; n += 2) {
        const double f = unpolarized_fraction(enumerate_subchannels(0.5, n), kCanon);
        CHECK(f <= prev);
        prev = f;
    }
    // polarization: the noiseless half emerges, and its distance to 1/2 is
    // covered by the still-undecided mass plus the almost-decided band
    const SubchannelTable t = enumerate_subchannels(0.5, 16);
    std::uint64_t good = 0, band = 0, window = 0;
    for (double v : t.values) {
        if (v < 1e-6) ++good;
        else if (v < kCanon.a) ++band;
        else if (v <= kCanon.b) ++window;
    }
    const double good_fraction = std::ldexp(static_cast<double>(good), -16);
    CHECK(good_fraction < 0.5);
    CHECK(good_fraction > 0.3);
    const double gap = 0.5 - good_fraction;
    const double cover = std::ldexp(static_cast<double>(band + window), -16);
    CHECK(gap <= cover + 1e-12);
}

TEST_CASE("rate-mode selection") {
    const SubchannelTable t1 = enumerate_subchannels(0.5, 1);
    const CodeSelection sel = select_information_set(t1, SelectionMode::rate, 0.5);
    REQUIRE(sel.info_set.size() == 1);
    CHECK(sel.info_set[0] == 1);
    CHECK(sel.frozen_set() == std::vector<std::uint64_t>{0});
    CHECK(sel.union_bound == 0.25);

    // R = 1 keeps every index
    const CodeSelection all = select_information_set(t1, SelectionMode::rate, 1.0);
    CHECK(all.info_set.size() == 2);

    // nested selections and growing union bound
    const SubchannelTable t = enumerate_subchannels(0.5, 10);
    const CodeSelection lo = select_information_set(t, SelectionMode::rate, 0.3);
    const CodeSelection hi = select_information_set(t, SelectionMode::rate, 0.5);
    CHECK(lo.union_bound < hi.union_bound);
    CHECK(std::includes(hi.info_set.begin(), hi.info_set.end(), lo.info_set.begin(),
                        lo.info_set.end()));
    CHECK(lo.info_set.size() == 307);  // floor(0.3 * 1024)
}

TEST_CASE("error-mode selection") {
    const SubchannelTable t2 = enumerate_subchannels(0.5, 2);
    // reliabilities: 0.0625 < 0.4375 < 0.5625 < 0.9375
    const CodeSelection sel = select_information_set(t2, SelectionMode::block_error, 0.5);
    CHECK(sel.info_set == std::vector<std::uint64_t>{2, 3});
    CHECK(sel.union_bound == 0.5);

    const CodeSelection none = select_information_set(t2, SelectionMode::block_error, 0.01);
    CHECK(none.info_set.empty());
    CHECK(none.union_bound == 0.0);

    const CodeSelection one = select_information_set(t2, SelectionMode::block_error, 0.1);
    CHECK(one.info_set == std::vector<std::uint64_t>{3});
}

TEST_CASE("selection is monotone in the rate") {
    const SubchannelTable t = enumerate_subchannels(0.37, 8);
    CodeSelection prev = select_information_set(t, SelectionMode::rate, 0.1);
    for (double r = 0.2; r < 1.0; r += 0.1) {
        const CodeSelection cur = select_information_set(t, SelectionMode::rate, r);
        CHECK(std::includes(cur.info_set.begin(), cur.info_set.end(), prev.info_set.begin(),
                            prev.info_set.end()));
        prev = cur;
    }
}
