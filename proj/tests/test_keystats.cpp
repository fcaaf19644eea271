#include "hillcrack/cipher.hpp"
#include "hillcrack/error.hpp"
#include "hillcrack/keystats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>

using namespace hillcrack;

namespace {

// Brute-force cycle detection on whole matrices, independent of keystats.
Period brute_matrix_period(const ByteMatrix& k1, const ByteVector& iv) {
    std::vector<ByteMatrix> seen{k1};
    for (;;) {
        const auto next = key_schedule_step(seen.back(), iv);
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == next) return {i, seen.size() - i};
        seen.push_back(next);
    }
}

} // namespace

TEST_CASE("column_period m = 1") {
    CHECK(column_period(ByteMatrix{{5}}, ByteVector{1}, 0) == Period{0, 1});
    CHECK(column_period(ByteMatrix{{1}}, ByteVector{3}, 0) == Period{0, 64});
    CHECK(column_period(ByteMatrix{{0}}, ByteVector{3}, 0) == Period{0, 1});
    // Multiplicative order of 3 mod 256 by direct search.
    int ord = 1;
    for (int x = 3; x != 1; x = x * 3 % 256) ++ord;
    CHECK(ord == 64);
    // 2 is nilpotent-ish under IV = 2: 2, 4, 8, ..., 128, 0, 0.
    CHECK(column_period(ByteMatrix{{2}}, ByteVector{2}, 0) == Period{7, 1});
}

TEST_CASE("matrix_period agrees with brute force") {
    std::mt19937_64 rng(40);
    for (int t = 0; t < 40; ++t) {
        const std::size_t m = 1 + t % 3;
        const auto k1 = oracle::random_matrix(rng, m);
        const auto iv = oracle::random_vector(rng, m, t % 2 == 0);
        const auto p = matrix_period(k1, iv);
        REQUIRE(p);
        REQUIRE(*p == brute_matrix_period(k1, iv));
        // Matrix period is the lcm of column periods.
        std::size_t lcm = 1, mu = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const auto c = column_period(k1, iv, j);
            REQUIRE(c);
            lcm = std::lcm(lcm, c->period);
            mu = std::max(mu, c->preperiod);
        }
        CHECK(p->period == lcm);
        CHECK(p->preperiod == mu);
    }
}

TEST_CASE("column period repeats the column") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 20; ++t) {
        const auto k1 = oracle::random_matrix(rng, 3);
        const auto iv = oracle::random_vector(rng, 3, true);
        for (std::size_t j = 0; j < 3; ++j) {
            const auto p = column_period(k1, iv, j);
            REQUIRE(p);
            const auto ks = key_matrices(SecretKey(k1, iv), p->preperiod + 2 * p->period + 1);
            const std::size_t a = p->preperiod, b = p->preperiod + p->period;
            REQUIRE(ks[a].column(j) == ks[b].column(j));
            if (p->period > 1) REQUIRE(ks[a].column(j) != ks[a + 1].column(j));
        }
    }
}

TEST_CASE("column_period range and overflow") {
    CHECK_THROWS_AS(column_period(ByteMatrix(2), ByteVector{1, 1}, 2), OutOfRange);
    CHECK_THROWS_AS(column_period(ByteMatrix(2), ByteVector{1}, 0), DimensionMismatch);
    CHECK_FALSE(column_period(ByteMatrix{{1}}, ByteVector{3}, 0, 10));
}

TEST_CASE("census_matrix is a pure function of seed and trial") {
    CHECK(census_matrix(3, 7, 5, false) == census_matrix(3, 7, 5, false));
    CHECK(census_matrix(3, 7, 5, false) != census_matrix(3, 7, 6, false));
    CHECK(census_matrix(3, 7, 5, false) != census_matrix(3, 8, 5, false));
    for (std::uint64_t t = 0; t < 50; ++t) CHECK(is_invertible(census_matrix(3, 1, t, true)));
}

TEST_CASE("period_census is deterministic across thread counts") {
    CensusOptions opt;
    opt.trials = 300;
    opt.seed = 9;
    opt.threads = 1;
    const ByteVector iv{91, 63, 45};
    const auto one = period_census(iv, opt);
    opt.threads = 4;
    const auto four = period_census(iv, opt);
    CHECK(one.histogram == four.histogram);
    CHECK(one.preperiod_histogram == four.preperiod_histogram);

    std::size_t total = one.overflows;
    for (const auto& [p, n] : one.histogram) total += n;
    CHECK(total == 300);

    // Recount by hand from census_matrix.
    std::map<std::size_t, std::size_t> ref;
    for (std::uint64_t t = 0; t < 300; ++t) ++ref[column_period(census_matrix(3, 9, t, false), iv, 0)->period];
    CHECK(ref == one.histogram);
}

TEST_CASE("period_census trivial IV") {
    CensusOptions opt;
    opt.trials = 100;
    const auto c = period_census(ByteVector{1}, opt);
    CHECK(c.count(1) == 100);
    CHECK(c.fraction(1) == 1.0);
    CHECK(c.fraction(2) == 0.0);
}

TEST_CASE("census_csv") {
    PeriodCensus c;
    c.trials = 5;
    c.histogram = {{8, 2}, {16, 3}};
    CHECK(census_csv(c) == "period,count\n8,2\n16,3\n");
}

TEST_CASE("reference rows") {
    const auto& rows = reference_rows();
    for (const auto& r : rows) {
        std::size_t sum = 0;
        for (auto n : r.counts) sum += n;
        CHECK(sum == kReferenceTrials);
        for (int v : r.iv) CHECK(v % 2 == 1);
    }
}
