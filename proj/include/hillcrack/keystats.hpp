#ifndef HILLCRACK_KEYSTATS_HPP
#define HILLCRACK_KEYSTATS_HPP

// Period analysis of the key stream.
//
// Every column of K_l follows its own orbit under the same linear map, so the
// period of {K_l[:, j]} only depends on column j of K1 and on IV.

#include "hillcrack/modmat.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hillcrack {

struct Period {
    /// Number of leading states outside the cycle (mu).
    std::size_t preperiod = 0;
    /// Cycle length (lambda >= 1).
    std::size_t period = 0;

    friend bool operator==(const Period&, const Period&) = default;
};

inline constexpr std::size_t kDefaultMaxSteps = 65536;

/// Preperiod and period of the sequence of column j (0-based) of K_1, K_2, ...
/// nullopt when no state repeats within max_steps schedule steps.
std::optional<Period> column_period(const ByteMatrix& k1, const ByteVector& iv, std::size_t column,
                                    std::size_t max_steps = kDefaultMaxSteps);

/// Same for the whole matrix sequence.
std::optional<Period> matrix_period(const ByteMatrix& k1, const ByteVector& iv,
                                    std::size_t max_steps = kDefaultMaxSteps);

struct PeriodCensus {
    ByteVector iv;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool invertible_only = false;
    std::map<std::size_t, std::size_t> histogram;
    std::map<std::size_t, std::size_t> preperiod_histogram;
    /// Trials with no repeat inside max_steps; not part of `histogram`.
    std::size_t overflows = 0;

    std::size_t count(std::size_t period) const;
    double fraction(std::size_t period) const;
};

struct CensusOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    bool invertible_only = false;
    std::size_t max_steps = kDefaultMaxSteps;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Random K1 for trial `trial` of a census seeded with `seed`. The stream
/// depends only on (seed, trial), so trials can run in any order.
ByteMatrix census_matrix(std::size_t m, std::uint64_t seed, std::uint64_t trial, bool invertible_only);

/// Histogram of column-1 periods over randomly drawn K1 with a fixed IV.
PeriodCensus period_census(const ByteVector& iv, const CensusOptions& options);

/// "period,count" CSV with a header row.
std::string census_csv(const PeriodCensus& census);

/// One published row of reference period counts for 10000 trials with m = 3.
struct ReferenceRow {
    std::array<int, 3> iv;
    /// Counts for periods 8, 16, 32, 64, 128, 256, 512.
    std::array<std::size_t, 7> counts;
};

inline constexpr std::array<std::size_t, 7> kReferencePeriods{8, 16, 32, 64, 128, 256, 512};
inline constexpr std::size_t kReferenceTrials = 10000;

const std::array<ReferenceRow, 5>& reference_rows();

} // namespace hillcrack

#endif
