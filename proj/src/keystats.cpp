#include "hillcrack/keystats.hpp"

#include "hillcrack/cipher.hpp"
#include "hillcrack/error.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace hillcrack {

namespace {

std::string state_key(std::span<const std::uint8_t> s) { return {s.begin(), s.end()}; }

// First repeat of a sequence of states produced by `step`, recording the
// index at which each state first appeared.
template <typename Step>
std::optional<Period> find_cycle(std::vector<std::uint8_t> state, Step step, std::size_t max_steps) {
    std::unordered_map<std::string, std::size_t> first_seen;
    first_seen.emplace(state_key(state), 0);
    for (std::size_t l = 1; l <= max_steps; ++l) {
        step(state);
        auto [it, inserted] = first_seen.emplace(state_key(state), l);
        if (!inserted) return Period{it->second, l - it->second};
    }
    return std::nullopt;
}

} // namespace

std::optional<Period> column_period(const ByteMatrix& k1, const ByteVector& iv, std::size_t column,
                                    std::size_t max_steps) {
    if (iv.size() != k1.side()) throw DimensionMismatch("column_period: IV length differs from m");
    if (column >= k1.side()) throw OutOfRange("column_period: column index out of range");
    if (max_steps < 1) throw OutOfRange("column_period: max_steps must be positive");
    const ByteVector col = k1.column(column);
    return find_cycle(
        std::vector<std::uint8_t>(col.bytes().begin(), col.bytes().end()),
        [&](std::vector<std::uint8_t>& s) { column_schedule_step(s, iv); }, max_steps);
}

std::optional<Period> matrix_period(const ByteMatrix& k1, const ByteVector& iv, std::size_t max_steps) {
    if (iv.size() != k1.side()) throw DimensionMismatch("matrix_period: IV length differs from m");
    if (max_steps < 1) throw OutOfRange("matrix_period: max_steps must be positive");
    const std::size_t m = k1.side();
    return find_cycle(
        std::vector<std::uint8_t>(k1.entries().begin(), k1.entries().end()),
        [&](std::vector<std::uint8_t>& s) {
            const ByteMatrix next = key_schedule_step(ByteMatrix(m, s), iv);
            s.assign(next.entries().begin(), next.entries().end());
        },
        max_steps);
}

std::size_t PeriodCensus::count(std::size_t period) const {
    const auto it = histogram.find(period);
    return it == histogram.end() ? 0 : it->second;
}

double PeriodCensus::fraction(std::size_t period) const {
    return trials ? double(count(period)) / double(trials) : 0.0;
}

ByteMatrix census_matrix(std::size_t m, std::uint64_t seed, std::uint64_t trial, bool invertible_only) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(trial),
                      std::uint32_t(trial >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<std::uint8_t> entries(m * m);
    for (;;) {
        for (std::size_t k = 0; k < entries.size(); k += 8) {
            std::uint64_t word = rng();
            for (std::size_t b = 0; b < 8 && k + b < entries.size(); ++b, word >>= 8)
                entries[k + b] = static_cast<std::uint8_t>(word);
        }
        ByteMatrix k1(m, entries);
        if (!invertible_only || is_invertible(k1)) return k1;
    }
}

PeriodCensus period_census(const ByteVector& iv, const CensusOptions& options) {
    if (options.trials < 1) throw OutOfRange("period_census: trials must be positive");
    const std::size_t m = iv.size();

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.trials));

    struct Partial {
        std::map<std::size_t, std::size_t> periods, preperiods;
        std::size_t overflows = 0;
    };
    std::vector<Partial> partials(threads);
    auto worker = [&](unsigned t) {
        Partial& out = partials[t];
        for (std::size_t trial = t; trial < options.trials; trial += threads) {
            const ByteMatrix k1 = census_matrix(m, options.seed, trial, options.invertible_only);
            const auto p = column_period(k1, iv, 0, options.max_steps);
            if (!p) {
                ++out.overflows;
                continue;
            }
            ++out.periods[p->period];
            ++out.preperiods[p->preperiod];
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
        worker(0);
    }

    PeriodCensus census{iv, options.trials, options.seed, options.invertible_only, {}, {}, 0};
    for (const Partial& p : partials) {
        for (auto [k, v] : p.periods) census.histogram[k] += v;
        for (auto [k, v] : p.preperiods) census.preperiod_histogram[k] += v;
        census.overflows += p.overflows;
    }
    return census;
}

std::string census_csv(const PeriodCensus& census) {
    std::ostringstream os;
    os << "period,count\n";
    for (auto [period, count] : census.histogram) os << period << ',' << count << '\n';
    return os.str();
}

const std::array<ReferenceRow, 5>& reference_rows() {
    static const std::array<ReferenceRow, 5> rows{{
        {{91, 63, 45}, {0, 0, 0, 0, 0, 1463, 8537}},
        {{113, 25, 219}, {14, 34, 127, 561, 3561, 5703, 0}},
        {{253, 115, 17}, {6, 20, 72, 284, 1081, 8537, 0}},
        {{1, 3, 5}, {0, 0, 98, 284, 1081, 8537, 0}},
        {{5, 121, 247}, {7, 36, 132, 561, 3561, 5703, 0}},
    }};
    return rows;
}

} // namespace hillcrack
