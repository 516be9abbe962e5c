#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace mgcpp {

// LOBSTER price units: dollars x 10000.
using PriceUnits = std::int64_t;
inline constexpr double kPriceScale = 10000.0;

// Mid-prices are held as ask + bid (twice the mid) so they stay integral.
// One unit of this scale is 1/20000 dollar; delta = 0.005 is 100 units.
inline constexpr double kMidTwiceScale = 2.0 * kPriceScale;

inline constexpr PriceUnits kLobsterEmptyAsk = 9999999999;

struct Quote {
    double time = 0.0;  // seconds after midnight
    PriceUnits ask_price = 0;
    std::int64_t ask_size = 0;
    PriceUnits bid_price = 0;
    std::int64_t bid_size = 0;
};

struct ParseOptions {
    // LOBSTER marks an empty side with dummy prices (+-9999999999). Rejected unless set.
    bool skip_empty_levels = false;
};

struct SessionBounds {
    double start = 34200.0;
    double end = 57600.0;

    double length() const { return end - start; }
};

/// Reads a LOBSTER level-1 pair. The orderbook stream supplies
/// (ask_price, ask_size, bid_price, bid_size) in its first four columns; the
/// message stream supplies the time from its first column, row-aligned.
std::vector<Quote> parse_orderbook_file(std::istream& message, std::istream& orderbook,
                                        const ParseOptions& options = {});

std::vector<Quote> read_lobster_pair(const std::filesystem::path& message,
                                     const std::filesystem::path& orderbook,
                                     const ParseOptions& options = {});

// Inverse of parse_orderbook_file for level-1 data. Message rows carry dummy
// type/order/size/direction fields.
void write_lobster_pair(std::ostream& message, std::ostream& orderbook, std::span<const Quote> quotes);

// Quotes with time inside [start, end].
std::vector<Quote> restrict_to_session(std::span<const Quote> quotes, const SessionBounds& session);

struct TickSeries {
    std::vector<double> times;
    std::vector<double> mid_prices;          // dollars
    std::vector<std::int64_t> mid_twice;     // ask + bid, price units

    std::size_t size() const { return times.size(); }
};

TickSeries mid_price_series(std::span<const Quote> quotes);

struct PriceChangeSeq {
    std::vector<double> times;
    std::vector<double> changes;             // dollars
    std::vector<std::int64_t> change_units;  // mid_twice units
    double initial_mid = 0.0;
    std::int64_t initial_mid_twice = 0;
    double start_time = 0.0;  // first tick time
    double end_time = 0.0;    // last tick time

    std::size_t size() const { return times.size(); }
};

// merge_simultaneous collapses changes sharing a timestamp into one net change
// (and drops bursts that net to zero).
PriceChangeSeq price_change_events(const TickSeries& ticks, bool merge_simultaneous = true);

// Builds one-tick-spread quotes around a mid path, for synthetic days.
std::vector<Quote> synthetic_quotes(std::span<const double> times, std::span<const std::int64_t> mid_twice,
                                    PriceUnits spread = 100);

}  // namespace mgcpp
