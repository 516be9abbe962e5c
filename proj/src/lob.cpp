#include "mgcpp/lob.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/log.hpp"

namespace mgcpp {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(begin));
            break;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t row, std::string_view what) {
    field = trim(field);
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::Parse,
                    fmt::format("row {}: non-numeric {} field '{}'", row, what, std::string(field)));
    }
    return value;
}

// Reads non-empty lines, stripping CR.
std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

std::vector<Quote> parse_orderbook_file(std::istream& message, std::istream& orderbook,
                                        const ParseOptions& options) {
    const auto message_lines = read_lines(message);
    const auto book_lines = read_lines(orderbook);
    if (message_lines.size() != book_lines.size()) {
        throw Error(ErrorKind::Alignment, fmt::format("message file has {} rows, orderbook file has {}",
                                                      message_lines.size(), book_lines.size()));
    }

    std::vector<Quote> quotes;
    quotes.reserve(book_lines.size());
    std::size_t book_columns = 0;
    double last_time = -1.0;
    for (std::size_t row = 0; row < book_lines.size(); ++row) {
        const auto fields = split_fields(book_lines[row]);
        if (fields.size() < 4 || (book_columns != 0 && fields.size() != book_columns)) {
            throw Error(ErrorKind::MalformedRow,
                        fmt::format("row {}: orderbook row has {} columns", row, fields.size()));
        }
        book_columns = fields.size();

        const auto message_fields = split_fields(message_lines[row]);
        Quote q;
        q.time = parse_number<double>(message_fields[0], row, "time");
        q.ask_price = parse_number<PriceUnits>(fields[0], row, "ask_price");
        q.ask_size = parse_number<std::int64_t>(fields[1], row, "ask_size");
        q.bid_price = parse_number<PriceUnits>(fields[2], row, "bid_price");
        q.bid_size = parse_number<std::int64_t>(fields[3], row, "bid_size");

        if (q.time < last_time) {
            throw Error(ErrorKind::MalformedRow,
                        fmt::format("row {}: time {} precedes previous row's {}", row, q.time, last_time));
        }
        last_time = q.time;

        const bool empty_side = q.bid_price <= 0 || q.ask_price >= kLobsterEmptyAsk;
        if (empty_side) {
            if (options.skip_empty_levels) {
                log_debug(fmt::format("row {}: skipping quote with an empty book side", row));
                continue;
            }
            throw Error(ErrorKind::MalformedRow,
                        fmt::format("row {}: non-positive bid or missing ask ({}, {})", row, q.ask_price,
                                    q.bid_price));
        }
        if (q.ask_price < q.bid_price) {
            throw Error(ErrorKind::CrossedBook,
                        fmt::format("row {}: ask {} below bid {}", row, q.ask_price, q.bid_price));
        }
        quotes.push_back(q);
    }
    return quotes;
}

std::vector<Quote> read_lobster_pair(const std::filesystem::path& message,
                                     const std::filesystem::path& orderbook,
                                     const ParseOptions& options) {
    std::ifstream message_in(message);
    if (!message_in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", message.string()));
    std::ifstream book_in(orderbook);
    if (!book_in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", orderbook.string()));
    return parse_orderbook_file(message_in, book_in, options);
}

void write_lobster_pair(std::ostream& message, std::ostream& orderbook, std::span<const Quote> quotes) {
    std::int64_t order_id = 1;
    for (const auto& q : quotes) {
        message << fmt::format("{:.9f},1,{},100,{},1\n", q.time, order_id++, q.bid_price);
        orderbook << fmt::format("{},{},{},{}\n", q.ask_price, q.ask_size, q.bid_price, q.bid_size);
    }
}

std::vector<Quote> restrict_to_session(std::span<const Quote> quotes, const SessionBounds& session) {
    if (!(session.end > session.start)) {
        throw Error(ErrorKind::Parameter, "session end must be after session start");
    }
    std::vector<Quote> out;
    for (const auto& q : quotes) {
        if (q.time >= session.start && q.time <= session.end) out.push_back(q);
    }
    return out;
}

TickSeries mid_price_series(std::span<const Quote> quotes) {
    if (quotes.empty()) throw Error(ErrorKind::InsufficientData, "no quotes");
    TickSeries ticks;
    ticks.times.reserve(quotes.size());
    ticks.mid_prices.reserve(quotes.size());
    ticks.mid_twice.reserve(quotes.size());
    double last_time = quotes.front().time;
    for (const auto& q : quotes) {
        if (q.time < last_time) throw Error(ErrorKind::Parameter, "quote times must be non-decreasing");
        last_time = q.time;
        const std::int64_t twice = q.ask_price + q.bid_price;
        ticks.times.push_back(q.time);
        ticks.mid_twice.push_back(twice);
        ticks.mid_prices.push_back(static_cast<double>(twice) / kMidTwiceScale);
    }
    return ticks;
}

PriceChangeSeq price_change_events(const TickSeries& ticks, bool merge_simultaneous) {
    if (ticks.size() == 0) throw Error(ErrorKind::InsufficientData, "empty tick series");
    PriceChangeSeq seq;
    seq.initial_mid_twice = ticks.mid_twice.front();
    seq.initial_mid = static_cast<double>(seq.initial_mid_twice) / kMidTwiceScale;
    seq.start_time = ticks.times.front();
    seq.end_time = ticks.times.back();

    auto emit = [&seq](double time, std::int64_t units) {
        seq.times.push_back(time);
        seq.change_units.push_back(units);
        seq.changes.push_back(static_cast<double>(units) / kMidTwiceScale);
    };

    std::int64_t previous = ticks.mid_twice.front();
    std::size_t i = 1;
    while (i < ticks.size()) {
        std::size_t last = i;
        if (merge_simultaneous) {
            while (last + 1 < ticks.size() && ticks.times[last + 1] == ticks.times[i]) ++last;
        }
        const std::int64_t current = ticks.mid_twice[last];
        if (current != previous) emit(ticks.times[i], current - previous);
        previous = current;
        i = last + 1;
    }
    return seq;
}

std::vector<Quote> synthetic_quotes(std::span<const double> times, std::span<const std::int64_t> mid_twice,
                                    PriceUnits spread) {
    if (times.size() != mid_twice.size()) {
        throw Error(ErrorKind::Parameter, "times and mid prices differ in length");
    }
    std::vector<Quote> quotes;
    quotes.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if ((mid_twice[i] + spread) % 2 != 0) {
            throw Error(ErrorKind::Parameter, "mid price and spread give a fractional quote");
        }
        Quote q;
        q.time = times[i];
        q.ask_price = (mid_twice[i] + spread) / 2;
        q.bid_price = (mid_twice[i] - spread) / 2;
        q.ask_size = 100;
        q.bid_size = 100;
        if (q.bid_price <= 0) throw Error(ErrorKind::Parameter, "synthetic bid price must be positive");
        quotes.push_back(q);
    }
    return quotes;
}

}  // namespace mgcpp
