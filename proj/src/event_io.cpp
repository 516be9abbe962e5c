#include "mgcpp/event_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "mgcpp/error.hpp"
#include "mgcpp/price_process.hpp"

namespace mgcpp {
namespace {

static_assert(std::endian::native == std::endian::little, "binary event format assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw Error(ErrorKind::Parse, "truncated binary stream");
    }
    return value;
}

void put_doubles(std::ostream& out, const std::vector<double>& values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& in, std::uint64_t n) {
    std::vector<double> values(n);
    if (n > 0 && !in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
        throw Error(ErrorKind::Parse, "truncated binary stream");
    }
    return values;
}

void put_header(std::ostream& out, const char (&magic)[4], const std::vector<std::vector<double>>& times,
                double horizon) {
    out.write(magic, 4);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(times.size()));
    std::uint64_t total = 0;
    for (const auto& t : times) total += t.size();
    put<std::uint64_t>(out, total);
    for (const auto& t : times) put<std::uint64_t>(out, t.size());
    put<double>(out, horizon);
}

struct Header {
    double horizon;
    std::vector<std::uint64_t> counts;
};

Header get_header(std::istream& in, const char (&magic)[4]) {
    char found[4];
    if (!in.read(found, 4) || std::memcmp(found, magic, 4) != 0) {
        throw Error(ErrorKind::Parse, fmt::format("bad magic; expected {}", std::string(magic, 4)));
    }
    const auto d = get<std::uint32_t>(in);
    const auto total = get<std::uint64_t>(in);
    Header header;
    std::uint64_t sum = 0;
    for (std::uint32_t i = 0; i < d; ++i) {
        header.counts.push_back(get<std::uint64_t>(in));
        sum += header.counts.back();
    }
    header.horizon = get<double>(in);
    if (sum != total) throw Error(ErrorKind::Parse, "per-dimension counts do not add up to the total");
    return header;
}

}  // namespace

void write_events_csv(std::ostream& out, const EventTimes& events) {
    out << "dimension,time\n";
    for (std::size_t i = 0; i < events.dimension(); ++i) {
        for (double t : events.times[i]) out << fmt::format("{},{}\n", i, t);
    }
}

EventTimes read_events_csv(std::istream& in, double horizon) {
    EventTimes events;
    events.horizon = horizon;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.rfind("dimension", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::MalformedRow, fmt::format("line {}: expected 2 columns", row));
        std::size_t dim = 0;
        double t = 0.0;
        try {
            dim = std::stoul(line.substr(0, comma));
            t = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, fmt::format("line {}: '{}'", row, line));
        }
        if (dim >= events.times.size()) events.times.resize(dim + 1);
        events.times[dim].push_back(t);
    }
    validate(events);
    return events;
}

void write_events_binary(std::ostream& out, const EventTimes& events) {
    put_header(out, kEventMagic, events.times, events.horizon);
    for (const auto& t : events.times) put_doubles(out, t);
}

EventTimes read_events_binary(std::istream& in) {
    const Header header = get_header(in, kEventMagic);
    EventTimes events;
    events.horizon = header.horizon;
    for (auto count : header.counts) events.times.push_back(get_doubles(in, count));
    validate(events);
    return events;
}

void write_prices_binary(std::ostream& out, const PricePath& path, double horizon) {
    put_header(out, kPriceMagic, path.times, horizon);
    put_doubles(out, path.initial);
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        put_doubles(out, path.times[i]);
        put_doubles(out, path.prices[i]);
    }
}

PricePath read_prices_binary(std::istream& in, double* horizon) {
    const Header header = get_header(in, kPriceMagic);
    if (horizon != nullptr) *horizon = header.horizon;
    PricePath path;
    path.initial = get_doubles(in, header.counts.size());
    for (auto count : header.counts) {
        path.times.push_back(get_doubles(in, count));
        path.prices.push_back(get_doubles(in, count));
    }
    return path;
}

}  // namespace mgcpp
