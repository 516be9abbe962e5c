#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mgcpp/point_process.hpp"

namespace mgcpp {

// CSV: header "dimension,time", then one row per event, dimension-major.
void write_events_csv(std::ostream& out, const EventTimes& events);
// The horizon is not stored in CSV; pass it explicitly.
EventTimes read_events_csv(std::istream& in, double horizon);

/// Binary event stream, little-endian throughout.
///
///   offset 0   char[4]  magic "MGEV"
///   offset 4   u32      dimension d
///   offset 8   u64      total event count
///   offset 16  u64[d]   per-dimension counts
///   then       f64      horizon
///   then       f64[count_i] times, for i = 0..d-1
///
/// Price files use magic "MGPX" and append, after the header and counts,
/// f64[d] initial prices, then for each dimension its times followed by its
/// prices after each event.
inline constexpr char kEventMagic[4] = {'M', 'G', 'E', 'V'};
inline constexpr char kPriceMagic[4] = {'M', 'G', 'P', 'X'};

void write_events_binary(std::ostream& out, const EventTimes& events);
EventTimes read_events_binary(std::istream& in);

struct PricePath;
void write_prices_binary(std::ostream& out, const PricePath& path, double horizon);
PricePath read_prices_binary(std::istream& in, double* horizon = nullptr);

}  // namespace mgcpp
