#pragma once

#include <charconv>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include "fpesusy/field.hpp"
#include "fpesusy/grid.hpp"

namespace fpesusy::io {

/// Shortest decimal that round-trips to the same double (never more than
/// 17 significant digits). Non-finite values print as nan / inf / -inf.
inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

/// Long-form CSV: header `x,t,value`, one row per node, t outermost.
inline void write_field_csv(std::ostream& os, const Field& f, const Grid& grid) {
    grid.validate();
    os << "x,t,value\n";
    for (std::size_t n = 0; n < grid.nt; ++n) {
        const double t = grid.t(n);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i);
            os << format_double(x) << ',' << format_double(t) << ','
               << format_double(f.value(x, t)) << '\n';
        }
    }
}

/// Wide CSV of a time sequence: header `x` then one column per time stamp.
inline void write_levels_csv(std::ostream& os, std::span<const GridFunction> levels) {
    if (levels.empty()) return;
    const Grid& g = levels.front().grid;
    os << 'x';
    for (const auto& l : levels) os << ',' << format_double(l.time);
    os << '\n';
    for (std::size_t i = 0; i < g.nx; ++i) {
        os << format_double(g.x(i));
        for (const auto& l : levels) os << ',' << format_double(l.values[i]);
        os << '\n';
    }
}

}  // namespace fpesusy::io
