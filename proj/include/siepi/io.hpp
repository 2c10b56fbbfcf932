#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace siepi {

/// Shortest decimal that round-trips to the same double; '.' separator,
/// independent of the global locale.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace detail

/// Reads a single-column sample file: one number per line. A non-numeric
/// first line is treated as a header; if lines hold several comma separated
/// fields, the last field is used.
inline std::vector<double> read_samples(std::istream& is) {
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view field = line;
        if (auto comma = field.rfind(','); comma != std::string_view::npos) field = field.substr(comma + 1);
        double v = 0.0;
        if (detail::parse_double(field, v)) {
            out.push_back(v);
        } else if (lineno == 1 || field.find_first_not_of(" \t\r") == std::string_view::npos) {
            continue;
        } else {
            throw std::runtime_error("read_samples: line " + std::to_string(lineno) +
                                     " is not a number: '" + line + "'");
        }
    }
    return out;
}

inline void write_samples(std::ostream& os, std::string_view header, const std::vector<double>& xs) {
    os << header << '\n';
    for (double x : xs) os << format_double(x) << '\n';
}

}  // namespace siepi
