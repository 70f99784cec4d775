#pragma once
#ifndef GROWTH_DETAIL_TEXT_HPP
#define GROWTH_DETAIL_TEXT_HPP

#include <charconv>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace growth::detail {

inline std::string_view trim(std::string_view s)
{
    constexpr std::string_view ws = " \t\r\n\xEF\xBB\xBF";
    auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return std::to_string(v);
    return std::string(buf, ptr);
}

/// Fixed-precision rendering for human-facing tables.
inline std::string format_fixed(double v, int significant = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", significant, v);
    return buf;
}

// "# key: value" metadata lines preceding a table header.
using Metadata = std::map<std::string, std::string, std::less<>>;

inline bool parse_metadata_line(std::string_view line, Metadata& meta)
{
    line = trim(line);
    if (line.empty() || line.front() != '#')
        return false;
    line.remove_prefix(1);
    auto colon = line.find(':');
    if (colon != std::string_view::npos) {
        auto key = trim(line.substr(0, colon));
        auto value = trim(line.substr(colon + 1));
        if (!key.empty())
            meta.insert_or_assign(std::string(key), std::string(value));
    }
    return true;
}

}  // namespace growth::detail

#endif  // GROWTH_DETAIL_TEXT_HPP
