#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sabroots/problem.hpp"

namespace sabroots::io {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Whole-string parse; nullopt on any trailing characters.
inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_int(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, and a `j` suffix).
inline std::optional<Complex> parse_complex(std::string_view s) {
    std::string t;
    for (char ch : s) {
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    }
    if (t.empty()) return std::nullopt;
    const char last = t.back();
    if (last != 'i' && last != 'j') {
        const auto re = parse_double(t);
        if (!re) return std::nullopt;
        return Complex{*re, 0.0};
    }
    t.pop_back();
    // Split at the last sign that is not an exponent sign and not leading.
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const auto imag_part = [](std::string_view im) -> std::optional<double> {
        if (im.empty() || im == "+") return 1.0;
        if (im == "-") return -1.0;
        return parse_double(im);
    };
    if (split == std::string::npos) {
        const auto im = imag_part(t);
        if (!im) return std::nullopt;
        return Complex{0.0, *im};
    }
    const auto re = parse_double(std::string_view(t).substr(0, split));
    const auto im = imag_part(std::string_view(t).substr(split));
    if (!re || !im) return std::nullopt;
    return Complex{*re, *im};
}

inline std::string format_complex(Complex z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string s = format_double(z.real());
    if (!(z.imag() < 0.0)) s += '+';
    return s + format_double(z.imag()) + 'i';
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace sabroots::io
