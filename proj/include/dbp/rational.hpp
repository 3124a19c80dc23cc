#pragma once

#include <boost/rational.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbp {

using Time = std::int64_t;
using Rational = boost::rational<std::int64_t>;

// A size or load expressed as an integer multiple of 1/scale, where scale is a
// common denominator chosen per instance. Capacity of a machine is `scale`.
using Load = std::int64_t;

inline constexpr std::int64_t kMaxScale = std::int64_t{1} << 40;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    return -floor_div(-a, b);
}

inline std::int64_t ceil(const Rational& r) {
    return ceil_div(r.numerator(), r.denominator());
}

inline std::int64_t floor(const Rational& r) {
    return floor_div(r.numerator(), r.denominator());
}

inline Rational positive_part(const Rational& r) {
    return r > 0 ? r : Rational(0);
}

inline std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
    std::int64_t l = std::lcm(a, b);
    if (l <= 0 || l > kMaxScale) throw std::overflow_error("common size denominator too large");
    return l;
}

// Accepts "p/q", integers and plain decimals ("0.25").
inline Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) -> std::int64_t {
        if (s.empty()) throw std::invalid_argument("empty number");
        std::size_t i = 0;
        bool neg = false;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("malformed number");
        std::int64_t v = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw std::invalid_argument("malformed number");
            if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) throw std::overflow_error("number too large");
            v = v * 10 + (s[i] - '0');
        }
        return neg ? -v : v;
    };

    text = trim(text);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = parse_int(trim(text.substr(0, slash)));
        std::int64_t den = parse_int(trim(text.substr(slash + 1)));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view frac = text.substr(dot + 1);
        if (frac.size() > 12) throw std::invalid_argument("too many decimal digits");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::string_view whole = text.substr(0, dot);
        bool neg = !whole.empty() && whole[0] == '-';
        std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
        std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        if (f < 0) throw std::invalid_argument("malformed number");
        std::int64_t magnitude = (w < 0 ? -w : w) * den + f;
        return Rational(neg ? -magnitude : magnitude, den);
    }
    return Rational(parse_int(text));
}

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace dbp
