#pragma once

#include "dbp/load_vector.hpp"
#include "dbp/schedule.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dbp::harness {

struct ParseError : std::runtime_error {
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct Trace {
    Instance instance;
    std::unordered_map<IntervalId, long double> predicted_lengths;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::int64_t parse_integer(std::string_view s) {
    Rational r = parse_rational(s);
    if (s.find('/') != std::string_view::npos || s.find('.') != std::string_view::npos || r.denominator() != 1)
        throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
    return r.numerator();
}

// Calls fn(line_number, fields) for every non-blank line after stripping
// '#' comments.
template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        fn(line_no, split(line, ','));
    }
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace detail

/// Reads records `id, arrival, departure, size[, predicted_length]`. Sizes
/// may be `p/q` or decimals; times must be integers.
inline Trace parse_trace(std::istream& in, const std::string& source = "<trace>") {
    std::vector<Interval> intervals;
    std::unordered_map<IntervalId, long double> predicted;
    std::unordered_map<IntervalId, std::size_t> first_line;
    detail::for_each_record(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 4 && f.size() != 5)
            throw ParseError(source, line, "expected 4 or 5 fields, got " + std::to_string(f.size()));
        Interval iv;
        try {
            iv.id = detail::parse_integer(f[0]);
            iv.start = detail::parse_integer(f[1]);
            iv.end = detail::parse_integer(f[2]);
            iv.size = parse_rational(f[3]);
        } catch (const std::exception& e) {
            throw ParseError(source, line, e.what());
        }
        if (iv.end <= iv.start) throw ParseError(source, line, "departure must be after arrival");
        if (iv.size <= 0 || iv.size > 1) throw ParseError(source, line, "size " + to_string(iv.size) + " not in (0,1]");
        if (auto [it, fresh] = first_line.emplace(iv.id, line); !fresh)
            throw ParseError(source, line,
                             "duplicate id " + std::to_string(iv.id) + " (first seen on line " +
                                 std::to_string(it->second) + ")");
        if (f.size() == 5) {
            long double p;
            try {
                p = static_cast<long double>(to_double(parse_rational(f[4])));
            } catch (const std::exception& e) {
                throw ParseError(source, line, e.what());
            }
            if (!(p > 0)) throw ParseError(source, line, "predicted length must be positive");
            predicted[iv.id] = p;
        }
        intervals.push_back(iv);
    });
    return {Instance(std::move(intervals)), std::move(predicted)};
}

inline Trace read_trace(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_trace(in, path);
}

inline void write_trace(std::ostream& out, const Instance& inst,
                        const std::unordered_map<IntervalId, long double>* predicted = nullptr) {
    out << "# id,arrival,departure,size";
    if (predicted) out << ",predicted_length";
    out << "\n";
    for (const Interval& iv : inst) {
        out << iv.id << ',' << iv.start << ',' << iv.end << ',' << iv.size.numerator() << '/'
            << iv.size.denominator();
        if (predicted) {
            auto it = predicted->find(iv.id);
            if (it != predicted->end()) {
                std::ostringstream p;
                p.precision(17);
                p << static_cast<double>(it->second);
                out << ',' << p.str();
            }
        }
        out << '\n';
    }
}

/// Per-step load records `t, load`; steps not listed have load 0.
inline LoadVector parse_load_sidecar(std::istream& in, const std::string& source = "<loads>") {
    std::map<Time, Rational> values;
    detail::for_each_record(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 2) throw ParseError(source, line, "expected 't,load'");
        try {
            Time t = detail::parse_integer(f[0]);
            Rational v = parse_rational(f[1]);
            if (v < 0) throw std::invalid_argument("negative load");
            if (!values.emplace(t, v).second) throw std::invalid_argument("step listed twice");
        } catch (const std::exception& e) {
            throw ParseError(source, line, e.what());
        }
    });
    if (values.empty()) return LoadVector(0, 1, {}, LoadMode::Raw);
    Load scale = 1;
    for (const auto& [t, v] : values) scale = checked_lcm(scale, v.denominator());
    Time origin = values.begin()->first;
    std::vector<Load> scaled(static_cast<std::size_t>(values.rbegin()->first - origin + 1), 0);
    for (const auto& [t, v] : values) scaled[static_cast<std::size_t>(t - origin)] = v.numerator() * (scale / v.denominator());
    return LoadVector(origin, scale, std::move(scaled), LoadMode::Raw);
}

inline void write_load_sidecar(std::ostream& out, const LoadVector& v) {
    out << "# t,load\n";
    for (Time t = v.origin(); t < v.end(); ++t) out << t << ',' << to_string(v.at(t)) << '\n';
}

/// Records `interval_id, machine_id`.
inline Schedule parse_schedule(std::istream& in, const Instance& inst, const std::string& source = "<schedule>") {
    std::vector<std::pair<IntervalId, MachineId>> pairs;
    detail::for_each_record(in, [&](std::size_t line, const std::vector<std::string_view>& f) {
        if (f.size() != 2) throw ParseError(source, line, "expected 'interval_id,machine_id'");
        try {
            pairs.emplace_back(detail::parse_integer(f[0]), detail::parse_integer(f[1]));
        } catch (const std::exception& e) {
            throw ParseError(source, line, e.what());
        }
    });
    return schedule_from_assignment(inst, pairs);
}

inline void write_schedule(std::ostream& out, const Schedule& s) {
    out << "# interval_id,machine_id\n";
    for (const Machine& m : s.machines())
        for (IntervalId id : m.intervals) out << id << ',' << m.id << '\n';
}

}  // namespace dbp::harness
