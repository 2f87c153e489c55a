#pragma once

// Sweep CSV format.
//
//   * optional leading provenance lines, each starting with "# "
//   * one header row, exactly kCsvColumns joined by commas
//   * one row per record; reals printed with 17 significant digits, so
//     parsing reproduces every double exactly (NaN prints as "nan")

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "harness.hpp"

namespace levy3d {

inline constexpr std::array<std::string_view, 21> kCsvColumns = {
    "scenario",    "mu",         "n",         "shape",     "p1",           "p2",       "d",
    "delta_B",     "delta_P",    "elong",     "V",         "trials",       "truncated_frac",
    "mean_time",   "sem_time",   "mean_steps", "sem_steps", "universal_lb", "cauchy_ub", "regime_lb",
    "overhead"};

inline std::string csv_header() {
    std::string h;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (i) h += ',';
        h += kCsvColumns[i];
    }
    return h;
}

inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRecord>& records,
                      const std::vector<std::string>& provenance = {}) {
    for (const auto& line : provenance) out << "# " << line << '\n';
    out << csv_header() << '\n';
    for (const auto& r : records) {
        detail::require(r.scenario.find_first_of(",\n\"") == std::string::npos,
                        "write_csv: scenario names must not contain commas, quotes or newlines");
        out << r.scenario << ',' << format_real(r.mu) << ',' << format_real(r.n) << ',' << to_string(r.shape) << ','
            << format_real(r.p1) << ',' << format_real(r.p2) << ',' << format_real(r.d) << ','
            << format_real(r.delta_B) << ',' << format_real(r.delta_P) << ',' << format_real(r.elong) << ','
            << format_real(r.V) << ',' << r.trials << ',' << format_real(r.truncated_frac) << ','
            << format_real(r.mean_time) << ',' << format_real(r.sem_time) << ',' << format_real(r.mean_steps)
            << ',' << format_real(r.sem_steps) << ',' << format_real(r.universal_lb) << ','
            << format_real(r.cauchy_ub) << ',' << format_real(r.regime_lb) << ',' << format_real(r.overhead)
            << '\n';
    }
}

namespace detail {

inline double parse_real(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw InvalidInput("csv: malformed number '" + s + "'");
    }
    return v;
}

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Parses a sweep CSV. Provenance lines are returned through `provenance`
/// when non-null. Rejects files whose header differs from kCsvColumns.
inline std::vector<SweepRecord> read_csv(std::istream& in, std::vector<std::string>* provenance = nullptr) {
    std::string line;
    bool have_header = false;
    std::vector<SweepRecord> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            if (line.rfind("#", 0) == 0) {
                if (provenance) provenance->push_back(line.size() > 2 ? line.substr(2) : std::string());
                continue;
            }
            if (line != csv_header()) throw InvalidInput("csv: unexpected header '" + line + "'");
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto f = detail::split_commas(line);
        if (f.size() != kCsvColumns.size()) {
            throw InvalidInput("csv: expected " + std::to_string(kCsvColumns.size()) + " fields, got " +
                               std::to_string(f.size()));
        }
        SweepRecord r;
        std::size_t i = 0;
        r.scenario = f[i++];
        r.mu = detail::parse_real(f[i++]);
        r.n = detail::parse_real(f[i++]);
        r.shape = parse_shape_kind(f[i++]);
        r.p1 = detail::parse_real(f[i++]);
        r.p2 = detail::parse_real(f[i++]);
        r.d = detail::parse_real(f[i++]);
        r.delta_B = detail::parse_real(f[i++]);
        r.delta_P = detail::parse_real(f[i++]);
        r.elong = detail::parse_real(f[i++]);
        r.V = detail::parse_real(f[i++]);
        r.trials = std::stoull(f[i++]);
        r.truncated_frac = detail::parse_real(f[i++]);
        r.mean_time = detail::parse_real(f[i++]);
        r.sem_time = detail::parse_real(f[i++]);
        r.mean_steps = detail::parse_real(f[i++]);
        r.sem_steps = detail::parse_real(f[i++]);
        r.universal_lb = detail::parse_real(f[i++]);
        r.cauchy_ub = detail::parse_real(f[i++]);
        r.regime_lb = detail::parse_real(f[i++]);
        r.overhead = detail::parse_real(f[i++]);
        records.push_back(std::move(r));
    }
    if (!have_header) throw InvalidInput("csv: missing header row");
    return records;
}

}  // namespace levy3d
