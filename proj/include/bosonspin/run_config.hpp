// Copyright 2026 The bosonspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration for the command-line driver: value grammar, flat
// key = value files, and the echo written next to every run's output.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bosonspin/common.hpp"
#include "bosonspin/fockspace.hpp"
#include "bosonspin/parallel.hpp"

namespace bosonspin {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

inline std::uint64_t parse_unsigned(const std::string& field, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(field + ": '" + text + "' is not a non-negative integer");
    return v;
}

inline double parse_real(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw ConfigError("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(field + ": '" + text + "' is not a number");
    }
}

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// "3", "2..5", "7,10,15", "2..4,9": sorted, duplicates removed.
inline std::vector<std::size_t> parse_size_list(const std::string& field, const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : detail::split(text, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(detail::parse_unsigned(field, item));
            continue;
        }
        const auto lo = detail::parse_unsigned(field, detail::trim(item.substr(0, dots)));
        const auto hi = detail::parse_unsigned(field, detail::trim(item.substr(dots + 2)));
        if (lo > hi) throw ConfigError(field + ": empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError(field + ": no values");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// "0.5pi", "pi", "1.25", "2pi/3" (a "pi" suffix or factor means times pi).
inline double parse_time(const std::string& field, const std::string& text) {
    std::string s = detail::trim(text);
    double divisor = 1.0;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        divisor = detail::parse_real(field, detail::trim(s.substr(slash + 1)));
        if (divisor == 0.0) throw ConfigError(field + ": division by zero in '" + text + "'");
        s = detail::trim(s.substr(0, slash));
    }
    double scale = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        scale = kPi;
        s = detail::trim(s.substr(0, s.size() - 2));
        if (!s.empty() && s.back() == '*') s.pop_back();
        if (s.empty()) s = "1";
    }
    const double v = detail::parse_real(field, s) * scale / divisor;
    if (v < 0.0) throw ConfigError(field + ": time must be non-negative");
    return v;
}

inline std::vector<double> parse_time_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : detail::split(text, ',')) out.push_back(parse_time(field, item));
    if (out.empty()) throw ConfigError(field + ": no values");
    return out;
}

inline std::vector<double> parse_real_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : detail::split(text, ',')) out.push_back(detail::parse_real(field, item));
    if (out.empty()) throw ConfigError(field + ": no values");
    return out;
}

struct RunConfig {
    std::string subcommand;
    std::vector<std::size_t> n_values;
    std::vector<std::size_t> m_values;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::vector<double> times;
    std::string out_dir = "out";
    std::uint64_t capacity = kDefaultCapacity;
    std::vector<double> b_values;
    unsigned threads = default_thread_count();
    bool paper_scale = false;

    /// Applies one key = value setting; unknown keys and bad values name the field.
    void set(const std::string& key, const std::string& value) {
        if (key == "n") n_values = parse_size_list("n", value);
        else if (key == "m") m_values = parse_size_list("m", value);
        else if (key == "trials") trials = detail::parse_unsigned("trials", value);
        else if (key == "seed") seed = detail::parse_unsigned("seed", value);
        else if (key == "time") times = parse_time_list("time", value);
        else if (key == "out") out_dir = value;
        else if (key == "cap") capacity = detail::parse_unsigned("cap", value);
        else if (key == "b") b_values = parse_real_list("b", value);
        else if (key == "threads") threads = static_cast<unsigned>(detail::parse_unsigned("threads", value));
        else if (key == "paper-scale") paper_scale = value == "true" || value == "1";
        else if (key == "subcommand") subcommand = value;
        else throw ConfigError("unknown config key '" + key + "'");
    }

    /// Fills every unset grid with the subcommand's default.
    void apply_defaults() {
        auto fill_sizes = [](std::vector<std::size_t>& v, std::vector<std::size_t> d) {
            if (v.empty()) v = std::move(d);
        };
        auto fill_trials = [this](std::size_t d) {
            if (trials == 0) trials = d;
        };
        if (times.empty()) times = {kPi / 2};
        if (subcommand == "norm-scan") {
            fill_sizes(n_values, paper_scale ? std::vector<std::size_t>{2, 3, 4, 5, 6} : std::vector<std::size_t>{2, 3, 4, 5});
            fill_sizes(m_values, paper_scale ? std::vector<std::size_t>{7, 10, 15, 20, 30, 40, 50, 60}
                                             : std::vector<std::size_t>{7, 10, 15, 20, 30, 40});
            fill_trials(paper_scale ? 200 : 50);
        } else if (subcommand == "error-scan") {
            fill_sizes(n_values, {3});
            fill_sizes(m_values, {9, 16, 25, 36});
            fill_trials(20);
        } else if (subcommand == "bunching") {
            fill_sizes(n_values, {2, 3});
            fill_sizes(m_values, {10, 16});
            fill_trials(200);
        } else if (subcommand == "distance") {
            fill_sizes(n_values, {2});
            fill_sizes(m_values, {8, 10, 12});
            fill_trials(20);
        } else if (subcommand == "rwa") {
            fill_sizes(n_values, {1});
            fill_sizes(m_values, {3});
            if (b_values.empty()) b_values = {25, 50, 100, 200};
            fill_trials(1);
        } else if (subcommand == "oracle-check") {
            fill_trials(10);
        } else {
            fill_trials(1);
        }
        if (threads == 0) threads = default_thread_count();
    }

    /// Resolved configuration, one key = value per line, re-readable by load_config_file.
    [[nodiscard]] std::string echo() const {
        auto join_sizes = [](const std::vector<std::size_t>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        };
        auto join_reals = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + detail::format_real(v[i]);
            return s;
        };
        std::ostringstream os;
        os << "subcommand = " << subcommand << "\n";
        os << "n = " << join_sizes(n_values) << "\n";
        os << "m = " << join_sizes(m_values) << "\n";
        os << "trials = " << trials << "\n";
        os << "seed = " << seed << "\n";
        os << "time = " << join_reals(times) << "\n";
        os << "cap = " << capacity << "\n";
        if (!b_values.empty()) os << "b = " << join_reals(b_values) << "\n";
        os << "paper-scale = " << (paper_scale ? "true" : "false") << "\n";
        // threads and out do not change results and are left out so that
        // echoes compare equal across machines.
        return os.str();
    }
};

/// Flat "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " has no '=': " + line);
        out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace bosonspin
