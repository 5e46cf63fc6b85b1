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

#include <iomanip>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "bosonspin/common.hpp"

namespace bosonspin {

/// Probabilities keyed by a configuration string ("0101", ...).
struct ProbabilityTable {
    std::map<std::string, double> entries;

    [[nodiscard]] double total() const {
        std::vector<double> values;
        values.reserve(entries.size());
        for (const auto& [key, p] : entries) values.push_back(p);
        return pairwise_sum(values);
    }

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }

    [[nodiscard]] double at(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? 0.0 : it->second;
    }
};

inline void write_table_csv(std::ostream& os, const ProbabilityTable& table, const std::string& key_header = "config") {
    os << key_header << ",probability\n";
    os << std::setprecision(17);
    for (const auto& [key, p] : table.entries) os << key << ',' << p << '\n';
}

}  // namespace bosonspin
