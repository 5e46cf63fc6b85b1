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

/**
 * @file fockspace.hpp
 * @brief Occupation-number bases of the 2M-mode (M input + M output) system.
 *
 * A configuration is a vector of 2M occupations: positions [0, M) are the
 * input modes a_1..a_M, positions [M, 2M) the output modes b_1..b_M.
 * Three N-particle sectors are supported:
 *
 *   full        every occupation pattern with total N
 *   hcb         hard-core: every occupation <= 1 (the spin space)
 *   one-b-pair  exactly one output mode doubly occupied, all others <= 1
 *
 * Configs are stored in descending lexicographic order of the occupation
 * vector, so for hcb the first config is 1..10..0 (a_1..a_N occupied).
 */

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bosonspin/common.hpp"

namespace bosonspin {

enum class SectorKind { full, hcb, one_b_pair };

inline std::string to_string(SectorKind kind) {
    switch (kind) {
        case SectorKind::full: return "full";
        case SectorKind::hcb: return "hcb";
        case SectorKind::one_b_pair: return "one-b-pair";
    }
    return "unknown";
}

using OccupationConfig = std::vector<std::uint8_t>;
using ConfigView = std::span<const std::uint8_t>;

inline constexpr std::uint64_t kDefaultCapacity = 5'000'000;

/// "1000", or comma separated when some occupation exceeds 9.
inline std::string config_string(ConfigView config) {
    const bool compact = std::all_of(config.begin(), config.end(), [](auto v) { return v < 10; });
    std::string out;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (!compact && i > 0) out.push_back(',');
        out += std::to_string(static_cast<unsigned>(config[i]));
    }
    return out;
}

class SectorBasis {
public:
    /// Closed-form sector size (saturating).
    static std::uint64_t expected_size(std::size_t m, std::size_t n, SectorKind kind) {
        switch (kind) {
            case SectorKind::full: return binomial(2 * m + n - 1, n);
            case SectorKind::hcb: return binomial(2 * m, n);
            case SectorKind::one_b_pair: {
                if (n < 2) return 0;
                const auto c = binomial(2 * m - 1, n - 2);
                return c == UINT64_MAX || c > UINT64_MAX / m ? UINT64_MAX : c * m;
            }
        }
        return 0;
    }

    static std::string size_formula(std::size_t m, std::size_t n, SectorKind kind) {
        const auto sz = std::to_string(expected_size(m, n, kind));
        switch (kind) {
            case SectorKind::full:
                return "C(" + std::to_string(2 * m + n - 1) + "," + std::to_string(n) + ")=" + sz;
            case SectorKind::hcb: return "C(" + std::to_string(2 * m) + "," + std::to_string(n) + ")=" + sz;
            case SectorKind::one_b_pair:
                return std::to_string(m) + "*C(" + std::to_string(2 * m - 1) + "," +
                       std::to_string(n < 2 ? 0 : n - 2) + ")=" + sz;
        }
        return sz;
    }

    /// Throws CapacityError (naming the binomial) when the sector would exceed `capacity`.
    static void check_capacity(std::size_t m, std::size_t n, SectorKind kind, std::uint64_t capacity) {
        const auto count = expected_size(m, n, kind);
        if (count > capacity)
            throw CapacityError("sector " + to_string(kind) + " (M=" + std::to_string(m) + ", N=" +
                                std::to_string(n) + ") has " + size_formula(m, n, kind) +
                                " states, exceeding the cap of " + std::to_string(capacity));
    }

    static SectorBasis enumerate(std::size_t m, std::size_t n, SectorKind kind,
                                 std::uint64_t capacity = kDefaultCapacity) {
        if (m == 0) throw InvalidDimension("enumerate_sector: mode count must be >= 1");
        if (n > 255) throw InvalidDimension("enumerate_sector: particle count must be <= 255");
        check_capacity(m, n, kind, capacity);
        SectorBasis basis(m, n, kind);
        const auto count = expected_size(m, n, kind);
        basis.storage_.reserve(count * 2 * m);
        OccupationConfig scratch(2 * m, 0);
        basis.fill(scratch, 0, n, false);
        basis.size_ = basis.storage_.size() / (2 * m);
        return basis;
    }

    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t sites() const noexcept { return 2 * m_; }
    [[nodiscard]] SectorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    [[nodiscard]] ConfigView config(std::size_t i) const noexcept {
        return {storage_.data() + i * 2 * m_, 2 * m_};
    }

    [[nodiscard]] std::optional<std::size_t> find(ConfigView c) const noexcept {
        if (c.size() != 2 * m_) return std::nullopt;
        // Binary search over the descending order.
        std::size_t lo = 0, hi = size_;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            const int cmp = std::memcmp(storage_.data() + mid * 2 * m_, c.data(), 2 * m_);
            if (cmp == 0) return mid;
            if (cmp > 0)
                lo = mid + 1;
            else
                hi = mid;
        }
        return std::nullopt;
    }

    [[nodiscard]] std::size_t index_of(ConfigView c) const {
        if (auto i = find(c)) return *i;
        throw BasisMismatch("config " + config_string(c) + " is not in the " + to_string(kind_) + " basis");
    }

    [[nodiscard]] bool contains(ConfigView c) const noexcept { return find(c).has_value(); }

    /// The initial state a_1^dagger ... a_N^dagger |vac>; requires N <= M.
    [[nodiscard]] OccupationConfig initial_config() const {
        if (n_ > m_) throw DomainError("initial state needs N <= M input modes");
        OccupationConfig c(2 * m_, 0);
        std::fill_n(c.begin(), n_, std::uint8_t{1});
        return c;
    }

private:
    SectorBasis(std::size_t m, std::size_t n, SectorKind kind) : m_(m), n_(n), kind_(kind) {}

    [[nodiscard]] unsigned max_occupation(std::size_t site, bool pair_used) const {
        switch (kind_) {
            case SectorKind::full: return 255;
            case SectorKind::hcb: return 1;
            case SectorKind::one_b_pair: return site >= m_ && !pair_used ? 2 : 1;
        }
        return 0;
    }

    void fill(OccupationConfig& scratch, std::size_t site, std::size_t remaining, bool pair_used) {
        if (site == 2 * m_) {
            if (remaining == 0 && (kind_ != SectorKind::one_b_pair || pair_used))
                storage_.insert(storage_.end(), scratch.begin(), scratch.end());
            return;
        }
        const auto cap = std::min<std::size_t>(max_occupation(site, pair_used), remaining);
        for (std::size_t v = cap + 1; v-- > 0;) {
            scratch[site] = static_cast<std::uint8_t>(v);
            fill(scratch, site + 1, remaining - v, pair_used || v == 2);
        }
        scratch[site] = 0;
    }

    std::size_t m_;
    std::size_t n_;
    SectorKind kind_;
    std::size_t size_ = 0;
    std::vector<std::uint8_t> storage_;
};

using SectorBasisPtr = std::shared_ptr<const SectorBasis>;

inline SectorBasisPtr make_sector(std::size_t m, std::size_t n, SectorKind kind,
                                  std::uint64_t capacity = kDefaultCapacity) {
    return std::make_shared<const SectorBasis>(SectorBasis::enumerate(m, n, kind, capacity));
}

/// Restriction of `state` (on basis `from`) to the configs of `to`.
inline CVector project(const CVector& state, const SectorBasis& from, const SectorBasis& to) {
    if (from.m() != to.m() || from.n() != to.n())
        throw BasisMismatch("project: bases differ in (M, N)");
    if (static_cast<std::size_t>(state.size()) != from.size())
        throw BasisMismatch("project: state length does not match the source basis");
    CVector out(static_cast<Eigen::Index>(to.size()));
    for (std::size_t i = 0; i < to.size(); ++i) {
        const auto src = from.find(to.config(i));
        if (!src) throw BasisMismatch("project: target config " + config_string(to.config(i)) + " missing from source");
        out[static_cast<Eigen::Index>(i)] = state[static_cast<Eigen::Index>(*src)];
    }
    return out;
}

inline void write_basis_csv(std::ostream& os, const SectorBasis& basis) {
    os << "index";
    for (std::size_t k = 0; k < basis.m(); ++k) os << ",a" << k + 1;
    for (std::size_t k = 0; k < basis.m(); ++k) os << ",b" << k + 1;
    os << '\n';
    for (std::size_t i = 0; i < basis.size(); ++i) {
        os << i;
        for (auto v : basis.config(i)) os << ',' << static_cast<unsigned>(v);
        os << '\n';
    }
}

}  // namespace bosonspin
