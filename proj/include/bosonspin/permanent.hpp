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

#include <bit>
#include <cstdint>
#include <vector>

#include "bosonspin/common.hpp"

namespace bosonspin {

inline constexpr Eigen::Index kMaxPermanentDim = 20;

/// Per(A) by Ryser's formula, visiting column subsets in Gray-code order so
/// each step adds or removes a single column from the running row sums:
///
///   Per(A) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i sum_{j in S} a_ij
///
/// O(2^n n). The 0 x 0 permanent is 1.
inline Complex permanent(const CMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidDimension("permanent: matrix must be square");
    const Eigen::Index n = a.rows();
    if (n > kMaxPermanentDim) throw InvalidDimension("permanent: dimension exceeds the 20 x 20 cap");
    if (n == 0) return {1.0, 0.0};
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) + a(0, 1) * a(1, 0);

    std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{});
    Complex total{};
    std::uint64_t gray_prev = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t flipped = gray ^ gray_prev;
        const auto col = static_cast<Eigen::Index>(std::countr_zero(flipped));
        const bool added = (gray & flipped) != 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (added)
                row_sums[static_cast<std::size_t>(i)] += a(i, col);
            else
                row_sums[static_cast<std::size_t>(i)] -= a(i, col);
        }
        Complex prod = row_sums[0];
        for (std::size_t i = 1; i < row_sums.size(); ++i) prod *= row_sums[i];
        if (std::popcount(gray) % 2 == 1)
            total -= prod;
        else
            total += prod;
        gray_prev = gray;
    }
    return n % 2 == 1 ? -total : total;
}

}  // namespace bosonspin
