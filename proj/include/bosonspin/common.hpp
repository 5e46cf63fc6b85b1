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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bosonspin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using CTriplet = Eigen::Triplet<Complex>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Error hierarchy. Every failure surfaced by the library derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDimension : Error {
    using Error::Error;
};
struct CapacityError : Error {
    using Error::Error;
};
struct BasisMismatch : Error {
    using Error::Error;
};
struct SectorError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct DegeneratePostselection : Error {
    using Error::Error;
};
struct UnsupportedCoupling : Error {
    using Error::Error;
};
struct ConvergenceError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

/// Exact binomial coefficient; saturates at UINT64_MAX on overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(acc);
}

/// Fixed-order pairwise summation; the result depends only on the input order.
template <typename T>
T pairwise_sum(const T* data, std::size_t count) {
    if (count == 0) return T{};
    if (count <= 8) {
        T acc = data[0];
        for (std::size_t i = 1; i < count; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(values.data(), values.size());
}

inline double squared_norm_pairwise(const CVector& v) {
    std::vector<double> sq(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) sq[static_cast<std::size_t>(i)] = std::norm(v[i]);
    return pairwise_sum(sq);
}

}  // namespace bosonspin
