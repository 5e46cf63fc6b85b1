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

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "bosonspin/common.hpp"
#include "bosonspin/rng.hpp"

namespace bosonspin {

/// An m x m unitary defining one problem instance: the interferometer
/// for the boson model and the in/out couplings of the spin model.
struct ModeUnitary {
    std::size_t m = 0;
    CMatrix entries;
    std::uint64_t seed = 0;

    [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
        return entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

    /// Wraps an explicit matrix (no unitarity check; see unitarity_defect).
    static ModeUnitary from_matrix(CMatrix matrix, std::uint64_t seed = 0) {
        if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
            throw InvalidDimension("ModeUnitary: matrix must be square and non-empty");
        ModeUnitary u;
        u.m = static_cast<std::size_t>(matrix.rows());
        u.entries = std::move(matrix);
        u.seed = seed;
        return u;
    }

    [[nodiscard]] bool is_real(double tol = 0.0) const { return entries.imag().cwiseAbs().maxCoeff() <= tol; }
};

/// max_{ij} |(R^dagger R - I)_{ij}|
inline double unitarity_defect(const ModeUnitary& r) {
    const CMatrix gram = r.entries.adjoint() * r.entries;
    return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

/// Haar-distributed U(m) element.
///
/// Ginibre matrix of i.i.d. standard complex normals, Householder QR, then
/// Q is multiplied by the phases of diag(R). Without the phase fix the
/// result is not Haar distributed.
inline ModeUnitary sample_haar_unitary(std::size_t m, std::uint64_t seed) {
    if (m == 0) throw InvalidDimension("sample_haar_unitary: mode count must be >= 1");
    Rng rng(seed);
    const auto n = static_cast<Eigen::Index>(m);
    CMatrix ginibre(n, n);
    const double scale = 1.0 / std::sqrt(2.0);
    // Row-major fill order is part of the determinism contract.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            ginibre(i, j) = Complex(re * scale, im * scale);
        }
    Eigen::HouseholderQR<CMatrix> qr(ginibre);
    CMatrix q = qr.householderQ();
    const CMatrix& packed = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex d = packed(j, j);
        const double mag = std::abs(d);
        const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
        q.col(j) *= phase;
    }
    return ModeUnitary{m, std::move(q), seed};
}

// JSON: {"m": m, "seed": s, "entries": [[[re, im], ...], ...]} (row-major).
inline void to_json(nlohmann::json& j, const ModeUnitary& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.entries.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < r.entries.cols(); ++k)
            row.push_back({r.entries(i, k).real(), r.entries(i, k).imag()});
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"m", r.m}, {"seed", r.seed}, {"entries", std::move(rows)}};
}

inline void from_json(const nlohmann::json& j, ModeUnitary& r) {
    const auto m = j.at("m").get<std::size_t>();
    const auto& rows = j.at("entries");
    if (m == 0 || rows.size() != m) throw InvalidDimension("ModeUnitary JSON: entries shape does not match m");
    CMatrix entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != m) throw InvalidDimension("ModeUnitary JSON: ragged row");
        for (std::size_t k = 0; k < m; ++k)
            entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                Complex(rows[i][k].at(0).get<double>(), rows[i][k].at(1).get<double>());
    }
    r = ModeUnitary{m, std::move(entries), j.value("seed", std::uint64_t{0})};
}

}  // namespace bosonspin
