/*
 * Copyright 2026 The qfchain Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @brief Dense antisymmetric linear algebra.
 *
 * Pfaffians are evaluated with the Parlett-Reid skew-symmetric
 * tridiagonalization (Gaussian elimination with partial pivoting applied
 * symmetrically to rows and columns). Canonical forms
 * O^T A O = diag([[0, l_k], [-l_k, 0]]) are obtained from the Hermitian
 * eigenproblem of iA, with near-zero clusters split off and treated
 * recursively so that O stays orthogonal to working precision.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfchain/errors.hpp"

namespace qfchain {

using Eigen::Index;

/// Real antisymmetric matrix, validated to 1e-12 absolute and then
/// re-symmetrized as (A - A^T) / 2 so the diagonal is exactly zero.
class AntisymmetricMatrix {
  public:
    static constexpr double tolerance = 1e-12;

    AntisymmetricMatrix() = default;

    explicit AntisymmetricMatrix(const Eigen::MatrixXd& entries) {
        if (entries.rows() != entries.cols()) {
            throw ValidationError("antisymmetric matrix must be square, got " +
                                  std::to_string(entries.rows()) + "x" +
                                  std::to_string(entries.cols()));
        }
        const double breach = entries.size() == 0 ? 0.0 : (entries + entries.transpose()).cwiseAbs().maxCoeff();
        if (breach > tolerance) {
            throw ValidationError("matrix is not antisymmetric: max |A + A^T| = " + std::to_string(breach));
        }
        entries_ = 0.5 * (entries - entries.transpose());
    }

    Index dim() const noexcept { return entries_.rows(); }
    const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
    double operator()(Index i, Index j) const { return entries_(i, j); }

  private:
    Eigen::MatrixXd entries_;
};

namespace detail {

/// Parlett-Reid elimination on a scratch copy. No validation; the caller
/// guarantees antisymmetry. Returns exactly 0 when a pivot column vanishes.
template <typename Scalar>
Scalar pfaffian_in_place(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Index n = a.rows();
    if (n == 0) return Scalar(1);
    if (n % 2 == 1) return Scalar(0);

    Scalar result(1);
    for (Index k = 0; k + 1 < n; k += 2) {
        Index offset = 0;
        a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&offset);
        const Index pivot = k + 1 + offset;
        if (pivot != k + 1) {
            a.row(k + 1).tail(n - k).swap(a.row(pivot).tail(n - k));
            a.col(k + 1).tail(n - k).swap(a.col(pivot).tail(n - k));
            result = -result;
        }
        if (a(k + 1, k) == Scalar(0)) return Scalar(0);
        result *= a(k, k + 1);

        const Index m = n - k - 2;
        if (m > 0) {
            const Vector tau = a.row(k).tail(m).transpose() / a(k, k + 1);
            const Vector col = a.col(k + 1).tail(m);
            Matrix update = tau * col.transpose();
            a.bottomRightCorner(m, m) += update - update.transpose();
        }
    }
    return result;
}

struct BlockPair {
    double lambda;
    Eigen::VectorXd first;
    Eigen::VectorXd second;
};

// Rotate (first, second) within their plane so that the row carrying the most
// weight has first > 0 and second == 0. Leaves [[0, l], [-l, 0]] invariant.
inline void fix_block_gauge(BlockPair& block) {
    Index pivot = 0;
    (block.first.array().square() + block.second.array().square()).maxCoeff(&pivot);
    const double angle = std::atan2(block.second(pivot), block.first(pivot));
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::VectorXd first = c * block.first + s * block.second;
    Eigen::VectorXd second = -s * block.first + c * block.second;
    block.first = std::move(first);
    block.second = std::move(second);
}

inline void canonical_blocks(const Eigen::MatrixXd& a, double floor, std::vector<BlockPair>& out) {
    const Index n = a.rows();
    if (n == 0) return;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>());
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXcd& vectors = solver.eigenvectors();
    const double scale = std::max(std::abs(values(0)), std::abs(values(n - 1)));

    if (scale <= floor) {
        for (Index k = 0; k + 1 < n; k += 2) {
            out.push_back({0.0, Eigen::VectorXd::Unit(n, k), Eigen::VectorXd::Unit(n, k + 1)});
        }
        return;
    }

    const double cluster = 1e-4 * scale;
    const Index half = n / 2;
    Index zeros = 0;
    for (Index j = half; j < n; ++j) {
        if (values(j) <= cluster) ++zeros;
    }

    // For l > 0 the eigenvector w = x + iy of iA gives A x = l y, A y = -l x;
    // w^T w = 0 makes sqrt(2) (y, x) an orthonormal pair.
    const double root2 = std::sqrt(2.0);
    for (Index j = half + zeros; j < n; ++j) {
        const Eigen::VectorXcd w = vectors.col(j);
        out.push_back({values(j), root2 * w.imag(), root2 * w.real()});
    }

    if (zeros == 0) return;

    // The near-kernel is conjugation invariant: recover a real orthonormal
    // basis for it and canonicalize the restricted (much smaller) block.
    const Index width = 2 * zeros;
    Eigen::MatrixXd span(n, 2 * width);
    span << vectors.middleCols(half - zeros, width).real(), vectors.middleCols(half - zeros, width).imag();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeThinU);
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(width);
    const Eigen::MatrixXd restricted = basis.transpose() * a * basis;
    const Eigen::MatrixXd sym = 0.5 * (restricted - restricted.transpose());

    std::vector<BlockPair> inner;
    canonical_blocks(sym, floor, inner);
    for (auto& block : inner) {
        out.push_back({block.lambda, basis * block.first, basis * block.second});
    }
}

}  // namespace detail

/// Pfaffian of an antisymmetric matrix. Odd dimension gives 0, empty gives 1.
template <typename Derived>
typename Derived::Scalar pfaffian(const Eigen::MatrixBase<Derived>& matrix) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scratch = matrix;
    return detail::pfaffian_in_place(scratch);
}

inline double pfaffian(const AntisymmetricMatrix& matrix) { return pfaffian(matrix.matrix()); }

/// Result of canonical_form: orthogonal() ^T * A * orthogonal() equals
/// block_diagonal(), with lambdas() non-negative and sorted descending.
struct CanonicalForm {
    Eigen::MatrixXd orthogonal;
    Eigen::VectorXd lambdas;

    Eigen::MatrixXd block_diagonal() const {
        const Index n = orthogonal.rows();
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (Index k = 0; k < lambdas.size(); ++k) {
            d(2 * k, 2 * k + 1) = lambdas(k);
            d(2 * k + 1, 2 * k) = -lambdas(k);
        }
        return d;
    }
};

inline CanonicalForm canonical_form(const AntisymmetricMatrix& matrix) {
    const Eigen::MatrixXd& a = matrix.matrix();
    const Index n = a.rows();
    if (n % 2 == 1) {
        throw ValidationError("canonical_form requires even dimension, got " + std::to_string(n));
    }
    const double norm = n == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
    const double floor = std::max<double>(1.0, static_cast<double>(n)) * 1e-15 * norm;

    std::vector<detail::BlockPair> blocks;
    detail::canonical_blocks(a, floor, blocks);
    for (auto& block : blocks) detail::fix_block_gauge(block);
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const auto& lhs, const auto& rhs) { return lhs.lambda > rhs.lambda; });

    CanonicalForm form{Eigen::MatrixXd(n, n), Eigen::VectorXd(n / 2)};
    for (Index k = 0; k < n / 2; ++k) {
        form.lambdas(k) = std::max(0.0, blocks[static_cast<std::size_t>(k)].lambda);
        form.orthogonal.col(2 * k) = blocks[static_cast<std::size_t>(k)].first;
        form.orthogonal.col(2 * k + 1) = blocks[static_cast<std::size_t>(k)].second;
    }
    return form;
}

/// Positive imaginary parts of the eigenvalues of A, descending.
inline Eigen::VectorXd antisymmetric_spectrum(const AntisymmetricMatrix& matrix) {
    const Index n = matrix.dim();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        std::complex<double>(0.0, 1.0) * matrix.matrix().cast<std::complex<double>>(), Eigen::EigenvaluesOnly);
    Eigen::VectorXd out = solver.eigenvalues().tail(n / 2).reverse();
    return out.cwiseMax(0.0);
}

}  // namespace qfchain
