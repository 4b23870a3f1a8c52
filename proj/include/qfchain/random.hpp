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
 * @brief Seeded generators for random matrices, Hamiltonians and probes.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qfchain/jordan_wigner.hpp"
#include "qfchain/quasifree.hpp"

namespace qfchain {

using Rng = std::mt19937_64;

inline double gaussian(Rng& rng) {
    std::normal_distribution<double> dist;
    return dist(rng);
}

inline long uniform_int(Rng& rng, long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo, hi);
    return dist(rng);
}

inline Eigen::MatrixXd random_antisymmetric(Rng& rng, Index n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            a(i, j) = gaussian(rng);
            a(j, i) = -a(i, j);
        }
    }
    return a;
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, signs fixed by diag R).
inline Eigen::MatrixXd random_orthogonal(Rng& rng, Index n) {
    Eigen::MatrixXd g(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) g(i, j) = gaussian(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    for (Index j = 0; j < n; ++j) {
        if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

/// Orthogonal rotation of the Majoranas of `width` sites starting at local site `first`, identity elsewhere.
inline Eigen::MatrixXd random_local_rotation(Rng& rng, Index sites, Index first, Index width) {
    Eigen::MatrixXd o = Eigen::MatrixXd::Identity(2 * sites, 2 * sites);
    o.block(2 * first, 2 * first, 2 * width, 2 * width) = random_orthogonal(rng, 2 * width);
    return o;
}

/// Dense complex hopping and pairing with Gaussian entries.
inline QuadraticHamiltonian random_quadratic_hamiltonian(Rng& rng, Index sites) {
    Eigen::MatrixXcd a(sites, sites);
    Eigen::MatrixXcd b(sites, sites);
    for (Index i = 0; i < sites; ++i) {
        for (Index j = 0; j < sites; ++j) {
            a(i, j) = Complex(gaussian(rng), gaussian(rng));
            b(i, j) = Complex(gaussian(rng), gaussian(rng));
        }
    }
    QuadraticHamiltonian h(0.5 * (a + a.adjoint()), 0.5 * (b - b.transpose()), Boundary::open);
    h.name = "random";
    return h;
}

/// `order` distinct Majorana labels on sites [0, sites), increasing.
inline MajoranaMonomial random_majorana_monomial(Rng& rng, Index sites, Index order) {
    std::vector<long> labels(static_cast<std::size_t>(2 * sites));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<long>(i);
    std::shuffle(labels.begin(), labels.end(), rng);
    labels.resize(static_cast<std::size_t>(order));
    std::sort(labels.begin(), labels.end());
    return {1.0, labels};
}

/**
 * Sum of up to three monomials of fixed random parity, supported on a
 * window of at most `width` consecutive sites, with Gaussian complex
 * coefficients.
 */
inline FermionSum random_local_probe(Rng& rng, Index sites, Index width = 3) {
    const long w = std::min<long>(width, sites);
    const long first = uniform_int(rng, 0, sites - w);
    const bool odd = uniform_int(rng, 0, 1) == 1;
    const long terms = uniform_int(rng, 1, 3);
    FermionSum probe;
    for (long t = 0; t < terms; ++t) {
        long count = uniform_int(rng, 1, 4);
        if ((count % 2 == 1) != odd) ++count;
        FermionMonomial m{Complex(gaussian(rng), gaussian(rng)), {}};
        for (long f = 0; f < count; ++f) {
            const long site = first + uniform_int(rng, 0, w - 1);
            m.factors.push_back({site, static_cast<FermionKind>(uniform_int(rng, 0, 3))});
        }
        probe.terms.push_back(std::move(m));
    }
    return probe;
}

}  // namespace qfchain
