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
 * @brief Exact diagonalization on the 2^L occupation basis.
 *
 * Basis state s has site j occupied iff bit j of s is set. Two operator
 * frames share this basis:
 *
 *  - fermion frame: c_j |s> = (-1)^{popcount(s & (2^j - 1))} |s - 2^j>;
 *  - spin frame:    Pauli letters with |1> = spin up, so Z_j = 2 n_j - 1,
 *                   X_j flips bit j, Y_j = [[0, -i], [i, 0]] on (up, down).
 *
 * The left-anchored Jordan-Wigner fermions of the spin frame differ from the
 * fermion-frame ones by c_j -> (-1)^j c_j, implemented by the diagonal
 * unitary U = diag((-1)^{sum_j j n_j}). Expectations taken across frames are
 * conjugated by U automatically.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qfchain/errors.hpp"
#include "qfchain/jordan_wigner.hpp"
#include "qfchain/quasifree.hpp"

namespace qfchain {

inline constexpr int ed_max_sites = 14;
inline constexpr int ed_dense_max_sites = 10;
inline constexpr double ed_degeneracy_tol = 1e-10;

enum class Frame { fermion, spin };

using SparseMatrixC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

/// Sparse operator on the 2^sites occupation basis.
struct EDOperator {
    int sites = 0;
    SparseMatrixC matrix;
    Parity parity = Parity::even;
    Frame frame = Frame::fermion;
    bool hermitian = false;
};

namespace detail {

inline void check_sites(long sites) {
    if (sites < 1 || sites > ed_max_sites) {
        throw ValidationError("exact diagonalization supports 1.." + std::to_string(ed_max_sites) + " sites, got " +
                              std::to_string(sites));
    }
}

inline void check_site(long site, int sites) {
    if (site < 0 || site >= sites) {
        throw WindowError("site " + std::to_string(site) + " outside the " + std::to_string(sites) + "-site chain");
    }
}

/// Image of basis state `s` under one fermion factor: amplitude and target.
inline std::pair<Complex, std::uint32_t> apply_factor(const FermionFactor& f, std::uint32_t s) {
    const std::uint32_t bit = 1u << f.site;
    const double sign = (std::popcount(s & (bit - 1)) % 2 == 0) ? 1.0 : -1.0;
    const bool occupied = (s & bit) != 0;
    switch (f.kind) {
        case FermionKind::annihilation: return {occupied ? sign : 0.0, s ^ bit};
        case FermionKind::creation: return {occupied ? 0.0 : sign, s ^ bit};
        case FermionKind::majorana_even: return {sign, s ^ bit};
        // b = i (c - c^dag)
        case FermionKind::majorana_odd: return {Complex(0, occupied ? sign : -sign), s ^ bit};
    }
    return {0.0, s};
}

inline std::pair<Complex, std::uint32_t> apply_letter(long site, Pauli p, std::uint32_t s) {
    const std::uint32_t bit = 1u << site;
    const bool up = (s & bit) != 0;
    switch (p) {
        case Pauli::I: return {1.0, s};
        case Pauli::X: return {1.0, s ^ bit};
        case Pauli::Y: return {Complex(0, up ? 1.0 : -1.0), s ^ bit};
        case Pauli::Z: return {up ? 1.0 : -1.0, s};
    }
    return {0.0, s};
}

inline SparseMatrixC from_triplets(int sites, const std::vector<Eigen::Triplet<Complex>>& triplets) {
    const Index dim = Index{1} << sites;
    SparseMatrixC m(dim, dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(Complex(0.0, 0.0));
    return m;
}

inline void add_monomial(const FermionMonomial& mono, int sites, std::vector<Eigen::Triplet<Complex>>& out) {
    for (const auto& f : mono.factors) check_site(f.site, sites);
    const std::uint32_t dim = 1u << sites;
    for (std::uint32_t s = 0; s < dim; ++s) {
        Complex amp = mono.coeff;
        std::uint32_t t = s;
        for (auto it = mono.factors.rbegin(); it != mono.factors.rend() && amp != Complex(0, 0); ++it) {
            auto [a, next] = apply_factor(*it, t);
            amp *= a;
            t = next;
        }
        if (amp != Complex(0, 0)) out.emplace_back(static_cast<Index>(t), static_cast<Index>(s), amp);
    }
}

inline void add_string(const PauliString& str, int sites, std::vector<Eigen::Triplet<Complex>>& out) {
    for (const auto& [site, p] : str.letters()) check_site(site, sites);
    const std::uint32_t dim = 1u << sites;
    for (std::uint32_t s = 0; s < dim; ++s) {
        Complex amp = str.coeff();
        std::uint32_t t = s;
        for (const auto& [site, p] : str.letters()) {
            auto [a, next] = apply_letter(site, p, t);
            amp *= a;
            t = next;
        }
        out.emplace_back(static_cast<Index>(t), static_cast<Index>(s), amp);
    }
}

inline bool is_hermitian(const SparseMatrixC& m) {
    SparseMatrixC diff = m - SparseMatrixC(m.adjoint());
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(diff, k); it; ++it) {
            if (std::abs(it.value()) > 1e-12) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Diagonal of U = diag((-1)^{sum_j j n_j}).
inline Eigen::VectorXd jw_conjugation_signs(int sites) {
    detail::check_sites(sites);
    const std::uint32_t dim = 1u << sites;
    Eigen::VectorXd signs(dim);
    for (std::uint32_t s = 0; s < dim; ++s) {
        int phase = 0;
        for (int j = 0; j < sites; ++j) phase += ((s >> j) & 1u) ? j : 0;
        signs(s) = phase % 2 == 0 ? 1.0 : -1.0;
    }
    return signs;
}

/// Change frame by conjugating with U.
inline EDOperator to_frame(const EDOperator& op, Frame frame) {
    if (op.frame == frame) return op;
    const Eigen::VectorXd signs = jw_conjugation_signs(op.sites);
    EDOperator out = op;
    out.frame = frame;
    for (Index k = 0; k < out.matrix.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(out.matrix, k); it; ++it) it.valueRef() *= signs(it.row()) * signs(it.col());
    }
    return out;
}

inline EDOperator ed_operator(const FermionSum& sum, int sites) {
    detail::check_sites(sites);
    std::vector<Eigen::Triplet<Complex>> triplets;
    std::optional<Parity> parity;
    for (const auto& m : sum.terms) {
        if (parity && *parity != m.parity()) throw ValidationError("operator mixes even and odd monomials");
        parity = m.parity();
        detail::add_monomial(m, sites, triplets);
    }
    EDOperator op{sites, detail::from_triplets(sites, triplets), parity.value_or(Parity::even), Frame::fermion, false};
    op.hermitian = detail::is_hermitian(op.matrix);
    return op;
}

inline EDOperator ed_operator(const FermionMonomial& mono, int sites) { return ed_operator(FermionSum(mono), sites); }

inline EDOperator ed_operator(const PauliSum& sum, int sites) {
    detail::check_sites(sites);
    std::vector<Eigen::Triplet<Complex>> triplets;
    std::optional<Parity> parity;
    for (const auto& s : sum.strings()) {
        if (parity && *parity != s.parity()) throw ValidationError("operator mixes even and odd Pauli strings");
        parity = s.parity();
        detail::add_string(s, sites, triplets);
    }
    EDOperator op{sites, detail::from_triplets(sites, triplets), parity.value_or(Parity::even), Frame::spin, false};
    op.hermitian = detail::is_hermitian(op.matrix);
    return op;
}

inline EDOperator ed_operator(const PauliString& str, int sites) {
    PauliSum sum(str.window());
    sum.add(str);
    return ed_operator(sum, sites);
}

/// The fermion form of a quadratic Hamiltonian, term by term.
inline FermionSum hamiltonian_terms(const QuadraticHamiltonian& ham) {
    FermionSum terms;
    const Index n = ham.sites();
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const Complex a = ham.hopping()(i, j);
            const Complex b = ham.pairing()(i, j);
            if (a != Complex(0, 0)) {
                terms.terms.push_back(a * (FermionMonomial::creation(i) * FermionMonomial::annihilation(j)));
                terms.terms.push_back(-a * (FermionMonomial::annihilation(j) * FermionMonomial::creation(i)));
            }
            if (b != Complex(0, 0)) {
                terms.terms.push_back(b * (FermionMonomial::creation(i) * FermionMonomial::creation(j)));
                terms.terms.push_back(std::conj(b) *
                                      (FermionMonomial::annihilation(j) * FermionMonomial::annihilation(i)));
            }
        }
    }
    return terms;
}

inline EDOperator ed_build(const QuadraticHamiltonian& ham) {
    detail::check_sites(ham.sites());
    EDOperator op = ed_operator(hamiltonian_terms(ham), static_cast<int>(ham.sites()));
    op.hermitian = true;
    return op;
}

inline EDOperator ed_build(const PauliSum& ham, int sites) {
    EDOperator op = ed_operator(ham, sites);
    if (!op.hermitian) throw ValidationError("Pauli Hamiltonian is not Hermitian");
    return op;
}

/**
 * Spin-side Hamiltonians written directly with Pauli letters.
 *
 * A chain with hopping -t, pairing -D and field mu becomes
 *     sum_k [(t + D)/2 X_k X_{k+1} + (t - D)/2 Y_k Y_{k+1}] + mu sum_k Z_k,
 * so kitaev is J sum X X + lambda sum Z. On a ring the periodic fermion bond
 * picks up a factor -P with P = prod_k Z_k. "ising" is -sum X X with plain
 * periodic spins and has no quadratic counterpart on a ring.
 */
inline PauliSum pauli_model(const std::string& name, int sites, const ModelParams& params,
                            Boundary boundary = Boundary::open) {
    detail::check_sites(sites);
    const Window window{0, sites - 1};
    double xx = 0.0;
    double yy = 0.0;
    double field = 0.0;
    bool spin_periodic = false;
    if (name == "trivial") {
        detail::reject_extra_params(params, name, {"mu"});
        field = detail::require_param(params, name, "mu");
    } else if (name == "kitaev") {
        detail::reject_extra_params(params, name, {"J", "lambda"});
        xx = detail::require_param(params, name, "J");
        field = detail::require_param(params, name, "lambda");
    } else if (name == "xy") {
        detail::reject_extra_params(params, name, {"gamma", "lambda"});
        const double gamma = detail::require_param(params, name, "gamma");
        xx = 0.5 * (1.0 + gamma);
        yy = 0.5 * (1.0 - gamma);
        field = detail::require_param(params, name, "lambda");
    } else if (name == "ising") {
        detail::reject_extra_params(params, name, {"J"});
        xx = -(params.count("J") ? params.at("J") : 1.0);
        spin_periodic = true;
    } else {
        throw ModelError("no Pauli form for model '" + name + "'");
    }

    PauliSum ham(window);
    for (int k = 0; k < sites; ++k) {
        if (field != 0.0) ham.add(PauliString::single(window, k, Pauli::Z, field));
    }
    const int bonds = boundary == Boundary::ring ? sites : sites - 1;
    PauliString parity(window);
    for (int k = 0; k < sites; ++k) parity.set(k, Pauli::Z);
    for (int k = 0; k < bonds; ++k) {
        const int l = (k + 1) % sites;
        for (auto [letter, coeff] : {std::pair{Pauli::X, xx}, std::pair{Pauli::Y, yy}}) {
            if (coeff == 0.0) continue;
            PauliString term = PauliString::single(window, k, letter, coeff) * PauliString::single(window, l, letter);
            if (l == 0 && !spin_periodic) term = PauliString(window, -1.0) * parity * term;
            ham.add(term);
        }
    }
    return ham;
}

enum class Sector { all, even, odd };

enum class ParitySector { even, odd, mixed };

inline std::string to_string(ParitySector p) {
    switch (p) {
        case ParitySector::even: return "even";
        case ParitySector::odd: return "odd";
        case ParitySector::mixed: return "mixed";
    }
    return "mixed";
}

/// Ground state of an ED operator.
struct EDState {
    int sites = 0;
    Eigen::VectorXcd vector;
    double energy = 0.0;
    /// E_1 - E_0, counting multiplicity (0 up to roundoff when degenerate).
    double gap = 0.0;
    ParitySector parity_sector = ParitySector::mixed;
    Frame frame = Frame::fermion;
    /// Lowest eigenvalues found, ascending (at least two when dim >= 2).
    std::vector<double> low_energies;
};

namespace detail {

inline std::vector<Index> sector_basis(int sites, Sector sector) {
    std::vector<Index> basis;
    const std::uint32_t dim = 1u << sites;
    for (std::uint32_t s = 0; s < dim; ++s) {
        const bool even = std::popcount(s) % 2 == 0;
        if (sector == Sector::all || (sector == Sector::even) == even) basis.push_back(static_cast<Index>(s));
    }
    return basis;
}

inline SparseMatrixC restrict_to(const SparseMatrixC& m, const std::vector<Index>& basis) {
    if (static_cast<Index>(basis.size()) == m.rows()) return m;
    std::vector<Index> position(static_cast<std::size_t>(m.rows()), -1);
    for (std::size_t k = 0; k < basis.size(); ++k) position[static_cast<std::size_t>(basis[k])] = static_cast<Index>(k);
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (Index r : basis) {
        for (SparseMatrixC::InnerIterator it(m, r); it; ++it) {
            const Index c = position[static_cast<std::size_t>(it.col())];
            if (c >= 0) triplets.emplace_back(position[static_cast<std::size_t>(r)], c, it.value());
        }
    }
    const auto n = static_cast<Index>(basis.size());
    SparseMatrixC out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

/// Lanczos with full reorthogonalization for the lowest eigenpair of m
/// restricted to the orthogonal complement of `deflate`.
inline std::pair<double, Eigen::VectorXcd> lanczos_lowest(const SparseMatrixC& m,
                                                          const std::vector<Eigen::VectorXcd>& deflate,
                                                          std::uint64_t seed) {
    const Index dim = m.rows();
    const Index krylov = std::min<Index>(dim - static_cast<Index>(deflate.size()), 160);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd start(dim);
    for (Index i = 0; i < dim; ++i) start(i) = Complex(normal(rng), normal(rng));

    auto project = [&](Eigen::VectorXcd& v) {
        for (const auto& d : deflate) v -= d * d.dot(v);
    };

    double energy = 0.0;
    Eigen::VectorXcd ritz;
    for (int restart = 0; restart < 50; ++restart) {
        project(start);
        std::vector<Eigen::VectorXcd> basis;
        std::vector<double> alpha;
        std::vector<double> beta;
        Eigen::VectorXcd v = start.normalized();
        for (Index j = 0; j < krylov; ++j) {
            basis.push_back(v);
            Eigen::VectorXcd w = m * v;
            alpha.push_back(v.dot(w).real());
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : basis) w -= b * b.dot(w);
                project(w);
            }
            const double norm = w.norm();
            if (norm < 1e-13 || j + 1 == krylov) break;
            beta.push_back(norm);
            v = w / norm;
        }
        const auto size = static_cast<Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
        for (Index i = 0; i < size; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
        energy = small.eigenvalues()(0);
        ritz = Eigen::VectorXcd::Zero(dim);
        for (Index i = 0; i < size; ++i) ritz += small.eigenvectors()(i, 0) * basis[static_cast<std::size_t>(i)];
        project(ritz);
        ritz.normalize();
        const double residual = (m * ritz - energy * ritz).norm();
        if (residual < 1e-11 * std::max(1.0, std::abs(energy))) break;
        start = ritz;
    }
    return {energy, ritz};
}

}  // namespace detail

/**
 * Lowest eigenpair of a Hermitian operator, optionally restricted to a
 * parity sector. Up to ed_dense_max_sites a dense eigensolver is used,
 * above that Lanczos.
 */
inline EDState ed_ground(const EDOperator& op, Sector sector = Sector::all) {
    if (!op.hermitian) throw ValidationError("ed_ground requires a Hermitian operator");
    const std::vector<Index> basis = detail::sector_basis(op.sites, sector);
    const SparseMatrixC m = detail::restrict_to(op.matrix, basis);
    const Index dim = m.rows();

    EDState state;
    state.sites = op.sites;
    state.frame = op.frame;
    Eigen::VectorXcd local;
    if (op.sites <= ed_dense_max_sites) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver{Eigen::MatrixXcd(m)};
        local = solver.eigenvectors().col(0);
        for (Index k = 0; k < std::min<Index>(dim, 4); ++k) state.low_energies.push_back(solver.eigenvalues()(k));
    } else {
        auto [e0, v0] = detail::lanczos_lowest(m, {}, 0x5eed0001);
        local = v0;
        state.low_energies.push_back(e0);
        if (dim > 1) {
            auto [e1, v1] = detail::lanczos_lowest(m, {v0}, 0x5eed0002);
            state.low_energies.push_back(e1);
        }
    }
    state.energy = state.low_energies.front();
    state.gap = state.low_energies.size() > 1 ? state.low_energies[1] - state.low_energies[0] : 0.0;

    state.vector = Eigen::VectorXcd::Zero(Index{1} << op.sites);
    for (std::size_t k = 0; k < basis.size(); ++k) state.vector(basis[k]) = local(static_cast<Index>(k));
    state.vector.normalize();

    if (state.low_energies.size() > 1 && state.gap < ed_degeneracy_tol) {
        state.parity_sector = ParitySector::mixed;
    } else {
        double even = 0.0;
        for (Index s = 0; s < state.vector.size(); ++s) {
            if (std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0) even += std::norm(state.vector(s));
        }
        state.parity_sector = even > 0.5 ? ParitySector::even : ParitySector::odd;
    }
    return state;
}

/// <v| op |v>, conjugating by U when the frames differ.
inline Complex ed_expectation(const EDState& state, const EDOperator& op) {
    if (op.sites != state.sites) {
        throw ValidationError("operator on " + std::to_string(op.sites) + " sites, state on " +
                              std::to_string(state.sites));
    }
    const EDOperator aligned = to_frame(op, state.frame);
    return state.vector.dot(aligned.matrix * state.vector);
}

inline Complex ed_expectation(const EDState& state, const FermionSum& sum) {
    return ed_expectation(state, ed_operator(sum, state.sites));
}

inline Complex ed_expectation(const EDState& state, const FermionMonomial& mono) {
    return ed_expectation(state, ed_operator(mono, state.sites));
}

inline Complex ed_expectation(const EDState& state, const PauliSum& sum) {
    return ed_expectation(state, ed_operator(sum, state.sites));
}

inline Complex ed_expectation(const EDState& state, const PauliString& str) {
    return ed_expectation(state, ed_operator(str, state.sites));
}

}  // namespace qfchain
