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

#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "qfchain/ed.hpp"
#include "qfchain/quasifree.hpp"
#include "qfchain/random.hpp"

using namespace qfchain;
using Catch::Matchers::WithinAbs;

namespace {

double distance(const SparseMatrixC& a, const SparseMatrixC& b) {
    const SparseMatrixC d = a - b;
    double out = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(d, k); it; ++it) out = std::max(out, std::abs(it.value()));
    }
    return out;
}

// Dyadic couplings keep every Pauli coefficient exactly representable.
ModelParams params_for(const std::string& name) {
    if (name == "trivial") return {{"mu", 0.75}};
    if (name == "kitaev") return {{"J", 1.0}, {"lambda", 0.375}};
    return {{"gamma", 0.625}, {"lambda", 0.25}};
}

}  // namespace

TEST_CASE("two-site trivial chain", "[ed]") {
    const EDOperator h = ed_build(build_model("trivial", 2, {{"mu", 1.0}}));
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected.diagonal() << -2, 0, 0, 2;
    CHECK((Eigen::MatrixXcd(h.matrix) - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.hermitian);
    CHECK(h.parity == Parity::even);
}

TEST_CASE("two-site kitaev chain by hand", "[ed]") {
    // Basis index n_0 + 2 n_1; H = -(|0><3| + |3><0| + |1><2| + |2><1|).
    const EDOperator h = ed_build(build_model("kitaev", 2, {{"J", 1.0}, {"lambda", 0.0}}));
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    expected(0, 3) = expected(3, 0) = expected(1, 2) = expected(2, 1) = -1.0;
    CHECK((Eigen::MatrixXcd(h.matrix) - expected).cwiseAbs().maxCoeff() == 0.0);

    const EDState g = ed_ground(h);
    CHECK_THAT(g.energy, WithinAbs(-1.0, 1e-14));
    CHECK(g.parity_sector == ParitySector::mixed);
    CHECK_THAT(ed_ground(h, Sector::even).energy, WithinAbs(-1.0, 1e-14));
    CHECK(ed_ground(h, Sector::even).parity_sector == ParitySector::even);
    CHECK(ed_ground(h, Sector::odd).parity_sector == ParitySector::odd);
}

TEST_CASE("fermion and Pauli Hamiltonians coincide", "[ed][jw]") {
    for (const std::string name : {"trivial", "kitaev", "xy"}) {
        for (auto boundary : {Boundary::open, Boundary::ring}) {
            const EDOperator fermion = ed_build(build_model(name, 6, params_for(name), boundary));
            const EDOperator spin = ed_build(pauli_model(name, 6, params_for(name), boundary), 6);
            CHECK(distance(to_frame(fermion, Frame::spin).matrix, spin.matrix) == 0.0);
            CHECK(distance(to_frame(spin, Frame::fermion).matrix, fermion.matrix) == 0.0);
        }
    }
    // (1 +- gamma) / 2 rounds for general gamma.
    const ModelParams generic{{"gamma", 0.6}, {"lambda", 0.3}};
    const EDOperator fermion = ed_build(build_model("xy", 6, generic, Boundary::ring));
    const EDOperator spin = ed_build(pauli_model("xy", 6, generic, Boundary::ring), 6);
    CHECK(distance(to_frame(fermion, Frame::spin).matrix, spin.matrix) <= 4 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("frames agree on expectation values", "[ed][jw]") {
    const ModelParams params{{"J", 1.0}, {"lambda", 0.6}};
    const EDState fermion = ed_ground(ed_build(build_model("kitaev", 8, params, Boundary::ring)));
    const EDState spin = ed_ground(ed_build(pauli_model("kitaev", 8, params, Boundary::ring), 8));
    CHECK(fermion.frame == Frame::fermion);
    CHECK(spin.frame == Frame::spin);
    CHECK_THAT(fermion.energy, WithinAbs(spin.energy, 1e-12));
    const Window w{0, 7};
    for (long j = 0; j < 8; ++j) {
        const Complex z = ed_expectation(spin, PauliString::single(w, j, Pauli::Z));
        CHECK(std::abs(z - ed_expectation(fermion, occupation_sign(j))) < 1e-10);
        CHECK(std::abs(z - ed_expectation(spin, occupation_sign(j))) < 1e-10);
    }
    const PauliString xx = PauliString::parse(w, "X2 X3");
    CHECK(std::abs(ed_expectation(spin, xx) - ed_expectation(fermion, xx)) < 1e-10);
}

TEST_CASE("parity is conserved", "[ed]") {
    Rng rng(4);
    const EDOperator h = ed_build(random_quadratic_hamiltonian(rng, 6));
    SparseMatrixC p(64, 64);
    for (Index s = 0; s < 64; ++s) p.insert(s, s) = std::popcount(static_cast<std::uint32_t>(s)) % 2 == 0 ? 1.0 : -1.0;
    const SparseMatrixC commutator = h.matrix * p - p * h.matrix;
    CHECK(distance(commutator, SparseMatrixC(64, 64)) < 1e-13);
}

TEST_CASE("spin ring with two ferromagnetic ground states is mixed", "[ed]") {
    const EDState g = ed_ground(ed_build(pauli_model("ising", 8, {}, Boundary::ring), 8));
    CHECK_THAT(g.energy, WithinAbs(-8.0, 1e-12));
    CHECK(g.parity_sector == ParitySector::mixed);
    CHECK(g.gap < ed_degeneracy_tol);
}

TEST_CASE("Lanczos ground energies", "[ed][lanczos]") {
    const QuadraticHamiltonian ring = build_model("kitaev", 12, {{"J", 1.0}, {"lambda", 0.5}}, Boundary::ring);
    const EDState lanczos = ed_ground(ed_build(ring));
    CHECK_THAT(lanczos.energy, WithinAbs(quasi_free_ground(ring).energy, 1e-9));
    CHECK(lanczos.parity_sector != ParitySector::mixed);

    Rng rng(13);
    const QuadraticHamiltonian random = random_quadratic_hamiltonian(rng, 11);
    CHECK_THAT(ed_ground(ed_build(random)).energy, WithinAbs(quasi_free_ground(random).energy, 1e-9));

    const QuadraticHamiltonian xy = build_model("xy", 11, {{"gamma", 0.5}, {"lambda", 0.2}});
    const EDState odd = ed_ground(ed_build(xy), Sector::odd);
    const EDState even = ed_ground(ed_build(xy), Sector::even);
    CHECK_THAT(std::min(odd.energy, even.energy), WithinAbs(quasi_free_ground(xy).energy, 1e-9));
}

TEST_CASE("ED input validation", "[ed]") {
    CHECK_THROWS_AS(ed_build(build_model("trivial", 15, {{"mu", 1.0}})), ValidationError);
    CHECK_THROWS_AS(ed_operator(FermionMonomial::creation(4), 4), WindowError);
    const FermionSum mixed{FermionMonomial::creation(0), FermionMonomial::creation(0) * FermionMonomial::creation(1)};
    CHECK_THROWS_AS(ed_operator(mixed, 2), ValidationError);
    CHECK_THROWS_AS(ed_ground(ed_operator(FermionMonomial::creation(0), 2)), ValidationError);
    CHECK_THROWS_AS(pauli_model("custom", 4, {}), ModelError);
    const EDState g = ed_ground(ed_build(build_model("trivial", 3, {{"mu", 1.0}})));
    CHECK_THROWS_AS(ed_expectation(g, ed_operator(occupation_sign(0), 4)), ValidationError);
}
