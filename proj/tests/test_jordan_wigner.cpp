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

#include "qfchain/ed.hpp"
#include "qfchain/jordan_wigner.hpp"
#include "qfchain/random.hpp"

using namespace qfchain;

namespace {

double distance(const SparseMatrixC& a, const SparseMatrixC& b) {
    const SparseMatrixC d = a - b;
    double out = 0.0;
    for (Index k = 0; k < d.outerSize(); ++k) {
        for (SparseMatrixC::InnerIterator it(d, k); it; ++it) out = std::max(out, std::abs(it.value()));
    }
    return out;
}

PauliString random_string(Rng& rng, Window window) {
    PauliString s(window, Complex(gaussian(rng), gaussian(rng)));
    for (long site = window.first; site <= window.last; ++site) s.set(site, static_cast<Pauli>(uniform_int(rng, 0, 3)));
    return s;
}

FermionMonomial random_monomial(Rng& rng, long sites, long max_factors) {
    FermionMonomial m{Complex(gaussian(rng), gaussian(rng)), {}};
    const long count = uniform_int(rng, 0, max_factors);
    for (long f = 0; f < count; ++f) {
        m.factors.push_back({uniform_int(rng, 0, sites - 1), static_cast<FermionKind>(uniform_int(rng, 0, 3))});
    }
    return m;
}

// Spin-frame matrix of the fermion operator, via the fermion ED construction.
SparseMatrixC fermion_in_spin_frame(const FermionSum& sum, int sites) {
    return to_frame(ed_operator(sum, sites), Frame::spin).matrix;
}

}  // namespace

TEST_CASE("occupation sign maps to Z", "[jw]") {
    const Window w{0, 5};
    for (long j = 0; j < 6; ++j) {
        const JwImage image = jw_fermion_to_pauli(occupation_sign(j), w);
        REQUIRE(image.sum.size() == 1);
        CHECK(image.sum.strings().front() == PauliString::single(w, j, Pauli::Z));
        CHECK_FALSE(image.tail);
    }
    const JwImage string = jw_fermion_to_pauli(string_operator(1, 3), w);
    REQUIRE(string.sum.size() == 1);
    CHECK(string.sum.strings().front() == PauliString::parse(w, "Z1 Z2 Z3"));
    CHECK(jw_fermion_to_pauli(string_operator(3, 2), w).sum.strings().front() == PauliString(w));
}

TEST_CASE("two-site Majorana product", "[jw][ed]") {
    const Window w{0, 1};
    const FermionSum x0{FermionMonomial::creation(0), FermionMonomial::annihilation(0)};
    const FermionSum x1{FermionMonomial::creation(1), FermionMonomial::annihilation(1)};
    const FermionSum product = x0 * x1;

    const JwImage image = jw_fermion_to_pauli(product, w);
    REQUIRE(image.sum.size() == 1);
    CHECK(image.sum.strings().front() == PauliString::parse(w, "Y0 X1", Complex(0, -1)));

    // Explicit 4x4 matrix of -i Y (x) X in the spin frame (bit j = site j, up = 1).
    Eigen::MatrixXcd y(2, 2);
    y << 0, Complex(0, 1), Complex(0, -1), 0;  // rows/cols ordered (down, up)
    Eigen::MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    Eigen::MatrixXcd expected(4, 4);
    for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
            expected(s, t) = Complex(0, -1) * y(s & 1, t & 1) * x((s >> 1) & 1, (t >> 1) & 1);
        }
    }
    const Eigen::MatrixXcd built = Eigen::MatrixXcd(ed_operator(image.sum, 2).matrix);
    CHECK((built - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(distance(fermion_in_spin_frame(product, 2), ed_operator(image.sum, 2).matrix) == 0.0);
}

TEST_CASE("single Majoranas carry a tail", "[jw]") {
    const Window w{0, 3};
    const JwString even = jw_majorana_to_pauli({1.0, {4}}, w);
    CHECK(even.tail);
    CHECK(even.string == PauliString::parse(w, "Z0 Z1 X2"));
    const JwString odd = jw_majorana_to_pauli({1.0, {5}}, w);
    CHECK(odd.string == PauliString::parse(w, "Z0 Z1 Y2"));
    CHECK_FALSE(jw_majorana_to_pauli({1.0, {4, 5}}, w).tail);
    CHECK_THROWS_AS(jw_majorana_to_pauli({1.0, {8}}, w), WindowError);
    CHECK_THROWS_AS(jw_fermion_to_pauli(FermionMonomial::creation(-1), w), WindowError);
}

TEST_CASE("round trip through Pauli strings", "[jw][property]") {
    Rng rng(21);
    const Window w{0, 5};
    for (int trial = 0; trial < 200; ++trial) {
        const PauliString s = random_string(rng, w);
        const FermionMonomial f = jw_pauli_to_fermion(s);
        CHECK((f.parity() == Parity::even) == (s.parity() == Parity::even));
        const JwImage back = jw_fermion_to_pauli(f, w);
        REQUIRE(back.sum.size() == 1);
        const PauliString t = back.sum.strings().front();
        CHECK(t.letters() == s.letters());
        CHECK(std::abs(t.coeff() - s.coeff()) <= 1e-15 * std::abs(s.coeff()));
        CHECK(back.tail == (s.parity() == Parity::odd));
    }
}

TEST_CASE("map agrees with the fermion Fock construction", "[jw][ed][property]") {
    Rng rng(34);
    const int sites = 6;
    const Window w{0, sites - 1};
    for (int trial = 0; trial < 60; ++trial) {
        const FermionMonomial m = random_monomial(rng, sites, 5);
        const JwImage image = jw_fermion_to_pauli(m, w);
        CHECK(image.tail == (m.parity() == Parity::odd));
        CHECK(distance(fermion_in_spin_frame(m, sites), ed_operator(image.sum, sites).matrix) < 1e-14);
    }
}

TEST_CASE("map is multiplicative", "[jw][ed][property]") {
    Rng rng(55);
    const int sites = 6;
    const Window w{0, sites - 1};
    for (int trial = 0; trial < 40; ++trial) {
        const FermionMonomial a = random_monomial(rng, sites, 4);
        const FermionMonomial b = random_monomial(rng, sites, 4);
        const SparseMatrixC ab = ed_operator(jw_fermion_to_pauli(a * b, w).sum, sites).matrix;
        const SparseMatrixC pa = ed_operator(jw_fermion_to_pauli(a, w).sum, sites).matrix;
        const SparseMatrixC pb = ed_operator(jw_fermion_to_pauli(b, w).sum, sites).matrix;
        const SparseMatrixC prod = pa * pb;
        CHECK(distance(ab, prod) < 1e-13);
    }
}

TEST_CASE("Majorana algebra", "[majorana]") {
    CHECK(canonicalize(1.0, {3, 3}) == MajoranaMonomial{1.0, {}});
    CHECK(canonicalize(1.0, {1, 0}) == MajoranaMonomial{-1.0, {0, 1}});
    CHECK(canonicalize(1.0, {2, 0, 1}) == MajoranaMonomial{1.0, {0, 1, 2}});
    CHECK(canonicalize(2.0, {0, 1, 0}) == MajoranaMonomial{-2.0, {1}});

    const MajoranaSum a0(MajoranaMonomial{1.0, {0}});
    const MajoranaSum a3(MajoranaMonomial{1.0, {3}});
    MajoranaSum anticommutator = a0 * a3;
    anticommutator += a3 * a0;
    CHECK(anticommutator.empty());
    CHECK((a0 * a0).terms() == std::vector<MajoranaMonomial>{{1.0, {}}});

    // c^dag c = (1 - i a b) / 2
    const MajoranaSum n = to_majorana(FermionMonomial::creation(2) * FermionMonomial::annihilation(2));
    MajoranaSum expected(MajoranaMonomial{0.5, {}});
    expected.add({Complex(0, -0.5), {4, 5}});
    CHECK(n == expected);
    CHECK(to_majorana(occupation_sign(2)) == MajoranaSum(MajoranaMonomial{Complex(0, -1), {4, 5}}));
}

TEST_CASE("normal ordering preserves the operator", "[majorana][ed][property]") {
    const FermionSum ordered = normal_order(FermionMonomial::annihilation(0) * FermionMonomial::creation(0));
    REQUIRE(ordered.terms.size() == 2);
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const FermionMonomial m = random_monomial(rng, 4, 6);
        CHECK(distance(ed_operator(m, 4).matrix, ed_operator(normal_order(m), 4).matrix) < 1e-14);
    }
}

TEST_CASE("Pauli strings", "[pauli]") {
    const Window w{0, 3};
    const PauliString xy = PauliString::parse(w, "X0") * PauliString::parse(w, "Y0");
    CHECK(xy == PauliString::parse(w, "Z0", Complex(0, 1)));
    CHECK(PauliString::parse(w, "X1 X2").parity() == Parity::even);
    CHECK(PauliString::parse(w, "X1 Z2").parity() == Parity::odd);
    CHECK_THROWS_AS(PauliString::parse(w, "Q1"), ValidationError);
    CHECK_THROWS_AS(PauliString::parse(w, "X7"), WindowError);

    PauliSum sum(w);
    sum.add(PauliString::parse(w, "Z1"));
    sum.add(PauliString::parse(w, "Z1", -1.0));
    CHECK(sum.size() == 0);
}

TEST_CASE("plain-text rendering", "[render]") {
    const Window w{0, 3};
    CHECK(to_string(PauliString::parse(w, "Z0 Z1 X2")) == "Z0 Z1 X2");
    CHECK(to_string(PauliString::parse(w, "Y0 X1", Complex(0, -1))) == "-i*Y0 X1");
    CHECK(to_string(PauliString(w)) == "I");
    CHECK(to_string(PauliString::parse(w, "Z3", 0.5)) == "0.5*Z3");
    CHECK(to_string(FermionMonomial::creation(0) * FermionMonomial::annihilation(0)) == "c+0 c0");
    CHECK(to_string(occupation_sign(1)) == "-i*a1 b1");
    CHECK(to_string(Parity::odd) == "odd");
}
