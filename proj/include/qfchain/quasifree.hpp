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
 * @brief Quadratic fermion chains and their quasi-free states.
 *
 * Conventions used throughout the library:
 *
 *  - Majorana operators a_{2j} = c_j + c_j^dag and a_{2j+1} = i (c_j - c_j^dag),
 *    so that 2 c_j^dag c_j - 1 = -i a_{2j} a_{2j+1}.
 *  - A quadratic Hamiltonian with hopping A (Hermitian) and pairing B
 *    (antisymmetric) is
 *        H = sum_ij A_ij (c_i^dag c_j - c_j c_i^dag)
 *          + sum_ij (B_ij c_i^dag c_j^dag + conj(B_ij) c_j c_i),
 *    which equals (i/4) sum_pq h_pq a_p a_q with h the real antisymmetric
 *    Majorana matrix returned by majorana_matrix(). There is no constant term.
 *  - A state is described by Gamma_pq = (i/2) <[a_p, a_q]>, so that
 *    <a_p a_q> = delta_pq - i Gamma_pq.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfchain/errors.hpp"
#include "qfchain/pfaffian.hpp"

namespace qfchain {

enum class Boundary { open, ring };

inline std::string to_string(Boundary b) { return b == Boundary::open ? "open" : "ring"; }

inline Boundary boundary_from_string(const std::string& name) {
    if (name == "open") return Boundary::open;
    if (name == "ring") return Boundary::ring;
    throw ModelError("unknown boundary '" + name + "' (expected open or ring)");
}

using ModelParams = std::map<std::string, double>;

/// Hopping/pairing coefficients of a finite chain. Validated on construction.
class QuadraticHamiltonian {
  public:
    static constexpr double tolerance = 1e-12;

    QuadraticHamiltonian(Eigen::MatrixXcd hopping, Eigen::MatrixXcd pairing, Boundary boundary)
        : hopping_(std::move(hopping)), pairing_(std::move(pairing)), boundary_(boundary) {
        const Index n = hopping_.rows();
        if (hopping_.cols() != n || pairing_.rows() != n || pairing_.cols() != n) {
            throw ValidationError("hopping and pairing must be square matrices of the same size");
        }
        if (n < 1) throw ValidationError("a chain needs at least one site");
        if ((hopping_ - hopping_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
            throw ValidationError("hopping matrix is not Hermitian");
        }
        if ((pairing_ + pairing_.transpose()).cwiseAbs().maxCoeff() > tolerance) {
            throw ValidationError("pairing matrix is not antisymmetric");
        }
        hopping_ = 0.5 * (hopping_ + hopping_.adjoint()).eval();
        pairing_ = 0.5 * (pairing_ - pairing_.transpose()).eval();
    }

    Index sites() const noexcept { return hopping_.rows(); }
    const Eigen::MatrixXcd& hopping() const noexcept { return hopping_; }
    const Eigen::MatrixXcd& pairing() const noexcept { return pairing_; }
    Boundary boundary() const noexcept { return boundary_; }

    bool is_real() const {
        return hopping_.imag().cwiseAbs().maxCoeff() == 0.0 && pairing_.imag().cwiseAbs().maxCoeff() == 0.0;
    }

    /// Largest |i - j| (circular distance on a ring) with a nonzero coefficient.
    Index range() const {
        Index r = 0;
        const Index n = sites();
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (hopping_(i, j) == 0.0 && pairing_(i, j) == 0.0) continue;
                Index d = std::abs(i - j);
                if (boundary_ == Boundary::ring) d = std::min(d, n - d);
                r = std::max(r, d);
            }
        }
        return r;
    }

    // Provenance, filled in by build_model.
    std::string name = "explicit";
    ModelParams params;

  private:
    Eigen::MatrixXcd hopping_;
    Eigen::MatrixXcd pairing_;
    Boundary boundary_;
};

namespace detail {

inline double require_param(const ModelParams& params, const std::string& model, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw ModelError("model '" + model + "' requires parameter '" + key + "'");
    return it->second;
}

inline void reject_extra_params(const ModelParams& params, const std::string& model,
                                const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ModelError("model '" + model + "' has no parameter '" + key + "'");
        }
    }
}

// Banded chain: onsite[0] on the diagonal, hop[r] and pair[r] on distance r bonds.
inline QuadraticHamiltonian banded_chain(Index sites, const std::vector<double>& hop, const std::vector<double>& pair,
                                         Boundary boundary) {
    const Index range = static_cast<Index>(std::max(hop.size(), pair.size())) - 1;
    const Index minimum = boundary == Boundary::ring ? 2 * range + 1 : range + 1;
    if (sites < std::max<Index>(2, minimum)) {
        throw ModelError("chain of " + std::to_string(sites) + " sites is too small for interaction range " +
                         std::to_string(range) + " with " + to_string(boundary) + " boundary");
    }
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(sites, sites);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(sites, sites);
    for (Index i = 0; i < sites; ++i) {
        for (Index r = 0; r <= range; ++r) {
            Index j = i + r;
            if (j >= sites) {
                if (boundary == Boundary::open) continue;
                j -= sites;
            }
            const double t = r < static_cast<Index>(hop.size()) ? hop[static_cast<std::size_t>(r)] : 0.0;
            const double d = r < static_cast<Index>(pair.size()) ? pair[static_cast<std::size_t>(r)] : 0.0;
            if (r == 0) {
                a(i, i) += t;
                continue;
            }
            a(i, j) += t;
            a(j, i) += t;
            b(i, j) += d;
            b(j, i) -= d;
        }
    }
    return QuadraticHamiltonian(std::move(a), std::move(b), boundary);
}

}  // namespace detail

/// Names accepted by build_model.
inline const std::vector<std::string>& model_catalog() {
    static const std::vector<std::string> names{"trivial", "kitaev", "xy", "custom"};
    return names;
}

/**
 * Catalog of translation-invariant chains.
 *
 *  - trivial {mu > 0}:       H = mu sum_j (2 n_j - 1); ground state is the Fock vacuum.
 *  - kitaev  {J, lambda}:    H = -J sum_k (c_k^dag - c_k)(c_{k+1}^dag + c_{k+1}) + lambda sum_k (2 n_k - 1).
 *  - xy      {gamma, lambda}: H = -sum_k [(c_k^dag c_{k+1} + h.c.) + gamma (c_k^dag c_{k+1}^dag + h.c.)]
 *                              + lambda sum_k (2 n_k - 1).
 *  - custom  {t0, t1, ..., d1, d2, ...}: A_{k,k+r} = A_{k+r,k} = t_r, B_{k,k+r} = -B_{k+r,k} = d_r.
 *
 * Ring boundaries close the chain with the same bond (periodic fermions).
 */
inline QuadraticHamiltonian build_model(const std::string& name, Index sites, const ModelParams& params,
                                        Boundary boundary = Boundary::open) {
    if (sites < 2) throw ModelError("a chain needs at least 2 sites, got " + std::to_string(sites));

    std::vector<double> hop;
    std::vector<double> pair;
    if (name == "trivial") {
        detail::reject_extra_params(params, name, {"mu"});
        const double mu = detail::require_param(params, name, "mu");
        if (!(mu > 0.0)) throw ModelError("trivial chain requires mu > 0");
        hop = {mu};
    } else if (name == "kitaev") {
        detail::reject_extra_params(params, name, {"J", "lambda"});
        const double j = detail::require_param(params, name, "J");
        const double lambda = detail::require_param(params, name, "lambda");
        hop = {lambda, -0.5 * j};
        pair = {0.0, -0.5 * j};
    } else if (name == "xy") {
        detail::reject_extra_params(params, name, {"gamma", "lambda"});
        const double gamma = detail::require_param(params, name, "gamma");
        const double lambda = detail::require_param(params, name, "lambda");
        hop = {lambda, -0.5};
        pair = {0.0, -0.5 * gamma};
    } else if (name == "custom") {
        std::map<Index, double> t;
        std::map<Index, double> d;
        for (const auto& [key, value] : params) {
            std::size_t used = 0;
            long r = -1;
            if (key.size() >= 2 && (key[0] == 't' || key[0] == 'd')) {
                try {
                    r = std::stol(key.substr(1), &used);
                } catch (const std::exception&) {
                    r = -1;
                }
            }
            if (r < 0 || used != key.size() - 1 || (key[0] == 'd' && r == 0)) {
                throw ModelError("custom model parameters are t0, t1, ... and d1, d2, ...; got '" + key + "'");
            }
            (key[0] == 't' ? t : d)[r] = value;
        }
        if (t.empty() && d.empty()) throw ModelError("custom model needs at least one band coefficient");
        Index range = 0;
        for (const auto& [r, v] : t) range = std::max(range, r);
        for (const auto& [r, v] : d) range = std::max(range, r);
        hop.assign(static_cast<std::size_t>(range + 1), 0.0);
        pair.assign(static_cast<std::size_t>(range + 1), 0.0);
        for (const auto& [r, v] : t) hop[static_cast<std::size_t>(r)] = v;
        for (const auto& [r, v] : d) pair[static_cast<std::size_t>(r)] = v;
    } else {
        throw ModelError("unknown model '" + name + "'");
    }

    QuadraticHamiltonian h = detail::banded_chain(sites, hop, pair, boundary);
    h.name = name;
    h.params = params;
    return h;
}

/// Real antisymmetric h with H = (i/4) sum_pq h_pq a_p a_q, in interleaved
/// ordering (a_0, a_1) = site 0, (a_2, a_3) = site 1, ...
inline Eigen::MatrixXd majorana_matrix(const QuadraticHamiltonian& ham) {
    const Index n = ham.sites();
    const Eigen::MatrixXd ar = ham.hopping().real();
    const Eigen::MatrixXd ai = ham.hopping().imag();
    const Eigen::MatrixXd br = ham.pairing().real();
    const Eigen::MatrixXd bi = ham.pairing().imag();
    Eigen::MatrixXd h(2 * n, 2 * n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            h(2 * i, 2 * j) = 2.0 * (ai(i, j) + bi(i, j));
            h(2 * i + 1, 2 * j + 1) = 2.0 * (ai(i, j) - bi(i, j));
            h(2 * i, 2 * j + 1) = 2.0 * (br(i, j) - ar(i, j));
            h(2 * j + 1, 2 * i) = -h(2 * i, 2 * j + 1);
        }
    }
    return 0.5 * (h - h.transpose());
}

/// Majorana covariance of a state on sites [site_offset, site_offset + sites).
class MajoranaCovariance {
  public:
    static constexpr double tolerance = 1e-12;

    MajoranaCovariance() = default;

    explicit MajoranaCovariance(const Eigen::MatrixXd& gamma, long site_offset = 0) : site_offset_(site_offset) {
        if (gamma.rows() != gamma.cols() || gamma.rows() % 2 != 0) {
            throw ValidationError("covariance must be a square matrix of even dimension");
        }
        if (gamma.size() > 0 && (gamma + gamma.transpose()).cwiseAbs().maxCoeff() > tolerance) {
            throw ValidationError("covariance is not antisymmetric");
        }
        gamma_ = 0.5 * (gamma - gamma.transpose());
    }

    const Eigen::MatrixXd& gamma() const noexcept { return gamma_; }
    Index majorana_count() const noexcept { return gamma_.rows(); }
    Index sites() const noexcept { return gamma_.rows() / 2; }
    long site_offset() const noexcept { return site_offset_; }
    long first_site() const noexcept { return site_offset_; }
    long last_site() const noexcept { return site_offset_ + static_cast<long>(sites()) - 1; }
    bool contains_site(long site) const noexcept { return site >= first_site() && site <= last_site(); }

    /// Local row index of the Majorana with global label 2*site + component.
    Index local_index(long majorana) const {
        const long site = (majorana - (majorana & 1)) / 2;
        if (!contains_site(site)) {
            throw WindowError("site " + std::to_string(site) + " is outside the covariance window [" +
                              std::to_string(first_site()) + ", " + std::to_string(last_site()) + "]");
        }
        return static_cast<Index>(majorana - 2 * site_offset_);
    }

    MajoranaCovariance relabeled(long new_offset) const {
        MajoranaCovariance out = *this;
        out.site_offset_ = new_offset;
        return out;
    }

    /// max |Gamma Gamma^T - 1|; zero for pure states.
    double purity_defect() const {
        const Index n = majorana_count();
        if (n == 0) return 0.0;
        return (gamma_ * gamma_.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    }

    bool is_pure(double tol = 1e-8) const { return purity_defect() <= tol; }

    double max_singular_value() const {
        if (majorana_count() == 0) return 0.0;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(gamma_);
        return svd.singularValues()(0);
    }

    /// Expectation of the total parity (-1)^N, equal to Pf(Gamma).
    double parity() const { return pfaffian(gamma_); }

  private:
    Eigen::MatrixXd gamma_;
    long site_offset_ = 0;
};

/// Bipartition at `cut`: left = sites < cut, right = sites >= cut.
struct SelfDualCut {
    long cut = 0;

    /// Diagonal of theta_minus on the Majoranas of `state`: -1 left, +1 right.
    Eigen::VectorXd theta_minus(const MajoranaCovariance& state) const {
        Eigen::VectorXd theta(state.majorana_count());
        for (Index p = 0; p < theta.size(); ++p) {
            const long site = state.first_site() + static_cast<long>(p / 2);
            theta(p) = site < cut ? -1.0 : 1.0;
        }
        return theta;
    }

    bool is_left(const MajoranaCovariance& state, Index p) const {
        return state.first_site() + static_cast<long>(p / 2) < cut;
    }
};

struct GroundOptions {
    /// Single-particle energies below zero_mode_tol * max energy count as zero modes.
    double zero_mode_tol = 1e-8;
    /// Zero modes whose mean weight on the middle half of an open chain stays
    /// below this are treated as edge modes and completed; others are critical.
    double edge_bulk_tol = 1e-6;
};

/// Everything computed along the way to a quasi-free ground state.
struct GroundSolution {
    MajoranaCovariance covariance;
    /// Single-particle excitation energies, descending. H = sum_k e_k (b_k^dag b_k - 1/2).
    Eigen::VectorXd energies;
    double energy = 0.0;
    /// Number of edge zero modes that were completed to the even-parity state.
    Index edge_zero_modes = 0;
};

/// <H> in the state described by `state`.
inline double energy_expectation(const QuadraticHamiltonian& ham, const MajoranaCovariance& state) {
    return 0.25 * (majorana_matrix(ham).array() * state.gamma().array()).sum();
}

namespace detail {

struct ModeBasis {
    Eigen::MatrixXd first;   // column k pairs with second.col(k) in a [[0, e], [-e, 0]] block
    Eigen::MatrixXd second;
    Eigen::VectorXd energies;
    // det of the orthogonal matrix [first_0, second_0, first_1, ...]; only
    // needed when zero modes must be completed, so evaluated on demand.
    std::function<double()> orientation;
    // Chiral case only: Gamma restricted to (even, odd) Majoranas.
    std::optional<Eigen::MatrixXd> even_odd_gamma;
};

// Real coefficients make h bipartite (even <-> odd Majoranas only); then an
// L x L SVD of the even-odd block is enough.
inline ModeBasis chiral_modes(const Eigen::MatrixXd& h) {
    const Index n = h.rows() / 2;
    Eigen::MatrixXd k(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) k(i, j) = h(2 * i, 2 * j + 1);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd u = svd.matrixU();
    Eigen::MatrixXd v = svd.matrixV();
    const Eigen::VectorXd& sigma = svd.singularValues();

    ModeBasis modes{Eigen::MatrixXd::Zero(2 * n, n), Eigen::MatrixXd::Zero(2 * n, n), sigma, {}, {}};
    for (Index i = 0; i < n; ++i) {
        modes.first.row(2 * i) = u.row(i);
        modes.second.row(2 * i + 1) = v.row(i);
    }
    modes.even_odd_gamma = -u * v.transpose();
    modes.orientation = [u = std::move(u), v = std::move(v)] { return u.determinant() * v.determinant(); };
    return modes;
}

inline ModeBasis generic_modes(const Eigen::MatrixXd& h) {
    CanonicalForm form = canonical_form(AntisymmetricMatrix(h));
    const Index n = h.rows() / 2;
    ModeBasis modes{Eigen::MatrixXd(2 * n, n), Eigen::MatrixXd(2 * n, n), form.lambdas, {}, {}};
    for (Index k = 0; k < n; ++k) {
        modes.first.col(k) = form.orthogonal.col(2 * k);
        modes.second.col(k) = form.orthogonal.col(2 * k + 1);
    }
    modes.orientation = [o = std::move(form.orthogonal)] { return o.determinant(); };
    return modes;
}

inline bool is_chiral(const Eigen::MatrixXd& h) {
    const Index n = h.rows() / 2;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (h(2 * i, 2 * j) != 0.0 || h(2 * i + 1, 2 * j + 1) != 0.0) return false;
        }
    }
    return true;
}

inline ModeBasis single_particle_modes(const QuadraticHamiltonian& ham) {
    const Eigen::MatrixXd h = majorana_matrix(ham);
    return is_chiral(h) ? chiral_modes(h) : generic_modes(h);
}

}  // namespace detail

/// Single-particle excitation energies e_k >= 0, descending.
inline Eigen::VectorXd single_particle_energies(const QuadraticHamiltonian& ham) {
    return detail::single_particle_modes(ham).energies;
}

/**
 * Lowest-energy quasi-free state of `ham`.
 *
 * Every mode with e_k > 0 is emptied. Exact zero modes are only accepted on
 * open chains when they live at the edges; they are then paired so that the
 * total parity Pf(Gamma) is +1. Any other zero mode raises
 * DegenerateGroundState.
 */
inline GroundSolution quasi_free_ground(const QuadraticHamiltonian& ham, const GroundOptions& options = {}) {
    const Index n = ham.sites();
    detail::ModeBasis modes = detail::single_particle_modes(ham);

    const double scale = modes.energies.size() > 0 ? modes.energies.maxCoeff() : 0.0;
    const double threshold = options.zero_mode_tol * scale;
    std::vector<Index> zero;
    for (Index k = 0; k < modes.energies.size(); ++k) {
        if (modes.energies(k) < threshold || scale == 0.0) zero.push_back(k);
    }

    if (!zero.empty()) {
        std::vector<double> offending;
        for (Index k : zero) offending.push_back(modes.energies(k));
        if (ham.boundary() == Boundary::ring) {
            throw DegenerateGroundState("zero single-particle energy on a ring: gapless ground state", offending);
        }
        const Index lo = n / 4;
        const Index hi = n - n / 4;
        double bulk = 0.0;
        for (Index k : zero) {
            bulk += modes.first.col(k).segment(2 * lo, 2 * (hi - lo)).squaredNorm();
            bulk += modes.second.col(k).segment(2 * lo, 2 * (hi - lo)).squaredNorm();
        }
        bulk /= static_cast<double>(2 * zero.size());
        if (n < 8 || bulk > options.edge_bulk_tol) {
            throw DegenerateGroundState("zero single-particle energy with bulk support: degenerate ground state",
                                        offending);
        }
    }

    // Gamma = sum_k (second_k first_k^T - first_k second_k^T), i.e. <i b b'> = -1 per block.
    Eigen::MatrixXd gamma;
    if (modes.even_odd_gamma) {
        gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        const Eigen::MatrixXd& block = *modes.even_odd_gamma;
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) {
                gamma(2 * i, 2 * j + 1) = block(i, j);
                gamma(2 * j + 1, 2 * i) = -block(i, j);
            }
        }
    } else {
        const Eigen::MatrixXd outer = modes.second * modes.first.transpose();
        gamma = outer - outer.transpose();
    }

    if (!zero.empty()) {
        const double parity = modes.orientation() * ((n % 2 == 0) ? 1.0 : -1.0);
        if (parity < 0.0) {
            const Index k = zero.front();
            const Eigen::MatrixXd flip = modes.second.col(k) * modes.first.col(k).transpose();
            gamma -= 2.0 * (flip - flip.transpose());
        }
    }

    GroundSolution out{MajoranaCovariance(gamma), modes.energies, -0.5 * modes.energies.sum(),
                       static_cast<Index>(zero.size())};
    return out;
}

inline MajoranaCovariance ground_covariance(const QuadraticHamiltonian& ham, const GroundOptions& options = {}) {
    return quasi_free_ground(ham, options).covariance;
}

/// Basis projection E = (1 + i Gamma) / 2 on the Majorana space.
inline Eigen::MatrixXcd covariance_to_projection(const MajoranaCovariance& state, double purity_tol = 1e-8) {
    const double defect = state.purity_defect();
    if (defect > purity_tol) {
        throw ValidationError("covariance is not pure (max |Gamma Gamma^T - 1| = " + std::to_string(defect) +
                              "); it does not define a basis projection");
    }
    const Index n = state.majorana_count();
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(n, n);
    e += std::complex<double>(0.0, 1.0) * state.gamma().cast<std::complex<double>>();
    return 0.5 * e;
}

/// O Gamma O^T for an orthogonal O acting on the Majorana operators.
inline MajoranaCovariance bogoliubov_transform(const MajoranaCovariance& state, const Eigen::MatrixXd& rotation) {
    const Index n = state.majorana_count();
    if (rotation.rows() != n || rotation.cols() != n) {
        throw ValidationError("rotation has dimension " + std::to_string(rotation.rows()) + "x" +
                              std::to_string(rotation.cols()) + ", covariance has " + std::to_string(n));
    }
    const double defect = (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        throw ValidationError("rotation is not orthogonal (max |O^T O - 1| = " + std::to_string(defect) + ")");
    }
    Eigen::MatrixXd gamma = rotation * state.gamma() * rotation.transpose();
    return MajoranaCovariance(0.5 * (gamma - gamma.transpose()), state.site_offset());
}

/// Graded product of the two halves: all left-right correlations removed.
inline MajoranaCovariance graded_product(const MajoranaCovariance& state, const SelfDualCut& cut) {
    Eigen::MatrixXd gamma = state.gamma();
    const Index n = gamma.rows();
    for (Index p = 0; p < n; ++p) {
        for (Index q = 0; q < n; ++q) {
            if (cut.is_left(state, p) != cut.is_left(state, q)) gamma(p, q) = 0.0;
        }
    }
    return MajoranaCovariance(gamma, state.site_offset());
}

/// Covariance of the Fock vacuum on `sites` sites.
inline MajoranaCovariance vacuum_covariance(Index sites, long site_offset = 0) {
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2 * sites, 2 * sites);
    for (Index j = 0; j < sites; ++j) {
        gamma(2 * j, 2 * j + 1) = 1.0;
        gamma(2 * j + 1, 2 * j) = -1.0;
    }
    return MajoranaCovariance(gamma, site_offset);
}

}  // namespace qfchain
