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
 * @brief Expectation values in quasi-free states and the Z2 index.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qfchain/ed.hpp"
#include "qfchain/errors.hpp"
#include "qfchain/jordan_wigner.hpp"
#include "qfchain/pfaffian.hpp"
#include "qfchain/quasifree.hpp"

namespace qfchain {

/// Numerical thresholds shared by the observables.
struct Tolerances {
    double zero_mode_tol = 1e-8;
    double wedge_tol = 1e-6;
    double eta = 1e-3;
    double tail_tol = 0.05;
    double conv_tol = 1e-6;
    double variance_floor = 1e-12;
};

// ---------------------------------------------------------------------------
// Wick expectations

/// <a_{l_1} ... a_{l_2m}> = (-i)^m Pf(Gamma restricted to l), labels increasing.
inline Complex wick_expectation(const MajoranaCovariance& state, const MajoranaMonomial& mono) {
    if (mono.coeff == Complex(0, 0)) return 0.0;
    if (mono.parity() == Parity::odd) return 0.0;
    const auto m = static_cast<Index>(mono.labels.size());
    std::vector<Index> rows(mono.labels.size());
    for (std::size_t k = 0; k < rows.size(); ++k) rows[k] = state.local_index(mono.labels[k]);
    if (m == 0) return mono.coeff;
    Eigen::MatrixXd sub(m, m);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            sub(i, j) = state.gamma()(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
        }
    }
    const Phase phase{static_cast<int>((3 * (m / 2)) % 4)};
    return mono.coeff * phase.value() * pfaffian(sub);
}

inline Complex wick_expectation(const MajoranaCovariance& state, const MajoranaSum& sum) {
    Complex total = 0.0;
    for (const auto& term : sum.terms()) total += wick_expectation(state, term);
    return total;
}

inline Complex wick_expectation(const MajoranaCovariance& state, const FermionMonomial& mono) {
    if (mono.parity() == Parity::odd) {
        for (const auto& f : mono.factors) state.local_index(majorana_label(f.site, 0));
        return 0.0;
    }
    return wick_expectation(state, to_majorana(mono));
}

inline Complex wick_expectation(const MajoranaCovariance& state, const FermionSum& sum) {
    Complex total = 0.0;
    for (const auto& term : sum.terms) total += wick_expectation(state, term);
    return total;
}

// ---------------------------------------------------------------------------
// String order

/**
 * psi(Q1 S[0, l-1] tau_l(Q2)) for string lengths l = 2k (or 2k + 1 when
 * odd_length is set). Q1 lives on sites < 0, Q2 on sites >= 0 before the shift.
 */
struct StringCorrelatorSpec {
    FermionMonomial q1;
    FermionMonomial q2;
    std::vector<long> k_values;
    bool odd_length = false;
    /// Sites that must remain between the shifted Q2 and the right edge.
    long edge_margin = 10;

    long string_length(long k) const { return 2 * k + (odd_length ? 1 : 0); }
};

/// Q1 = (c^dag - c)_{-1}, Q2 = (c^dag + c)_0; the product is -X_{-1} X_{l} under Jordan-Wigner.
inline StringCorrelatorSpec string_pair_x(std::vector<long> k_values = {}) {
    return {FermionMonomial{Complex(0, 1), {{-1, FermionKind::majorana_odd}}}, FermionMonomial::majorana_even(0),
            std::move(k_values)};
}

/// Q1 = i a_{-1}, Q2 = b_0: the Y Y analogue of string_pair_x.
inline StringCorrelatorSpec string_pair_y(std::vector<long> k_values = {}) {
    return {FermionMonomial{Complex(0, 1), {{-1, FermionKind::majorana_even}}}, FermionMonomial::majorana_odd(0),
            std::move(k_values)};
}

inline std::vector<long> k_range(long first, long last) {
    std::vector<long> out;
    for (long k = first; k <= last; ++k) out.push_back(k);
    return out;
}

struct StringPoint {
    long k = 0;
    Complex value;
};

/// Largest k for which the shifted Q2 keeps the edge margin.
inline long max_string_k(const MajoranaCovariance& state, const StringCorrelatorSpec& spec) {
    const long room = state.last_site() - spec.edge_margin - spec.q2.max_site() - (spec.odd_length ? 1 : 0);
    return room < 0 ? -1 : room / 2;
}

inline std::vector<StringPoint> string_correlator(const MajoranaCovariance& state, const StringCorrelatorSpec& spec) {
    if (spec.q1.parity() != Parity::odd || spec.q2.parity() != Parity::odd) {
        throw ValidationError("string correlator end operators must both be odd");
    }
    if (spec.q1.empty() || spec.q1.max_site() >= 0) throw ValidationError("Q1 must be supported on sites < 0");
    if (spec.q2.empty() || spec.q2.min_site() < 0) throw ValidationError("Q2 must be supported on sites >= 0");
    if (spec.q1.min_site() < state.first_site()) {
        throw WindowError("Q1 reaches site " + std::to_string(spec.q1.min_site()) + ", covariance starts at " +
                          std::to_string(state.first_site()));
    }

    const MajoranaSum q1 = to_majorana(spec.q1);
    std::vector<StringPoint> out;
    out.reserve(spec.k_values.size());
    for (long k : spec.k_values) {
        if (k < 0) throw ValidationError("string half-length k must be non-negative");
        const long length = spec.string_length(k);
        const FermionMonomial q2 = shifted(spec.q2, length);
        if (q2.max_site() > state.last_site() - spec.edge_margin) {
            throw WindowError("string of length " + std::to_string(length) + " puts Q2 at site " +
                              std::to_string(q2.max_site()) + ", closer than " + std::to_string(spec.edge_margin) +
                              " sites to the edge at " + std::to_string(state.last_site()));
        }
        MajoranaMonomial string{Phase{static_cast<int>((3 * length) % 4)}.value(), {}};
        for (long j = 0; j < length; ++j) {
            string.labels.push_back(majorana_label(j, 0));
            string.labels.push_back(majorana_label(j, 1));
        }
        const MajoranaSum product = q1 * MajoranaSum(string) * to_majorana(q2);
        out.push_back({k, wick_expectation(state, product)});
    }
    return out;
}

struct StringOrderDetection {
    bool detected = false;
    double estimate = 0.0;
    int period_hint = 1;
};

namespace detail {

struct TailStats {
    double mean = 0.0;
    double spread = 0.0;
};

inline TailStats tail_stats(const std::vector<double>& values) {
    TailStats s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.spread = *hi - *lo;
    return s;
}

inline bool stable(const TailStats& s, const Tolerances& tol) {
    return std::abs(s.mean) > tol.eta && s.spread < tol.tail_tol * std::abs(s.mean);
}

}  // namespace detail

/**
 * Detection of a nonvanishing k -> infinity limit from the last 10 points.
 * When the full tail does not settle, the last 10 even-k points are tried
 * and a success is reported with period_hint 2.
 */
inline StringOrderDetection detect_string_order(const std::vector<StringPoint>& series, const Tolerances& tol = {}) {
    constexpr std::size_t minimum = 20;
    constexpr std::size_t tail = 10;
    if (series.size() < minimum) {
        throw ValidationError("string order detection needs at least " + std::to_string(minimum) + " points, got " +
                              std::to_string(series.size()));
    }
    std::vector<double> last;
    for (std::size_t i = series.size() - tail; i < series.size(); ++i) last.push_back(series[i].value.real());
    const detail::TailStats full = detail::tail_stats(last);
    if (detail::stable(full, tol)) return {true, full.mean, 1};

    std::vector<double> even;
    for (auto it = series.rbegin(); it != series.rend() && even.size() < tail; ++it) {
        if (it->k % 2 == 0) even.push_back(it->value.real());
    }
    if (even.size() == tail) {
        const detail::TailStats sub = detail::tail_stats(even);
        if (detail::stable(sub, tol)) return {true, sub.mean, 2};
    }
    return {false, full.mean, 1};
}

// ---------------------------------------------------------------------------
// Split defect

enum class SplitVerdict { converged, diverging, inconclusive };

inline std::string to_string(SplitVerdict v) {
    switch (v) {
        case SplitVerdict::converged: return "converged";
        case SplitVerdict::diverging: return "diverging";
        case SplitVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct SplitDefectSeries {
    std::vector<long> windows;
    std::vector<double> hs_norms;
    SplitVerdict verdict = SplitVerdict::inconclusive;
};

inline constexpr long split_margin = 20;

namespace detail {

inline void check_windows(const std::vector<long>& windows, long cut, long first_site, long last_site) {
    if (windows.empty()) throw ValidationError("split defect needs at least one window");
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i] < 1) throw ValidationError("window half-widths must be positive");
        if (i > 0 && windows[i] <= windows[i - 1]) throw ValidationError("windows must be strictly increasing");
    }
    const long w = windows.back();
    if (cut - w - split_margin < first_site || cut + w - 1 + split_margin > last_site) {
        throw WindowError("window " + std::to_string(w) + " around cut " + std::to_string(cut) +
                          " leaves less than " + std::to_string(split_margin) + " sites to the edges [" +
                          std::to_string(first_site) + ", " + std::to_string(last_site) + "]");
    }
}

inline SplitVerdict classify(const std::vector<double>& norms, double conv_tol) {
    std::vector<double> inc;
    for (std::size_t i = 1; i < norms.size(); ++i) inc.push_back(norms[i] - norms[i - 1]);
    if (inc.size() >= 3 && std::all_of(inc.end() - 3, inc.end(), [&](double d) { return std::abs(d) < conv_tol; })) {
        return SplitVerdict::converged;
    }
    if (inc.size() >= 5 && inc.back() > conv_tol && std::is_sorted(inc.end() - 5, inc.end())) {
        return SplitVerdict::diverging;
    }
    return SplitVerdict::inconclusive;
}

// Sum of |f(l, r)|^2 over l in [cut - w, cut), r in [cut, cut + w), accumulated
// over increasing w so every window costs only its new rows and columns.
template <typename Entry>
std::vector<double> cross_norms(const std::vector<long>& windows, long cut, long offset, Entry entry) {
    std::vector<double> out;
    double sum = 0.0;
    long done = 0;
    auto block = [&](long l, long r) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) s += entry(2 * (l - offset) + a, 2 * (r - offset) + b);
        }
        return s;
    };
    for (long w : windows) {
        for (long d = done + 1; d <= w; ++d) {
            const long l = cut - d;
            const long r = cut + d - 1;
            for (long x = cut - d + 1; x < cut; ++x) sum += block(x, r);
            for (long y = cut; y < cut + d - 1; ++y) sum += block(l, y);
            sum += block(l, r);
        }
        done = w;
        out.push_back(sum);
    }
    return out;
}

}  // namespace detail

/// Frobenius norms of (theta E theta - E) on the 2w sites [cut - w, cut + w).
inline SplitDefectSeries split_defect(const MajoranaCovariance& state, const SelfDualCut& cut,
                                      const std::vector<long>& windows, double conv_tol = 1e-6) {
    detail::check_windows(windows, cut.cut, state.first_site(), state.last_site());
    const Eigen::MatrixXd& g = state.gamma();
    std::vector<double> sums = detail::cross_norms(windows, cut.cut, state.site_offset(), [&](Index p, Index q) {
        return 2.0 * g(p, q) * g(p, q);
    });
    SplitDefectSeries out{windows, {}, SplitVerdict::inconclusive};
    for (double s : sums) out.hs_norms.push_back(std::sqrt(s));
    out.verdict = detail::classify(out.hs_norms, conv_tol);
    return out;
}

/// Same series from a basis projection E on sites [site_offset, ...).
inline SplitDefectSeries split_defect(const Eigen::MatrixXcd& projection, long site_offset, const SelfDualCut& cut,
                                      const std::vector<long>& windows, double conv_tol = 1e-6) {
    const long sites = static_cast<long>(projection.rows() / 2);
    detail::check_windows(windows, cut.cut, site_offset, site_offset + sites - 1);
    std::vector<double> sums = detail::cross_norms(windows, cut.cut, site_offset, [&](Index p, Index q) {
        return 4.0 * (std::norm(projection(p, q)) + std::norm(projection(q, p)));
    });
    SplitDefectSeries out{windows, {}, SplitVerdict::inconclusive};
    for (double s : sums) out.hs_norms.push_back(std::sqrt(s));
    out.verdict = detail::classify(out.hs_norms, conv_tol);
    return out;
}

/// 10, 20, ... up to half the distance from the cut to the nearer edge.
inline std::vector<long> auto_split_windows(const MajoranaCovariance& state, long cut) {
    const long room = std::min(cut - state.first_site(), state.last_site() + 1 - cut);
    const long reach = std::min(room / 2, room - split_margin);
    std::vector<long> out;
    for (long w = 10; w <= reach; w += 10) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------
// Z2 index

/// Sign of Pf h(0) Pf h(pi) from the Bloch matrix of a translation-invariant chain.
struct MomentumIndex {
    double pf_zero = 0.0;
    double pf_pi = 0.0;
    int index = 0;
};

/**
 * On a ring every cell is used; on an open chain the Bloch matrix is read off
 * a central row and translation invariance is required across the middle
 * half. Returns nothing when the chain is not translation invariant or the
 * product of Pfaffians vanishes.
 */
inline std::optional<MomentumIndex> momentum_index(const QuadraticHamiltonian& ham) {
    const Index n = ham.sites();
    const Index range = ham.range();
    const Eigen::MatrixXd h = majorana_matrix(ham);
    const bool ring = ham.boundary() == Boundary::ring;
    Index lo = 0;
    Index hi = n;
    if (!ring) {
        lo = std::max(range, n / 4);
        hi = std::min(n - range, n - n / 4);
        if (hi - lo < 2) return std::nullopt;
    }
    auto wrap = [&](Index x) { return ((x % n) + n) % n; };
    const Index x0 = ring ? 0 : n / 2;
    double scale = 0.0;
    for (Index x = lo; x < hi; ++x) {
        for (Index r = -range; r <= range; ++r) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const double ref = h(2 * x0 + a, 2 * wrap(x0 + r) + b);
                    const double here = h(2 * x + a, 2 * wrap(x + r) + b);
                    scale = std::max(scale, std::abs(ref));
                    if (std::abs(ref - here) > 1e-12) return std::nullopt;
                }
            }
        }
    }
    MomentumIndex out;
    for (Index r = -range; r <= range; ++r) {
        const double v = h(2 * x0, 2 * wrap(x0 + r) + 1);
        out.pf_zero += v;
        out.pf_pi += (r % 2 == 0) ? v : -v;
    }
    const double product = out.pf_zero * out.pf_pi;
    if (std::abs(product) <= 1e-12 * std::max(1.0, scale * scale)) return std::nullopt;
    out.index = product > 0.0 ? 1 : -1;
    return out;
}

struct Z2Options {
    Tolerances tolerances;
    /// Split windows; empty selects auto_split_windows.
    std::vector<long> windows;
    /// Sites between the longest string and the right edge.
    long string_margin = 30;
    /// Number of trailing k values evaluated for the string estimator; 0 means all from k = 0.
    long string_points = 20;
    bool use_string_estimator = true;
};

struct Z2IndexResult {
    int index = 1;
    long dim_wedge = 0;
    /// "wedge", "momentum", "string" -> sign; absent estimators are omitted.
    std::map<std::string, int> estimator_values;
    bool agreement = true;
    /// Eigenvalues of E (1 - theta E theta) E in (0.1, 0.9): neither counted nor clearly excluded.
    std::vector<double> intermediate_eigenvalues;
    SplitDefectSeries split;
    std::optional<MomentumIndex> momentum;
    std::optional<StringOrderDetection> string_x;
    std::optional<StringOrderDetection> string_y;
    long wedge_window = 0;
};

/**
 * Unit eigenvalues of E (1 - theta_- E theta_-) E on the Majoranas of sites
 * [cut - w, cut + w), E = (1 + i Gamma) / 2 built from the restricted Gamma.
 */
inline std::pair<long, std::vector<double>> wedge_dimension(const MajoranaCovariance& state, long cut, long w,
                                                            double wedge_tol) {
    const long first = std::max(state.first_site(), cut - w);
    const long last = std::min(state.last_site(), cut + w - 1);
    const Index start = 2 * (first - state.site_offset());
    const Index m = 2 * (last - first + 1);
    const Eigen::MatrixXd g = state.gamma().block(start, start, m, m);
    Eigen::VectorXd theta(m);
    for (Index p = 0; p < m; ++p) theta(p) = first + p / 2 < cut ? -1.0 : 1.0;
    const Eigen::MatrixXd tg = theta.asDiagonal() * g * theta.asDiagonal();
    const Complex i(0.0, 1.0);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
    const Eigen::MatrixXcd e = 0.5 * (id + i * g.cast<Complex>());
    const Eigen::MatrixXcd f = 0.5 * (id - i * tg.cast<Complex>());
    Eigen::MatrixXcd x = e * f * e;
    x = 0.5 * (x + x.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(x);
    long count = 0;
    std::vector<double> intermediate;
    for (Index k = 0; k < m; ++k) {
        const double v = solver.eigenvalues()(k);
        if (v > 1.0 - wedge_tol) {
            ++count;
        } else if (v > 0.1 && v < 0.9) {
            // Truncating Gamma leaves unpaired Majoranas at the window ends; only
            // report modes living in the inner half.
            double inner = 0.0;
            for (Index p = 0; p < m; ++p) {
                const long site = first + p / 2;
                if (site >= cut - w / 2 && site < cut + w / 2) inner += std::norm(solver.eigenvectors()(p, k));
            }
            if (inner > 0.5) intermediate.push_back(v);
        }
    }
    return {count, intermediate};
}

inline Z2IndexResult z2_index(const MajoranaCovariance& state, const SelfDualCut& cut,
                              const QuadraticHamiltonian* ham = nullptr, const Z2Options& options = {}) {
    const double defect = state.purity_defect();
    if (defect > 1e-8) {
        throw ValidationError("z2_index requires a pure covariance (max |Gamma Gamma^T - 1| = " +
                              std::to_string(defect) + ")");
    }
    Z2IndexResult out;
    const std::vector<long> windows = options.windows.empty() ? auto_split_windows(state, cut.cut) : options.windows;
    if (windows.empty()) throw IndexUndefined("chain too short around the cut for any split window");
    out.split = split_defect(state, cut, windows, options.tolerances.conv_tol);
    if (out.split.verdict != SplitVerdict::converged) {
        throw IndexUndefined("split defect verdict is " + to_string(out.split.verdict) +
                             "; the index is only defined for split states");
    }

    out.wedge_window = windows.back();
    auto [count, intermediate] = wedge_dimension(state, cut.cut, out.wedge_window, options.tolerances.wedge_tol);
    out.dim_wedge = count;
    out.intermediate_eigenvalues = std::move(intermediate);
    out.index = count % 2 == 0 ? 1 : -1;
    out.estimator_values["wedge"] = out.index;

    if (ham != nullptr) {
        out.momentum = momentum_index(*ham);
        if (out.momentum) out.estimator_values["momentum"] = out.momentum->index;
    }

    if (options.use_string_estimator) {
        const MajoranaCovariance centred = state.relabeled(state.site_offset() - cut.cut);
        StringCorrelatorSpec x = string_pair_x();
        StringCorrelatorSpec y = string_pair_y();
        x.edge_margin = y.edge_margin = options.string_margin;
        const long k_max = centred.first_site() <= -1 ? max_string_k(centred, x) : -1;
        const long k_min = options.string_points > 0 ? std::max(0L, k_max - options.string_points + 1) : 0;
        if (k_max - k_min + 1 >= 20) {
            x.k_values = y.k_values = k_range(k_min, k_max);
            out.string_x = detect_string_order(string_correlator(centred, x), options.tolerances);
            out.string_y = detect_string_order(string_correlator(centred, y), options.tolerances);
            out.estimator_values["string"] = (out.string_x->detected || out.string_y->detected) ? -1 : 1;
        }
    }

    for (const auto& [name, value] : out.estimator_values) out.agreement = out.agreement && value == out.index;
    return out;
}

// ---------------------------------------------------------------------------
// Gap inequality

struct GapCheck {
    double gap = 0.0;
    double m_empirical = 0.0;
    /// Per probe; absent when the variance is below the floor.
    std::vector<std::optional<double>> ratios;
    bool satisfied = true;
};

/// psi(Q^* [H, Q]) / (psi(Q^* Q) - |psi(Q)|^2) for every probe against the ED gap.
inline GapCheck gap_inequality_check(const EDState& ground, const EDOperator& ham, const std::vector<FermionSum>& probes,
                                     double variance_floor = 1e-12) {
    if (ground.parity_sector == ParitySector::mixed) {
        throw DegenerateGroundState("gap inequality needs a nondegenerate ground state", ground.low_energies);
    }
    const EDOperator h = to_frame(ham, ground.frame);
    const Eigen::VectorXcd& v = ground.vector;
    const Eigen::VectorXcd hv = h.matrix * v;

    GapCheck out;
    out.gap = ground.gap;
    out.m_empirical = std::numeric_limits<double>::infinity();
    for (const auto& probe : probes) {
        const EDOperator q = to_frame(ed_operator(probe, ground.sites), ground.frame);
        const Eigen::VectorXcd qv = q.matrix * v;
        const Eigen::VectorXcd qhv = q.matrix * hv;
        const double variance = qv.squaredNorm() - std::norm(v.dot(qv));
        if (variance < variance_floor) {
            out.ratios.push_back(std::nullopt);
            continue;
        }
        const Complex numerator = qv.dot(h.matrix * qv) - qv.dot(qhv);
        const double ratio = numerator.real() / variance;
        out.ratios.push_back(ratio);
        out.m_empirical = std::min(out.m_empirical, ratio);
    }
    out.satisfied = !(out.m_empirical < out.gap - 1e-9 * std::max(1.0, out.gap));
    return out;
}

}  // namespace qfchain
