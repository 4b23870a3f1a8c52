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
 * @brief Fermion monomials, Pauli strings and the Jordan-Wigner dictionary.
 *
 * Majorana labels are global integers m = 2 * site + component with
 * component 0 for a = c + c^dag and 1 for b = i (c - c^dag). Sites may be
 * negative. On a window [first, last] the strings are anchored at the left
 * edge:
 *
 *     a_{2j}   = S_j X_j,     a_{2j+1} = S_j Y_j,     S_j = prod_{first <= k < j} Z_k,
 *
 * hence Z_j = -i a_{2j} a_{2j+1} = 2 n_j - 1. Odd monomials carry a tail
 * marker standing for the string that would continue to the left of the
 * window in infinite volume. Every phase is an integer power of i.
 */

#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qfchain/errors.hpp"

namespace qfchain {

using Complex = std::complex<double>;

enum class Parity { even, odd };

inline std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// Exact power of i.
struct Phase {
    int quarter_turns = 0;

    Phase& operator*=(Phase other) {
        quarter_turns = (quarter_turns + other.quarter_turns) % 4;
        return *this;
    }
    Complex value() const {
        static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[((quarter_turns % 4) + 4) % 4];
    }
};

inline long majorana_site(long m) { return (m - (m & 1)) / 2; }
inline int majorana_component(long m) { return static_cast<int>(m & 1); }
inline long majorana_label(long site, int component) { return 2 * site + component; }

enum class FermionKind : std::uint8_t { creation, annihilation, majorana_even, majorana_odd };

struct FermionFactor {
    long site = 0;
    FermionKind kind = FermionKind::annihilation;

    friend auto operator<=>(const FermionFactor&, const FermionFactor&) = default;
};

/// coeff * f_1 f_2 ... f_n, factors in product order.
struct FermionMonomial {
    Complex coeff{1.0, 0.0};
    std::vector<FermionFactor> factors;

    static FermionMonomial identity(Complex coeff = 1.0) { return {coeff, {}}; }
    static FermionMonomial creation(long site) { return {1.0, {{site, FermionKind::creation}}}; }
    static FermionMonomial annihilation(long site) { return {1.0, {{site, FermionKind::annihilation}}}; }
    static FermionMonomial majorana_even(long site) { return {1.0, {{site, FermionKind::majorana_even}}}; }
    static FermionMonomial majorana_odd(long site) { return {1.0, {{site, FermionKind::majorana_odd}}}; }
    /// Majorana with global label m.
    static FermionMonomial majorana(long m) {
        return majorana_component(m) == 0 ? majorana_even(majorana_site(m)) : majorana_odd(majorana_site(m));
    }

    Parity parity() const { return factors.size() % 2 == 0 ? Parity::even : Parity::odd; }
    bool empty() const { return factors.empty(); }

    long min_site() const {
        long s = factors.empty() ? 0 : factors.front().site;
        for (const auto& f : factors) s = std::min(s, f.site);
        return s;
    }
    long max_site() const {
        long s = factors.empty() ? 0 : factors.front().site;
        for (const auto& f : factors) s = std::max(s, f.site);
        return s;
    }

    friend bool operator==(const FermionMonomial&, const FermionMonomial&) = default;
};

inline Parity parity(const FermionMonomial& m) { return m.parity(); }

inline FermionMonomial operator*(const FermionMonomial& lhs, const FermionMonomial& rhs) {
    FermionMonomial out{lhs.coeff * rhs.coeff, lhs.factors};
    out.factors.insert(out.factors.end(), rhs.factors.begin(), rhs.factors.end());
    return out;
}

inline FermionMonomial operator*(Complex scalar, FermionMonomial m) {
    m.coeff *= scalar;
    return m;
}

/// Translate every factor by `offset` sites.
inline FermionMonomial shifted(FermionMonomial m, long offset) {
    for (auto& f : m.factors) f.site += offset;
    return m;
}

/// 2 c_j^dag c_j - 1 written as -i a_{2j} a_{2j+1}.
inline FermionMonomial occupation_sign(long site) {
    return {Complex(0, -1), {{site, FermionKind::majorana_even}, {site, FermionKind::majorana_odd}}};
}

/// S[first, last] = prod_{j=first}^{last} (2 c_j^dag c_j - 1); identity when last < first.
inline FermionMonomial string_operator(long first, long last) {
    FermionMonomial out = FermionMonomial::identity();
    for (long j = first; j <= last; ++j) out = out * occupation_sign(j);
    return out;
}

/// Linear combination of fermion monomials.
struct FermionSum {
    std::vector<FermionMonomial> terms;

    FermionSum() = default;
    FermionSum(FermionMonomial m) : terms{std::move(m)} {}  // NOLINT(google-explicit-constructor)
    FermionSum(std::initializer_list<FermionMonomial> list) : terms(list) {}

    FermionSum& operator+=(const FermionSum& other) {
        terms.insert(terms.end(), other.terms.begin(), other.terms.end());
        return *this;
    }
};

inline FermionSum operator+(FermionSum lhs, const FermionSum& rhs) { return lhs += rhs; }

inline FermionSum operator*(const FermionSum& lhs, const FermionSum& rhs) {
    FermionSum out;
    for (const auto& a : lhs.terms) {
        for (const auto& b : rhs.terms) out.terms.push_back(a * b);
    }
    return out;
}

inline FermionSum adjoint(const FermionSum& sum) {
    FermionSum out;
    for (const auto& m : sum.terms) {
        FermionMonomial adj{std::conj(m.coeff), {}};
        for (auto it = m.factors.rbegin(); it != m.factors.rend(); ++it) {
            FermionFactor f = *it;
            if (f.kind == FermionKind::creation) f.kind = FermionKind::annihilation;
            else if (f.kind == FermionKind::annihilation) f.kind = FermionKind::creation;
            adj.factors.push_back(f);
        }
        out.terms.push_back(std::move(adj));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Majorana normal form

/// coeff * a_{m_1} ... a_{m_r} with strictly increasing labels.
struct MajoranaMonomial {
    Complex coeff{1.0, 0.0};
    std::vector<long> labels;

    Parity parity() const { return labels.size() % 2 == 0 ? Parity::even : Parity::odd; }
    friend bool operator==(const MajoranaMonomial&, const MajoranaMonomial&) = default;
};

/// Reorder a Majorana product into increasing labels: each transposition of
/// distinct labels flips the sign, equal neighbours cancel (a^2 = 1).
inline MajoranaMonomial canonicalize(Complex coeff, std::vector<long> product) {
    int sign = 1;
    for (std::size_t i = 1; i < product.size(); ++i) {
        for (std::size_t j = i; j > 0 && product[j - 1] > product[j]; --j) {
            std::swap(product[j - 1], product[j]);
            sign = -sign;
        }
    }
    std::vector<long> labels;
    for (std::size_t i = 0; i < product.size();) {
        if (i + 1 < product.size() && product[i] == product[i + 1]) {
            i += 2;
        } else {
            labels.push_back(product[i]);
            ++i;
        }
    }
    return {coeff * static_cast<double>(sign), std::move(labels)};
}

/// Sum of Majorana monomials keyed by label set (deterministic order).
class MajoranaSum {
  public:
    MajoranaSum() = default;
    explicit MajoranaSum(const MajoranaMonomial& m) { add(m); }

    void add(const MajoranaMonomial& m) {
        if (m.coeff == Complex(0.0, 0.0)) return;
        auto [it, inserted] = terms_.try_emplace(m.labels, m.coeff);
        if (!inserted) {
            it->second += m.coeff;
            if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
        }
    }

    MajoranaSum& operator+=(const MajoranaSum& other) {
        for (const auto& [labels, coeff] : other.terms_) add({coeff, labels});
        return *this;
    }

    std::vector<MajoranaMonomial> terms() const {
        std::vector<MajoranaMonomial> out;
        out.reserve(terms_.size());
        for (const auto& [labels, coeff] : terms_) out.push_back({coeff, labels});
        return out;
    }

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    friend bool operator==(const MajoranaSum&, const MajoranaSum&) = default;

    friend MajoranaSum operator*(const MajoranaSum& lhs, const MajoranaSum& rhs) {
        MajoranaSum out;
        for (const auto& [la, ca] : lhs.terms_) {
            for (const auto& [lb, cb] : rhs.terms_) {
                std::vector<long> product = la;
                product.insert(product.end(), lb.begin(), lb.end());
                out.add(canonicalize(ca * cb, std::move(product)));
            }
        }
        return out;
    }

  private:
    std::map<std::vector<long>, Complex> terms_;
};

/// Expand c = (a - i b)/2 and c^dag = (a + i b)/2 and bring every term to normal form.
inline MajoranaSum to_majorana(const FermionMonomial& m) {
    struct Partial {
        Complex coeff;
        std::vector<long> product;
    };
    std::vector<Partial> partials{{m.coeff, {}}};
    for (const auto& f : m.factors) {
        const long even = majorana_label(f.site, 0);
        const long odd = majorana_label(f.site, 1);
        std::vector<Partial> next;
        next.reserve(partials.size() * 2);
        for (auto& p : partials) {
            auto extend = [&](Complex factor, long label) {
                Partial q{p.coeff * factor, p.product};
                q.product.push_back(label);
                next.push_back(std::move(q));
            };
            switch (f.kind) {
                case FermionKind::majorana_even: extend(1.0, even); break;
                case FermionKind::majorana_odd: extend(1.0, odd); break;
                case FermionKind::annihilation:
                    extend(0.5, even);
                    extend(Complex(0, -0.5), odd);
                    break;
                case FermionKind::creation:
                    extend(0.5, even);
                    extend(Complex(0, 0.5), odd);
                    break;
            }
        }
        partials = std::move(next);
    }
    MajoranaSum out;
    for (auto& p : partials) out.add(canonicalize(p.coeff, std::move(p.product)));
    return out;
}

inline MajoranaSum to_majorana(const FermionSum& sum) {
    MajoranaSum out;
    for (const auto& m : sum.terms) out += to_majorana(m);
    return out;
}

inline FermionMonomial to_fermion(const MajoranaMonomial& m) {
    FermionMonomial out{m.coeff, {}};
    for (long label : m.labels) out.factors.push_back(FermionMonomial::majorana(label).factors.front());
    return out;
}

/**
 * Normal-ordered c / c^dag form: ascending site, creation before
 * annihilation, anticommutation signs tracked exactly. Same operator gives
 * the same list of terms.
 */
inline FermionSum normal_order(const FermionMonomial& m) {
    // Per-site 2x2 operator in the (|0>, |1>) basis, kept as exact entries.
    using Local = std::array<Complex, 4>;  // m00, m01, m10, m11
    auto multiply = [](const Local& x, const Local& y) {
        return Local{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                     x[2] * y[1] + x[3] * y[3]};
    };
    auto local_of = [](FermionKind kind) {
        const Complex i(0, 1);
        switch (kind) {
            case FermionKind::annihilation: return Local{0, 1, 0, 0};
            case FermionKind::creation: return Local{0, 0, 1, 0};
            case FermionKind::majorana_even: return Local{0, 1, 1, 0};
            case FermionKind::majorana_odd: return Local{0, i, -i, 0};
        }
        return Local{1, 0, 0, 1};
    };

    // Stable sort by site; swapping factors on different sites costs a sign.
    std::vector<FermionFactor> factors = m.factors;
    int sign = 1;
    for (std::size_t i = 1; i < factors.size(); ++i) {
        for (std::size_t j = i; j > 0 && factors[j - 1].site > factors[j].site; --j) {
            std::swap(factors[j - 1], factors[j]);
            sign = -sign;
        }
    }

    // Reduce each site's product to alpha 1 + beta c + gamma c^dag + delta c^dag c.
    struct Option {
        Complex coeff;
        std::vector<FermionFactor> word;
    };
    std::vector<Option> terms{{m.coeff * static_cast<double>(sign), {}}};
    for (std::size_t i = 0; i < factors.size();) {
        const long site = factors[i].site;
        Local local{1, 0, 0, 1};
        for (; i < factors.size() && factors[i].site == site; ++i) local = multiply(local, local_of(factors[i].kind));
        const std::pair<Complex, std::vector<FermionFactor>> choices[4] = {
            {local[0], {}},
            {local[1], {{site, FermionKind::annihilation}}},
            {local[2], {{site, FermionKind::creation}}},
            {local[3] - local[0], {{site, FermionKind::creation}, {site, FermionKind::annihilation}}},
        };
        std::vector<Option> next;
        for (const auto& t : terms) {
            for (const auto& [c, word] : choices) {
                if (c == Complex(0, 0)) continue;
                Option o{t.coeff * c, t.word};
                o.word.insert(o.word.end(), word.begin(), word.end());
                next.push_back(std::move(o));
            }
        }
        terms = std::move(next);
    }
    FermionSum out;
    for (auto& t : terms) out.terms.push_back({t.coeff, std::move(t.word)});
    return out;
}

// ---------------------------------------------------------------------------
// Pauli strings

enum class Pauli : std::uint8_t { I, X, Y, Z };

inline char to_char(Pauli p) {
    static const char names[4] = {'I', 'X', 'Y', 'Z'};
    return names[static_cast<int>(p)];
}

/// sigma_a sigma_b = phase * sigma_c.
inline std::pair<Phase, Pauli> multiply(Pauli a, Pauli b) {
    if (a == Pauli::I) return {{0}, b};
    if (b == Pauli::I) return {{0}, a};
    if (a == b) return {{0}, Pauli::I};
    const int ia = static_cast<int>(a);
    const int ib = static_cast<int>(b);
    const Pauli c = static_cast<Pauli>(6 - ia - ib);
    // Cyclic X->Y->Z gives +i, anticyclic gives -i.
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    return {{cyclic ? 1 : 3}, c};
}

/// Closed site interval.
struct Window {
    long first = 0;
    long last = -1;

    bool contains(long site) const noexcept { return site >= first && site <= last; }
    long size() const noexcept { return last - first + 1; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// coeff * tensor product of single-site Pauli letters; identity off `letters`.
class PauliString {
  public:
    PauliString() = default;
    PauliString(Window window, Complex coeff = 1.0) : window_(window), coeff_(coeff) {}

    static PauliString single(Window window, long site, Pauli letter, Complex coeff = 1.0) {
        PauliString s(window, coeff);
        s.set(site, letter);
        return s;
    }

    /// Parse "X0 Z1 Y3" (identity: "" or "I").
    static PauliString parse(Window window, const std::string& text, Complex coeff = 1.0) {
        PauliString s(window, coeff);
        std::istringstream in(text);
        std::string token;
        while (in >> token) {
            if (token == "I") continue;
            Pauli p;
            switch (token[0]) {
                case 'X': p = Pauli::X; break;
                case 'Y': p = Pauli::Y; break;
                case 'Z': p = Pauli::Z; break;
                default: throw ValidationError("bad Pauli token '" + token + "'");
            }
            s = s * single(window, std::stol(token.substr(1)), p);
        }
        return s;
    }

    const Window& window() const noexcept { return window_; }
    Complex coeff() const noexcept { return coeff_; }
    void set_coeff(Complex c) noexcept { coeff_ = c; }
    const std::map<long, Pauli>& letters() const noexcept { return letters_; }

    Pauli letter(long site) const {
        auto it = letters_.find(site);
        return it == letters_.end() ? Pauli::I : it->second;
    }

    void set(long site, Pauli letter) {
        if (!window_.contains(site)) {
            throw WindowError("site " + std::to_string(site) + " outside Pauli window [" +
                              std::to_string(window_.first) + ", " + std::to_string(window_.last) + "]");
        }
        if (letter == Pauli::I) letters_.erase(site);
        else letters_[site] = letter;
    }

    /// Number of X/Y letters mod 2: the fermion parity of the preimage.
    Parity parity() const {
        std::size_t odd = 0;
        for (const auto& [site, p] : letters_) odd += (p == Pauli::X || p == Pauli::Y) ? 1 : 0;
        return odd % 2 == 0 ? Parity::even : Parity::odd;
    }

    friend PauliString operator*(const PauliString& lhs, const PauliString& rhs) {
        Window w{std::min(lhs.window_.first, rhs.window_.first), std::max(lhs.window_.last, rhs.window_.last)};
        PauliString out(w, lhs.coeff_ * rhs.coeff_);
        out.letters_ = lhs.letters_;
        Phase phase;
        for (const auto& [site, p] : rhs.letters_) {
            auto [ph, q] = multiply(out.letter(site), p);
            phase *= ph;
            out.set(site, q);
        }
        out.coeff_ *= phase.value();
        return out;
    }

    /// Same operator (window extents may differ).
    friend bool operator==(const PauliString& lhs, const PauliString& rhs) {
        return lhs.coeff_ == rhs.coeff_ && lhs.letters_ == rhs.letters_;
    }

  private:
    Window window_{0, -1};
    std::map<long, Pauli> letters_;
    Complex coeff_{1.0, 0.0};
};

/// Sum of Pauli strings with like terms combined.
class PauliSum {
  public:
    using Key = std::vector<std::pair<long, Pauli>>;

    PauliSum() = default;
    explicit PauliSum(Window window) : window_(window) {}

    void add(const PauliString& s) {
        window_ = Window{std::min(window_.first, s.window().first), std::max(window_.last, s.window().last)};
        if (window_.size() <= 0) window_ = s.window();
        if (s.coeff() == Complex(0, 0)) return;
        Key key(s.letters().begin(), s.letters().end());
        auto [it, inserted] = terms_.try_emplace(key, s.coeff());
        if (!inserted) {
            it->second += s.coeff();
            if (it->second == Complex(0, 0)) terms_.erase(it);
        }
    }

    PauliSum& operator+=(const PauliSum& other) {
        for (const auto& s : other.strings()) add(s);
        return *this;
    }

    std::vector<PauliString> strings() const {
        std::vector<PauliString> out;
        for (const auto& [key, coeff] : terms_) {
            PauliString s(window_, coeff);
            for (const auto& [site, p] : key) s.set(site, p);
            out.push_back(std::move(s));
        }
        return out;
    }

    const Window& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return terms_.size(); }
    friend bool operator==(const PauliSum& lhs, const PauliSum& rhs) { return lhs.terms_ == rhs.terms_; }

  private:
    Window window_{0, -1};
    std::map<Key, Complex> terms_;
};

// ---------------------------------------------------------------------------
// Jordan-Wigner maps

/// Pauli image of a Majorana monomial; `tail` marks odd parity.
struct JwString {
    PauliString string;
    bool tail = false;
};

/// Pauli image of a general monomial (a sum of strings for c / c^dag factors).
struct JwImage {
    PauliSum sum;
    bool tail = false;
};

inline JwString jw_majorana_to_pauli(const MajoranaMonomial& m, Window window) {
    PauliString out(window, m.coeff);
    for (long label : m.labels) {
        const long site = majorana_site(label);
        if (!window.contains(site)) {
            throw WindowError("Majorana on site " + std::to_string(site) + " outside window [" +
                              std::to_string(window.first) + ", " + std::to_string(window.last) + "]");
        }
        PauliString image(window);
        for (long k = window.first; k < site; ++k) image.set(k, Pauli::Z);
        image.set(site, majorana_component(label) == 0 ? Pauli::X : Pauli::Y);
        out = out * image;
    }
    return {std::move(out), m.parity() == Parity::odd};
}

inline JwImage jw_fermion_to_pauli(const FermionMonomial& m, Window window) {
    for (const auto& f : m.factors) {
        if (!window.contains(f.site)) {
            throw WindowError("factor on site " + std::to_string(f.site) + " outside window [" +
                              std::to_string(window.first) + ", " + std::to_string(window.last) + "]");
        }
    }
    JwImage out{PauliSum(window), m.parity() == Parity::odd};
    for (const auto& term : to_majorana(m).terms()) out.sum.add(jw_majorana_to_pauli(term, window).string);
    return out;
}

inline JwImage jw_fermion_to_pauli(const FermionSum& sum, Window window) {
    JwImage out{PauliSum(window), false};
    bool first = true;
    for (const auto& m : sum.terms) {
        JwImage part = jw_fermion_to_pauli(m, window);
        if (!first && part.tail != out.tail) throw ValidationError("sum mixes even and odd monomials");
        out.tail = part.tail;
        first = false;
        out.sum += part.sum;
    }
    return out;
}

/// Inverse map into Majorana form: X_l = S_l a_{2l}, Y_l = S_l a_{2l+1}, Z_l = -i a_{2l} a_{2l+1}.
inline FermionMonomial jw_pauli_to_fermion(const PauliString& s) {
    const Window& window = s.window();
    Complex coeff = s.coeff();
    Phase phase;
    std::vector<long> product;
    for (const auto& [site, letter] : s.letters()) {
        if (letter == Pauli::Z) {
            phase *= Phase{3};
            product.push_back(majorana_label(site, 0));
            product.push_back(majorana_label(site, 1));
            continue;
        }
        for (long k = window.first; k < site; ++k) {
            phase *= Phase{3};
            product.push_back(majorana_label(k, 0));
            product.push_back(majorana_label(k, 1));
        }
        product.push_back(majorana_label(site, letter == Pauli::X ? 0 : 1));
    }
    return to_fermion(canonicalize(coeff * phase.value(), std::move(product)));
}

// ---------------------------------------------------------------------------
// Plain-text rendering

namespace detail {

inline std::string format_coeff(Complex c) {
    if (c == Complex(1, 0)) return "";
    if (c == Complex(-1, 0)) return "-";
    if (c == Complex(0, 1)) return "i*";
    if (c == Complex(0, -1)) return "-i*";
    std::ostringstream out;
    out.precision(17);
    if (c.imag() == 0.0) out << c.real() << "*";
    else out << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)*";
    return out.str();
}

}  // namespace detail

/// "Z0 Z1 X2" with an optional coefficient prefix such as "-i*" or "0.5*".
inline std::string to_string(const PauliString& s) {
    std::string body;
    for (const auto& [site, p] : s.letters()) {
        if (!body.empty()) body += ' ';
        body += to_char(p);
        body += std::to_string(site);
    }
    if (body.empty()) body = "I";
    return detail::format_coeff(s.coeff()) + body;
}

/// Factors as c^dag_j -> "c+j", c_j -> "cj", a_{2j} -> "aj", a_{2j+1} -> "bj".
inline std::string to_string(const FermionMonomial& m) {
    std::string body;
    for (const auto& f : m.factors) {
        if (!body.empty()) body += ' ';
        switch (f.kind) {
            case FermionKind::creation: body += "c+"; break;
            case FermionKind::annihilation: body += "c"; break;
            case FermionKind::majorana_even: body += "a"; break;
            case FermionKind::majorana_odd: body += "b"; break;
        }
        body += std::to_string(f.site);
    }
    if (body.empty()) body = "1";
    return detail::format_coeff(m.coeff) + body;
}

}  // namespace qfchain
