#pragma once

#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"
#include "treespace.hpp"

namespace cubetree {

/// An ordinal below ω^ω in Cantor normal form, or the single atom ω^ω.
class OrdinalCNF {
public:
    struct Term {
        std::uint64_t exponent;
        std::uint64_t coefficient;
        friend bool operator==(const Term&, const Term&) = default;
    };

    /// Zero.
    OrdinalCNF() = default;

    static OrdinalCNF finite(std::uint64_t n) { return n == 0 ? OrdinalCNF{} : monomial(0, n); }

    /// ω^e · c.
    static OrdinalCNF monomial(std::uint64_t exponent, std::uint64_t coefficient) {
        OrdinalCNF o;
        if (coefficient > 0) {
            o.terms_.push_back({exponent, coefficient});
        }
        return o;
    }

    static OrdinalCNF omega_omega() {
        OrdinalCNF o;
        o.omega_omega_ = true;
        return o;
    }

    /// Terms must have strictly decreasing exponents and coefficients >= 1.
    static OrdinalCNF from_terms(std::vector<Term> terms) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].coefficient == 0 || (i > 0 && terms[i].exponent >= terms[i - 1].exponent)) {
                throw DomainError("not a Cantor normal form");
            }
        }
        OrdinalCNF o;
        o.terms_ = std::move(terms);
        return o;
    }

    bool is_omega_omega() const { return omega_omega_; }
    bool is_zero() const { return !omega_omega_ && terms_.empty(); }
    bool is_finite() const { return !omega_omega_ && (terms_.empty() || terms_.front().exponent == 0); }
    const std::vector<Term>& terms() const { return terms_; }

    /// Value of a finite ordinal.
    std::uint64_t finite_value() const {
        if (!is_finite()) {
            throw DomainError("ordinal " + str() + " is infinite");
        }
        return terms_.empty() ? 0 : terms_.front().coefficient;
    }

    /// Ordinal addition: terms of `a` below the leading exponent of `b` are absorbed.
    friend OrdinalCNF operator+(const OrdinalCNF& a, const OrdinalCNF& b) {
        if (a.omega_omega_ || b.omega_omega_) {
            if (b.is_zero() || b.omega_omega_) return omega_omega();
            throw DomainError("ordinal sum exceeds w^w");
        }
        if (b.terms_.empty()) {
            return a;
        }
        OrdinalCNF out;
        std::uint64_t lead = b.terms_.front().exponent;
        for (const Term& t : a.terms_) {
            if (t.exponent > lead) {
                out.terms_.push_back(t);
            } else if (t.exponent == lead) {
                std::uint64_t c;
                if (__builtin_add_overflow(t.coefficient, b.terms_.front().coefficient, &c)) {
                    throw OverflowError("ordinal coefficient overflow");
                }
                out.terms_.push_back({lead, c});
                out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
                return out;
            }
        }
        out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
        return out;
    }

    friend bool operator==(const OrdinalCNF&, const OrdinalCNF&) = default;

    friend std::strong_ordering operator<=>(const OrdinalCNF& a, const OrdinalCNF& b) {
        if (a.omega_omega_ || b.omega_omega_) {
            return a.omega_omega_ <=> b.omega_omega_;
        }
        for (std::size_t i = 0; i < a.terms_.size() && i < b.terms_.size(); ++i) {
            if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
            if (auto c = a.terms_[i].coefficient <=> b.terms_[i].coefficient; c != 0) return c;
        }
        return a.terms_.size() <=> b.terms_.size();
    }

    /// `w^2*3 + w + 4`, `w^w`, `0`. Unit coefficients and exponents are omitted.
    std::string str() const {
        if (omega_omega_) return "w^w";
        if (terms_.empty()) return "0";
        std::string out;
        for (const Term& t : terms_) {
            if (!out.empty()) out += " + ";
            if (t.exponent == 0) {
                out += std::to_string(t.coefficient);
                continue;
            }
            out += "w";
            if (t.exponent > 1) out += "^" + std::to_string(t.exponent);
            if (t.coefficient > 1) out += "*" + std::to_string(t.coefficient);
        }
        return out;
    }

    /// Parses sums of `w^e*c`, `w^e`, `w*c`, `w`, `n` and the atom `w^w`.
    /// Summands need not be in normal form; they are added as ordinals.
    static OrdinalCNF parse(std::string_view text);

private:
    std::vector<Term> terms_;
    bool omega_omega_ = false;
};

namespace detail {

class OrdinalParser {
public:
    explicit OrdinalParser(std::string_view text) : text_(text) {}

    OrdinalCNF run() {
        OrdinalCNF acc = summand();
        skip_ws();
        while (peek() == '+') {
            ++pos_;
            acc = acc + summand();
            skip_ws();
        }
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return acc;
    }

private:
    OrdinalCNF summand() {
        skip_ws();
        if (peek() == 'w') {
            ++pos_;
            std::uint64_t exponent = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                if (peek() == 'w') {
                    ++pos_;
                    return OrdinalCNF::omega_omega();
                }
                exponent = number();
            }
            std::uint64_t coefficient = 1;
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                coefficient = number();
            }
            return OrdinalCNF::monomial(exponent, coefficient);
        }
        return OrdinalCNF::finite(number());
    }

    std::uint64_t number() {
        skip_ws();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{}) {
            fail("expected a number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("cannot parse ordinal '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                         ": " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline OrdinalCNF OrdinalCNF::parse(std::string_view text) { return detail::OrdinalParser(text).run(); }

inline std::strong_ordering compare(const OrdinalCNF& a, const OrdinalCNF& b) { return a <=> b; }

/// Homeomorphism type of a countable compact space in the derivation chain:
/// empty, n isolated points, or an ordinal interval [0, top].
class DerivedSpace {
public:
    struct Empty {
        friend bool operator==(const Empty&, const Empty&) = default;
    };
    struct Finite {
        std::uint64_t count;
        friend bool operator==(const Finite&, const Finite&) = default;
    };
    struct Interval {
        OrdinalCNF top;
        friend bool operator==(const Interval&, const Interval&) = default;
    };

    static DerivedSpace empty() { return DerivedSpace(Empty{}); }
    static DerivedSpace finite(std::uint64_t n) {
        if (n == 0) {
            throw DomainError("a finite space needs at least one point; use empty()");
        }
        return DerivedSpace(Finite{n});
    }
    static DerivedSpace interval(OrdinalCNF top) { return DerivedSpace(Interval{std::move(top)}); }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&v_);
    }

    friend bool operator==(const DerivedSpace&, const DerivedSpace&) = default;

    std::string str() const {
        if (as<Empty>()) return "Empty";
        if (auto f = as<Finite>()) return "Finite(" + std::to_string(f->count) + ")";
        return "Interval(" + as<Interval>()->top.str() + ")";
    }

private:
    explicit DerivedSpace(std::variant<Empty, Finite, Interval> v) : v_(std::move(v)) {}
    std::variant<Empty, Finite, Interval> v_;
};

/// One Cantor–Bendixson derivative, on homeomorphism types.
///
/// The limit ordinals of [0, Σ ω^{a_i} c_i] form a copy of [1, δ] with
/// δ = Σ_{a_i >= 1} ω^{a_i − 1} c_i: discrete with δ points when δ is finite,
/// homeomorphic to [0, δ] otherwise. [0, ω^ω] is refused.
inline DerivedSpace cb_derivative(const DerivedSpace& k) {
    if (k.as<DerivedSpace::Empty>() || k.as<DerivedSpace::Finite>()) {
        return DerivedSpace::empty();
    }
    const OrdinalCNF& top = k.as<DerivedSpace::Interval>()->top;
    if (top.is_omega_omega()) {
        throw DomainError("single-step derivation of [0, w^w] is not supported; use cb_index");
    }
    std::vector<OrdinalCNF::Term> shifted;
    for (const auto& t : top.terms()) {
        if (t.exponent >= 1) {
            shifted.push_back({t.exponent - 1, t.coefficient});
        }
    }
    OrdinalCNF delta = OrdinalCNF::from_terms(std::move(shifted));
    if (delta.is_zero()) {
        return DerivedSpace::empty();
    }
    if (delta.is_finite()) {
        return DerivedSpace::finite(delta.finite_value());
    }
    return DerivedSpace::interval(std::move(delta));
}

/// K, K', K'', ... up to and including the first repeated (stable) space.
inline std::vector<DerivedSpace> cb_chain(const DerivedSpace& k) {
    std::vector<DerivedSpace> chain{k};
    while (true) {
        DerivedSpace next = cb_derivative(chain.back());
        if (next == chain.back()) {
            return chain;
        }
        chain.push_back(std::move(next));
    }
}

/// Least α with K^(α) = K^(α+1).
///
/// Iterates the derivative and cross-checks the closed form α+1 for
/// [0, ω^α·n + ...]. [0, ω^ω] returns ω+1 without iterating.
inline OrdinalCNF cb_index(const DerivedSpace& k) {
    if (auto iv = k.as<DerivedSpace::Interval>(); iv && iv->top.is_omega_omega()) {
        return OrdinalCNF::monomial(1, 1) + OrdinalCNF::finite(1);
    }
    constexpr std::uint64_t iteration_cap = 1u << 20;
    if (auto iv = k.as<DerivedSpace::Interval>()) {
        std::uint64_t alpha = iv->top.is_zero() ? 0 : iv->top.terms().front().exponent;
        if (alpha > iteration_cap) {
            return OrdinalCNF::finite(alpha + 1);
        }
    }
    std::uint64_t steps = cb_chain(k).size() - 1;
    if (auto iv = k.as<DerivedSpace::Interval>()) {
        std::uint64_t alpha = iv->top.is_zero() ? 0 : iv->top.terms().front().exponent;
        if (steps != alpha + 1) {
            throw std::logic_error("Cantor-Bendixson iteration disagrees with the closed form for " + k.str());
        }
    }
    return OrdinalCNF::finite(steps);
}

/// |K^(α)| for K = [0, ω^α · n], read off after α derivatives.
inline std::uint64_t cb_level_size(std::uint64_t alpha, std::uint64_t n) {
    if (alpha < 1 || n < 1) {
        throw DomainError("cb_level_size needs alpha >= 1 and n >= 1");
    }
    DerivedSpace k = DerivedSpace::interval(OrdinalCNF::monomial(alpha, n));
    for (std::uint64_t i = 0; i < alpha; ++i) {
        k = cb_derivative(k);
    }
    auto f = k.as<DerivedSpace::Finite>();
    if (!f) {
        throw std::logic_error("derivative of order alpha is not finite: " + k.str());
    }
    return f->count;
}

/// The point of (0, ω^k] corresponding to the branch functional β_t on T_k:
/// ∅ ↦ ω^k and (i_1..i_r) ↦ Σ_{j<r} ω^{k−j}(i_j − i_{j−1} − 1) + ω^{k−r}(i_r − i_{r−1}), i_0 = 0.
inline OrdinalCNF node_to_ordinal(std::size_t k, const TreeNode& t) {
    if (t.size() > k) {
        throw DomainError("node " + t.str() + " is not in T_" + std::to_string(k));
    }
    if (t.is_root()) {
        return OrdinalCNF::monomial(k, 1);
    }
    auto p = t.path();
    OrdinalCNF out;
    std::uint64_t prev = 0;
    for (std::size_t j = 1; j <= p.size(); ++j) {
        std::uint64_t gap = p[j - 1] - prev;
        std::uint64_t coeff = j < p.size() ? gap - 1 : gap;
        out = out + OrdinalCNF::monomial(k - j, coeff);
        prev = p[j - 1];
    }
    return out;
}

} // namespace cubetree
