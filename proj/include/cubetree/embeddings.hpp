#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "hamming.hpp"
#include "rational.hpp"
#include "treespace.hpp"

namespace cubetree {

/// φ_{k,r}: Δ_k → S(T_r), every point mapped by f_r.
struct FiniteRank {
    std::size_t k = 1;
    std::size_t r = 1;
};

/// φ_ω on the Schreier family: f_ω(m) = f_1(m) + ... + f_m(m) across the trees T_1..T_m.
struct Schreier {};

/// Thresholds N_0 = 0 < N_1 < N_2 < ... with 2m <= ε N_m.
class Thresholds {
public:
    Thresholds() = default;

    /// Smallest admissible sequence for ε: N_m = max(ceil(2m/ε), N_{m-1} + 1).
    static Thresholds minimal(Rational eps) {
        check_eps(eps);
        Thresholds t;
        t.eps_ = eps;
        return t;
    }

    /// Caller-supplied N_0..N_M, validated: N_0 = 0, strictly increasing, 2m <= ε N_m.
    static Thresholds custom(Rational eps, std::vector<std::int64_t> values) {
        check_eps(eps);
        if (values.empty() || values.front() != 0) {
            throw DomainError("thresholds must start with N_0 = 0");
        }
        for (std::size_t m = 1; m < values.size(); ++m) {
            if (values[m] <= values[m - 1]) {
                throw DomainError("thresholds must be strictly increasing (N_" + std::to_string(m) + ")");
            }
            if (Rational(2 * static_cast<std::int64_t>(m)) > eps * Rational(values[m])) {
                throw DomainError("threshold N_" + std::to_string(m) + " = " + std::to_string(values[m]) +
                                  " violates 2m <= eps * N_m for eps = " + eps.str());
            }
        }
        Thresholds t;
        t.eps_ = eps;
        t.custom_ = std::move(values);
        return t;
    }

    Rational eps() const { return eps_; }
    bool is_custom() const { return !custom_.empty(); }
    std::span<const std::int64_t> custom_values() const { return custom_; }

    std::int64_t at(std::size_t m) const {
        if (is_custom()) {
            if (m >= custom_.size()) {
                throw DomainError("threshold N_" + std::to_string(m) + " not supplied (custom sequence has " +
                                  std::to_string(custom_.size()) + " terms)");
            }
            return custom_[m];
        }
        std::int64_t n = 0;
        for (std::size_t i = 1; i <= m; ++i) {
            std::int64_t c = (Rational(2 * static_cast<std::int64_t>(i)) / eps_).ceil();
            n = std::max(c, n + 1);
        }
        return n;
    }

    friend bool operator==(const Thresholds&, const Thresholds&) = default;

private:
    static void check_eps(Rational eps) {
        if (eps <= Rational(0) || eps >= Rational(1)) {
            throw DomainError("eps must lie in (0,1), got " + eps.str());
        }
    }

    Rational eps_{1, 2};
    std::vector<std::int64_t> custom_;
};

/// N_0..N_max of the minimal threshold sequence.
inline std::vector<std::int64_t> default_thresholds(Rational eps, std::size_t max_m) {
    Thresholds t = Thresholds::minimal(eps);
    std::vector<std::int64_t> out;
    out.reserve(max_m + 1);
    for (std::size_t m = 0; m <= max_m; ++m) {
        out.push_back(t.at(m));
    }
    return out;
}

/// Almost-isometric map of the whole cube: f(m) = f_1(m) + ... + f_{N_m}(m).
struct AlmostIsometric {
    Thresholds thresholds;
};

class EmbeddingSpec {
public:
    using Variant = std::variant<FiniteRank, Schreier, AlmostIsometric>;

    static EmbeddingSpec finite_rank(std::size_t k, std::size_t r) {
        if (r < 1 || r > k) {
            throw DomainError("finite-rank embedding needs 1 <= r <= k, got k = " + std::to_string(k) +
                              ", r = " + std::to_string(r));
        }
        return EmbeddingSpec(FiniteRank{k, r});
    }
    static EmbeddingSpec schreier() { return EmbeddingSpec(Schreier{}); }
    static EmbeddingSpec almost_isometric(Rational eps) {
        return EmbeddingSpec(AlmostIsometric{Thresholds::minimal(eps)});
    }
    static EmbeddingSpec almost_isometric(Thresholds t) { return EmbeddingSpec(AlmostIsometric{std::move(t)}); }

    const Variant& variant() const { return variant_; }

    template <class T>
    const T* as() const {
        return std::get_if<T>(&variant_);
    }

    /// Throws DomainError naming the set if σ is outside the domain.
    void check_domain(const Point& s) const {
        if (auto f = as<FiniteRank>(); f && s.size() > f->k) {
            throw DomainError("set " + s.str() + " has " + std::to_string(s.size()) + " elements, more than k = " +
                              std::to_string(f->k));
        }
        if (as<Schreier>() && !is_schreier(s)) {
            throw DomainError("set " + s.str() + " is not a Schreier set (|A| > min A)");
        }
    }

    bool in_domain(const Point& s) const {
        if (auto f = as<FiniteRank>()) return s.size() <= f->k;
        if (as<Schreier>()) return is_schreier(s);
        return true;
    }

    /// Highest tree carrying f_k(m): m for Schreier, N_m for the almost-isometric map.
    std::size_t top_height(Element m) const {
        if (auto f = as<FiniteRank>()) return f->r;
        if (as<Schreier>()) return m;
        return static_cast<std::size_t>(as<AlmostIsometric>()->thresholds.at(m));
    }

    /// `finite:K,R`, `schreier`, `ai:P/Q` or `ai:P/Q:N1,N2,...`.
    std::string str() const {
        if (auto f = as<FiniteRank>()) {
            return "finite:" + std::to_string(f->k) + "," + std::to_string(f->r);
        }
        if (as<Schreier>()) {
            return "schreier";
        }
        const Thresholds& t = as<AlmostIsometric>()->thresholds;
        std::string out = "ai:" + t.eps().str();
        if (t.is_custom()) {
            auto v = t.custom_values();
            out += ":";
            for (std::size_t i = 1; i < v.size(); ++i) {
                if (i > 1) out += ",";
                out += std::to_string(v[i]);
            }
        }
        return out;
    }

private:
    explicit EmbeddingSpec(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

struct EmbedOptions {
    std::size_t node_budget = std::size_t{1} << 20;
};

/// Coefficient of f_r(m) at node t: −1 on (i) for i < m, +1 on (m), +2 on
/// nodes of length >= 2 ending in m, 0 elsewhere.
inline std::int64_t f_r_coefficient(std::size_t r, Element m, const TreeNode& t) {
    if (t.size() > r) {
        throw DomainError("node " + t.str() + " is not in T_" + std::to_string(r));
    }
    auto p = t.path();
    if (p.empty()) {
        return 0;
    }
    if (p.size() == 1) {
        if (p[0] < m) return -1;
        if (p[0] == m) return 1;
        return 0;
    }
    return p.back() == m ? 2 : 0;
}

namespace detail {

struct SignedTerm {
    Element m;
    std::int64_t sign;
};

// Walks the nodes of Σ sign·f_h(m) over `terms` (sorted by m, distinct) in
// tree preorder, reporting every visited node and its coefficient (possibly 0).
class ComponentGenerator {
public:
    ComponentGenerator(std::span<const SignedTerm> terms, std::size_t height, std::size_t& emitted, std::size_t budget)
        : height_(height), emitted_(emitted), budget_(budget) {
        top_ = terms.back().m;
        sign_.assign(top_ + 1, 0);
        below_.assign(top_ + 2, 0);
        for (const SignedTerm& t : terms) {
            sign_[t.m] = t.sign;
        }
        // below_[i] = Σ_{m > i} −sign_m, the "−e_i" contributions on singleton (i).
        for (Element i = top_; i >= 1; --i) {
            below_[i - 1] = checked::sub(below_[i], sign_[i]);
        }
        depth_limit_ = std::min<std::size_t>(height_, top_);
        path_.reserve(depth_limit_);
    }

    SparseVector run() && {
        SparseVectorBuilder out(height_);
        walk([&](std::int64_t c) { out.append_ordered(path_, c); });
        return std::move(out).build();
    }

    /// sup |β_t| over the same nodes, without storing them.
    std::int64_t norm() && {
        std::vector<std::int64_t> beta(depth_limit_ + 1, 0);
        std::int64_t best = 0;
        walk([&](std::int64_t c) {
            std::size_t d = path_.size();
            beta[d] = checked::add(beta[d - 1], c);
            best = std::max(best, beta[d] < 0 ? -beta[d] : beta[d]);
        });
        return best;
    }

private:
    // visit(c) runs for every node on the walk with the node in path_; c may be 0
    // on interior nodes, which the norm still needs for its running sums.
    template <class Visit>
    void walk(Visit&& visit) {
        for (Element i = 1; i <= top_; ++i) {
            path_.push_back(i);
            node(visit, checked::add(below_[i], sign_[i]));
            if (depth_limit_ > 1) {
                descend(visit);
            }
            path_.pop_back();
        }
    }

    template <class Visit>
    void node(Visit& visit, std::int64_t c) {
        if (c != 0 && ++emitted_ > budget_) {
            throw BudgetExceeded("embedding support exceeds the node budget of " + std::to_string(budget_) +
                                 " nodes");
        }
        visit(c);
    }

    template <class Visit>
    void descend(Visit& visit) {
        for (Element j = path_.back() + 1; j <= top_; ++j) {
            path_.push_back(j);
            node(visit, 2 * sign_[j]);
            if (path_.size() < depth_limit_ && j < top_) {
                descend(visit);
            }
            path_.pop_back();
        }
    }

    std::size_t height_;
    std::size_t depth_limit_ = 0;
    Element top_ = 0;
    std::vector<std::int64_t> sign_;
    std::vector<std::int64_t> below_;
    std::vector<Element> path_;
    std::size_t& emitted_;
    std::size_t budget_;
};

inline std::vector<SignedTerm> signed_terms(const Point& plus, const Point& minus) {
    std::vector<SignedTerm> terms;
    for (Element m : plus.elements()) terms.push_back({m, 1});
    for (Element m : minus.elements()) terms.push_back({m, -1});
    std::sort(terms.begin(), terms.end(), [](const SignedTerm& a, const SignedTerm& b) { return a.m < b.m; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
        if (terms[i].m == terms[i - 1].m) {
            throw DomainError("signed embedding needs disjoint sets");
        }
    }
    return terms;
}

/// Calls band(lo, hi, live) for each height range [lo, hi] sharing one
/// component, where live holds the terms with top_height(m) >= lo.
///
/// Heights below the largest element M get their own band. From M upward
/// every f_k(m) has the same node set as f_M(m), so the component depends only
/// on which m still satisfy top_height(m) >= k; one band per such group.
template <class BandFn>
void for_each_band(const EmbeddingSpec& spec, const std::vector<SignedTerm>& terms, BandFn&& band) {
    if (terms.empty()) {
        return;
    }
    auto emit = [&](std::size_t lo, std::size_t hi) {
        std::vector<SignedTerm> live;
        for (const SignedTerm& t : terms) {
            if (spec.top_height(t.m) >= lo) live.push_back(t);
        }
        if (!live.empty()) band(lo, hi, std::span<const SignedTerm>(live));
    };

    if (auto f = spec.as<FiniteRank>()) {
        emit(f->r, f->r);
        return;
    }

    const std::size_t top_element = terms.back().m;
    std::size_t top = 0;
    std::vector<std::size_t> cuts{top_element};
    for (const SignedTerm& t : terms) {
        std::size_t h = spec.top_height(t.m);
        top = std::max(top, h);
        if (h + 1 > top_element) cuts.push_back(h + 1);
    }
    for (std::size_t k = 1; k < top_element && k <= top; ++k) {
        emit(k, k);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        emit(cuts[c], cuts[c + 1] - 1);
    }
}

/// Σ_{m∈plus} f(m) − Σ_{m∈minus} f(m) for disjoint sets, without domain checks.
inline BundleVector embed_signed(const EmbeddingSpec& spec, const Point& plus, const Point& minus,
                                 const EmbedOptions& opts) {
    std::size_t emitted = 0;
    std::vector<Band> bands;
    for_each_band(spec, signed_terms(plus, minus), [&](std::size_t lo, std::size_t hi, auto live) {
        bands.push_back(Band{lo, hi, ComponentGenerator(live, lo, emitted, opts.node_budget).run()});
    });
    return BundleVector(std::move(bands));
}

/// bundle_norm(embed_signed(...)) with the same node budget, streaming each
/// band's nodes instead of storing them.
inline std::int64_t signed_norm(const EmbeddingSpec& spec, const Point& plus, const Point& minus,
                                const EmbedOptions& opts) {
    std::size_t emitted = 0;
    std::int64_t best = 0;
    for_each_band(spec, signed_terms(plus, minus), [&](std::size_t lo, std::size_t, auto live) {
        best = std::max(best, ComponentGenerator(live, lo, emitted, opts.node_budget).norm());
    });
    return best;
}

} // namespace detail

/// Image of the single element m (no domain restriction applies to points).
inline BundleVector embed_point(const EmbeddingSpec& spec, Element m, const EmbedOptions& opts = {}) {
    if (m < 1) {
        throw DomainError("elements must be >= 1");
    }
    return detail::embed_signed(spec, Point{m}, Point{}, opts);
}

/// φ(σ) = Σ_{m∈σ} embed_point(m).
inline BundleVector embed_set(const EmbeddingSpec& spec, const Point& s, const EmbedOptions& opts = {}) {
    spec.check_domain(s);
    return detail::embed_signed(spec, s, Point{}, opts);
}

/// ‖φ(σ) − φ(τ)‖, computed as ‖φ(σ\τ) − φ(τ\σ)‖.
inline std::int64_t pair_gap(const EmbeddingSpec& spec, const Point& a, const Point& b, const EmbedOptions& opts = {}) {
    spec.check_domain(a);
    spec.check_domain(b);
    return detail::signed_norm(spec, a.minus(b), b.minus(a), opts);
}

/// |σ| <= N_{min σ}: sets on which the almost-isometric map is exactly isometric.
inline bool is_admissible(const Thresholds& t, const Point& s) {
    return s.empty() || static_cast<std::int64_t>(s.size()) <= t.at(s.min());
}

} // namespace cubetree
