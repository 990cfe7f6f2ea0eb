#pragma once

// Independent oracles and the acceptance criteria. Nothing in the library's
// evaluation path depends on this header.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "audit.hpp"
#include "embeddings.hpp"
#include "hamming.hpp"
#include "ordinals.hpp"
#include "rational.hpp"
#include "treespace.hpp"

namespace cubetree::verify {

/// Norm by brute force: every node of the prefix closure of the support,
/// each branch summed by separate lookups.
inline std::int64_t prefix_closure_norm(const SparseVector& x) {
    std::map<std::vector<Element>, std::int64_t> coeffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto e = x.entry(i);
        coeffs[std::vector<Element>(e.path.begin(), e.path.end())] = e.coeff;
    }
    std::set<std::vector<Element>> closure{{}};
    for (const auto& [path, c] : coeffs) {
        for (std::size_t len = 0; len <= path.size(); ++len) {
            closure.insert(std::vector<Element>(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(len)));
        }
    }
    std::int64_t best = 0;
    for (const auto& t : closure) {
        std::int64_t beta = 0;
        for (std::size_t len = 0; len <= t.size(); ++len) {
            auto it = coeffs.find(std::vector<Element>(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(len)));
            if (it != coeffs.end()) beta += it->second;
        }
        best = std::max(best, beta < 0 ? -beta : beta);
    }
    return best;
}

/// Random vector on T_height with exactly `support` nonzero entries (or as
/// many as fit). Nodes are grown from earlier nodes half of the time so that
/// branches overlap heavily.
inline SparseVector random_sparse_vector(std::mt19937_64& rng, std::size_t height, std::size_t support,
                                         Element max_entry) {
    auto below = [&](std::uint64_t n) { return rng() % n; };
    std::set<std::vector<Element>> nodes;
    std::vector<std::vector<Element>> order;
    std::size_t attempts = 0;
    while (nodes.size() < support && attempts++ < support * 50 + 100) {
        std::vector<Element> path;
        if (!order.empty() && below(2) == 0) {
            path = order[below(order.size())];
        }
        std::size_t extra = 1 + below(3);
        for (std::size_t i = 0; i < extra && path.size() < height; ++i) {
            Element lo = path.empty() ? 1 : path.back() + 1;
            if (lo > max_entry) break;
            path.push_back(lo + static_cast<Element>(below(std::min<Element>(4, max_entry - lo + 1))));
        }
        if (nodes.insert(path).second) order.push_back(path);
    }
    SparseVectorBuilder b(height);
    for (const auto& p : order) {
        std::int64_t c = static_cast<std::int64_t>(below(11)) - 5;
        b.add(p, c == 0 ? 7 : c);
    }
    return std::move(b).build();
}

/// Largest subset of the integer grid {−C..C}^d whose points are pairwise at
/// sup-distance >= eta, by exhaustive include/exclude search with a
/// remaining-count bound.
inline std::size_t max_separated_grid(std::int64_t c, Rational eta, std::size_t d) {
    std::vector<std::vector<std::int64_t>> pts{{}};
    for (std::size_t axis = 0; axis < d; ++axis) {
        std::vector<std::vector<std::int64_t>> next;
        for (const auto& p : pts) {
            for (std::int64_t v = -c; v <= c; ++v) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        pts = std::move(next);
    }
    auto far = [&](const auto& a, const auto& b) {
        std::int64_t m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
        return Rational(m) >= eta;
    };
    std::size_t best = 0;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (chosen.size() + (pts.size() - i) <= best) return;
        if (i == pts.size()) {
            best = chosen.size();
            return;
        }
        bool ok = true;
        for (std::size_t j : chosen) ok = ok && far(pts[i], pts[j]);
        if (ok) {
            chosen.push_back(i);
            go(i + 1);
            chosen.pop_back();
        }
        go(i + 1);
    };
    go(0);
    return best;
}

/// f(σ) = 4·1_σ in ℓ∞^n on Δ̃₂ ∩ [n]: non-contracting, but expanding by 4 on
/// adjacent pairs and all singletons n >= 3 collapse onto the same projection.
inline FiniteEmbedding overpacked_indicator_embedding(Element n) {
    FiniteEmbedding f;
    f.domain = collect(enumerate_tilde_delta2(Universe{n}));
    for (const Point& p : f.domain) {
        std::vector<Rational> v(n, Rational(0));
        for (Element e : p.elements()) v[e - 1] = Rational(4);
        f.images.push_back(std::move(v));
    }
    return f;
}

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    std::string artifact;  // optional CSV payload (criterion 9)
};

struct VerifyOptions {
    std::size_t workers = 1;
    std::uint64_t seed = 20240607;
};

namespace detail {

// A positive `limit` (seconds) is part of the criterion: slower runs fail.
template <class Body>
CriterionResult timed(int id, std::string title, double limit, Body body) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail += std::string(" exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && r.seconds > limit) {
        r.passed = false;
        r.detail += "; over the " + std::to_string(static_cast<int>(limit)) + " s limit";
    }
    return r;
}

} // namespace detail

/// 1. r·d <= k·gap <= k·d on every pair of Δ_k([7]), k <= 4, 1 <= r <= k.
inline CriterionResult criterion_two_sided_bound(const VerifyOptions&) {
    return detail::timed(1, "finite-rank two-sided bound r*d <= k*gap <= k*d on delta_k([7])", 60, [&](CriterionResult& r) {
        r.passed = true;
        std::uint64_t pairs = 0;
        const auto u = Universe{7};
        for (std::size_t k = 1; k <= 4; ++k) {
            auto dom = collect(enumerate_delta_k(k, u));
            for (std::size_t rank = 1; rank <= k; ++rank) {
                auto spec = EmbeddingSpec::finite_rank(k, rank);
                for (std::size_t i = 0; i < dom.size(); ++i) {
                    for (std::size_t j = i + 1; j < dom.size(); ++j) {
                        std::int64_t g = pair_gap(spec, dom[i], dom[j]);
                        std::int64_t d = distance(dom[i], dom[j]);
                        ++pairs;
                        auto kk = static_cast<std::int64_t>(k), rr = static_cast<std::int64_t>(rank);
                        if (!(rr * d <= kk * g && g <= d)) {
                            if (r.passed) {
                                r.detail = "violated at " + spec.str() + " " + dom[i].str() + " " + dom[j].str();
                            }
                            r.passed = false;
                        }
                    }
                }
            }
        }
        if (r.passed) r.detail = std::to_string(pairs) + " pairs, zero violations";
    });
}

/// 2. distortion(φ_{k,k}) = 1/1 on Δ_k([7]), k <= 4.
inline CriterionResult criterion_finite_isometry(const VerifyOptions& o) {
    return detail::timed(2, "phi_{k,k} is an isometry on delta_k([7]), k <= 4", 0, [&](CriterionResult& r) {
        r.passed = true;
        for (std::size_t k = 1; k <= 4; ++k) {
            auto rep = measure_distortion(EmbeddingSpec::finite_rank(k, k), k, Universe{7}, {o.workers, {}});
            bool ok = rep.distortion && *rep.distortion == Rational(1);
            r.passed = r.passed && ok;
            r.detail += "k=" + std::to_string(k) + ":" + (rep.distortion ? rep.distortion->str() : "inf") + " ";
        }
    });
}

/// 3. φ_ω is an isometry on every Schreier set inside [8].
inline CriterionResult criterion_schreier_isometry(const VerifyOptions&) {
    return detail::timed(3, "Schreier map is an isometry on S_1 with max element <= 8", 0, [&](CriterionResult& r) {
        auto dom = collect(enumerate_schreier(Universe{8}));
        auto spec = EmbeddingSpec::schreier();
        std::uint64_t bad = 0, pairs = 0;
        for (std::size_t i = 0; i < dom.size(); ++i) {
            for (std::size_t j = i + 1; j < dom.size(); ++j) {
                ++pairs;
                if (pair_gap(spec, dom[i], dom[j]) != distance(dom[i], dom[j])) ++bad;
            }
        }
        r.passed = bad == 0 && pairs > 0;
        r.detail = std::to_string(dom.size()) + " sets, " + std::to_string(pairs) + " pairs, " + std::to_string(bad) +
                   " mismatches";
    });
}

/// 4. (1−ε)d <= gap <= d on 10^4 sampled pairs, isometric on admissible pairs.
inline CriterionResult criterion_almost_isometric(const VerifyOptions& o) {
    return detail::timed(4, "almost-isometric bound (1-eps)d <= gap <= d, eps in {1/2, 1/4}", 300, [&](CriterionResult& r) {
        r.passed = true;
        for (Rational eps : {Rational(1, 2), Rational(1, 4)}) {
            auto spec = EmbeddingSpec::almost_isometric(eps);
            auto rep = sample_distortion(spec, SamplerConfig{o.seed, 10000, 15}, {o.workers, {}});
            bool ok = rep.violations == 0 && rep.pairs_checked == 10000 && rep.admissible_pairs > 0 &&
                      rep.max_expansion <= Rational(1) && rep.max_contraction &&
                      *rep.max_contraction <= Rational(1) / (Rational(1) - eps);
            r.passed = r.passed && ok;
            r.detail += "eps=" + eps.str() + ": contraction " +
                        (rep.max_contraction ? rep.max_contraction->str() : "inf") + ", admissible " +
                        std::to_string(rep.admissible_pairs) + ", violations " + std::to_string(rep.violations) + "; ";
        }
    });
}

/// 5. Support-restricted norm equals the prefix-closure oracle on 10^3 random vectors.
inline CriterionResult criterion_norm_oracle(const VerifyOptions& o) {
    return detail::timed(5, "support-restricted norm equals prefix-closure oracle (10^3 vectors)", 0, [&](CriterionResult& r) {
        std::mt19937_64 rng(o.seed);
        std::size_t agree = 0, largest = 0;
        for (int i = 0; i < 1000; ++i) {
            // Log-uniform support sizes up to 2^14, every 100th at the cap.
            std::size_t support = i % 100 == 0 ? (1u << 14) : (std::size_t{1} << (rng() % 15)) + rng() % 8;
            support = std::min<std::size_t>(support, 1u << 14);
            std::size_t height = 1 + rng() % 10;
            auto x = random_sparse_vector(rng, height, support, 40);
            largest = std::max(largest, x.size());
            if (norm(x) == prefix_closure_norm(x)) ++agree;
        }
        r.passed = agree == 1000;
        r.detail = std::to_string(agree) + "/1000 agree, largest support " + std::to_string(largest);
    });
}

/// 6. I_CB([0, ω^k]) = k+1 for k <= 6, |K^(α)| = n for [0, ω^α·n], α <= 4, n <= 5.
inline CriterionResult criterion_cantor_bendixson(const VerifyOptions&) {
    return detail::timed(6, "Cantor-Bendixson index and level sizes", 1, [&](CriterionResult& r) {
        r.passed = true;
        for (std::uint64_t k = 1; k <= 6; ++k) {
            auto space = DerivedSpace::interval(OrdinalCNF::monomial(k, 1));
            std::uint64_t iterated = cb_chain(space).size() - 1;
            r.passed = r.passed && iterated == k + 1 && cb_index(space) == OrdinalCNF::finite(k + 1);
        }
        for (std::uint64_t a = 1; a <= 4; ++a) {
            for (std::uint64_t n = 1; n <= 5; ++n) {
                auto chain = cb_chain(DerivedSpace::interval(OrdinalCNF::monomial(a, n)));
                bool ok = chain.size() == a + 2 && chain[a] == DerivedSpace::finite(n) &&
                          chain[a + 1] == DerivedSpace::empty() && cb_level_size(a, n) == n;
                r.passed = r.passed && ok;
            }
        }
        r.detail = r.passed ? "6 indices and 20 level sizes match" : "mismatch";
    });
}

/// 7. node_to_ordinal is injective on T_k with entries <= 6, k <= 3, image in (0, ω^k].
inline CriterionResult criterion_node_ordinals(const VerifyOptions&) {
    return detail::timed(7, "node->ordinal map injective with image in (0, w^k]", 0, [&](CriterionResult& r) {
        r.passed = true;
        std::size_t checked = 0, collisions = 0;
        for (std::size_t k = 1; k <= 3; ++k) {
            std::map<OrdinalCNF, TreeNode> seen;
            OrdinalCNF top = OrdinalCNF::monomial(k, 1);
            for (const Point& p : enumerate_delta_k(k, Universe{6})) {
                TreeNode t(std::vector<Element>(p.elements().begin(), p.elements().end()));
                OrdinalCNF o = node_to_ordinal(k, t);
                ++checked;
                if (o.is_zero() || top < o) r.passed = false;
                if (!seen.emplace(o, t).second) ++collisions;
            }
            r.passed = r.passed && node_to_ordinal(k, TreeNode{}) == top;
        }
        r.passed = r.passed && collisions == 0;
        r.detail = std::to_string(checked) + " nodes, " + std::to_string(collisions) + " collisions";
    });
}

/// 8. packing_bound matches exhaustive grid search; trace rejects C >= 2 and
/// refutes an over-packed embedding.
inline CriterionResult criterion_packing(const VerifyOptions&) {
    return detail::timed(8, "packing bound matches exhaustive search; trace certificates", 0, [&](CriterionResult& r) {
        r.passed = true;
        for (auto [c, eta] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
            for (std::size_t d = 1; d <= 2; ++d) {
                auto bound = packing_bound(Rational(c), Rational(eta), d);
                auto exact = max_separated_grid(c, Rational(eta), d);
                r.passed = r.passed && bound == exact;
                r.detail += "(" + std::to_string(c) + "," + std::to_string(eta) + ",d=" + std::to_string(d) +
                            ")=" + std::to_string(bound) + "/" + std::to_string(exact) + " ";
            }
        }
        auto f = overpacked_indicator_embedding(20);
        bool rejected = false;
        try {
            aharoni_trace(f, Rational(2));
        } catch (const DomainError&) {
            rejected = true;
        }
        auto t = aharoni_trace(f, Rational(3, 2));
        r.passed = r.passed && rejected && t.verdict == TraceVerdict::Contradiction && t.upper_violation.has_value();
        r.detail += std::string("C=2 ") + (rejected ? "rejected" : "accepted") + ", synthetic: " + to_string(t.verdict);
    });
}

/// 9. Measured distortion of φ_{k,k−1} over Δ_k([n]), k ∈ {2,3}, n = 4..9:
/// nondecreasing in n and at most k/(k−1). Emits the table as CSV.
inline CriterionResult criterion_tightness(const VerifyOptions& o) {
    return detail::timed(9, "tightness probe for phi_{k,k-1}: monotone in n, <= k/(k-1)", 0, [&](CriterionResult& r) {
        r.passed = true;
        std::ostringstream csv;
        csv << "k,r,n,pairs,max_expansion,max_contraction,distortion,bound\n";
        for (std::size_t k : {2u, 3u}) {
            Rational bound(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k - 1));
            std::optional<Rational> prev;
            for (Element n = 4; n <= 9; ++n) {
                auto rep = measure_distortion(EmbeddingSpec::finite_rank(k, k - 1), k, Universe{n}, {o.workers, {}});
                bool ok = rep.distortion && *rep.distortion <= bound && rep.max_expansion <= Rational(1) &&
                          (!prev || *prev <= *rep.distortion);
                r.passed = r.passed && ok;
                if (rep.distortion) prev = rep.distortion;
                csv << k << "," << k - 1 << "," << n << "," << rep.pairs_checked << "," << rep.max_expansion << ","
                    << (rep.max_contraction ? rep.max_contraction->str() : "inf") << ","
                    << (rep.distortion ? rep.distortion->str() : "inf") << "," << bound << "\n";
            }
        }
        r.artifact = csv.str();
        r.detail = r.passed ? "table monotone and within k/(k-1)" : "table violates monotonicity or bound";
    });
}

/// Runs every criterion in order; `on_result` sees each one as it finishes.
inline std::vector<CriterionResult> run_acceptance(const VerifyOptions& o = {},
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
    using Criterion = CriterionResult (*)(const VerifyOptions&);
    constexpr Criterion all[] = {criterion_two_sided_bound, criterion_finite_isometry, criterion_schreier_isometry,
                                 criterion_almost_isometric, criterion_norm_oracle,    criterion_cantor_bendixson,
                                 criterion_node_ordinals,    criterion_packing,        criterion_tightness};
    std::vector<CriterionResult> results;
    for (Criterion c : all) {
        results.push_back(c(o));
        if (on_result) on_result(results.back());
    }
    return results;
}

inline std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.title << "  (" << r.detail << ")  "
       << static_cast<long long>(r.seconds * 1000) << " ms";
    return os.str();
}

} // namespace cubetree::verify
