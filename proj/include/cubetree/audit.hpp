#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "embeddings.hpp"
#include "error.hpp"
#include "hamming.hpp"
#include "rational.hpp"
#include "treespace.hpp"

namespace cubetree {

struct PairWitness {
    Point a;
    Point b;
    friend bool operator==(const PairWitness&, const PairWitness&) = default;
};

struct BoundViolation {
    PairWitness pair;
    std::int64_t distance = 0;
    std::int64_t gap = 0;
    std::string what;
    friend bool operator==(const BoundViolation&, const BoundViolation&) = default;
};

/// Exact extremal ratios of an embedding over a finite set of pairs.
///
/// `max_contraction` (and with it `distortion`) is empty when some distinct
/// pair collapses to the same image. With no pairs every ratio is 0/1.
struct DistortionReport {
    std::string spec;
    std::string domain;
    Rational max_expansion{0};
    std::optional<Rational> max_contraction{Rational(0)};
    std::optional<Rational> distortion{Rational(0)};
    PairWitness expansion_witness;
    PairWitness contraction_witness;
    std::uint64_t pairs_checked = 0;
    std::uint64_t admissible_pairs = 0;
    std::uint64_t violations = 0;
    std::optional<BoundViolation> first_violation;

    friend bool operator==(const DistortionReport&, const DistortionReport&) = default;
};

/// Checks the two-sided bound the embedding described by `spec` satisfies on one
/// pair: r·d <= k·gap <= k·d (finite rank), gap = d (Schreier),
/// (1−ε)d <= gap <= d with equality on admissible pairs (almost isometric).
inline std::optional<std::string> check_pair_bounds(const EmbeddingSpec& spec, const Point& a, const Point& b,
                                                    std::int64_t gap, std::int64_t d) {
    if (auto f = spec.as<FiniteRank>()) {
        auto k = static_cast<std::int64_t>(f->k), r = static_cast<std::int64_t>(f->r);
        if (checked::mul(r, d) > checked::mul(k, gap)) return "r*d > k*gap (lower bound r/k violated)";
        if (gap > d) return "gap > d (1-Lipschitz bound violated)";
        return std::nullopt;
    }
    if (spec.as<Schreier>()) {
        if (gap != d) return "gap != d (Schreier isometry violated)";
        return std::nullopt;
    }
    const Thresholds& t = spec.as<AlmostIsometric>()->thresholds;
    if (gap > d) return "gap > d (1-Lipschitz bound violated)";
    if ((Rational(1) - t.eps()) * Rational(d) > Rational(gap)) return "(1-eps)*d > gap (lower bound violated)";
    if (is_admissible(t, a) && is_admissible(t, b) && gap != d) return "gap != d on an admissible pair";
    return std::nullopt;
}

struct AuditOptions {
    std::size_t workers = 1;
    EmbedOptions embed;
};

namespace detail {

// Running extrema over a slice of the pair sequence. Ties keep the smaller
// pair index, so merging slices in any grouping gives the same result.
struct SweepState {
    Rational expansion{-1};
    std::uint64_t expansion_at = UINT64_MAX;
    bool contraction_infinite = false;
    Rational contraction{-1};
    std::uint64_t contraction_at = UINT64_MAX;
    std::uint64_t pairs = 0;
    std::uint64_t admissible = 0;
    std::uint64_t violations = 0;
    std::uint64_t violation_at = UINT64_MAX;
    std::optional<BoundViolation> violation;

    void observe(std::uint64_t idx, const EmbeddingSpec& spec, const Point& a, const Point& b, std::int64_t gap,
                 std::int64_t d) {
        ++pairs;
        Rational e(gap, d);
        if (e > expansion || (e == expansion && idx < expansion_at)) {
            expansion = e;
            expansion_at = idx;
        }
        if (gap == 0) {
            if (!contraction_infinite || idx < contraction_at) {
                contraction_infinite = true;
                contraction_at = idx;
            }
        } else if (!contraction_infinite) {
            Rational c(d, gap);
            if (c > contraction || (c == contraction && idx < contraction_at)) {
                contraction = c;
                contraction_at = idx;
            }
        }
        if (auto ai = spec.as<AlmostIsometric>(); ai && is_admissible(ai->thresholds, a) &&
                                                   is_admissible(ai->thresholds, b)) {
            ++admissible;
        }
        if (auto why = check_pair_bounds(spec, a, b, gap, d)) {
            ++violations;
            if (idx < violation_at) {
                violation_at = idx;
                violation = BoundViolation{{a, b}, d, gap, *why};
            }
        }
    }

    void merge(const SweepState& o) {
        if (o.expansion > expansion || (o.expansion == expansion && o.expansion_at < expansion_at)) {
            expansion = o.expansion;
            expansion_at = o.expansion_at;
        }
        if (o.contraction_infinite != contraction_infinite) {
            if (o.contraction_infinite) {
                contraction_infinite = true;
                contraction = o.contraction;
                contraction_at = o.contraction_at;
            }
        } else if (o.contraction > contraction || (o.contraction == contraction && o.contraction_at < contraction_at)) {
            contraction = o.contraction;
            contraction_at = o.contraction_at;
        }
        pairs += o.pairs;
        admissible += o.admissible;
        violations += o.violations;
        if (o.violation_at < violation_at) {
            violation_at = o.violation_at;
            violation = o.violation;
        }
    }
};

// Runs `visit(idx, state)` for idx in [0, count) split into contiguous slices.
template <class Visit>
SweepState parallel_sweep(std::uint64_t count, std::size_t workers, Visit visit) {
    workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
    std::vector<SweepState> states(workers);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](std::size_t w) {
        std::uint64_t lo = count * w / workers, hi = count * (w + 1) / workers;
        try {
            visit(lo, hi, states[w]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    SweepState total;
    for (const SweepState& s : states) total.merge(s);
    return total;
}

inline DistortionReport to_report(const SweepState& s, std::string spec, std::string domain,
                                  const auto& pair_at) {
    DistortionReport r;
    r.spec = std::move(spec);
    r.domain = std::move(domain);
    r.pairs_checked = s.pairs;
    r.admissible_pairs = s.admissible;
    r.violations = s.violations;
    r.first_violation = s.violation;
    if (s.pairs == 0) {
        return r;
    }
    r.max_expansion = s.expansion;
    r.expansion_witness = pair_at(s.expansion_at);
    r.contraction_witness = pair_at(s.contraction_at);
    if (s.contraction_infinite) {
        r.max_contraction.reset();
        r.distortion.reset();
    } else {
        r.max_contraction = s.contraction;
        r.distortion = s.expansion * s.contraction;
    }
    return r;
}

} // namespace detail

/// Exhaustive sweep over every unordered pair of distinct points of `domain`
/// (in enumeration order: (0,1), (0,2), ..., (1,2), ...).
inline DistortionReport measure_distortion(const EmbeddingSpec& spec, const std::vector<Point>& domain,
                                           std::string domain_label, const AuditOptions& opts = {}) {
    for (const Point& p : domain) {
        spec.check_domain(p);
    }
    const std::uint64_t n = domain.size();
    const std::uint64_t count = n < 2 ? 0 : n * (n - 1) / 2;

    // Row i starts at linear index i*n − i(i+1)/2.
    auto row_start = [n](std::uint64_t i) { return i * n - i * (i + 1) / 2; };
    auto pair_at = [&](std::uint64_t idx) {
        std::uint64_t i = 0;
        while (i + 1 < n && row_start(i + 1) <= idx) ++i;
        std::uint64_t j = i + 1 + (idx - row_start(i));
        return PairWitness{domain[i], domain[j]};
    };

    auto state = detail::parallel_sweep(count, opts.workers, [&](std::uint64_t lo, std::uint64_t hi,
                                                                   detail::SweepState& st) {
        if (lo >= hi) return;
        std::uint64_t i = 0;
        while (i + 1 < n && row_start(i + 1) <= lo) ++i;
        std::uint64_t j = i + 1 + (lo - row_start(i));
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const Point& a = domain[i];
            const Point& b = domain[j];
            st.observe(idx, spec, a, b, pair_gap(spec, a, b, opts.embed), distance(a, b));
            if (++j == n) {
                ++i;
                j = i + 1;
            }
        }
    });
    return detail::to_report(state, spec.str(), std::move(domain_label), pair_at);
}

/// Exhaustive sweep over Δ_k restricted to {1..n}.
inline DistortionReport measure_distortion(const EmbeddingSpec& spec, std::size_t k, Universe u,
                                           const AuditOptions& opts = {}) {
    return measure_distortion(spec, collect(enumerate_delta_k(k, u)),
                              "delta_k(k=" + std::to_string(k) + ",n=" + std::to_string(u.n) + ")", opts);
}

/// Exhaustive sweep over the Schreier sets inside {1..max_element}.
inline DistortionReport measure_schreier_distortion(const EmbeddingSpec& spec, Universe u,
                                                    const AuditOptions& opts = {}) {
    return measure_distortion(spec, collect(enumerate_schreier(u)),
                              "schreier(n=" + std::to_string(u.n) + ")", opts);
}

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::uint64_t pairs = 10000;
    Element max_element = 15;
};

/// Deterministic bounded draws from mt19937_64 (whose output sequence is
/// fixed by the standard), so samples are identical across platforms.
class PointSampler {
public:
    PointSampler(const EmbeddingSpec& spec, const SamplerConfig& cfg) : spec_(spec), cfg_(cfg), rng_(cfg.seed) {
        if (cfg.max_element < 1) {
            throw DomainError("sampler needs max_element >= 1");
        }
    }

    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = rng_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform size in [0, max size], then a uniform subset of that size;
    /// rejected until it lies in the spec's domain.
    Point point() {
        std::size_t max_size = cfg_.max_element;
        if (auto f = spec_.as<FiniteRank>()) max_size = std::min(max_size, f->k);
        for (int attempt = 0; attempt < 1'000'000; ++attempt) {
            std::size_t s = below(max_size + 1);
            std::vector<Element> pool(cfg_.max_element);
            for (Element i = 0; i < cfg_.max_element; ++i) pool[i] = i + 1;
            for (std::size_t i = 0; i < s; ++i) {
                std::swap(pool[i], pool[i + below(pool.size() - i)]);
            }
            Point p(std::vector<Element>(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s)));
            if (spec_.in_domain(p)) return p;
        }
        throw DomainError("sampler could not draw a point in the domain of " + spec_.str());
    }

    PairWitness pair() {
        while (true) {
            Point a = point();
            Point b = point();
            if (!(a == b)) return {std::move(a), std::move(b)};
        }
    }

private:
    const EmbeddingSpec& spec_;
    SamplerConfig cfg_;
    std::mt19937_64 rng_;
};

/// Seeded random probe over `cfg.pairs` distinct pairs with elements in
/// {1..cfg.max_element}. Pairs are drawn up front; evaluation may fan out.
inline DistortionReport sample_distortion(const EmbeddingSpec& spec, const SamplerConfig& cfg,
                                          const AuditOptions& opts = {}) {
    PointSampler sampler(spec, cfg);
    std::vector<PairWitness> pairs;
    pairs.reserve(cfg.pairs);
    for (std::uint64_t i = 0; i < cfg.pairs; ++i) pairs.push_back(sampler.pair());

    auto state = detail::parallel_sweep(pairs.size(), opts.workers, [&](std::uint64_t lo, std::uint64_t hi,
                                                                         detail::SweepState& st) {
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            const auto& [a, b] = pairs[idx];
            st.observe(idx, spec, a, b, pair_gap(spec, a, b, opts.embed), distance(a, b));
        }
    });
    std::string label = "sample(seed=" + std::to_string(cfg.seed) + ",pairs=" + std::to_string(cfg.pairs) +
                        ",max_element=" + std::to_string(cfg.max_element) + ")";
    return detail::to_report(state, spec.str(), std::move(label), [&](std::uint64_t idx) { return pairs[idx]; });
}

/// A finite map from points to vectors in ℓ∞^d (exact rational coordinates).
struct FiniteEmbedding {
    std::vector<Point> domain;
    std::vector<std::vector<Rational>> images;

    std::size_t dimension() const { return images.empty() ? 0 : images.front().size(); }

    void validate() const {
        if (domain.size() != images.size()) {
            throw DomainError("finite embedding has " + std::to_string(domain.size()) + " points but " +
                              std::to_string(images.size()) + " images");
        }
        for (const auto& v : images) {
            if (v.size() != dimension()) throw DomainError("finite embedding images differ in dimension");
        }
        std::vector<Point> sorted = domain;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw DomainError("finite embedding domain has repeated points");
        }
    }

    std::optional<std::size_t> find(const Point& p) const {
        auto it = std::find(domain.begin(), domain.end(), p);
        if (it == domain.end()) return std::nullopt;
        return static_cast<std::size_t>(it - domain.begin());
    }

    const std::vector<Rational>& image(const Point& p) const {
        auto i = find(p);
        if (!i) throw DomainError("point " + p.str() + " is not in the embedding's domain");
        return images[*i];
    }
};

inline Rational sup_distance(const std::vector<Rational>& u, const std::vector<Rational>& v) {
    Rational best(0);
    for (std::size_t n = 0; n < u.size(); ++n) {
        Rational d = u[n] - v[n];
        if (d < Rational(0)) d = -d;
        best = std::max(best, d);
    }
    return best;
}

using IndexSet = std::vector<std::size_t>;

/// 𝒳_{i,j} = { n : |f_n({i}) − f_n({j})| >= η } for each requested (i, j).
inline std::map<std::pair<Element, Element>, IndexSet> xij_sets(const FiniteEmbedding& f, Rational eta,
                                                                  const std::vector<std::pair<Element, Element>>& pairs) {
    std::map<std::pair<Element, Element>, IndexSet> out;
    for (auto [i, j] : pairs) {
        auto fi = f.find(Point{i});
        auto fj = f.find(Point{j});
        if (!fi || !fj) {
            throw DomainError("singleton {" + std::to_string(fi ? j : i) + "} is missing from the embedding");
        }
        IndexSet& set = out[{i, j}];
        for (std::size_t n = 0; n < f.dimension(); ++n) {
            Rational d = f.images[*fi][n] - f.images[*fj][n];
            if (d < Rational(0)) d = -d;
            if (d >= eta) set.push_back(n);
        }
    }
    return out;
}

/// (floor(2C/η) + 1)^d: pigeonhole bound on pairwise η-separated points in a
/// radius-C sup-norm ball of ℓ∞^d. Cells of side 2C/m < η hold one point each.
inline std::uint64_t packing_bound(Rational c, Rational eta, std::size_t d) {
    if (c <= Rational(0) || eta <= Rational(0)) {
        throw DomainError("packing_bound needs C > 0 and eta > 0");
    }
    auto per_axis = static_cast<std::uint64_t>((Rational(2) * c / eta).floor()) + 1;
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (__builtin_mul_overflow(out, per_axis, &out)) {
            throw OverflowError("packing bound exceeds 2^64 (dimension " + std::to_string(d) + ")");
        }
    }
    return out;
}

enum class TraceVerdict { LowerBoundViolation, Contradiction, Inconclusive };

inline const char* to_string(TraceVerdict v) {
    switch (v) {
    case TraceVerdict::LowerBoundViolation: return "LOWER_BOUND_VIOLATION";
    case TraceVerdict::Contradiction: return "CONTRADICTION";
    case TraceVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

struct TraceReport {
    TraceVerdict verdict = TraceVerdict::Inconclusive;
    Rational claim;
    Rational eta;
    std::optional<PairWitness> lower_violation;
    IndexSet x12;
    std::vector<Element> probes;  // n >= 3 with {n}, {1,n}, {2,n} all present
    std::optional<std::uint64_t> bound;  // empty when it overflows 64 bits
    Rational radius;  // max ‖P f({n})‖ over probes
    std::optional<Rational> min_separation;  // min ‖P f({i}) − P f({j})‖ over probe pairs
    std::optional<PairWitness> upper_violation;  // first pair with ‖f(a) − f(b)‖ > C·d
};

/// Aharoni's counting argument run against a finite embedding of a Δ̃₂
/// truncation, treating C as a claimed upper Lipschitz constant.
///
/// f must be non-contracting (‖f(a) − f(b)‖ >= d(a,b)); the first failing pair
/// is reported as LOWER_BOUND_VIOLATION before anything else runs. Otherwise,
/// with f(∅) translated to 0 and η = 4 − 2C, the projections P f({n}) onto the
/// coordinates 𝒳_{1,2} would be C-bounded and η-separated if the claim held,
/// so more probes than packing_bound(C, η, |𝒳_{1,2}|) refute it
/// (CONTRADICTION, with the offending pair located). Otherwise INCONCLUSIVE.
inline TraceReport aharoni_trace(const FiniteEmbedding& f, Rational claim) {
    if (claim >= Rational(2)) {
        throw DomainError("aharoni_trace needs C < 2 (eta = 4 - 2C must be positive), got C = " + claim.str());
    }
    if (claim <= Rational(0)) {
        throw DomainError("aharoni_trace needs C > 0");
    }
    f.validate();
    for (const Point& p : f.domain) {
        if (!in_tilde_delta2(p)) throw DomainError("point " + p.str() + " is not in tilde-delta-2");
    }
    for (const Point& p : {Point{}, Point{1}, Point{2}}) {
        if (!f.find(p)) throw DomainError("trace needs " + p.str() + " in the domain");
    }

    TraceReport rep;
    rep.claim = claim;
    rep.eta = Rational(4) - Rational(2) * claim;

    const std::size_t n = f.domain.size();
    for (std::size_t i = 0; i < n && !rep.lower_violation; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (sup_distance(f.images[i], f.images[j]) < Rational(distance(f.domain[i], f.domain[j]))) {
                rep.lower_violation = PairWitness{f.domain[i], f.domain[j]};
                break;
            }
        }
    }
    if (rep.lower_violation) {
        rep.verdict = TraceVerdict::LowerBoundViolation;
        return rep;
    }

    // Translate so that f(∅) = 0.
    const std::vector<Rational>& origin = f.image(Point{});
    FiniteEmbedding g = f;
    for (auto& v : g.images) {
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = v[c] - origin[c];
    }

    rep.x12 = xij_sets(g, rep.eta, {{1, 2}}).at({1, 2});
    for (const Point& p : g.domain) {
        if (p.size() == 1 && p.min() >= 3 && g.find(Point{1, p.min()}) && g.find(Point{2, p.min()})) {
            rep.probes.push_back(p.min());
        }
    }
    std::sort(rep.probes.begin(), rep.probes.end());

    std::vector<std::vector<Rational>> projected;
    for (Element m : rep.probes) {
        const auto& v = g.image(Point{m});
        std::vector<Rational> pv;
        for (std::size_t c : rep.x12) pv.push_back(v[c]);
        rep.radius = std::max(rep.radius, sup_distance(pv, std::vector<Rational>(pv.size(), Rational(0))));
        projected.push_back(std::move(pv));
    }
    for (std::size_t i = 0; i < projected.size(); ++i) {
        for (std::size_t j = i + 1; j < projected.size(); ++j) {
            Rational s = sup_distance(projected[i], projected[j]);
            if (!rep.min_separation || s < *rep.min_separation) rep.min_separation = s;
        }
    }

    try {
        rep.bound = packing_bound(claim, rep.eta, rep.x12.size());
    } catch (const OverflowError&) {
        rep.bound.reset();
    }
    for (std::size_t i = 0; i < n && !rep.upper_violation; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Rational d(distance(f.domain[i], f.domain[j]));
            if (sup_distance(f.images[i], f.images[j]) > claim * d) {
                rep.upper_violation = PairWitness{f.domain[i], f.domain[j]};
                break;
            }
        }
    }
    rep.verdict = rep.bound && rep.probes.size() > *rep.bound ? TraceVerdict::Contradiction
                                                              : TraceVerdict::Inconclusive;
    return rep;
}

/// Evaluates embedded points as functions on a finite set of branch
/// functionals: the union, per distinct component, of all image supports.
/// Sup-distances between the resulting vectors equal the tree-space gaps.
inline FiniteEmbedding finite_embedding_from_spec(const EmbeddingSpec& spec, const std::vector<Point>& domain,
                                                  Rational scale = Rational(1), const EmbedOptions& opts = {}) {
    std::vector<BundleVector> images;
    std::vector<std::size_t> cuts;
    for (const Point& p : domain) {
        images.push_back(embed_set(spec, p, opts));
        for (const Band& b : images.back().bands()) {
            cuts.push_back(b.first);
            cuts.push_back(b.last + 1);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<std::pair<std::size_t, TreeNode>> coords;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        std::vector<TreeNode> nodes;
        for (const BundleVector& img : images) {
            SparseVector comp = img.component(cuts[c]);
            for (std::size_t e = 0; e < comp.size(); ++e) {
                auto path = comp.entry(e).path;
                nodes.emplace_back(std::vector<Element>(path.begin(), path.end()));
            }
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        for (auto& t : nodes) coords.emplace_back(cuts[c], std::move(t));
    }

    FiniteEmbedding out;
    out.domain = domain;
    for (const BundleVector& img : images) {
        std::vector<Rational> v;
        v.reserve(coords.size());
        std::size_t cached_height = 0;
        SparseVector comp;
        for (const auto& [h, t] : coords) {
            if (h != cached_height) {
                comp = img.component(h);
                cached_height = h;
            }
            v.push_back(scale * Rational(branch_functional(comp, t)));
        }
        out.images.push_back(std::move(v));
    }
    return out;
}

} // namespace cubetree
