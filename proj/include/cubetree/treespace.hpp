#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "hamming.hpp"

namespace cubetree {

/// A node of T_k: a strictly increasing tuple of positive integers. The empty
/// tuple is the root.
class TreeNode {
public:
    TreeNode() = default;

    explicit TreeNode(std::vector<Element> path) : path_(std::move(path)) {
        for (std::size_t i = 0; i < path_.size(); ++i) {
            if (path_[i] < 1 || (i > 0 && path_[i] <= path_[i - 1])) {
                throw DomainError("tree node path must be strictly increasing positive integers: " + str());
            }
        }
    }
    TreeNode(std::initializer_list<Element> path) : TreeNode(std::vector<Element>(path)) {}

    std::span<const Element> path() const { return path_; }
    std::size_t size() const { return path_.size(); }
    bool is_root() const { return path_.empty(); }

    friend auto operator<=>(const TreeNode&, const TreeNode&) = default;

    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < path_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(path_[i]);
        }
        return out + ")";
    }

private:
    std::vector<Element> path_;
};

/// Initial segments of `t`, shortest (the root) first.
inline std::vector<TreeNode> prefixes(const TreeNode& t) {
    std::vector<TreeNode> out;
    out.reserve(t.size() + 1);
    auto p = t.path();
    for (std::size_t len = 0; len <= p.size(); ++len) {
        out.emplace_back(std::vector<Element>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len)));
    }
    return out;
}

namespace detail {

inline bool tree_less(std::span<const Element> a, std::span<const Element> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool is_prefix(std::span<const Element> s, std::span<const Element> t) {
    return s.size() <= t.size() && std::equal(s.begin(), s.end(), t.begin());
}

} // namespace detail

class SparseVectorBuilder;

/// Finitely supported integer vector on T_k.
///
/// Entries are kept in tree preorder (lexicographic on paths, a prefix before
/// its extensions) with paths packed into one contiguous pool. Every stored
/// coefficient is nonzero.
class SparseVector {
public:
    struct Entry {
        std::span<const Element> path;
        std::int64_t coeff;
    };

    SparseVector() = default;
    explicit SparseVector(std::size_t height) : height_(height) {}

    /// The basis vector e_t.
    static SparseVector basis(std::size_t height, const TreeNode& t);

    std::size_t height() const { return height_; }
    std::size_t size() const { return slots_.size(); }
    bool is_zero() const { return slots_.empty(); }

    Entry entry(std::size_t i) const {
        const Slot& s = slots_[i];
        return {std::span<const Element>(pool_).subspan(s.offset, s.length), s.coeff};
    }

    std::int64_t coefficient(std::span<const Element> path) const {
        auto it = std::lower_bound(slots_.begin(), slots_.end(), path, [&](const Slot& s, std::span<const Element> p) {
            return detail::tree_less(view(s), p);
        });
        if (it != slots_.end() && std::ranges::equal(view(*it), path)) {
            return it->coeff;
        }
        return 0;
    }
    std::int64_t coefficient(const TreeNode& t) const { return coefficient(t.path()); }

    /// Same coefficients, viewed in T_h. Fails if some node is longer than h.
    SparseVector with_height(std::size_t h) const {
        for (const Slot& s : slots_) {
            if (s.length > h) {
                throw DomainError("node of length " + std::to_string(s.length) + " does not fit in T_" +
                                  std::to_string(h));
            }
        }
        SparseVector out = *this;
        out.height_ = h;
        return out;
    }

    /// Coefficient equality ignoring the height tag.
    bool same_coefficients(const SparseVector& other) const {
        if (slots_.size() != other.slots_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            if (slots_[i].coeff != other.slots_[i].coeff ||
                !std::ranges::equal(view(slots_[i]), other.view(other.slots_[i]))) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const SparseVector& a, const SparseVector& b) {
        return a.height_ == b.height_ && a.same_coefficients(b);
    }

    friend SparseVector operator+(const SparseVector& a, const SparseVector& b) { return combine(a, b, 1); }
    friend SparseVector operator-(const SparseVector& a, const SparseVector& b) { return combine(a, b, -1); }
    friend SparseVector operator*(std::int64_t c, const SparseVector& x) {
        if (c == 0) {
            return SparseVector(x.height_);
        }
        SparseVector out = x;
        for (Slot& s : out.slots_) {
            s.coeff = checked::mul(c, s.coeff);
        }
        return out;
    }
    SparseVector operator-() const { return -1 * *this; }

private:
    friend class SparseVectorBuilder;

    struct Slot {
        std::uint32_t offset;
        std::uint32_t length;
        std::int64_t coeff;
    };

    std::span<const Element> view(const Slot& s) const {
        return std::span<const Element>(pool_).subspan(s.offset, s.length);
    }

    void push(std::span<const Element> path, std::int64_t coeff) {
        slots_.push_back({static_cast<std::uint32_t>(pool_.size()), static_cast<std::uint32_t>(path.size()), coeff});
        pool_.insert(pool_.end(), path.begin(), path.end());
    }

    // Linear merge of two preorder-sorted vectors.
    static SparseVector combine(const SparseVector& a, const SparseVector& b, std::int64_t sign) {
        if (a.height_ != b.height_) {
            throw DomainError("cannot combine vectors on T_" + std::to_string(a.height_) + " and T_" +
                              std::to_string(b.height_));
        }
        SparseVector out(a.height_);
        out.slots_.reserve(a.slots_.size() + b.slots_.size());
        out.pool_.reserve(a.pool_.size() + b.pool_.size());
        std::size_t i = 0, j = 0;
        while (i < a.slots_.size() || j < b.slots_.size()) {
            if (j == b.slots_.size() ||
                (i < a.slots_.size() && detail::tree_less(a.view(a.slots_[i]), b.view(b.slots_[j])))) {
                out.push(a.view(a.slots_[i]), a.slots_[i].coeff);
                ++i;
            } else if (i == a.slots_.size() || detail::tree_less(b.view(b.slots_[j]), a.view(a.slots_[i]))) {
                out.push(b.view(b.slots_[j]), checked::mul(sign, b.slots_[j].coeff));
                ++j;
            } else {
                std::int64_t c = checked::add(a.slots_[i].coeff, checked::mul(sign, b.slots_[j].coeff));
                if (c != 0) {
                    out.push(a.view(a.slots_[i]), c);
                }
                ++i;
                ++j;
            }
        }
        return out;
    }

    std::size_t height_ = 0;
    std::vector<Element> pool_;
    std::vector<Slot> slots_;
};

/// Accumulates (path, coefficient) contributions into a SparseVector.
///
/// `add` takes contributions in any order (duplicates are summed).
/// `append_ordered` is the fast path for generators that already emit in
/// tree preorder with no repeats; mixing the two is allowed.
class SparseVectorBuilder {
public:
    explicit SparseVectorBuilder(std::size_t height) : out_(height) {}

    void add(std::span<const Element> path, std::int64_t coeff) {
        check_path(path);
        if (coeff == 0) {
            return;
        }
        sorted_ = sorted_ && (out_.slots_.empty() || detail::tree_less(last(), path));
        out_.push(path, coeff);
    }
    void add(const TreeNode& t, std::int64_t coeff) { add(t.path(), coeff); }

    /// Caller guarantees `path` is a valid node strictly after every previous path.
    void append_ordered(std::span<const Element> path, std::int64_t coeff) {
        if (path.size() > out_.height_) {
            throw DomainError("node longer than tree height " + std::to_string(out_.height_));
        }
        if (coeff != 0) {
            out_.push(path, coeff);
        }
    }

    std::size_t pending() const { return out_.slots_.size(); }

    SparseVector build() && {
        if (sorted_) {
            return std::move(out_);
        }
        const SparseVector& raw = out_;
        std::vector<std::size_t> order(raw.slots_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return detail::tree_less(raw.view(raw.slots_[x]), raw.view(raw.slots_[y]));
        });
        SparseVector result(raw.height_);
        for (std::size_t idx = 0; idx < order.size();) {
            auto path = raw.view(raw.slots_[order[idx]]);
            std::int64_t c = 0;
            for (; idx < order.size() && std::ranges::equal(raw.view(raw.slots_[order[idx]]), path); ++idx) {
                c = checked::add(c, raw.slots_[order[idx]].coeff);
            }
            if (c != 0) {
                result.push(path, c);
            }
        }
        return result;
    }

private:
    std::span<const Element> last() const { return out_.view(out_.slots_.back()); }

    void check_path(std::span<const Element> path) const {
        if (path.size() > out_.height_) {
            throw DomainError("node of length " + std::to_string(path.size()) + " does not fit in T_" +
                              std::to_string(out_.height_));
        }
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (path[i] < 1 || (i > 0 && path[i] <= path[i - 1])) {
                throw DomainError("tree node path must be strictly increasing positive integers");
            }
        }
    }

    SparseVector out_;
    bool sorted_ = true;
};

inline SparseVector SparseVector::basis(std::size_t height, const TreeNode& t) {
    SparseVectorBuilder b(height);
    b.add(t, 1);
    return std::move(b).build();
}

/// β_t(x): sum of the coefficients of x along the branch of initial segments of t.
inline std::int64_t branch_functional(const SparseVector& x, const TreeNode& t) {
    if (t.size() > x.height()) {
        throw DomainError("node " + t.str() + " is not in T_" + std::to_string(x.height()));
    }
    std::int64_t sum = 0;
    auto p = t.path();
    for (std::size_t len = 0; len <= p.size(); ++len) {
        sum = checked::add(sum, x.coefficient(p.first(len)));
    }
    return sum;
}

/// sup_t |β_t(x)|, evaluated over support nodes and the root only.
///
/// For any node t, β_t(x) equals β at the deepest prefix of t lying in the
/// support (coefficients elsewhere on the branch are zero), or 0 if there is
/// none. One preorder pass with a stack of open ancestors suffices.
inline std::int64_t norm(const SparseVector& x) {
    struct Open {
        std::span<const Element> path;
        std::int64_t beta;
    };
    std::vector<Open> stack;
    std::int64_t best = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto e = x.entry(i);
        while (!stack.empty() && !detail::is_prefix(stack.back().path, e.path)) {
            stack.pop_back();
        }
        std::int64_t beta = checked::add(stack.empty() ? 0 : stack.back().beta, e.coeff);
        best = std::max(best, checked::abs(beta));
        stack.push_back({e.path, beta});
    }
    return best;
}

/// One component of a bundle, shared by every height in [first, last]. The
/// vector's nodes all have length <= first, so it lives in each of those trees.
struct Band {
    std::size_t first = 0;
    std::size_t last = 0;
    SparseVector vector;
};

/// Element of S(T) ≅ (⊕_k S(T_k))_{c0} with finitely many nonzero components.
///
/// Canonical form: bands sorted by height, disjoint, nonzero vectors, and no
/// two adjacent bands carrying the same coefficients.
class BundleVector {
public:
    BundleVector() = default;

    /// Builds from arbitrary disjoint bands; canonicalizes.
    explicit BundleVector(std::vector<Band> bands) {
        std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < bands.size(); ++i) {
            Band& b = bands[i];
            if (b.first < 1 || b.last < b.first) {
                throw DomainError("invalid band [" + std::to_string(b.first) + ", " + std::to_string(b.last) + "]");
            }
            if (i > 0 && bands[i - 1].last >= b.first) {
                throw DomainError("overlapping bands at height " + std::to_string(b.first));
            }
            b.vector = b.vector.with_height(b.first);
        }
        for (Band& b : bands) {
            append(std::move(b));
        }
    }

    /// A single-tree vector placed at its own height.
    static BundleVector single(SparseVector v) {
        std::size_t h = v.height();
        return BundleVector(std::vector<Band>{Band{h, h, std::move(v)}});
    }

    std::span<const Band> bands() const { return bands_; }
    bool is_zero() const { return bands_.empty(); }

    /// Total stored nodes, counting each band once.
    std::size_t node_count() const {
        std::size_t n = 0;
        for (const Band& b : bands_) n += b.vector.size();
        return n;
    }

    /// The component in T_k (zero if absent).
    SparseVector component(std::size_t k) const {
        for (const Band& b : bands_) {
            if (b.first <= k && k <= b.last) {
                return b.vector.with_height(k);
            }
        }
        return SparseVector(k);
    }

    friend bool operator==(const BundleVector& a, const BundleVector& b) {
        if (a.bands_.size() != b.bands_.size()) {
            return false;
        }
        for (std::size_t i = 0; i < a.bands_.size(); ++i) {
            if (a.bands_[i].first != b.bands_[i].first || a.bands_[i].last != b.bands_[i].last ||
                !(a.bands_[i].vector == b.bands_[i].vector)) {
                return false;
            }
        }
        return true;
    }

    friend BundleVector operator+(const BundleVector& a, const BundleVector& b) { return combine(a, b, 1); }
    friend BundleVector operator-(const BundleVector& a, const BundleVector& b) { return combine(a, b, -1); }

private:
    // Appends in height order, dropping zeros and coalescing equal neighbours.
    void append(Band b) {
        if (b.vector.is_zero()) {
            return;
        }
        if (!bands_.empty() && bands_.back().last + 1 == b.first && bands_.back().vector.same_coefficients(b.vector)) {
            bands_.back().last = b.last;
            return;
        }
        bands_.push_back(std::move(b));
    }

    static BundleVector combine(const BundleVector& a, const BundleVector& b, std::int64_t sign) {
        std::vector<std::size_t> cuts;
        for (const auto* src : {&a, &b}) {
            for (const Band& band : src->bands_) {
                cuts.push_back(band.first);
                cuts.push_back(band.last + 1);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        BundleVector out;
        std::size_t ia = 0, ib = 0;
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            std::size_t lo = cuts[c], hi = cuts[c + 1] - 1;
            while (ia < a.bands_.size() && a.bands_[ia].last < lo) ++ia;
            while (ib < b.bands_.size() && b.bands_[ib].last < lo) ++ib;
            bool has_a = ia < a.bands_.size() && a.bands_[ia].first <= lo;
            bool has_b = ib < b.bands_.size() && b.bands_[ib].first <= lo;
            if (!has_a && !has_b) {
                continue;
            }
            SparseVector va = has_a ? a.bands_[ia].vector.with_height(lo) : SparseVector(lo);
            SparseVector vb = has_b ? b.bands_[ib].vector.with_height(lo) : SparseVector(lo);
            out.append(Band{lo, hi, sign > 0 ? va + vb : va - vb});
        }
        return out;
    }

    std::vector<Band> bands_;
};

/// max over components of the component norm.
inline std::int64_t bundle_norm(const BundleVector& x) {
    std::int64_t best = 0;
    for (const Band& b : x.bands()) {
        best = std::max(best, norm(b.vector));
    }
    return best;
}

} // namespace cubetree
