#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace cubetree {

using Element = std::uint32_t;

/// A vertex of the infinite Hamming cube: a finite set of positive integers,
/// stored sorted ascending without duplicates.
class Point {
public:
    Point() = default;

    /// Sorts and deduplicates; rejects entries < 1.
    explicit Point(std::vector<Element> elements) : elements_(std::move(elements)) {
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        if (!elements_.empty() && elements_.front() < 1) {
            throw DomainError("point elements must be >= 1");
        }
    }
    Point(std::initializer_list<Element> elements) : Point(std::vector<Element>(elements)) {}

    std::span<const Element> elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    Element min() const { return elements_.front(); }
    Element max() const { return elements_.back(); }

    bool contains(Element e) const { return std::binary_search(elements_.begin(), elements_.end(), e); }

    /// Set difference `this \ other`.
    Point minus(const Point& other) const {
        Point out;
        std::set_difference(elements_.begin(), elements_.end(), other.elements_.begin(), other.elements_.end(),
                            std::back_inserter(out.elements_));
        return out;
    }

    /// Size-then-lexicographic order; this is the enumeration order of every stream below.
    friend std::strong_ordering operator<=>(const Point& a, const Point& b) {
        if (a.size() != b.size()) {
            return a.size() <=> b.size();
        }
        return a.elements_ <=> b.elements_;
    }
    friend bool operator==(const Point&, const Point&) = default;

    /// `[1,4,9]`, with `[]` for the empty set.
    std::string str() const {
        std::string out = "[";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(elements_[i]);
        }
        return out + "]";
    }

private:
    std::vector<Element> elements_;
};

/// Exhaustive operations only see elements in {1..n}.
struct Universe {
    Element n = 0;
};

/// Symmetric-difference metric |a △ b|.
inline std::int64_t distance(const Point& a, const Point& b) {
    auto x = a.elements();
    auto y = b.elements();
    std::size_t i = 0, j = 0;
    std::int64_t common = 0;
    while (i < x.size() && j < y.size()) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<std::int64_t>(x.size() + y.size()) - 2 * common;
}

/// Schreier sets: ∅, or |a| <= min a.
inline bool is_schreier(const Point& a) { return a.empty() || a.size() <= a.min(); }

/// Membership in {∅, {n}, {1,i}, {2,j} : n >= 1, i >= 2, j >= 3}.
inline bool in_tilde_delta2(const Point& a) {
    if (a.size() <= 1) {
        return true;
    }
    if (a.size() != 2) {
        return false;
    }
    return a.min() == 1 || (a.min() == 2 && a.max() >= 3);
}

/// Range adaptor for the lazy point streams: any class with
/// `std::optional<Point> next()` gets `begin()`/`end()`.
template <class Derived>
class PointStream {
public:
    class iterator {
    public:
        using value_type = Point;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(Derived* stream) : stream_(stream) { ++*this; }

        const Point& operator*() const { return *current_; }
        const Point* operator->() const { return &*current_; }
        iterator& operator++() {
            current_ = stream_->next();
            return *this;
        }
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator& it, std::default_sentinel_t) { return !it.current_.has_value(); }

    private:
        Derived* stream_ = nullptr;
        std::optional<Point> current_;
    };

    iterator begin() { return iterator(static_cast<Derived*>(this)); }
    std::default_sentinel_t end() { return {}; }
};

/// All subsets of {1..n} with at most k elements, size-then-lexicographic.
class DeltaKStream : public PointStream<DeltaKStream> {
public:
    DeltaKStream(std::size_t k, Universe u) : max_size_(std::min<std::size_t>(k, u.n)), n_(u.n) {}

    std::optional<Point> next() {
        if (!started_) {
            started_ = true;
            return Point{};
        }
        if (!advance()) {
            if (combo_.size() >= max_size_) {
                return std::nullopt;
            }
            std::size_t s = combo_.size() + 1;
            combo_.resize(s);
            for (std::size_t i = 0; i < s; ++i) {
                combo_[i] = static_cast<Element>(i + 1);
            }
        }
        return Point(combo_);
    }

private:
    // Next combination of the same size in lexicographic order.
    bool advance() {
        std::size_t s = combo_.size();
        for (std::size_t i = s; i-- > 0;) {
            if (combo_[i] < n_ - (s - 1 - i)) {
                ++combo_[i];
                for (std::size_t j = i + 1; j < s; ++j) {
                    combo_[j] = combo_[j - 1] + 1;
                }
                return true;
            }
        }
        return false;
    }

    std::size_t max_size_;
    Element n_;
    bool started_ = false;
    std::vector<Element> combo_;
};

/// Schreier sets inside {1..n}, in the same order as DeltaKStream.
class SchreierStream : public PointStream<SchreierStream> {
public:
    explicit SchreierStream(Universe u) : inner_(u.n, u) {}

    std::optional<Point> next() {
        while (auto p = inner_.next()) {
            if (is_schreier(*p)) {
                return p;
            }
        }
        return std::nullopt;
    }

private:
    DeltaKStream inner_;
};

/// The Δ̃₂ family truncated to {1..n}: ∅, {m}, {1,i}, {2,j}.
class TildeDelta2Stream : public PointStream<TildeDelta2Stream> {
public:
    explicit TildeDelta2Stream(Universe u) : inner_(2, u) {
        if (u.n < 3) {
            throw DomainError("tilde-delta-2 needs a universe with n >= 3, got n = " + std::to_string(u.n));
        }
    }

    std::optional<Point> next() {
        while (auto p = inner_.next()) {
            if (in_tilde_delta2(*p)) {
                return p;
            }
        }
        return std::nullopt;
    }

private:
    DeltaKStream inner_;
};

inline DeltaKStream enumerate_delta_k(std::size_t k, Universe u) { return DeltaKStream(k, u); }
inline SchreierStream enumerate_schreier(Universe u) { return SchreierStream(u); }
inline TildeDelta2Stream enumerate_tilde_delta2(Universe u) { return TildeDelta2Stream(u); }

template <class Stream>
std::vector<Point> collect(Stream&& stream) {
    std::vector<Point> out;
    while (auto p = stream.next()) {
        out.push_back(std::move(*p));
    }
    return out;
}

} // namespace cubetree
