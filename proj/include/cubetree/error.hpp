#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cubetree {

/// A value or argument outside the domain of an operation (e.g. a set too
/// large for a finite-rank embedding, or a non-Schreier set).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Materialization would exceed the configured node budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 64-bit integer overflow. Never wraps.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Malformed textual input (ordinals, rationals, spec strings, JSON payloads).
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw OverflowError("int64 overflow in " + std::to_string(a) + " + " + std::to_string(b));
    }
    return out;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_sub_overflow(a, b, &out)) {
        throw OverflowError("int64 overflow in " + std::to_string(a) + " - " + std::to_string(b));
    }
    return out;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw OverflowError("int64 overflow in " + std::to_string(a) + " * " + std::to_string(b));
    }
    return out;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

inline std::int64_t abs(std::int64_t a) { return a < 0 ? neg(a) : a; }

inline std::int64_t narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
        throw OverflowError("value does not fit in int64");
    }
    return static_cast<std::int64_t>(v);
}

} // namespace checked

} // namespace cubetree
