#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "error.hpp"

namespace cubetree {

/// Exact rational with int64 numerator/denominator, always normalized
/// (gcd 1, positive denominator). Arithmetic is overflow-checked.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}
    Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_integer() const { return den_ == 1; }

    /// Largest integer <= this.
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) {
            --q;
        }
        return q;
    }

    /// Smallest integer >= this.
    std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) {
            ++q;
        }
        return q;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) {
            throw DomainError("rational division by zero");
        }
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = checked::neg(num_);
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

    /// `p/q` text form; integers still print their denominator (`1/1`).
    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    /// Accepts `p/q` or a bare integer `p`.
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
            while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
            return s;
        };
        auto to_int = [&](std::string_view s) {
            s = trim(s);
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
                throw ParseError("not a rational: '" + std::string(text) + "'");
            }
            return v;
        };
        auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            return Rational(to_int(text));
        }
        std::int64_t d = to_int(text.substr(slash + 1));
        if (d == 0) {
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        }
        return Rational(to_int(text.substr(0, slash)), d);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        Rational r;
        r.num_ = checked::narrow(n);
        r.den_ = checked::narrow(d);
        return r;
    }

    void assign(std::int64_t num, std::int64_t den) {
        if (den == 0) {
            throw DomainError("rational with zero denominator");
        }
        *this = from_wide(num, den);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace cubetree
