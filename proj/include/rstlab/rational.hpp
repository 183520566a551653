#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rst {

/// Exact rational on 64-bit integers. All homogeneity arithmetic in the
/// tree calculus goes through this type; overflow throws instead of wrapping.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_positive() const { return num_ > 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return make_checked(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return make_checked(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make_checked((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return (double)num_ / (double)den_; }

    /// "p" or "p/q".
    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p", "-p/q", with optional whitespace. Throws on garbage.
    static Rational parse(const std::string& s);

private:
    long long num_ = 0;
    long long den_ = 1;

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    static Rational make_checked(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        // gcd on __int128
        __int128 x = a, y = d;
        while (y != 0) { __int128 t = x % y; x = y; y = t; }
        if (x > 1) { n /= x; d /= x; }
        const __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Rational: 64-bit overflow");
        Rational r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
};

inline Rational Rational::parse(const std::string& s) {
    size_t i = 0, j = s.size();
    while (i < j && std::isspace((unsigned char)s[i])) ++i;
    while (j > i && std::isspace((unsigned char)s[j - 1])) --j;
    std::string body = s.substr(i, j - i);
    if (body.empty()) throw std::invalid_argument("Rational::parse: empty string");
    auto slash = body.find('/');
    try {
        size_t pos = 0;
        if (slash == std::string::npos) {
            long long n = std::stoll(body, &pos);
            if (pos != body.size()) throw std::invalid_argument("");
            return Rational(n);
        }
        long long n = std::stoll(body.substr(0, slash), &pos);
        if (pos != slash) throw std::invalid_argument("");
        long long d = std::stoll(body.substr(slash + 1), &pos);
        if (pos != body.size() - slash - 1) throw std::invalid_argument("");
        return Rational(n, d);
    } catch (const std::exception&) {
        throw std::invalid_argument("Rational::parse: bad rational '" + s + "'");
    }
}

}  // namespace rst
