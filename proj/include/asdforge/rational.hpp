#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>

#include "asdforge/numtheory.hpp"

namespace asdforge {

/// Arbitrary-precision rational in canonical lowest terms: gcd(|num|, den) = 1,
/// den >= 1, zero is 0/1. All arithmetic is exact.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(int n) : v_(n) {}
    explicit Rat(const mpz_class& n) : v_(n) {}
    Rat(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Parses "num" or "num/den" in base 10.
    static Rat from_string(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(mpz_class(s));
            mpz_class num(s.substr(0, slash));
            mpz_class den(s.substr(slash + 1));
            return Rat(num, den);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Rat: cannot parse \"" + s + "\"");
        }
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_negative() const { return v_ < 0; }

    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rat operator-() const { return Rat(mpq_class(-v_), already_canonical{}); }
    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_), already_canonical{}); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_), already_canonical{}); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_), already_canonical{}); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(v_ / o.v_), already_canonical{});
    }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    std::strong_ordering operator<=>(const Rat& o) const {
        int c = cmp(v_, o.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    Rat abs() const { return is_negative() ? -*this : *this; }

    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: inverse of zero");
        return Rat(den(), num());
    }

    /// x^e with e any integer; 0^negative is a domain error.
    Rat pow(long e) const {
        if (e < 0) return inv().pow(-e);
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), static_cast<unsigned long>(e));
        mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), static_cast<unsigned long>(e));
        return Rat(mpq_class(n, d), already_canonical{});
    }

    double to_double() const { return v_.get_d(); }

private:
    struct already_canonical {};
    Rat(mpq_class q, already_canonical) : v_(std::move(q)) {}
    mpq_class v_;
};

/// p-adic valuation value: an integer or the +infinity sentinel (valuation of
/// zero), ordered above every integer.
class PadicVal {
public:
    PadicVal() : inf_(false), v_(0) {}
    static PadicVal infinity() { return PadicVal(true, 0); }
    static PadicVal finite(long v) { return PadicVal(false, v); }

    bool is_infinite() const { return inf_; }
    long value() const {
        if (inf_) throw std::logic_error("PadicVal: infinite valuation has no integer value");
        return v_;
    }

    bool operator==(const PadicVal& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }
    std::strong_ordering operator<=>(const PadicVal& o) const {
        if (inf_ && o.inf_) return std::strong_ordering::equal;
        if (inf_) return std::strong_ordering::greater;
        if (o.inf_) return std::strong_ordering::less;
        return v_ <=> o.v_;
    }
    bool operator>=(long x) const { return inf_ || v_ >= x; }
    bool operator<(long x) const { return !inf_ && v_ < x; }

    std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

private:
    PadicVal(bool inf, long v) : inf_(inf), v_(v) {}
    bool inf_;
    long v_;
};

inline PadicVal vp(const mpz_class& x, const mpz_class& p) {
    if (!is_prime(p)) throw std::invalid_argument("vp: modulus " + p.get_str() + " is not prime");
    if (x == 0) return PadicVal::infinity();
    mpz_class t;
    long e = static_cast<long>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
    return PadicVal::finite(e);
}

inline PadicVal vp(const Rat& x, const mpz_class& p) {
    if (!is_prime(p)) throw std::invalid_argument("vp: modulus " + p.get_str() + " is not prime");
    if (x.is_zero()) return PadicVal::infinity();
    mpz_class t;
    long vn = static_cast<long>(mpz_remove(t.get_mpz_t(), x.num().get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(t.get_mpz_t(), x.den().get_mpz_t(), p.get_mpz_t()));
    return PadicVal::finite(vn - vd);
}

inline PadicVal vp(const Rat& x, long p) { return vp(x, mpz_class(p)); }

}  // namespace asdforge
