#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace asdforge {

inline bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline bool is_prime(long n) { return is_prime(mpz_class(n)); }

/// Smallest-prime-factor table for 0..n (spf[0] = spf[1] = 0).
inline std::vector<long> spf_sieve(long n) {
    if (n < 0) throw std::invalid_argument("spf_sieve: negative bound");
    std::vector<long> spf(static_cast<size_t>(n) + 1, 0);
    for (long i = 2; i <= n; ++i) {
        if (spf[i] != 0) continue;
        for (long j = i; j <= n; j += i)
            if (spf[j] == 0) spf[j] = i;
    }
    return spf;
}

inline std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (long j = 2 * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

/// Prime factorization of n >= 1 as (prime, exponent) pairs in ascending order.
inline std::vector<std::pair<long, int>> factorize(long n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Factorization by trial division with a primality backstop; throws if a
/// composite cofactor survives (beyond the scale this toolkit targets).
inline std::map<mpz_class, long> factorize(const mpz_class& n_in) {
    if (n_in < 1) throw std::invalid_argument("factorize: n must be positive");
    std::map<mpz_class, long> out;
    mpz_class n = n_in;
    for (long p = 2; p <= 1000000 && n > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p)) == 0) continue;
        mpz_class mp(p);
        long e = static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), mp.get_mpz_t()));
        out[mp] += e;
        if (mpz_class(p) * p > n) break;
    }
    if (n > 1) {
        if (!is_prime(n))
            throw std::runtime_error("factorize: composite cofactor too large: " + n.get_str());
        out[n] += 1;
    }
    return out;
}

inline long totient(long n) {
    if (n < 1) throw std::invalid_argument("totient: n must be positive");
    long result = n;
    for (const auto& [p, e] : factorize(n)) result = result / p * (p - 1);
    return result;
}

/// Divisors of n in ascending order.
inline std::vector<long> divisors(long n) {
    if (n < 1) throw std::invalid_argument("divisors: n must be positive");
    std::vector<long> out{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t base = out.size();
        long pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (size_t j = 0; j < base; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline long mul_mod(long a, long b, long m) {
    return static_cast<long>(static_cast<__int128>(a) * b % m);
}

inline long pow_mod(long base, long exp, long m) {
    if (m <= 0) throw std::invalid_argument("pow_mod: modulus must be positive");
    long r = 1 % m;
    base %= m;
    if (base < 0) base += m;
    while (exp > 0) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Multiplicative order of a modulo m, gcd(a, m) = 1.
inline long multiplicative_order(long a, long m) {
    if (m < 1) throw std::invalid_argument("multiplicative_order: modulus must be positive");
    a %= m;
    if (a < 0) a += m;
    if (std::gcd(a, m) != 1) throw std::invalid_argument("multiplicative_order: arguments not coprime");
    long phi = totient(m);
    long order = phi;
    for (const auto& [p, e] : factorize(phi)) {
        for (int i = 0; i < e && pow_mod(a, order / p, m) == 1; ++i) order /= p;
    }
    return order;
}

/// A generator of (Z/p^a)* for an odd prime p.
inline long primitive_root(long p, int a) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("primitive_root: p must be an odd prime");
    if (a < 1) throw std::invalid_argument("primitive_root: exponent must be >= 1");
    long g = 2;
    for (;; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g % p, p) == p - 1) break;
    }
    if (a == 1) return g;
    long pa = p;
    for (int i = 1; i < a; ++i) pa *= p;
    // lift: g works mod p^a unless g^{p-1} = 1 mod p^2, in which case g+p does
    long p2 = p * p;
    if (pow_mod(g, p - 1, p2) == 1) g += p;
    return g % pa;
}

/// floor(x^(1/k)) for x >= 0.
inline mpz_class integer_kth_root(const mpz_class& x, unsigned long k) {
    if (x < 0) throw std::invalid_argument("integer_kth_root: negative radicand");
    if (k == 0) throw std::invalid_argument("integer_kth_root: k must be positive");
    mpz_class r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

inline mpz_class pow_z(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

}  // namespace asdforge
