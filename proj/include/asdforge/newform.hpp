#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asdforge/characters.hpp"
#include "asdforge/numtheory.hpp"
#include "asdforge/qexp.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

/// Weight, level, real nebentypus and Hecke eigenvalues b(p) at primes: the
/// data needed to reconstruct every b(n) through the eigenform recursion.
class NewformSpec {
public:
    NewformSpec(int weight, long level, DirichletChar character, std::map<long, mpz_class> prime_coeffs)
        : weight_(weight),
          level_(level),
          character_(std::move(character)),
          prime_coeffs_(std::move(prime_coeffs)) {
        if (weight_ < 2) throw std::invalid_argument("NewformSpec: weight must be >= 2");
        if (level_ < 1) throw std::invalid_argument("NewformSpec: level must be positive");
        if (character_.order() > 2)
            throw std::invalid_argument("NewformSpec: character must be real (order <= 2)");
        for (const auto& [p, bp] : prime_coeffs_) {
            if (!is_prime(p))
                throw std::invalid_argument("NewformSpec: coefficient index " + std::to_string(p) +
                                            " is not prime");
            mpz_class bound = 2 * pow_z(mpz_class(p), static_cast<unsigned long>(weight_ - 1));
            if (::abs(bp) > bound)
                throw std::invalid_argument("NewformSpec: |b(" + std::to_string(p) + ")| = " +
                                            mpz_class(::abs(bp)).get_str() + " exceeds 2p^(k-1) = " +
                                            bound.get_str());
        }
    }

    int weight() const { return weight_; }
    long level() const { return level_; }
    const DirichletChar& character() const { return character_; }
    const std::map<long, mpz_class>& prime_coeffs() const { return prime_coeffs_; }

    const mpz_class& b_at_prime(long p) const {
        auto it = prime_coeffs_.find(p);
        if (it == prime_coeffs_.end())
            throw std::invalid_argument("NewformSpec: missing coefficient for prime " + std::to_string(p));
        return it->second;
    }

    /// chi(p) entering the recursion: 0 at primes dividing the level, the
    /// character value elsewhere.
    long recursion_chi(long p) const {
        if (level_ % p == 0) return 0;
        Rat v = char_eval_rat(character_, p);
        return v.is_zero() ? 0 : (v.is_negative() ? -1 : 1);
    }

    bool operator==(const NewformSpec& o) const {
        return weight_ == o.weight_ && level_ == o.level_ && character_ == o.character_ &&
               prime_coeffs_ == o.prime_coeffs_;
    }

private:
    int weight_;
    long level_;
    DirichletChar character_;
    std::map<long, mpz_class> prime_coeffs_;
};

/// The unique multiplicative extension of the prime data: b(1) = 1,
/// b(p^e) = b(p) b(p^{e-1}) - chi(p) p^{k-1} b(p^{e-2}) and b(mn) = b(m) b(n)
/// for coprime m, n. Entry [n] is b(n); [0] is unused.
inline std::vector<mpz_class> extend_coefficients(const NewformSpec& spec, long nmax) {
    if (nmax < 1) throw std::invalid_argument("extend_coefficients: nmax must be positive");
    std::vector<mpz_class> b(static_cast<size_t>(nmax) + 1);
    b[0] = 0;
    if (nmax >= 1) b[1] = 1;
    if (nmax == 1) return b;

    std::vector<long> spf = spf_sieve(nmax);
    for (long n = 2; n <= nmax; ++n) {
        long p = spf[n];
        long pe = p, m = n / p;
        while (m % p == 0) {
            pe *= p;
            m /= p;
        }
        if (m > 1) {
            b[n] = b[pe] * b[m];
            continue;
        }
        // n = p^e
        if (pe == p) {
            b[n] = spec.b_at_prime(p);
            continue;
        }
        mpz_class chi_pk = spec.recursion_chi(p) *
                           pow_z(mpz_class(p), static_cast<unsigned long>(spec.weight() - 1));
        b[n] = b[p] * b[n / p] - chi_pk * b[n / p / p];
    }
    return b;
}

/// An extended coefficient sequence together with the recursion data that
/// produced it.
struct HeckeSequence {
    int weight;
    long level;
    DirichletChar character;
    std::vector<mpz_class> values;  // values[n] = b(n) for 1 <= n <= nmax

    long nmax() const { return static_cast<long>(values.size()) - 1; }

    const mpz_class& at(long n) const {
        if (n < 1 || n > nmax())
            throw std::out_of_range("HeckeSequence: index " + std::to_string(n) + " outside [1, " +
                                    std::to_string(nmax()) + "]");
        return values[static_cast<size_t>(n)];
    }

    bool operator==(const HeckeSequence& o) const {
        return weight == o.weight && level == o.level && character == o.character && values == o.values;
    }
};

inline HeckeSequence extend(const NewformSpec& spec, long nmax) {
    std::vector<mpz_class> values = extend_coefficients(spec, nmax);
    return HeckeSequence{spec.weight(), spec.level(), spec.character(), std::move(values)};
}

/// Brute-force q-expansion of q prod_{n>=1} (1 - q^n)^24, by multiplying the
/// sparse factors one at a time into a dense truncated series. Weight 12,
/// width 1, integer coefficients.
inline QExp delta_oracle(long nmax) {
    if (nmax < 1) throw std::invalid_argument("delta_oracle: nmax must be positive");
    std::vector<mpz_class> c(static_cast<size_t>(nmax));
    c[0] = 1;
    for (long n = 1; n < nmax; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (long i = nmax - 1; i >= n; --i) c[static_cast<size_t>(i)] -= c[static_cast<size_t>(i - n)];
        }
    }
    QExp out(12, 1, 1, nmax);
    for (long n = 1; n <= nmax; ++n) {
        const mpz_class& v = c[static_cast<size_t>(n - 1)];
        if (v != 0) out.set_coeff(n, Rat(v));
    }
    return out;
}

/// Exact description of sup_{n <= N} |a(n)| / n^(k/2 - 1/5): the attaining
/// index with |a(n*)|, plus the strict-bound verdict for an optional
/// candidate C. All comparisons are 10th-power integer comparisons.
struct BoundFit {
    Rat exponent;  // k/2 - 1/5
    long argmax;
    Rat max_abs;
    std::optional<Rat> candidate;
    std::optional<bool> holds;
    std::optional<long> first_violation;
};

inline BoundFit selberg_fit(const QExp& f, long nmax, std::optional<Rat> candidate = std::nullopt) {
    if (!f.rational_field())
        throw std::domain_error("selberg_fit: cyclotomic coefficients have no archimedean bound here");
    if (nmax < 1 || nmax > f.trunc())
        throw std::invalid_argument("selberg_fit: nmax outside the trusted range");
    int k = f.weight();
    unsigned long exp10 = static_cast<unsigned long>(5 * k - 2);

    BoundFit fit;
    fit.exponent = Rat(5 * k - 2, 10);
    fit.argmax = 1;
    fit.max_abs = Rat(0);
    // |a(n1)| / n1^x > |a(n2)| / n2^x  iff  |a(n1)|^10 n2^(10x) > |a(n2)|^10 n1^(10x)
    Rat best_pow10 = Rat(0);
    mpz_class best_npow = 1;
    for (const auto& [n, c] : f.coefficients()) {
        if (n > nmax) break;
        Rat a = c.coeffs()[0].abs();
        if (a.is_zero()) continue;
        Rat a10 = a.pow(10);
        mpz_class npow = pow_z(mpz_class(n), exp10);
        if (a10 * Rat(best_npow) > best_pow10 * Rat(npow)) {
            fit.argmax = n;
            fit.max_abs = a;
            best_pow10 = a10;
            best_npow = npow;
        }
    }

    if (candidate) {
        fit.candidate = candidate;
        fit.holds = true;
        if (*candidate <= Rat(0)) {
            fit.holds = false;
            fit.first_violation = 1;
        } else {
            Rat c10 = candidate->pow(10);
            for (long n = 1; n <= nmax; ++n) {
                Rat a10 = f.coeff_rat(n).abs().pow(10);
                if (!(a10 < c10 * Rat(pow_z(mpz_class(n), exp10)))) {
                    fit.holds = false;
                    fit.first_violation = n;
                    break;
                }
            }
        }
    }
    return fit;
}

}  // namespace asdforge
