#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asdforge/characters.hpp"
#include "asdforge/newform.hpp"
#include "asdforge/parallel.hpp"
#include "asdforge/qexp.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

/// One congruence instance of
///   a(np) - b(p) a(n) + chi(p) p^{k-1} a(n/p) = 0  mod  p^{(k-1)(1 + ord_p n)}
/// with a(x) = 0 at non-integral x. Verdicts at primes p <= N1 are advisory.
struct AsdVerdict {
    long prime;
    long n;
    Rat lhs;
    long required;      // (k-1)(1 + ord_p n)
    PadicVal achieved;  // vp(lhs)
    bool pass;          // achieved >= required
    bool advisory;      // p <= N1
};

struct AsdReport {
    std::vector<AsdVerdict> verdicts;  // sorted by (prime, n)

    long checked() const { return static_cast<long>(verdicts.size()); }
    long passed() const {
        long c = 0;
        for (const auto& v : verdicts) c += v.pass ? 1 : 0;
        return c;
    }
    long failed() const {
        long c = 0;
        for (const auto& v : verdicts) c += (!v.pass && !v.advisory) ? 1 : 0;
        return c;
    }
    long advisory_failed() const {
        long c = 0;
        for (const auto& v : verdicts) c += (!v.pass && v.advisory) ? 1 : 0;
        return c;
    }
    bool ok() const { return failed() == 0; }
};

/// Verdicts for one prime and all n in [1, Nmax]; needs a integral and
/// a.trunc >= p * Nmax.
inline std::vector<AsdVerdict> asd_check(const QExp& a, const mpz_class& b_p, const DirichletChar& chi,
                                         int k, long p, long nmax, long n1) {
    if (!is_prime(p)) throw std::invalid_argument("asd_check: " + std::to_string(p) + " is not prime");
    if (nmax < 1) throw std::invalid_argument("asd_check: nmax must be positive");
    if (!a.rational_field() || !a.integer_coefficients())
        throw std::invalid_argument("asd_check: the congruence is a statement about integer coefficients");
    if (a.weight() != k)
        throw std::invalid_argument("asd_check: form has weight " + std::to_string(a.weight()) +
                                    ", expected " + std::to_string(k));
    if (p > a.trunc() / nmax)
        throw std::invalid_argument("asd_check: truncation too small (need a(n p) for n up to " +
                                    std::to_string(nmax) + ")");

    Rat chi_p_rat = char_eval_rat(chi, p);
    mpz_class chi_pk = chi_p_rat.num() * pow_z(mpz_class(p), static_cast<unsigned long>(k - 1));
    mpz_class pz(p);

    auto coeff_z = [&a](long n) { return a.coeff_rat(n).num(); };

    std::vector<AsdVerdict> out(static_cast<size_t>(nmax));
    parallel_for(1, nmax + 1, [&](long n) {
        mpz_class lhs = coeff_z(n * p) - b_p * coeff_z(n);
        if (n % p == 0) lhs += chi_pk * coeff_z(n / p);
        long ordp = vp(mpz_class(n), pz).value();
        long required = static_cast<long>(k - 1) * (1 + ordp);
        PadicVal achieved = vp(lhs, pz);
        out[static_cast<size_t>(n - 1)] =
            AsdVerdict{p, n, Rat(lhs), required, achieved, achieved >= required, p <= n1};
    });
    return out;
}

inline std::vector<AsdVerdict> asd_check(const QExp& a, const HeckeSequence& b, long p, long nmax, long n1) {
    return asd_check(a, b.at(p), b.character, b.weight, p, nmax, n1);
}

/// Full report over several primes, verdicts ordered by (prime, n). b(p)
/// values are read straight from the newform's prime table.
inline AsdReport asd_check_many(const QExp& a, const NewformSpec& g, std::vector<long> primes, long nmax,
                                long n1) {
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    AsdReport report;
    for (long p : primes) {
        auto verdicts = asd_check(a, g.b_at_prime(p), g.character(), g.weight(), p, nmax, n1);
        report.verdicts.insert(report.verdicts.end(), verdicts.begin(), verdicts.end());
    }
    return report;
}

/// A(m) = m^(k/2 - 1/5) and the least admissible P(m) > N1 with
/// 3 C^2 A(m)^2 n^(k/2 - 1/5) < n^(k-1) for every n > P(m). Exact via the
/// 10th-power form n^(5k-8) > (3 C^2)^10 m^(10k-4).
struct ThresholdResult {
    long P;
    long analytic_bound;  // largest n failing the inequality, before the N1 floor
    Rat C;
    long m;
    int k;
    long N1;
    Rat exponent;  // k/2 - 1/5
};

inline ThresholdResult threshold_Pm(const Rat& C, long m, int k, long n1) {
    if (k < 2) throw std::invalid_argument("threshold_Pm: weight must be >= 2");
    if (m < 1) throw std::invalid_argument("threshold_Pm: m must be positive");
    if (!(C > Rat(1))) throw std::invalid_argument("threshold_Pm: C must exceed 1");
    if (n1 < 0 || n1 >= std::numeric_limits<long>::max() - 1)
        throw std::invalid_argument("threshold_Pm: N1 out of range");

    unsigned long e = static_cast<unsigned long>(5 * k - 8);
    // rhs = (3 C^2)^10 m^(10k-4)
    Rat rhs = Rat(3).pow(10) * C.pow(20) *
              Rat(pow_z(mpz_class(m), static_cast<unsigned long>(10 * k - 4)));
    const mpz_class& A = rhs.num();
    const mpz_class& B = rhs.den();

    auto fails = [&](const mpz_class& n) { return pow_z(n, e) * B <= A; };

    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    mpz_class n0 = integer_kth_root(q, e);
    while (fails(n0 + 1)) ++n0;
    while (n0 >= 1 && !fails(n0)) --n0;

    if (!n0.fits_slong_p())
        throw std::overflow_error("threshold_Pm: threshold exceeds the supported index range");
    long analytic = n0.get_si();
    long P = std::max(n1 + 1, analytic);
    return ThresholdResult{P, analytic, C, m, k, n1, Rat(5 * k - 2, 10)};
}

/// Witness for a failed coefficient identity: the clause, the index where it
/// was evaluated, the exponent tuple in play, and both exact side values.
struct LemmaViolation {
    std::string clause;
    long index;
    std::vector<long> exponents;
    Rat lhs;
    Rat rhs;
};

struct LemmaReport {
    bool pass = true;
    long cases_checked = 0;
    std::vector<LemmaViolation> violations;
};

namespace detail {
inline void require_rational_series(const QExp& a, const char* op) {
    if (!a.rational_field())
        throw std::invalid_argument(std::string(op) + ": coefficient identities need a rational series");
}

inline long checked_pow_long(long base, int e, long limit) {
    long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > limit / base)
            throw std::invalid_argument("index " + std::to_string(base) + "^" + std::to_string(e) +
                                        " overflows the trusted range");
        r *= base;
    }
    return r;
}
}  // namespace detail

/// Checks, for n = 1..Emax, the recursion
///   a(m p^e) = b(p) a(m p^{e-1}) - chi(p) p^{k-1} a(m p^{e-2})
/// and, when gcd(p, m) = 1, the closed form a(m p^e) = b(p^e) a(m).
inline LemmaReport lemma1_verify(const QExp& a, const HeckeSequence& b, long m, long p, int emax) {
    if (!is_prime(p)) throw std::invalid_argument("lemma1_verify: p must be prime");
    if (m < 1) throw std::invalid_argument("lemma1_verify: m must be positive");
    if (emax < 0) throw std::invalid_argument("lemma1_verify: Emax must be nonnegative");
    detail::require_rational_series(a, "lemma1_verify");
    long pe_max = detail::checked_pow_long(p, emax, a.trunc());
    if (m > a.trunc() / pe_max)
        throw std::invalid_argument("lemma1_verify: truncation too small for m p^Emax = " +
                                    std::to_string(m) + " * " + std::to_string(pe_max));
    bool coprime = (m % p != 0);
    if (coprime && emax > 0 && b.nmax() < pe_max)
        throw std::invalid_argument("lemma1_verify: extended sequence too short for b(p^Emax)");

    Rat chi_pk = char_eval_rat(b.character, p) *
                 Rat(pow_z(mpz_class(p), static_cast<unsigned long>(b.weight - 1)));
    Rat bp = emax >= 1 ? Rat(b.at(p)) : Rat(1);

    LemmaReport report;
    long idx = m;
    for (int e = 1; e <= emax; ++e) {
        long prev = idx;
        idx *= p;
        Rat lhs = a.coeff_rat(idx);
        Rat tail;  // a(m p^{e-2}), zero when the index is not a positive integer
        if (e >= 2)
            tail = a.coeff_rat(prev / p);
        else if (m % p == 0)
            tail = a.coeff_rat(m / p);
        Rat rhs = bp * a.coeff_rat(prev) - chi_pk * tail;
        ++report.cases_checked;
        if (!(lhs == rhs)) {
            report.pass = false;
            report.violations.push_back({"recursion", idx, {e}, lhs, rhs});
        }
    }

    if (coprime) {
        Rat am = a.coeff_rat(m);
        long pe = 1;
        for (int e = 0; e <= emax; ++e) {
            Rat lhs = a.coeff_rat(m * pe);
            Rat rhs = Rat(b.at(pe)) * am;
            ++report.cases_checked;
            if (!(lhs == rhs)) {
                report.pass = false;
                report.violations.push_back({"closed_form", m * pe, {e}, lhs, rhs});
            }
            pe *= p;
        }
    }
    return report;
}

/// Exhaustively checks a(m p_1^{e_1} ... p_r^{e_r}) = a(m) b(p_1^{e_1} ... p_r^{e_r})
/// over all exponent tuples with sum <= emax_total.
inline LemmaReport lemma2_verify(const QExp& a, const HeckeSequence& b, long m, std::vector<long> primes,
                                 int emax_total) {
    if (m < 1) throw std::invalid_argument("lemma2_verify: m must be positive");
    if (emax_total < 0) throw std::invalid_argument("lemma2_verify: Emax must be nonnegative");
    if (primes.empty()) throw std::invalid_argument("lemma2_verify: need at least one prime");
    detail::require_rational_series(a, "lemma2_verify");
    std::vector<long> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("lemma2_verify: primes must be distinct");
    for (long p : primes) {
        if (!is_prime(p)) throw std::invalid_argument("lemma2_verify: " + std::to_string(p) + " is not prime");
        if (m % p == 0)
            throw std::invalid_argument("lemma2_verify: prime " + std::to_string(p) +
                                        " is not coprime to m = " + std::to_string(m));
    }
    long worst = detail::checked_pow_long(sorted.back(), emax_total, a.trunc());
    if (m > a.trunc() / worst)
        throw std::invalid_argument("lemma2_verify: truncation too small for the extreme tuple");
    if (b.nmax() < worst)
        throw std::invalid_argument("lemma2_verify: extended sequence too short for the extreme tuple");

    LemmaReport report;
    Rat am = a.coeff_rat(m);
    std::vector<long> tuple(primes.size(), 0);

    auto visit = [&](auto&& self, size_t i, int budget, long M) -> void {
        if (i == primes.size()) {
            Rat lhs = a.coeff_rat(m * M);
            Rat rhs = am * Rat(b.at(M));
            ++report.cases_checked;
            if (!(lhs == rhs)) {
                report.pass = false;
                report.violations.push_back({"factorization", m * M, tuple, lhs, rhs});
            }
            return;
        }
        long pw = 1;
        for (int e = 0; e <= budget; ++e) {
            tuple[i] = e;
            self(self, i + 1, budget - e, M * pw);
            pw *= primes[i];
        }
        tuple[i] = 0;
    };
    visit(visit, 0, emax_total, 1);
    return report;
}

/// Checks the two-term product identity
///   a(m) a(m p_1^{e_1} ... p_r^{e_r}) = a(m p_1^{e_1} ... p_{r-1}^{e_{r-1}}) a(m p_r^{e_r})
/// for the given exponent tuple.
inline LemmaReport product_identity_check(const QExp& a, long m, const std::vector<long>& primes,
                                          const std::vector<long>& exponents) {
    if (m < 1) throw std::invalid_argument("product_identity_check: m must be positive");
    if (primes.empty() || primes.size() != exponents.size())
        throw std::invalid_argument("product_identity_check: primes and exponents must pair up");
    detail::require_rational_series(a, "product_identity_check");
    std::vector<long> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("product_identity_check: primes must be distinct");

    long full = 1, head = 1;
    for (size_t i = 0; i < primes.size(); ++i) {
        if (!is_prime(primes[i]))
            throw std::invalid_argument("product_identity_check: " + std::to_string(primes[i]) +
                                        " is not prime");
        if (exponents[i] < 0)
            throw std::invalid_argument("product_identity_check: exponents must be nonnegative");
        long pw = detail::checked_pow_long(primes[i], static_cast<int>(exponents[i]), a.trunc());
        if (full > a.trunc() / pw)
            throw std::invalid_argument("product_identity_check: truncation too small");
        full *= pw;
        if (i + 1 < primes.size()) head *= pw;
    }
    long last = full / head;
    if (m > a.trunc() / full)
        throw std::invalid_argument("product_identity_check: truncation too small");

    LemmaReport report;
    report.cases_checked = 1;
    Rat lhs = a.coeff_rat(m) * a.coeff_rat(m * full);
    Rat rhs = a.coeff_rat(m * head) * a.coeff_rat(m * last);
    if (!(lhs == rhs)) {
        report.pass = false;
        report.violations.push_back({"product_identity", m * full, exponents, lhs, rhs});
    }
    return report;
}

}  // namespace asdforge
