#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "asdforge/numtheory.hpp"
#include "asdforge/parallel.hpp"
#include "asdforge/qexp.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

/// Finite-scope denominator profile of a rational series: per-prime valuation
/// sequences, the running lcm of denominators, and a growth classification.
/// "Unbounded" is never claimed; growth_detected records witnesses within the
/// scanned window only.
struct DenomReport {
    long nmax = 0;
    long window = 3;
    std::vector<long> primes;                            // profiled primes, ascending
    std::map<long, std::vector<long>> profiles;          // p -> v_p(den a(n)), n = 1..nmax
    std::vector<mpz_class> running_lcm;                  // lcm of den a(1..n)
    mpz_class c_candidate = 1;                           // final lcm
    bool bounded = true;
    long growth_prime = 0;                               // smallest growth prime when !bounded
    std::map<long, std::vector<long>> growth_witnesses;  // p -> indices of running-max increases
};

/// Profiles denominators of a(1..nmax). With an empty prime list every prime
/// dividing any denominator is profiled. Growth at p is declared when the
/// running maximum of v_p(denominator) strictly increases at >= window
/// distinct indices.
inline DenomReport denominator_profile(const QExp& f, long nmax, std::vector<long> primes = {},
                                       long window = 3) {
    if (!f.rational_field())
        throw std::domain_error("denominator_profile: cyclotomic coefficients rejected");
    if (nmax < 1 || nmax > f.trunc())
        throw std::invalid_argument("denominator_profile: nmax outside the trusted range");
    if (window < 1) throw std::invalid_argument("denominator_profile: window must be positive");

    DenomReport report;
    report.nmax = nmax;
    report.window = window;

    report.running_lcm.resize(static_cast<size_t>(nmax));
    mpz_class acc = 1;
    for (long n = 1; n <= nmax; ++n) {
        auto it = f.coefficients().find(n);
        if (it != f.coefficients().end()) {
            const mpz_class& den = it->second.coeffs()[0].den();
            mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), den.get_mpz_t());
        }
        report.running_lcm[static_cast<size_t>(n - 1)] = acc;
    }
    report.c_candidate = acc;

    if (primes.empty()) {
        for (const auto& [p, e] : factorize(acc)) {
            if (!p.fits_slong_p())
                throw std::runtime_error("denominator_profile: denominator prime exceeds index range");
            primes.push_back(p.get_si());
        }
    } else {
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        for (long p : primes)
            if (!is_prime(p))
                throw std::invalid_argument("denominator_profile: " + std::to_string(p) + " is not prime");
    }
    report.primes = primes;

    std::vector<std::vector<long>> prof(primes.size());
    parallel_for(0, static_cast<long>(primes.size()), [&](long i) {
        mpz_class p(primes[static_cast<size_t>(i)]);
        std::vector<long> seq(static_cast<size_t>(nmax), 0);
        for (const auto& [n, c] : f.coefficients()) {
            if (n > nmax) break;
            mpz_class t;
            seq[static_cast<size_t>(n - 1)] = static_cast<long>(
                mpz_remove(t.get_mpz_t(), c.coeffs()[0].den().get_mpz_t(), p.get_mpz_t()));
        }
        prof[static_cast<size_t>(i)] = std::move(seq);
    });

    for (size_t i = 0; i < primes.size(); ++i) {
        long p = primes[i];
        report.profiles[p] = prof[i];
        long running_max = 0;
        std::vector<long> witnesses;
        for (long n = 1; n <= nmax; ++n) {
            long v = prof[i][static_cast<size_t>(n - 1)];
            if (v > running_max) {
                running_max = v;
                witnesses.push_back(n);
            }
        }
        if (static_cast<long>(witnesses.size()) >= window) {
            if (report.bounded) report.growth_prime = p;
            report.bounded = false;
            report.growth_witnesses[p] = std::move(witnesses);
        }
    }
    return report;
}

struct ClearResult {
    QExp series;
    bool integral;  // all coefficients integral up to trunc after scaling
};

/// Coefficientwise multiplication by c >= 1, reporting whether the result is
/// integral through the truncation.
inline ClearResult clear_denominators(const QExp& f, const mpz_class& c) {
    if (c < 1) throw std::invalid_argument("clear_denominators: c must be >= 1");
    QExp scaled = qexp_scale(Rat(c), f);
    bool integral = true;
    for (const auto& [n, v] : scaled.coefficients()) {
        for (const Rat& r : v.coeffs()) {
            if (!r.is_integer()) {
                integral = false;
                break;
            }
        }
        if (!integral) break;
    }
    return ClearResult{std::move(scaled), integral};
}

}  // namespace asdforge
