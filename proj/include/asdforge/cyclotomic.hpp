#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "asdforge/numtheory.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

namespace poly {

/// Dense polynomial over Rat, little-endian coefficients.
using Poly = std::vector<Rat>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int degree(const Poly& p) {
    for (size_t i = p.size(); i > 0; --i)
        if (!p[i - 1].is_zero()) return static_cast<int>(i - 1);
    return -1;
}

inline Poly add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    trim(r);
    return r;
}

inline Poly sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    trim(r);
    return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (degree(a) < 0 || degree(b) < 0) return {};
    Poly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    trim(r);
    return r;
}

inline Poly scale(const Rat& c, Poly p) {
    for (auto& x : p) x *= c;
    trim(p);
    return p;
}

/// Quotient and remainder of a by b over Q; b must be nonzero.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    int db = degree(b);
    if (db < 0) throw std::domain_error("poly::divmod: division by zero polynomial");
    trim(a);
    int da = degree(a);
    if (da < db) return {Poly{}, std::move(a)};
    Poly q(static_cast<size_t>(da - db) + 1);
    Rat lead_inv = b[static_cast<size_t>(db)].inv();
    for (int d = da; d >= db; --d) {
        Rat c = a[static_cast<size_t>(d)] * lead_inv;
        if (c.is_zero()) continue;
        q[static_cast<size_t>(d - db)] = c;
        for (int i = 0; i <= db; ++i)
            a[static_cast<size_t>(d - db + i)] -= c * b[static_cast<size_t>(i)];
    }
    trim(a);
    trim(q);
    return {std::move(q), std::move(a)};
}

inline Poly mod(const Poly& a, const Poly& b) { return divmod(a, b).second; }

struct Egcd {
    Poly g, s, t;  // s*a + t*b = g
};

inline Egcd egcd(Poly a, Poly b) {
    Poly s0{Rat(1)}, s1{}, t0{}, t1{Rat(1)};
    while (degree(b) >= 0) {
        auto [q, r] = divmod(a, b);
        a = std::exchange(b, std::move(r));
        Poly s2 = sub(s0, mul(q, s1));
        s0 = std::exchange(s1, std::move(s2));
        Poly t2 = sub(t0, mul(q, t1));
        t0 = std::exchange(t1, std::move(t2));
    }
    return {std::move(a), std::move(s0), std::move(t0)};
}

}  // namespace poly

namespace detail {
inline constexpr long kMaxCyclotomicOrder = 100000;

inline void check_order(long L) {
    if (L < 1) throw std::invalid_argument("cyclotomic order must be positive");
    if (L > kMaxCyclotomicOrder)
        throw std::invalid_argument("cyclotomic order " + std::to_string(L) + " exceeds supported range");
}
}  // namespace detail

/// Coefficients of the L-th cyclotomic polynomial, computed exactly as
/// (x^L - 1) / prod_{d | L, d < L} Phi_d(x). Monic of degree phi(L) with
/// integer entries.
inline const poly::Poly& cyclotomic_polynomial(long L) {
    detail::check_order(L);
    static std::map<long, poly::Poly> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;

    // iterate divisors ascending so every proper Phi_d is available
    std::function<const poly::Poly&(long)> get = [&](long n) -> const poly::Poly& {
        auto hit = cache.find(n);
        if (hit != cache.end()) return hit->second;
        poly::Poly num(static_cast<size_t>(n) + 1);
        num[0] = Rat(-1);
        num[static_cast<size_t>(n)] = Rat(1);  // x^n - 1
        for (long d : divisors(n)) {
            if (d == n) continue;
            auto [q, r] = poly::divmod(num, get(d));
            if (poly::degree(r) >= 0)
                throw std::logic_error("cyclotomic_polynomial: non-exact division");
            num = std::move(q);
        }
        return cache.emplace(n, std::move(num)).first->second;
    };
    return get(L);
}

namespace detail {

/// Rows m = 0..L-1: coefficients of x^m reduced mod Phi_L (length phi(L)).
inline const std::vector<std::vector<Rat>>& zeta_power_table(long L) {
    check_order(L);
    static std::map<long, std::vector<std::vector<Rat>>> cache;
    static std::mutex mtx;

    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(L);
        if (it != cache.end()) return it->second;
    }

    const poly::Poly& phi = cyclotomic_polynomial(L);
    size_t deg = phi.size() - 1;
    std::vector<std::vector<Rat>> rows(static_cast<size_t>(L), std::vector<Rat>(deg));
    if (deg > 0) rows[0][0] = Rat(1);
    for (size_t m = 1; m < static_cast<size_t>(L); ++m) {
        const auto& prev = rows[m - 1];
        auto& cur = rows[m];
        Rat overflow = deg > 0 ? prev[deg - 1] : Rat(0);
        for (size_t i = deg; i > 1; --i) cur[i - 1] = prev[i - 2];
        if (deg > 0) cur[0] = Rat(0);
        if (!overflow.is_zero()) {
            // x^deg = -(phi - x^deg)
            for (size_t i = 0; i < deg; ++i) cur[i] -= overflow * phi[i];
        }
    }

    std::lock_guard<std::mutex> lock(mtx);
    return cache.emplace(L, std::move(rows)).first->second;
}

}  // namespace detail

/// Element of the cyclotomic field of order L: a polynomial in zeta_L held as
/// the unique reduced residue mod Phi_L, so equality is coefficient equality.
/// Order 1 is the canonical embedding of the rationals.
class CycloElem {
public:
    CycloElem() : order_(1), coeffs_{Rat(0)} {}
    explicit CycloElem(const Rat& r) : order_(1), coeffs_{r} {}
    explicit CycloElem(long n) : order_(1), coeffs_{Rat(n)} {}

    CycloElem(long order, std::vector<Rat> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
        detail::check_order(order_);
        size_t want = static_cast<size_t>(totient(order_));
        if (coeffs_.size() != want)
            throw std::invalid_argument("CycloElem: expected " + std::to_string(want) +
                                        " coefficients for order " + std::to_string(order_) +
                                        ", got " + std::to_string(coeffs_.size()));
    }

    static CycloElem zero(long order) {
        detail::check_order(order);
        return CycloElem(order, std::vector<Rat>(static_cast<size_t>(totient(order))));
    }

    static CycloElem from_poly(long order, const poly::Poly& p) {
        detail::check_order(order);
        poly::Poly r = poly::mod(p, cyclotomic_polynomial(order));
        std::vector<Rat> c(static_cast<size_t>(totient(order)));
        for (size_t i = 0; i < r.size(); ++i) c[i] = r[i];
        return CycloElem(order, std::move(c));
    }

    long order() const { return order_; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    bool is_rational() const {
        for (size_t i = 1; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero()) return false;
        return true;
    }

    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("CycloElem: value is not rational");
        return coeffs_[0];
    }

    /// Order-1 form when the value is rational, otherwise unchanged.
    CycloElem canonicalized() const {
        if (order_ > 1 && is_rational()) return CycloElem(coeffs_[0]);
        return *this;
    }

    bool operator==(const CycloElem& o) const = default;

private:
    long order_;
    std::vector<Rat> coeffs_;
};

/// zeta_L^(j mod L), reduced mod Phi_L.
inline CycloElem root_of_unity(long L, long j) {
    detail::check_order(L);
    long m = j % L;
    if (m < 0) m += L;
    return CycloElem(L, detail::zeta_power_table(L)[static_cast<size_t>(m)]);
}

namespace detail {
inline void check_same_order(const CycloElem& a, const CycloElem& b, const char* op) {
    if (a.order() != b.order())
        throw std::invalid_argument(std::string(op) + ": order mismatch (" +
                                    std::to_string(a.order()) + " vs " + std::to_string(b.order()) +
                                    "); embed to a common order first");
}
}  // namespace detail

inline CycloElem cyclo_add(const CycloElem& a, const CycloElem& b) {
    detail::check_same_order(a, b, "cyclo_add");
    std::vector<Rat> c(a.coeffs());
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs()[i];
    return CycloElem(a.order(), std::move(c));
}

inline CycloElem cyclo_sub(const CycloElem& a, const CycloElem& b) {
    detail::check_same_order(a, b, "cyclo_sub");
    std::vector<Rat> c(a.coeffs());
    for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs()[i];
    return CycloElem(a.order(), std::move(c));
}

inline CycloElem cyclo_neg(const CycloElem& a) {
    std::vector<Rat> c(a.coeffs());
    for (auto& x : c) x = -x;
    return CycloElem(a.order(), std::move(c));
}

inline CycloElem cyclo_scale(const Rat& s, const CycloElem& a) {
    std::vector<Rat> c(a.coeffs());
    for (auto& x : c) x *= s;
    return CycloElem(a.order(), std::move(c));
}

inline CycloElem cyclo_mul(const CycloElem& a, const CycloElem& b) {
    detail::check_same_order(a, b, "cyclo_mul");
    poly::Poly pa(a.coeffs().begin(), a.coeffs().end());
    poly::Poly pb(b.coeffs().begin(), b.coeffs().end());
    return CycloElem::from_poly(a.order(), poly::mul(pa, pb));
}

/// Multiplicative inverse via the extended gcd of the representative with
/// Phi_L (irreducible over Q, so any nonzero element is a unit).
inline CycloElem cyclo_inv(const CycloElem& a) {
    if (a.is_zero()) throw std::domain_error("cyclo_inv: division by zero");
    poly::Poly pa(a.coeffs().begin(), a.coeffs().end());
    poly::trim(pa);
    auto e = poly::egcd(pa, cyclotomic_polynomial(a.order()));
    if (poly::degree(e.g) != 0)
        throw std::logic_error("cyclo_inv: gcd with cyclotomic polynomial not constant");
    return CycloElem::from_poly(a.order(), poly::scale(e.g[0].inv(), e.s));
}

/// Image under the field automorphism zeta_L -> zeta_L^t, gcd(t, L) = 1.
inline CycloElem cyclo_galois(const CycloElem& a, long t) {
    long L = a.order();
    long tm = t % L;
    if (tm < 0) tm += L;
    if (std::gcd(tm == 0 ? L : tm, L) != 1)
        throw std::invalid_argument("cyclo_galois: exponent not coprime to order");
    const auto& table = detail::zeta_power_table(L);
    std::vector<Rat> out(a.coeffs().size());
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
        const Rat& c = a.coeffs()[i];
        if (c.is_zero()) continue;
        const auto& row = table[static_cast<size_t>((static_cast<long>(i) * tm) % L)];
        for (size_t k = 0; k < out.size(); ++k) out[k] += c * row[k];
    }
    return CycloElem(L, std::move(out));
}

/// Complex conjugation zeta -> zeta^{L-1}.
inline CycloElem cyclo_conj(const CycloElem& a) {
    if (a.order() <= 2) return a;
    return cyclo_galois(a, a.order() - 1);
}

/// Image under zeta_L -> zeta_T^{T/L}, for L | T.
inline CycloElem cyclo_embed(const CycloElem& a, long target_order) {
    detail::check_order(target_order);
    long L = a.order();
    if (target_order % L != 0)
        throw std::invalid_argument("cyclo_embed: order " + std::to_string(L) +
                                    " does not divide target " + std::to_string(target_order));
    if (target_order == L) return a;
    long ratio = target_order / L;
    const auto& table = detail::zeta_power_table(target_order);
    std::vector<Rat> out(static_cast<size_t>(totient(target_order)));
    for (size_t i = 0; i < a.coeffs().size(); ++i) {
        const Rat& c = a.coeffs()[i];
        if (c.is_zero()) continue;
        const auto& row = table[static_cast<size_t>((static_cast<long>(i) * ratio) % target_order)];
        for (size_t k = 0; k < out.size(); ++k) out[k] += c * row[k];
    }
    return CycloElem(target_order, std::move(out));
}

inline CycloElem cyclo_add_mixed(const CycloElem& a, const CycloElem& b) {
    long L = std::lcm(a.order(), b.order());
    return cyclo_add(cyclo_embed(a, L), cyclo_embed(b, L));
}

inline CycloElem cyclo_mul_mixed(const CycloElem& a, const CycloElem& b) {
    long L = std::lcm(a.order(), b.order());
    return cyclo_mul(cyclo_embed(a, L), cyclo_embed(b, L));
}

/// Value equality across representations of possibly different orders.
inline bool cyclo_equal_values(const CycloElem& a, const CycloElem& b) {
    if (a.order() == b.order()) return a == b;
    long L = std::lcm(a.order(), b.order());
    return cyclo_embed(a, L) == cyclo_embed(b, L);
}

inline CycloElem cyclo_pow(const CycloElem& a, long e) {
    if (e < 0) return cyclo_pow(cyclo_inv(a), -e);
    CycloElem base = a;
    CycloElem acc = cyclo_embed(CycloElem(Rat(1)), a.order());
    while (e > 0) {
        if (e & 1) acc = cyclo_mul(acc, base);
        base = cyclo_mul(base, base);
        e >>= 1;
    }
    return acc;
}

/// Expresses a in the order-D subfield (D | order), if it lies there: solves
/// sum_t c_t * embed(zeta_D^t) = a exactly and verifies the solution.
inline std::optional<CycloElem> cyclo_descend(const CycloElem& a, long target_order) {
    detail::check_order(target_order);
    long L = a.order();
    if (L % target_order != 0)
        throw std::invalid_argument("cyclo_descend: target order must divide element order");
    if (L == target_order) return a;

    size_t rows = a.coeffs().size();
    size_t cols = static_cast<size_t>(totient(target_order));
    std::vector<CycloElem> basis;
    basis.reserve(cols);
    for (size_t t = 0; t < cols; ++t)
        basis.push_back(cyclo_embed(root_of_unity(target_order, static_cast<long>(t)), L));

    // Gaussian elimination on the augmented system [basis | a]
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols + 1));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) m[r][c] = basis[c].coeffs()[r];
        m[r][cols] = a.coeffs()[r];
    }
    size_t rank = 0;
    std::vector<size_t> pivot_col;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        Rat inv = m[rank][c].inv();
        for (size_t k = c; k <= cols; ++k) m[rank][k] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c].is_zero()) continue;
            Rat f = m[r][c];
            for (size_t k = c; k <= cols; ++k) m[r][k] -= f * m[rank][k];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (!m[r][cols].is_zero()) return std::nullopt;

    std::vector<Rat> sol(cols);
    for (size_t i = 0; i < rank; ++i) sol[pivot_col[i]] = m[i][cols];
    CycloElem candidate(target_order, std::move(sol));
    if (!(cyclo_embed(candidate, L) == a)) return std::nullopt;
    return candidate;
}

}  // namespace asdforge
