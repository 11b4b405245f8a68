#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "asdforge/cyclotomic.hpp"
#include "asdforge/numtheory.hpp"
#include "asdforge/qexp.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

namespace detail {
// the table validator is a direct multiplicativity scan, quadratic in phi(K)
inline constexpr long kMaxCharModulus = 30000;
}  // namespace detail

/// Residues coprime to K in [0, K), with the unit group mod 1 given as {0}.
inline std::vector<long> units_mod(long K) {
    if (K < 1) throw std::invalid_argument("units_mod: modulus must be positive");
    if (K > detail::kMaxCharModulus)
        throw std::invalid_argument("units_mod: modulus " + std::to_string(K) +
                                    " exceeds the supported range");
    if (K == 1) return {0};
    std::vector<long> out;
    for (long j = 1; j < K; ++j)
        if (std::gcd(j, K) == 1) out.push_back(j);
    return out;
}

/// Dirichlet character mod K of exact order e, stored as the exponent table
/// chi(j) = zeta_e^{exponents[j]} on coprime residues; off the units chi is 0.
class DirichletChar {
public:
    /// The trivial character mod 1.
    DirichletChar() : modulus_(1), order_(1) { values_[0] = 0; }

    /// Validating constructor: rejects tables that miss or exceed the unit
    /// residues, violate multiplicativity, have chi(1) != 1, or whose claimed
    /// order is not the exact order of the character.
    static DirichletChar from_table(long modulus, const std::map<long, long>& exponents, long order) {
        if (modulus < 1) throw std::invalid_argument("DirichletChar: modulus must be positive");
        if (order < 1) throw std::invalid_argument("DirichletChar: order must be positive");
        DirichletChar chi;
        chi.modulus_ = modulus;
        chi.order_ = order;
        chi.values_.clear();
        std::vector<long> units = units_mod(modulus);
        if (exponents.size() != units.size())
            throw std::invalid_argument("DirichletChar: table must cover exactly the coprime residues");
        for (long u : units) {
            auto it = exponents.find(u);
            if (it == exponents.end())
                throw std::invalid_argument("DirichletChar: missing value at residue " + std::to_string(u));
            long v = it->second % order;
            if (v < 0) v += order;
            chi.values_[u] = v;
        }
        long one = modulus == 1 ? 0 : 1;
        if (chi.values_.at(one) != 0)
            throw std::invalid_argument("DirichletChar: chi(1) must be 1");
        for (long a : units) {
            for (long b : units) {
                long ab = modulus == 1 ? 0 : (a * b) % modulus;
                long want = (chi.values_.at(a) + chi.values_.at(b)) % order;
                if (chi.values_.at(ab) != want)
                    throw std::invalid_argument("DirichletChar: multiplicativity fails at (" +
                                                std::to_string(a) + ", " + std::to_string(b) + ")");
            }
        }
        long g = order;
        for (const auto& [u, v] : chi.values_) g = std::gcd(g, v);
        if (g != 1 && order != 1)
            throw std::invalid_argument("DirichletChar: claimed order " + std::to_string(order) +
                                        " is not the exact order of the table");
        return chi;
    }

    long modulus() const { return modulus_; }
    long order() const { return order_; }
    const std::map<long, long>& exponents() const { return values_; }

    /// Exponent of chi at n, or -1 when gcd(n, K) > 1.
    long exponent_at(long n) const {
        long r = n % modulus_;
        if (r < 0) r += modulus_;
        auto it = values_.find(r);
        return it == values_.end() ? -1 : it->second;
    }

    bool is_trivial() const { return order_ == 1; }

    DirichletChar inverse() const {
        DirichletChar out;
        out.modulus_ = modulus_;
        out.order_ = order_;
        out.values_.clear();
        for (const auto& [u, v] : values_) out.values_[u] = v == 0 ? 0 : order_ - v;
        return out;
    }

    /// chi(-1), always +1 or -1.
    Rat parity() const {
        long v = exponent_at(modulus_ - 1 < 0 ? 0 : modulus_ - 1);
        if (modulus_ == 1) v = 0;
        return Rat(v == 0 ? 1 : -1);
    }

    bool operator==(const DirichletChar& o) const = default;

private:
    friend DirichletChar trivial_char(long);

    long modulus_;
    long order_;
    std::map<long, long> values_;
};

inline DirichletChar char_from_table(long modulus, const std::map<long, long>& exponents, long order) {
    return DirichletChar::from_table(modulus, exponents, order);
}

inline DirichletChar trivial_char(long K) {
    DirichletChar chi;
    chi.modulus_ = K;
    chi.order_ = 1;
    chi.values_.clear();
    for (long u : units_mod(K)) chi.values_[u] = 0;
    return chi;
}

/// Jacobi symbol (a | n) for odd positive n, via quadratic reciprocity and the
/// supplementary laws.
inline int jacobi_symbol(long a, long n) {
    if (n <= 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi_symbol: modulus must be odd and positive");
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

/// The real character j -> (j | n) for odd positive squarefree n.
inline DirichletChar quadratic_char(long n) {
    if (n < 1 || n % 2 == 0)
        throw std::invalid_argument("quadratic_char: modulus must be odd and positive");
    for (const auto& [p, e] : factorize(n))
        if (e > 1) throw std::invalid_argument("quadratic_char: modulus must be squarefree");
    if (n == 1) return trivial_char(1);
    std::map<long, long> exps;
    for (long j : units_mod(n)) exps[j] = jacobi_symbol(j, n) == 1 ? 0 : 1;
    return DirichletChar::from_table(n, exps, 2);
}

/// Smallest f | K such that chi is trivial on units congruent to 1 mod f.
inline long conductor(const DirichletChar& chi) {
    long K = chi.modulus();
    for (long f : divisors(K)) {
        bool ok = true;
        for (long u : units_mod(K)) {
            if (u % f != 1 % f) continue;
            if (chi.exponent_at(u) != 0) {
                ok = false;
                break;
            }
        }
        if (ok) return f;
    }
    return K;
}

inline bool is_primitive(const DirichletChar& chi) { return conductor(chi) == chi.modulus(); }

/// The primitive character of conductor(chi) inducing chi.
inline DirichletChar primitive_part(const DirichletChar& chi) {
    long K = chi.modulus();
    long f = conductor(chi);
    if (f == K) return chi;
    std::map<long, long> exps;
    for (long r : units_mod(f)) {
        long j = r;
        while (std::gcd(j == 0 ? K : j % K, K) != 1) j += f;
        long v = chi.exponent_at(j);
        exps[r] = v;
    }
    long g = chi.order();
    for (const auto& [r, v] : exps) g = std::gcd(g, v);
    long e = chi.order() / g;
    std::map<long, long> scaled;
    for (const auto& [r, v] : exps) scaled[r] = v / g;
    return DirichletChar::from_table(f, scaled, e);
}

/// chi(n) as an exact cyclotomic value; rational for real characters and zero
/// off the units.
inline CycloElem char_eval(const DirichletChar& chi, long n) {
    long v = chi.exponent_at(n);
    if (v < 0) return CycloElem(Rat(0));
    long e = chi.order();
    if (e == 1) return CycloElem(Rat(1));
    if (e == 2) return CycloElem(Rat(v == 0 ? 1 : -1));
    return root_of_unity(e, v);
}

/// chi(n) in {-1, 0, 1} for real characters.
inline Rat char_eval_rat(const DirichletChar& chi, long n) {
    if (chi.order() > 2)
        throw std::domain_error("char_eval_rat: character is not real (order " +
                                std::to_string(chi.order()) + ")");
    long v = chi.exponent_at(n);
    if (v < 0) return Rat(0);
    return Rat(v == 0 ? 1 : -1);
}

/// Gauss sum g(chi) = sum over units j of chi(j) zeta_K^j, exact in the
/// cyclotomic field of order lcm(order chi, K).
inline CycloElem gauss_sum(const DirichletChar& chi) {
    long K = chi.modulus();
    CycloElem acc{Rat(0)};
    for (long j : units_mod(K)) {
        CycloElem cv = char_eval(chi, j);
        CycloElem zk;
        if (K == 1)
            zk = CycloElem(Rat(1));
        else if (K == 2)
            zk = CycloElem(Rat(-1));  // the only unit is j = 1
        else
            zk = root_of_unity(K, j);
        acc = cyclo_add_mixed(acc, cyclo_mul_mixed(cv, zk));
    }
    return acc.canonicalized();
}

/// h (x) phi: coefficient at n becomes a(n) phi(n); multiples of the modulus
/// vanish. Weight, width and trunc are unchanged.
inline QExp twist(const QExp& f, const DirichletChar& phi) {
    long e_eff = phi.order() <= 2 ? 1 : phi.order();
    QExp out(f.weight(), f.width(), std::lcm(f.field_order(), e_eff), f.trunc());
    for (const auto& [n, c] : f.coefficients()) {
        CycloElem v = char_eval(phi, n);
        if (v.is_zero()) continue;
        out.set_coeff(n, cyclo_mul_mixed(c, v));
    }
    return out;
}

/// The twist evaluated through the stroke route
///   (1 / g(phi^{-1})) * sum over units j of phi(j)^{-1} f|gamma^j,
/// which requires phi primitive. Must agree exactly with twist(f, phi); a
/// result outside Q(zeta_lcm(L, e)) signals an arithmetic bug.
inline QExp twist_via_strokes(const QExp& f, const DirichletChar& phi) {
    long K = phi.modulus();
    long cond = conductor(phi);
    if (cond != K)
        throw std::invalid_argument(
            "twist_via_strokes: character mod " + std::to_string(K) + " is imprimitive (conductor " +
            std::to_string(cond) + "); the Gauss-sum stroke identity requires a primitive character");
    DirichletChar inv = phi.inverse();
    CycloElem g = gauss_sum(inv);
    if (g.is_zero()) throw identity_error("twist_via_strokes: vanishing Gauss sum for a primitive character");

    bool first = true;
    QExp acc(f.weight(), f.width(), f.field_order(), f.trunc());
    for (long j : units_mod(K)) {
        QExp term = qexp_scale(char_eval(inv, j), translate_stroke(f, j, K));
        acc = first ? std::move(term) : qexp_add(acc, term);
        first = false;
    }
    acc = qexp_scale(cyclo_inv(cyclo_embed(g, std::lcm(g.order(), acc.field_order()))), acc);

    long e_eff = phi.order() <= 2 ? 1 : phi.order();
    long target = std::lcm(f.field_order(), e_eff);
    auto down = qexp_descend(acc, target);
    if (!down) throw identity_error("twist_via_strokes: stroke sum left the twist's coefficient field");
    return *down;
}

namespace detail {

inline long crt_pair(long r1, long m1, long r2, long m2) {
    // m1, m2 coprime; result in [0, m1*m2)
    long m2_inv = 0;
    for (long x = 0; x < m2; ++x)
        if ((m1 % m2) * x % m2 == 1 % m2) {
            m2_inv = x;
            break;
        }
    long diff = ((r2 - r1) % m2 + m2) % m2;
    return (r1 + m1 * (diff * m2_inv % m2)) % (m1 * m2);
}

struct UnitGroupComponent {
    long generator;  // residue mod K
    long comp_order;
};

/// Independent generators of (Z/K)* with their orders, lifted to mod K.
inline std::vector<UnitGroupComponent> unit_group_generators(long K) {
    std::vector<UnitGroupComponent> comps;
    for (const auto& [p, a] : factorize(K)) {
        long q = 1;
        for (int i = 0; i < a; ++i) q *= p;
        long rest = K / q;
        auto lift = [&](long g) {
            long r = g % q;
            return rest == 1 ? r : crt_pair(r, q, 1 % rest, rest);
        };
        if (p == 2) {
            if (a == 2) {
                comps.push_back({lift(3), 2});
            } else if (a >= 3) {
                comps.push_back({lift(q - 1), 2});
                comps.push_back({lift(5), q / 4});
            }
        } else {
            comps.push_back({lift(primitive_root(p, a)), totient(q)});
        }
    }
    return comps;
}

}  // namespace detail

/// Every Dirichlet character mod K, in a deterministic order.
inline std::vector<DirichletChar> all_characters(long K) {
    if (K < 1) throw std::invalid_argument("all_characters: modulus must be positive");
    if (K == 1) return {trivial_char(1)};

    auto comps = detail::unit_group_generators(K);
    size_t r = comps.size();
    if (r == 0) return {trivial_char(K)};  // K = 2

    long E = 1;
    for (const auto& c : comps) E = std::lcm(E, c.comp_order);

    // discrete logs of every unit with respect to the generator tuple
    std::map<long, std::vector<long>> dlog;
    std::vector<long> tuple(r, 0);
    for (;;) {
        long u = 1 % K;
        for (size_t i = 0; i < r; ++i)
            u = mul_mod(u, pow_mod(comps[i].generator, tuple[i], K), K);
        dlog[u] = tuple;
        size_t pos = 0;
        while (pos < r && ++tuple[pos] == comps[pos].comp_order) tuple[pos++] = 0;
        if (pos == r) break;
    }
    if (dlog.size() != units_mod(K).size())
        throw std::logic_error("all_characters: unit group decomposition failed");

    std::vector<DirichletChar> out;
    std::vector<long> choice(r, 0);
    for (;;) {
        std::map<long, long> exps;
        long g = E;
        for (const auto& [u, t] : dlog) {
            long v = 0;
            for (size_t i = 0; i < r; ++i)
                v = (v + choice[i] * t[i] % E * (E / comps[i].comp_order)) % E;
            exps[u] = v;
            g = std::gcd(g, v);
        }
        long e = g == 0 ? 1 : E / g;
        std::map<long, long> scaled;
        for (const auto& [u, v] : exps) scaled[u] = e == 1 ? 0 : v / g;
        out.push_back(DirichletChar::from_table(K, scaled, e));
        size_t pos = 0;
        while (pos < r && ++choice[pos] == comps[pos].comp_order) choice[pos++] = 0;
        if (pos == r) break;
    }
    return out;
}

inline std::vector<DirichletChar> primitive_characters(long K) {
    std::vector<DirichletChar> out;
    for (auto& chi : all_characters(K))
        if (is_primitive(chi)) out.push_back(std::move(chi));
    return out;
}

}  // namespace asdforge
