#pragma once

#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "asdforge/cyclotomic.hpp"
#include "asdforge/rational.hpp"

namespace asdforge {

/// Signalled when an exact operator identity that must hold by construction
/// fails, which indicates an arithmetic bug rather than bad input.
class identity_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Truncated q-expansion sum_{n>=1} a(n) q^{n/width} of a cusp form: weight k,
/// cusp width mu, and sparse coefficients trusted only for n <= trunc.
/// Coefficients live in the cyclotomic field of field_order (1 = rational) and
/// are stored embedded at exactly that order; zero entries are never stored.
class QExp {
public:
    QExp(int weight, long width, long field_order, long trunc)
        : weight_(weight), width_(width), order_(field_order), trunc_(trunc) {
        if (weight_ < 2) throw std::invalid_argument("QExp: weight must be >= 2");
        if (width_ < 1) throw std::invalid_argument("QExp: width must be positive");
        if (trunc_ < 1) throw std::invalid_argument("QExp: trunc must be positive");
        detail::check_order(order_);
    }

    int weight() const { return weight_; }
    long width() const { return width_; }
    long field_order() const { return order_; }
    bool rational_field() const { return order_ == 1; }
    long trunc() const { return trunc_; }
    const std::map<long, CycloElem>& coefficients() const { return coeffs_; }

    /// Stores a(n); the value's order must divide the field order.
    void set_coeff(long n, const CycloElem& v) {
        check_index(n);
        if (order_ % v.order() != 0)
            throw std::invalid_argument("QExp: coefficient order " + std::to_string(v.order()) +
                                        " does not divide field order " + std::to_string(order_));
        CycloElem e = cyclo_embed(v, order_);
        if (e.is_zero())
            coeffs_.erase(n);
        else
            coeffs_[n] = std::move(e);
    }

    void set_coeff(long n, const Rat& v) { set_coeff(n, CycloElem(v)); }

    CycloElem coeff(long n) const {
        check_index(n);
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? CycloElem::zero(order_) : it->second;
    }

    Rat coeff_rat(long n) const {
        if (order_ != 1) throw std::domain_error("QExp: rational access on a cyclotomic series");
        auto it = coeffs_.find(n);
        if (it == coeffs_.end()) {
            check_index(n);
            return Rat(0);
        }
        return it->second.coeffs()[0];
    }

    bool integer_coefficients() const {
        if (order_ != 1) return false;
        for (const auto& [n, c] : coeffs_)
            if (!c.coeffs()[0].is_integer()) return false;
        return true;
    }

    bool operator==(const QExp& o) const = default;

private:
    void check_index(long n) const {
        if (n < 1 || n > trunc_)
            throw std::out_of_range("QExp: index " + std::to_string(n) + " outside [1, " +
                                    std::to_string(trunc_) + "]");
    }

    int weight_;
    long width_;
    long order_;
    long trunc_;
    std::map<long, CycloElem> coeffs_;
};

namespace detail {
inline void check_compatible(const QExp& f, const QExp& g, const char* op) {
    if (f.weight() != g.weight())
        throw std::invalid_argument(std::string(op) + ": weight mismatch");
    if (f.width() != g.width())
        throw std::invalid_argument(std::string(op) + ": width mismatch");
}

/// Order of the cyclotomic field generated by zeta_K^j, with orders <= 2
/// collapsed to the rationals.
inline long effective_root_order(long K, long j) {
    long jm = j % K;
    if (jm < 0) jm += K;
    if (jm == 0) return 1;
    long d = K / std::gcd(jm, K);
    return d <= 2 ? 1 : d;
}
}  // namespace detail

/// Coefficientwise sum; trunc becomes the smaller of the two, field orders
/// are merged by embedding into their lcm.
inline QExp qexp_add(const QExp& f, const QExp& g) {
    detail::check_compatible(f, g, "qexp_add");
    long order = std::lcm(f.field_order(), g.field_order());
    QExp out(f.weight(), f.width(), order, std::min(f.trunc(), g.trunc()));
    for (const auto& [n, c] : f.coefficients()) {
        if (n > out.trunc()) break;
        out.set_coeff(n, c);
    }
    for (const auto& [n, c] : g.coefficients()) {
        if (n > out.trunc()) break;
        out.set_coeff(n, cyclo_add_mixed(out.coeff(n), c));
    }
    return out;
}

inline QExp qexp_scale(const CycloElem& s_in, const QExp& f) {
    CycloElem s = s_in.canonicalized();
    long order = std::lcm(f.field_order(), s.order());
    QExp out(f.weight(), f.width(), order, f.trunc());
    if (s.is_zero()) return out;
    for (const auto& [n, c] : f.coefficients()) out.set_coeff(n, cyclo_mul_mixed(s, c));
    return out;
}

inline QExp qexp_scale(const Rat& s, const QExp& f) { return qexp_scale(CycloElem(s), f); }

/// h(z/K): the exponent lattice refines from n/mu to n/(K*mu); indices and
/// coefficients are untouched and no K^{k/2} normalization is applied.
inline QExp dilate(const QExp& f, long K) {
    if (K < 1) throw std::invalid_argument("dilate: K must be positive");
    if (f.width() > std::numeric_limits<long>::max() / K)
        throw std::invalid_argument("dilate: width overflow");
    QExp out(f.weight(), f.width() * K, f.field_order(), f.trunc());
    for (const auto& [n, c] : f.coefficients()) out.set_coeff(n, c);
    return out;
}

/// q-expansion shadow of the stroke by (1, j*mu/K; 0, 1): a(n) picks up the
/// factor zeta_K^{j n}. Weight, width and trunc are unchanged.
inline QExp translate_stroke(const QExp& f, long j, long K) {
    if (K < 1) throw std::invalid_argument("translate_stroke: K must be positive");
    long jm = j % K;
    if (jm < 0) jm += K;
    if (jm == 0) return f;
    long g = std::gcd(jm, K);
    long d = K / g;      // order of zeta_K^j
    long jr = jm / g;    // zeta_K^j = zeta_d^jr
    if (d > 2) detail::check_order(d);
    long order = std::lcm(f.field_order(), detail::effective_root_order(K, j));
    QExp out(f.weight(), f.width(), order, f.trunc());
    for (const auto& [n, c] : f.coefficients()) {
        long e = (jr % d) * (n % d) % d;
        CycloElem factor = d <= 2 ? CycloElem(Rat(e == 0 ? 1 : -1)) : root_of_unity(d, e);
        out.set_coeff(n, cyclo_mul_mixed(c, factor));
    }
    return out;
}

/// Keeps exactly the coefficients at indices divisible by K, at their
/// original indices.
inline QExp subseries(const QExp& f, long K) {
    if (K < 1) throw std::invalid_argument("subseries: K must be positive");
    QExp out(f.weight(), f.width(), f.field_order(), f.trunc());
    for (const auto& [n, c] : f.coefficients())
        if (n % K == 0) out.set_coeff(n, c);
    return out;
}

/// All coefficients expressed in the order-target subfield, or nullopt if any
/// coefficient lies outside of it.
inline std::optional<QExp> qexp_descend(const QExp& f, long target_order) {
    QExp out(f.weight(), f.width(), target_order, f.trunc());
    for (const auto& [n, c] : f.coefficients()) {
        auto d = cyclo_descend(c, target_order);
        if (!d) return std::nullopt;
        out.set_coeff(n, *d);
    }
    return out;
}

/// The subseries at multiples of K computed through the operator route
/// (1/K) sum_{j=1..K} f|gamma^j in the cyclotomic field. The result must land
/// back in the coefficient field of f and must equal subseries(f, K); a
/// coefficient that fails to descend signals an arithmetic bug.
inline QExp subseries_via_strokes(const QExp& f, long K) {
    if (K < 1) throw std::invalid_argument("subseries_via_strokes: K must be positive");
    if (K == 1) return f;
    QExp acc = translate_stroke(f, 1, K);
    for (long j = 2; j <= K; ++j) acc = qexp_add(acc, translate_stroke(f, j, K));
    acc = qexp_scale(Rat(1, K), acc);
    auto down = qexp_descend(acc, f.field_order());
    if (!down)
        throw identity_error("subseries_via_strokes: stroke average left the coefficient field");
    return *down;
}

/// Exact agreement of coefficients for all n <= N, after embedding both sides
/// into a common cyclotomic order.
inline bool qexp_equal(const QExp& f, const QExp& g, long N) {
    detail::check_compatible(f, g, "qexp_equal");
    if (N < 1 || N > std::min(f.trunc(), g.trunc()))
        throw std::invalid_argument("qexp_equal: N outside the mutually trusted range");
    for (const auto& [n, c] : f.coefficients()) {
        if (n > N) break;
        if (!cyclo_equal_values(c, g.coeff(n))) return false;
    }
    for (const auto& [n, c] : g.coefficients()) {
        if (n > N) break;
        if (f.coefficients().find(n) == f.coefficients().end() && !c.is_zero()) return false;
    }
    return true;
}

}  // namespace asdforge
