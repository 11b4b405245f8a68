#include <catch2/catch_amalgamated.hpp>

#include "asdforge/asdcheck.hpp"
#include "testutil.hpp"

using namespace asdforge;

namespace {

NewformSpec delta_spec(long nmax) {
    const QExp& d = testutil::delta_fixture();
    std::map<long, mpz_class> pc;
    for (long p : primes_up_to(nmax)) pc[p] = d.coeff_rat(p).num();
    return NewformSpec(12, 1, trivial_char(1), std::move(pc));
}

QExp delta_truncated(long trunc) {
    const QExp& d = testutil::delta_fixture();
    QExp out(12, 1, 1, trunc);
    for (long n = 1; n <= trunc; ++n) out.set_coeff(n, d.coeff_rat(n));
    return out;
}

QExp from_sequence(int weight, const std::vector<mpz_class>& b, const Rat& scale = Rat(1)) {
    QExp out(weight, 1, 1, static_cast<long>(b.size()) - 1);
    for (long n = 1; n < static_cast<long>(b.size()); ++n)
        out.set_coeff(n, scale * Rat(b[static_cast<size_t>(n)]));
    return out;
}

}  // namespace

TEST_CASE("the hecke identity makes every ASD residue vanish", "[asdcheck]") {
    QExp a = delta_truncated(200);
    NewformSpec g = delta_spec(10);
    for (long p : {2L, 3L, 5L}) {
        auto verdicts = asd_check(a, g.b_at_prime(p), g.character(), 12, p, 200 / p, 0);
        for (const auto& v : verdicts) {
            CHECK(v.pass);
            CHECK(v.lhs == Rat(0));
            CHECK(v.achieved.is_infinite());
        }
    }
}

TEST_CASE("a perturbed coefficient is caught with its valuation witness", "[asdcheck]") {
    QExp a = delta_truncated(100);
    a.set_coeff(2, Rat(-23));  // tau(2) + 1
    NewformSpec g = delta_spec(2);
    auto verdicts = asd_check(a, g.b_at_prime(2), g.character(), 12, 2, 40, 0);
    const AsdVerdict& v1 = verdicts[0];  // n = 1: a(2) - b(2) a(1) = 1
    CHECK_FALSE(v1.pass);
    CHECK(v1.lhs == Rat(1));
    CHECK(v1.required == 11);
    CHECK(v1.achieved == PadicVal::finite(0));
}

TEST_CASE("required exponent grows with ord_p n", "[asdcheck]") {
    QExp a = delta_truncated(40);
    NewformSpec g = delta_spec(2);
    auto verdicts = asd_check(a, g.b_at_prime(2), g.character(), 12, 2, 8, 0);
    CHECK(verdicts[0].required == 11);  // n = 1
    CHECK(verdicts[1].required == 22);  // n = 2
    CHECK(verdicts[3].required == 33);  // n = 4
    CHECK(verdicts[5].required == 22);  // n = 6, ord_2 = 1
}

TEST_CASE("verdicts below N1 are advisory, never fatal", "[asdcheck]") {
    QExp a = delta_truncated(60);
    a.set_coeff(2, Rat(-23));
    NewformSpec g = delta_spec(3);

    AsdReport advisory_only = asd_check_many(a, g, {2}, 15, 2);
    CHECK(advisory_only.failed() == 0);           // the p = 2 failures are advisory
    CHECK(advisory_only.advisory_failed() >= 1);  // but they are reported
    CHECK(advisory_only.ok());

    // p = 3 sees the perturbed a(2) at n = 2 and is not shielded by N1 = 2
    AsdReport fatal = asd_check_many(a, g, {2, 3}, 15, 2);
    for (const auto& v : fatal.verdicts) CHECK(v.advisory == (v.prime <= 2));
    CHECK(fatal.failed() >= 1);
    CHECK(fatal.advisory_failed() >= 1);
    CHECK_FALSE(fatal.ok());
}

TEST_CASE("asd_check validates its inputs", "[asdcheck]") {
    QExp a = delta_truncated(40);
    NewformSpec g = delta_spec(5);
    CHECK_THROWS_AS(asd_check(a, mpz_class(0), g.character(), 12, 6, 5, 0), std::invalid_argument);
    CHECK_THROWS_AS(asd_check(a, g.b_at_prime(2), g.character(), 12, 2, 21, 0), std::invalid_argument);
    CHECK_THROWS_AS(asd_check(a, g.b_at_prime(2), g.character(), 11, 2, 10, 0), std::invalid_argument);
    QExp frac(12, 1, 1, 40);
    frac.set_coeff(1, Rat(1, 2));
    CHECK_THROWS_AS(asd_check(frac, g.b_at_prime(2), g.character(), 12, 2, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(asd_check_many(a, g, {2, 3, 7}, 5, 0), std::invalid_argument);  // 7 not supplied
}

TEST_CASE("integer multiples of an extended sequence satisfy every check", "[asdcheck]") {
    // weight 3 with a real nebentypus mod 5 and level 5
    std::map<long, mpz_class> pc;
    auto g = testutil::rng(20240825);
    for (long p : primes_up_to(350)) pc[p] = testutil::rand_int(g, -2 * p, 2 * p);
    NewformSpec spec(3, 5, quadratic_char(5), std::move(pc));
    HeckeSequence b = extend(spec, 350);
    QExp a = from_sequence(3, b.values, Rat(7));

    for (long p : {2L, 3L, 5L, 7L}) {
        auto verdicts = asd_check(a, b, p, 350 / p, 0);
        for (const auto& v : verdicts) {
            CHECK(v.pass);
            CHECK(v.lhs == Rat(0));
        }
    }
    CHECK(lemma1_verify(a, b, 1, 2, 6).pass);
    CHECK(lemma1_verify(a, b, 7, 2, 5).pass);
    CHECK(lemma2_verify(a, b, 1, {2, 3}, 5).pass);
    CHECK(product_identity_check(a, 1, {2, 3}, {2, 1}).pass);
    CHECK(product_identity_check(a, 7, {2, 5}, {1, 1}).pass);
}

TEST_CASE("perturbation sensitivity", "[asdcheck]") {
    auto g = testutil::rng(20240826);
    NewformSpec spec = delta_spec(400);
    HeckeSequence b = extend(spec, 400);
    for (int iter = 0; iter < 20; ++iter) {
        long p = (iter % 2 == 0) ? 2 : 3;
        long n0 = p * testutil::rand_int(g, 1, 400 / (2 * p));  // p | n0, n0 p within range
        long t = testutil::rand_int(g, 0, 5);
        mpz_class delta = (testutil::rand_int(g, 0, 1) ? 1 : -1) * pow_z(mpz_class(p), t);
        long required_at_flip = 11 * (1 + vp(mpz_class(n0 / p), mpz_class(p)).value());
        if (t >= required_at_flip) continue;

        QExp a = from_sequence(12, b.values);
        a.set_coeff(n0, Rat(mpz_class(b.at(n0) + delta)));
        auto verdicts = asd_check(a, b, p, n0 / p, 0);  // the last verdict sees a(n0) as a(np)
        const AsdVerdict& v = verdicts[static_cast<size_t>(n0 / p - 1)];
        CHECK_FALSE(v.pass);
        CHECK(v.lhs == Rat(delta));
    }
}

TEST_CASE("worker fan-out never changes results", "[asdcheck]") {
    std::vector<long> seq(500, 0), par(500, 0);
    parallel_for(0, 500, [&](long i) { seq[static_cast<size_t>(i)] = i * i; }, 1);
    parallel_for(0, 500, [&](long i) { par[static_cast<size_t>(i)] = i * i; }, 7);
    CHECK(seq == par);

    QExp a = delta_truncated(200);
    NewformSpec g = delta_spec(5);
    auto baseline = asd_check(a, g.b_at_prime(2), g.character(), 12, 2, 100, 0);
    setenv("ASDFORGE_WORKERS", "5", 1);
    CHECK(worker_count() == 5);
    auto fanned = asd_check(a, g.b_at_prime(2), g.character(), 12, 2, 100, 0);
    unsetenv("ASDFORGE_WORKERS");
    REQUIRE(fanned.size() == baseline.size());
    for (size_t i = 0; i < baseline.size(); ++i) {
        CHECK(fanned[i].lhs == baseline[i].lhs);
        CHECK(fanned[i].pass == baseline[i].pass);
        CHECK(fanned[i].n == baseline[i].n);
    }
}

TEST_CASE("threshold P(m): anchor values", "[asdcheck]") {
    ThresholdResult a = threshold_Pm(Rat(2), 1, 12, 7);
    CHECK(a.P == 8);  // analytic threshold 1 is dominated by N1
    CHECK(a.analytic_bound == 1);

    ThresholdResult b = threshold_Pm(Rat(2), 1, 2, 0);
    CHECK(b.P == 248832);  // 12^5; equality n^2 = 12^10 fails the strict bound
    CHECK(b.analytic_bound == 248832);

    ThresholdResult c = threshold_Pm(Rat(2), 1, 2, 300000);
    CHECK(c.P == 300001);  // N1 binding

    CHECK(threshold_Pm(Rat(2), 1, 2, 0).exponent == Rat(4, 5));
    CHECK_THROWS_AS(threshold_Pm(Rat(2), 1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_Pm(Rat(1), 1, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(threshold_Pm(Rat(2), 0, 2, 0), std::invalid_argument);
}

TEST_CASE("threshold P(m) agrees with brute-force scanning", "[asdcheck]") {
    auto fails = [](const Rat& C, long m, int k, long n) {
        // 3 C^2 m^(k - 2/5) n^(k/2 - 1/5) < n^(k-1), both sides to the 10th power
        Rat lhs = Rat(3).pow(10) * C.pow(20) * Rat(pow_z(mpz_class(m), static_cast<unsigned long>(10 * k - 4))) *
                  Rat(pow_z(mpz_class(n), static_cast<unsigned long>(5 * k - 2)));
        Rat rhs = Rat(pow_z(mpz_class(n), static_cast<unsigned long>(10 * k - 10)));
        return !(lhs < rhs);
    };
    for (int k : {2, 3, 4, 12}) {
        for (const Rat& C : {Rat(3, 2), Rat(2), Rat(10)}) {
            for (long m : {1L, 2L, 6L}) {
                for (long n1 : {0L, 7L}) {
                    ThresholdResult t = threshold_Pm(C, m, k, n1);
                    CHECK(t.P > n1);
                    CHECK((t.P == n1 + 1 || fails(C, m, k, t.P)));
                    long span = std::min(1000L, t.P);  // scan a window above P
                    for (long n = t.P + 1; n <= t.P + span; ++n) CHECK_FALSE(fails(C, m, k, n));
                }
            }
        }
    }
}

TEST_CASE("lemma 1: recursion and closed form", "[asdcheck]") {
    NewformSpec spec = delta_spec(729);
    HeckeSequence b = extend(spec, 729);
    QExp a = from_sequence(12, b.values, Rat(7));

    SECTION("scaled sequences pass") {
        CHECK(lemma1_verify(a, b, 1, 2, 6).pass);
        CHECK(lemma1_verify(a, b, 1, 3, 6).pass);
        LemmaReport r = lemma1_verify(a, b, 1, 2, 0);
        CHECK(r.pass);  // e = 0: a(m) = b(1) a(m)
        CHECK(r.cases_checked == 1);
    }

    SECTION("a perturbed coefficient is localized") {
        QExp bad = a;
        bad.set_coeff(8, a.coeff_rat(8) + Rat(1));
        LemmaReport r = lemma1_verify(bad, b, 1, 2, 6);
        CHECK_FALSE(r.pass);
        bool found_e3 = false;
        for (const auto& v : r.violations) found_e3 |= (v.index == 8 && v.exponents == std::vector<long>{3});
        CHECK(found_e3);
        CHECK(!r.violations.empty());
        CHECK(r.violations[0].lhs != r.violations[0].rhs);
    }

    SECTION("non-coprime m checks only the recursion clause") {
        LemmaReport r = lemma1_verify(a, b, 2, 2, 5);
        CHECK(r.pass);
        CHECK(r.cases_checked == 5);  // no closed-form cases
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(lemma1_verify(a, b, 1, 4, 3), std::invalid_argument);
        CHECK_THROWS_AS(lemma1_verify(a, b, 2, 2, 9), std::invalid_argument);  // 2*2^9 > trunc
    }
}

TEST_CASE("lemma 2: multi-prime factorization identity", "[asdcheck]") {
    NewformSpec spec = delta_spec(729);
    HeckeSequence b = extend(spec, 729);
    QExp a = from_sequence(12, b.values, Rat(7));

    LemmaReport zero = lemma2_verify(a, b, 1, {2, 3}, 0);
    CHECK(zero.pass);
    CHECK(zero.cases_checked == 1);  // all e_i = 0

    CHECK(lemma2_verify(a, b, 1, {2, 3}, 5).pass);
    CHECK(lemma2_verify(a, b, 5, {2, 3}, 3).pass);

    SECTION("r = 1 reduces to lemma 1's closed form") {
        LemmaReport two = lemma2_verify(a, b, 1, {2}, 6);
        CHECK(two.pass);
        CHECK(two.cases_checked == 7);
    }

    SECTION("violations carry the exponent tuple") {
        QExp bad = a;
        bad.set_coeff(12, a.coeff_rat(12) + Rat(3));
        LemmaReport r = lemma2_verify(bad, b, 1, {2, 3}, 4);
        CHECK_FALSE(r.pass);
        bool found = false;
        for (const auto& v : r.violations) found |= (v.exponents == std::vector<long>{2, 1});
        CHECK(found);
    }

    SECTION("input validation") {
        CHECK_THROWS_AS(lemma2_verify(a, b, 1, {2, 2}, 3), std::invalid_argument);
        CHECK_THROWS_AS(lemma2_verify(a, b, 6, {2, 3}, 3), std::invalid_argument);  // not coprime
        CHECK_THROWS_AS(lemma2_verify(a, b, 1, {2, 3}, 12), std::invalid_argument); // exceeds trunc
    }
}

TEST_CASE("two-term product identity", "[asdcheck]") {
    NewformSpec spec = delta_spec(600);
    HeckeSequence b = extend(spec, 600);
    QExp a = from_sequence(12, b.values);

    CHECK(product_identity_check(a, 1, {2, 3}, {1, 1}).pass);  // tau(1) tau(6) = tau(2) tau(3)
    CHECK(product_identity_check(a, 1, {2, 3}, {3, 0}).pass);  // e_r = 0 is trivially balanced
    CHECK(product_identity_check(a, 5, {2, 3}, {2, 2}).pass);

    QExp bad = a;
    bad.set_coeff(6, a.coeff_rat(6) + Rat(1));
    LemmaReport r = product_identity_check(bad, 1, {2, 3}, {1, 1});
    CHECK_FALSE(r.pass);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].lhs == bad.coeff_rat(1) * bad.coeff_rat(6));
    CHECK(r.violations[0].rhs == bad.coeff_rat(2) * bad.coeff_rat(3));

    CHECK_THROWS_AS(product_identity_check(a, 1, {2, 3}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(product_identity_check(a, 1, {2, 2}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(product_identity_check(a, 1, {2, 3}, {9, 1}), std::invalid_argument);
}
