#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>
#include <unistd.h>

#include "asdforge/io.hpp"
#include "testutil.hpp"

using namespace asdforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("asdforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("rational scalars round-trip as strings", "[io]") {
    for (const Rat& r : {Rat(0), Rat(-24), Rat(7, 3), Rat(-355, 113)}) {
        CHECK(io::rat_from_json(io::rat_to_json(r)) == r);
    }
    CHECK(io::rat_from_json(io::json(42)) == Rat(42));
    CHECK_THROWS_AS(io::rat_from_json(io::json(1.5)), std::invalid_argument);
    CHECK_THROWS_AS(io::rat_from_json(io::json("x/y")), std::invalid_argument);
}

TEST_CASE("cyclotomic scalars round-trip", "[io]") {
    auto g = testutil::rng(20240830);
    for (long order : {1L, 4L, 5L, 12L}) {
        CycloElem c = testutil::rand_cyclo(g, order);
        CHECK(io::cyclo_from_json(io::cyclo_to_json(c)) == c);
    }
    CHECK(io::cyclo_from_json(io::json("3/4")) == CycloElem(Rat(3, 4)));
    CHECK_THROWS_AS(io::cyclo_from_json(io::json::parse(R"({"order": 5})")), std::invalid_argument);
    CHECK_THROWS_AS(io::cyclo_from_json(io::json::parse(R"({"order": 5, "coeffs": ["1"]})")),
                    std::invalid_argument);
}

TEST_CASE("q-expansions round-trip bit-exactly", "[io]") {
    auto g = testutil::rng(20240831);

    QExp rational = testutil::rand_int_series(g, 12, 2, 40);
    rational.set_coeff(7, Rat(22, 7));
    CHECK(io::qexp_from_json(io::qexp_to_json(rational)) == rational);

    QExp cyc(3, 5, 12, 25);
    for (long n = 1; n <= 25; n += 3) cyc.set_coeff(n, testutil::rand_cyclo(g, 12));
    cyc.set_coeff(2, testutil::rand_cyclo(g, 4));  // suborder scalar embeds on write
    QExp back = io::qexp_from_json(io::qexp_to_json(cyc));
    CHECK(back == cyc);
}

TEST_CASE("q-expansion schema violations are rejected", "[io]") {
    CHECK_THROWS_AS(io::qexp_from_json(io::json::parse(R"({"weight": 12})")), std::invalid_argument);
    CHECK_THROWS_AS(io::qexp_from_json(io::json::parse(
                        R"({"weight": 1, "width": 1, "field": {"kind": "rational"}, "trunc": 5, "coefficients": {}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::qexp_from_json(io::json::parse(
                        R"({"weight": 12, "width": 1, "field": {"kind": "real"}, "trunc": 5, "coefficients": {}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(io::qexp_from_json(io::json::parse(
                        R"({"weight": 12, "width": 1, "field": {"kind": "rational"}, "trunc": 5, "coefficients": {"0": "1"}})")),
                    std::out_of_range);
    CHECK_THROWS_AS(io::qexp_from_json(io::json::parse(
                        R"({"weight": 12, "width": 1, "field": {"kind": "rational"}, "trunc": 5, "coefficients": {"x": "1"}})")),
                    std::invalid_argument);
}

TEST_CASE("characters round-trip", "[io]") {
    for (long K = 1; K <= 12; ++K) {
        for (const auto& chi : all_characters(K)) {
            CHECK(io::char_from_json(io::char_to_json(chi)) == chi);
        }
    }
    CHECK(io::char_from_shorthand("quadratic:5") == quadratic_char(5));
    CHECK(io::char_from_shorthand("trivial:7") == trivial_char(7));
    CHECK_THROWS_AS(io::char_from_shorthand("legendre:5"), std::invalid_argument);
    CHECK_THROWS_AS(io::char_from_shorthand("quadratic:x"), std::invalid_argument);
    // a tampered table must not validate
    io::json j = io::char_to_json(quadratic_char(5));
    j["values"]["2"] = 0;
    CHECK_THROWS_AS(io::char_from_json(j), std::invalid_argument);
}

TEST_CASE("newform specs round-trip, with shorthand characters accepted", "[io]") {
    const QExp& d = testutil::delta_fixture();
    std::map<long, mpz_class> pc;
    for (long p : primes_up_to(30)) pc[p] = d.coeff_rat(p).num();
    NewformSpec spec(12, 1, trivial_char(1), pc);
    CHECK(io::newform_from_json(io::newform_to_json(spec)) == spec);

    io::json shorthand{{"weight", 12},
                       {"level", 5},
                       {"character", "quadratic:5"},
                       {"prime_coeffs", {{"2", "-24"}, {"3", 252}}}};
    NewformSpec s = io::newform_from_json(shorthand);
    CHECK(s.character() == quadratic_char(5));
    CHECK(s.b_at_prime(2) == -24);
    CHECK(s.b_at_prime(3) == 252);

    CHECK_THROWS_AS(io::newform_from_json(io::json::parse(R"({"weight": 12})")), std::invalid_argument);
}

TEST_CASE("hecke sequences round-trip", "[io]") {
    const QExp& d = testutil::delta_fixture();
    std::map<long, mpz_class> pc;
    for (long p : primes_up_to(20)) pc[p] = d.coeff_rat(p).num();
    HeckeSequence h = extend(NewformSpec(12, 1, trivial_char(1), pc), 20);
    CHECK(io::hecke_from_json(io::hecke_to_json(h)) == h);

    io::json j = io::hecke_to_json(h);
    j["nmax"] = 19;  // length mismatch
    CHECK_THROWS_AS(io::hecke_from_json(j), std::invalid_argument);
}

TEST_CASE("csv ingestion with a json sidecar", "[io]") {
    TempDir dir;
    io::write_text_file(dir.file("eigen.csv"), "p,b_p\n2,-24\n3,252\n# a comment\n5,4830\n");
    io::write_text_file(dir.file("eigen.json"),
                        R"({"weight": 12, "level": 1, "character": "trivial:1"})");
    NewformSpec spec = io::newform_from_file(dir.file("eigen.csv"));
    CHECK(spec.weight() == 12);
    CHECK(spec.b_at_prime(2) == -24);
    CHECK(spec.b_at_prime(5) == 4830);

    SECTION("header after comments is tolerated") {
        io::write_text_file(dir.file("hdr.csv"), "# export\np,b_p\n2,-24\n");
        io::write_text_file(dir.file("hdr.json"),
                            R"({"weight": 12, "level": 1, "character": "trivial:1"})");
        CHECK(io::newform_from_file(dir.file("hdr.csv")).b_at_prime(2) == -24);
    }

    SECTION("bad rows are reported with their line") {
        io::write_text_file(dir.file("bad.csv"), "2,-24\n3 252\n");
        io::write_text_file(dir.file("bad.json"),
                            R"({"weight": 12, "level": 1, "character": "trivial:1"})");
        CHECK_THROWS_WITH(io::newform_from_file(dir.file("bad.csv")),
                          Catch::Matchers::ContainsSubstring("bad.csv:2"));
    }

    SECTION("missing sidecar is an error") {
        io::write_text_file(dir.file("orphan.csv"), "2,-24\n");
        CHECK_THROWS_AS(io::newform_from_file(dir.file("orphan.csv")), std::runtime_error);
    }
}

TEST_CASE("json files read back what was written", "[io]") {
    TempDir dir;
    QExp d = delta_oracle(20);
    io::write_json_file(dir.file("delta.json"), io::qexp_to_json(d));
    CHECK(io::qexp_from_json(io::read_json_file(dir.file("delta.json"))) == d);
    CHECK_THROWS_AS(io::read_json_file(dir.file("missing.json")), std::runtime_error);
    io::write_text_file(dir.file("garbage.json"), "{not json");
    CHECK_THROWS_AS(io::read_json_file(dir.file("garbage.json")), std::runtime_error);
}
