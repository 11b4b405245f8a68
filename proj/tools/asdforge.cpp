// asd-forge: exact q-expansion arithmetic and congruence verification at the
// command line. All reports are JSON with the resolved configuration echoed;
// exit code 0 means every check passed, 1 means a mathematical check failed
// (with witnesses in the report), 2 means an input or usage error.

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "asdforge/io.hpp"
#include "asdforge/parallel.hpp"

using namespace asdforge;
using io::json;

namespace {

void emit(const json& report, const std::string& out_path) {
    if (out_path.empty())
        std::cout << report.dump(2) << "\n";
    else
        io::write_json_file(out_path, report);
}

QExp load_form(const std::string& path) { return io::qexp_from_json(io::read_json_file(path)); }

std::vector<long> checked_primes(const std::vector<long>& primes) {
    if (primes.empty()) throw std::invalid_argument("at least one prime is required");
    for (long p : primes)
        if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    return primes;
}

long max_of(const std::vector<long>& v) {
    long m = v.front();
    for (long x : v) m = std::max(m, x);
    return m;
}

struct DeltaOpts {
    long nmax = 0;
    std::string out;
};

struct HeckeOpts {
    std::string newform;
    long nmax = 0;
    std::string out;
};

struct AsdOpts {
    std::string form, newform, out;
    std::vector<long> primes;
    long nmax = 0;
    long n1 = 0;
};

struct SeriesOpts {
    std::string form, chr, method = "both", out;
    long K = 1;
};

struct GaussOpts {
    std::string chr, out;
};

struct DenomOpts {
    std::string form, out;
    long nmax = 0;
    std::vector<long> primes;
    long window = 3;
};

struct SelbergOpts {
    std::string form, candidate, out;
    long nmax = 0;
};

struct ThresholdOpts {
    std::string c;
    long m = 1;
    int weight = 0;
    long n1 = 0;
    std::string out;
};

struct LemmaOpts {
    std::string which, form, newform, out;
    long m = 1;
    long p = 0;
    std::vector<long> primes;
    std::vector<long> exponents;
    int emax = 0;
};

int run_delta(const DeltaOpts& o) {
    io::write_json_file(o.out, io::qexp_to_json(delta_oracle(o.nmax)));
    // the data file keeps the bare schema; the run echo goes to stdout
    std::cout << json{{"command", "delta"}, {"config", {{"nmax", o.nmax}, {"out", o.out}}}}.dump()
              << "\n";
    return 0;
}

int run_hecke_extend(const HeckeOpts& o) {
    NewformSpec spec = io::newform_from_file(o.newform);
    HeckeSequence h = extend(spec, o.nmax);
    io::write_json_file(o.out, io::hecke_to_json(h));
    std::cout << json{{"command", "hecke-extend"},
                      {"config", {{"newform", o.newform}, {"nmax", o.nmax}, {"out", o.out}}}}
                     .dump()
              << "\n";
    return 0;
}

int run_asd_check(const AsdOpts& o) {
    QExp a = load_form(o.form);
    NewformSpec g = io::newform_from_file(o.newform);
    std::vector<long> primes = checked_primes(o.primes);
    AsdReport report = asd_check_many(a, g, primes, o.nmax, o.n1);
    json j = io::asd_report_to_json(report);
    j["command"] = "asd-check";
    j["config"] = json{{"form", o.form},     {"newform", o.newform}, {"primes", primes},
                       {"nmax", o.nmax},     {"n1", o.n1},           {"workers", worker_count()}};
    emit(j, o.out);
    return report.ok() ? 0 : 1;
}

int run_subseries(const SeriesOpts& o) {
    QExp f = load_form(o.form);
    json j{{"command", "subseries"},
           {"config", {{"form", o.form}, {"K", o.K}, {"method", o.method}}}};
    int code = 0;
    if (o.method == "direct") {
        j["series"] = io::qexp_to_json(subseries(f, o.K));
    } else if (o.method == "strokes") {
        j["series"] = io::qexp_to_json(subseries_via_strokes(f, o.K));
    } else {
        QExp direct = subseries(f, o.K);
        QExp strokes = subseries_via_strokes(f, o.K);
        bool equal = qexp_equal(direct, strokes, f.trunc());
        j["equal"] = equal;
        j["verdict"] = equal ? "EQUAL" : "DIFFER";
        j["series"] = io::qexp_to_json(direct);
        code = equal ? 0 : 1;
    }
    emit(j, o.out);
    return code;
}

int run_twist(const SeriesOpts& o) {
    QExp f = load_form(o.form);
    DirichletChar phi = io::char_from_arg(o.chr);
    json j{{"command", "twist"},
           {"config", {{"form", o.form}, {"char", o.chr}, {"method", o.method}}}};
    int code = 0;
    if (o.method == "direct") {
        j["series"] = io::qexp_to_json(twist(f, phi));
    } else if (o.method == "strokes") {
        j["series"] = io::qexp_to_json(twist_via_strokes(f, phi));
    } else {
        QExp direct = twist(f, phi);
        QExp strokes = twist_via_strokes(f, phi);
        bool equal = qexp_equal(direct, strokes, f.trunc());
        j["equal"] = equal;
        j["verdict"] = equal ? "EQUAL" : "DIFFER";
        j["series"] = io::qexp_to_json(direct);
        code = equal ? 0 : 1;
    }
    emit(j, o.out);
    return code;
}

int run_gauss(const GaussOpts& o) {
    DirichletChar chi = io::char_from_arg(o.chr);
    CycloElem g = gauss_sum(chi);
    CycloElem norm = cyclo_mul_mixed(g, cyclo_conj(g)).canonicalized();
    json j{{"command", "gauss"},
           {"config", {{"char", o.chr}}},
           {"character", io::char_to_json(chi)},
           {"gauss_sum", io::cyclo_to_json(g)},
           {"norm_product",
            norm.is_rational() ? io::rat_to_json(norm.rational_value()) : io::cyclo_to_json(norm)}};
    emit(j, o.out);
    return 0;
}

int run_denom(const DenomOpts& o) {
    QExp f = load_form(o.form);
    long nmax = o.nmax == 0 ? f.trunc() : o.nmax;
    DenomReport report = denominator_profile(f, nmax, o.primes, o.window);
    json j = io::denom_report_to_json(report);
    j["command"] = "denom";
    j["config"] = json{{"form", o.form},
                       {"nmax", nmax},
                       {"primes", o.primes.empty() ? json("auto") : json(o.primes)},
                       {"window", o.window},
                       {"workers", worker_count()}};
    emit(j, o.out);
    return report.bounded ? 0 : 1;
}

int run_selberg(const SelbergOpts& o) {
    QExp f = load_form(o.form);
    long nmax = o.nmax == 0 ? f.trunc() : o.nmax;
    std::optional<Rat> candidate;
    if (!o.candidate.empty()) candidate = Rat::from_string(o.candidate);
    BoundFit fit = selberg_fit(f, nmax, candidate);
    json j = io::boundfit_to_json(fit);
    j["command"] = "selberg";
    j["config"] = json{{"form", o.form}, {"nmax", nmax}};
    if (candidate) j["config"]["C"] = io::rat_to_json(*candidate);
    emit(j, o.out);
    return (fit.holds && !*fit.holds) ? 1 : 0;
}

int run_threshold(const ThresholdOpts& o) {
    ThresholdResult t = threshold_Pm(Rat::from_string(o.c), o.m, o.weight, o.n1);
    json j = io::threshold_to_json(t);
    j["command"] = "threshold";
    emit(j, o.out);
    return 0;
}

int run_lemma(const LemmaOpts& o) {
    QExp a = load_form(o.form);
    LemmaReport report;
    json config{{"which", o.which}, {"form", o.form}, {"m", o.m}};
    if (o.which == "product") {
        if (o.primes.empty() || o.exponents.empty())
            throw std::invalid_argument("--which product needs --primes and --exponents");
        report = product_identity_check(a, o.m, o.primes, o.exponents);
        config["primes"] = o.primes;
        config["exponents"] = o.exponents;
    } else {
        if (o.newform.empty())
            throw std::invalid_argument("--which " + o.which + " needs --newform");
        NewformSpec spec = io::newform_from_file(o.newform);
        config["newform"] = o.newform;
        config["emax"] = o.emax;
        if (o.which == "1") {
            if (o.p == 0) throw std::invalid_argument("--which 1 needs --p");
            long need = detail::checked_pow_long(o.p, o.emax, a.trunc());
            HeckeSequence b = extend(spec, std::max(o.p, need));
            report = lemma1_verify(a, b, o.m, o.p, o.emax);
            config["p"] = o.p;
        } else {
            if (o.primes.empty()) throw std::invalid_argument("--which 2 needs --primes");
            long need = detail::checked_pow_long(max_of(o.primes), o.emax, a.trunc());
            HeckeSequence b = extend(spec, need);
            report = lemma2_verify(a, b, o.m, o.primes, o.emax);
            config["primes"] = o.primes;
        }
    }
    json j = io::lemma_report_to_json(report);
    j["command"] = "lemma";
    j["config"] = std::move(config);
    emit(j, o.out);
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asd-forge: exact arithmetic for q-expansions, coefficient congruences and twists"};
    app.require_subcommand(1);
    std::function<int()> action;

    DeltaOpts delta_opts;
    auto* delta_cmd = app.add_subcommand("delta", "write the discriminant cusp form as q-expansion JSON");
    delta_cmd->add_option("--nmax", delta_opts.nmax, "truncation")->required()->check(CLI::PositiveNumber);
    delta_cmd->add_option("--out", delta_opts.out, "output file")->required();
    delta_cmd->callback([&] { action = [&] { return run_delta(delta_opts); }; });

    HeckeOpts hecke_opts;
    auto* hecke_cmd =
        app.add_subcommand("hecke-extend", "extend prime eigenvalues b(p) to b(1..nmax) via the recursion");
    hecke_cmd->add_option("--newform", hecke_opts.newform, "newform spec (.json, or .csv with sidecar)")
        ->required();
    hecke_cmd->add_option("--nmax", hecke_opts.nmax, "extension bound")->required()->check(CLI::PositiveNumber);
    hecke_cmd->add_option("--out", hecke_opts.out, "output file")->required();
    hecke_cmd->callback([&] { action = [&] { return run_hecke_extend(hecke_opts); }; });

    AsdOpts asd_opts;
    auto* asd_cmd = app.add_subcommand("asd-check", "verify the coefficient congruences of a form "
                                                    "against a newform");
    asd_cmd->add_option("--form", asd_opts.form, "q-expansion JSON")->required();
    asd_cmd->add_option("--newform", asd_opts.newform, "newform spec")->required();
    asd_cmd->add_option("--primes", asd_opts.primes, "primes to check")->required()->delimiter(',');
    asd_cmd->add_option("--nmax", asd_opts.nmax, "check n = 1..nmax")->required()->check(CLI::PositiveNumber);
    asd_cmd->add_option("--n1", asd_opts.n1, "primes <= N1 are advisory")->check(CLI::NonNegativeNumber);
    asd_cmd->add_option("--out", asd_opts.out, "report file (default stdout)");
    asd_cmd->callback([&] { action = [&] { return run_asd_check(asd_opts); }; });

    SeriesOpts sub_opts;
    auto* sub_cmd = app.add_subcommand("subseries", "extract the subseries at indices divisible by K");
    sub_cmd->add_option("--form", sub_opts.form, "q-expansion JSON")->required();
    sub_cmd->add_option("--K", sub_opts.K, "index divisor")->required()->check(CLI::PositiveNumber);
    sub_cmd->add_option("--method", sub_opts.method, "direct | strokes | both")
        ->check(CLI::IsMember({"direct", "strokes", "both"}));
    sub_cmd->add_option("--out", sub_opts.out, "report file (default stdout)");
    sub_cmd->callback([&] { action = [&] { return run_subseries(sub_opts); }; });

    SeriesOpts twist_opts;
    auto* twist_cmd = app.add_subcommand("twist", "twist a form by a Dirichlet character");
    twist_cmd->add_option("--form", twist_opts.form, "q-expansion JSON")->required();
    twist_cmd->add_option("--char", twist_opts.chr, "character: quadratic:N, trivial:K, or JSON path")
        ->required();
    twist_cmd->add_option("--method", twist_opts.method, "direct | strokes | both")
        ->check(CLI::IsMember({"direct", "strokes", "both"}));
    twist_cmd->add_option("--out", twist_opts.out, "report file (default stdout)");
    twist_cmd->callback([&] { action = [&] { return run_twist(twist_opts); }; });

    GaussOpts gauss_opts;
    auto* gauss_cmd = app.add_subcommand("gauss", "Gauss sum of a character, with g(chi) conj(g(chi))");
    gauss_cmd->add_option("--char", gauss_opts.chr, "character spec")->required();
    gauss_cmd->add_option("--out", gauss_opts.out, "report file (default stdout)");
    gauss_cmd->callback([&] { action = [&] { return run_gauss(gauss_opts); }; });

    DenomOpts denom_opts;
    auto* denom_cmd = app.add_subcommand("denom", "profile denominator growth per prime");
    denom_cmd->add_option("--form", denom_opts.form, "q-expansion JSON")->required();
    denom_cmd->add_option("--nmax", denom_opts.nmax, "window (default: trunc)")->check(CLI::PositiveNumber);
    denom_cmd->add_option("--primes", denom_opts.primes, "primes to profile (default: auto)")
        ->delimiter(',');
    denom_cmd->add_option("--window", denom_opts.window, "growth threshold G")->check(CLI::PositiveNumber);
    denom_cmd->add_option("--out", denom_opts.out, "report file (default stdout)");
    denom_cmd->callback([&] { action = [&] { return run_denom(denom_opts); }; });

    SelbergOpts selberg_opts;
    auto* selberg_cmd = app.add_subcommand("selberg", "fit the extremal |a(n)| / n^(k/2 - 1/5) ratio");
    selberg_cmd->add_option("--form", selberg_opts.form, "q-expansion JSON")->required();
    selberg_cmd->add_option("--nmax", selberg_opts.nmax, "scan bound (default: trunc)")
        ->check(CLI::PositiveNumber);
    selberg_cmd->add_option("--C", selberg_opts.candidate, "candidate constant (rational)");
    selberg_cmd->add_option("--out", selberg_opts.out, "report file (default stdout)");
    selberg_cmd->callback([&] { action = [&] { return run_selberg(selberg_opts); }; });

    ThresholdOpts threshold_opts;
    auto* threshold_cmd = app.add_subcommand("threshold", "least P > N1 with 3C^2 A(m)^2 n^(k/2-1/5) < "
                                                          "n^(k-1) beyond it");
    threshold_cmd->add_option("--c", threshold_opts.c, "constant C > 1 (rational)")->required();
    threshold_cmd->add_option("--m", threshold_opts.m, "index m")->required()->check(CLI::PositiveNumber);
    threshold_cmd->add_option("--weight", threshold_opts.weight, "weight k >= 2")->required();
    threshold_cmd->add_option("--n1", threshold_opts.n1, "lower floor N1")->check(CLI::NonNegativeNumber);
    threshold_cmd->add_option("--out", threshold_opts.out, "report file (default stdout)");
    threshold_cmd->callback([&] { action = [&] { return run_threshold(threshold_opts); }; });

    LemmaOpts lemma_opts;
    auto* lemma_cmd = app.add_subcommand("lemma", "verify the coefficient factorization identities");
    lemma_cmd->add_option("--which", lemma_opts.which, "1 | 2 | product")
        ->required()
        ->check(CLI::IsMember({"1", "2", "product"}));
    lemma_cmd->add_option("--form", lemma_opts.form, "q-expansion JSON")->required();
    lemma_cmd->add_option("--newform", lemma_opts.newform, "newform spec (for --which 1|2)");
    lemma_cmd->add_option("--m", lemma_opts.m, "base index m")->check(CLI::PositiveNumber);
    lemma_cmd->add_option("--p", lemma_opts.p, "prime (for --which 1)");
    lemma_cmd->add_option("--primes", lemma_opts.primes, "primes (for --which 2|product)")->delimiter(',');
    lemma_cmd->add_option("--exponents", lemma_opts.exponents, "exponent tuple (for --which product)")
        ->delimiter(',');
    lemma_cmd->add_option("--emax", lemma_opts.emax, "exponent budget (for --which 1|2)")
        ->check(CLI::NonNegativeNumber);
    lemma_cmd->add_option("--out", lemma_opts.out, "report file (default stdout)");
    lemma_cmd->callback([&] { action = [&] { return run_lemma(lemma_opts); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return action();
    } catch (const identity_error& e) {
        std::cerr << "identity failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
