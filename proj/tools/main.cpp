#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "detper/constructions.hpp"
#include "detper/harness.hpp"
#include "detper/incidence.hpp"
#include "detper/setexpr.hpp"
#include "detper/spectrum.hpp"

namespace {

using namespace detper;

unsigned default_workers() {
    if (const char* env = std::getenv("SPECTRA_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    return 1;
}

// SPEC is either a literal `0,1,4` or generator syntax `kind:key=value,...`
FpSet parse_spec(const FieldCtx& f, const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return parse_set_literal(f, text);
    SetFamilySpec spec;
    const std::string kind = text.substr(0, colon);
    if (kind == "random")
        spec.kind = SetFamilySpec::Kind::random;
    else if (kind == "interval")
        spec.kind = SetFamilySpec::Kind::interval;
    else if (kind == "geometric")
        spec.kind = SetFamilySpec::Kind::geometric;
    else
        throw ConfigInvalidError("unknown set kind '" + kind + "'");
    std::stringstream rest(text.substr(colon + 1));
    std::string kv;
    while (std::getline(rest, kv, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigInvalidError("expected key=value in '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::uint64_t val = std::strtoull(kv.c_str() + eq + 1, nullptr, 10);
        if (key == "size")
            spec.size = val;
        else if (key == "start")
            spec.start = val;
        else if (key == "ratio")
            spec.ratio = val;
        else if (key == "seed")
            spec.seed = val;
        else
            throw ConfigInvalidError("unknown set parameter '" + key + "'");
    }
    return gen_set(f, spec);
}

SetFamilySpec::Kind parse_family_kind(const std::string& kind) {
    if (kind == "random") return SetFamilySpec::Kind::random;
    if (kind == "interval") return SetFamilySpec::Kind::interval;
    if (kind == "geometric") return SetFamilySpec::Kind::geometric;
    throw ConfigInvalidError("unknown family kind '" + kind + "'");
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::strtoull(tok.c_str(), nullptr, 10));
    return out;
}

void print_spectrum(const SpectrumResult& res, bool counts, bool json) {
    if (json) {
        std::cout << "{\"cardinality\": " << res.values.card() << ", \"exact\": "
                  << (res.exact ? "true" : "false")
                  << ", \"matrices_enumerated\": " << res.matrices_enumerated << ", \"values\": ["
                  << set_to_string(res.values) << "]";
        if (counts && res.counts) {
            std::cout << ", \"counts\": {";
            bool first = true;
            for (std::size_t t = 0; t < res.counts->size(); ++t) {
                if ((*res.counts)[t] == 0) continue;
                if (!first) std::cout << ", ";
                std::cout << "\"" << t << "\": " << (*res.counts)[t];
                first = false;
            }
            std::cout << "}";
        }
        std::cout << "}\n";
        return;
    }
    std::cout << "values (" << res.values.card() << "): " << set_to_string(res.values) << "\n";
    std::cout << (res.exact ? "exact" : "sampled lower bound") << ", matrices enumerated: "
              << res.matrices_enumerated << "\n";
    if (counts && res.counts) {
        for (std::size_t t = 0; t < res.counts->size(); ++t)
            if ((*res.counts)[t] != 0) std::cout << "  count[" << t << "] = " << (*res.counts)[t] << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"determinant/permanent spectra over prime fields"};
    app.require_subcommand(1);

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "compute a determinant or permanent spectrum");
    std::uint64_t sp_p = 0, sp_budget = 1'000'000'000ULL, sp_seed = 0;
    std::string sp_set;
    std::uint32_t sp_d = 2;
    bool sp_per = false, sp_counts = false, sp_json = false;
    unsigned sp_workers = default_workers();
    sp->add_option("--p", sp_p, "prime modulus")->required();
    sp->add_option("--set", sp_set, "set literal or generator spec")->required();
    sp->add_option("--d", sp_d, "matrix dimension (2..8)")->required();
    sp->add_flag("--per", sp_per, "permanent spectrum instead of determinant");
    sp->add_flag("--counts", sp_counts, "also accumulate per-value counts");
    sp->add_option("--budget", sp_budget, "max matrices before sampling");
    sp->add_option("--seed", sp_seed, "sampling seed");
    sp->add_option("--workers", sp_workers, "worker threads");
    sp->add_flag("--json", sp_json, "JSON output");

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate a set expression");
    std::uint64_t ev_p = 0;
    std::string ev_expr;
    std::vector<std::string> ev_binds;
    ev->add_option("--p", ev_p, "prime modulus")->required();
    ev->add_option("--expr", ev_expr, "set expression")->required();
    ev->add_option("--bind", ev_binds, "NAME=SPEC variable binding (repeatable)");

    // certify
    auto* ce = app.add_subcommand("certify", "emit a chain lower-bound certificate");
    std::uint64_t ce_p = 0;
    std::string ce_set, ce_target = "det";
    std::uint32_t ce_d = 2;
    ce->add_option("--p", ce_p, "prime modulus")->required();
    ce->add_option("--set", ce_set, "set literal or generator spec")->required();
    ce->add_option("--d", ce_d, "target dimension")->required();
    ce->add_option("--target", ce_target, "det or per")->check(CLI::IsMember({"det", "per"}));

    // incidence
    auto* in = app.add_subcommand("incidence", "count grid/line incidences and report the bound");
    std::uint64_t in_p = 0;
    std::string in_xs, in_ys, in_slopes, in_offsets;
    unsigned in_workers = default_workers();
    in->add_option("--p", in_p, "prime modulus")->required();
    in->add_option("--xs", in_xs, "grid x-coordinates")->required();
    in->add_option("--ys", in_ys, "grid y-coordinates")->required();
    in->add_option("--slopes", in_slopes, "line slopes")->required();
    in->add_option("--offsets", in_offsets, "line offsets")->required();
    in->add_option("--workers", in_workers, "worker threads");

    // scan
    auto* sc = app.add_subcommand("scan", "run an experiment preset over set sizes");
    std::string sc_preset, sc_family = "random", sc_sizes, sc_out;
    std::uint64_t sc_p = 0, sc_seed = 0, sc_budget = 1'000'000'000ULL;
    std::uint32_t sc_trials = 1, sc_d = 0;
    unsigned sc_workers = default_workers();
    bool sc_timing = false;
    sc->add_option("--preset", sc_preset, "preset name")->required();
    sc->add_option("--p", sc_p, "prime modulus")->required();
    sc->add_option("--family", sc_family, "random|interval|geometric");
    sc->add_option("--sizes", sc_sizes, "comma-separated |A| values")->required();
    sc->add_option("--d", sc_d, "dimension (0 = preset default)");
    sc->add_option("--trials", sc_trials, "trials per size");
    sc->add_option("--seed", sc_seed, "root seed");
    sc->add_option("--budget", sc_budget, "enumeration budget");
    sc->add_option("--workers", sc_workers, "worker threads");
    sc->add_option("--out", sc_out, "output file (.csv or .json); stdout if omitted");
    sc->add_flag("--timing", sc_timing, "include wall-clock timings (breaks byte determinism)");

    // verify
    auto* ve = app.add_subcommand("verify", "run the cross-module invariant batteries");
    std::string ve_level = "quick";
    unsigned ve_workers = default_workers();
    ve->add_option("--level", ve_level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    ve->add_option("--workers", ve_workers, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sp) {
            const FieldCtx f = make_field(sp_p);
            const FpSet A = parse_spec(f, sp_set);
            SpectrumOptions o{sp_counts, sp_budget, sp_seed, sp_workers};
            const auto res = sp_per ? per_spectrum(A, sp_d, o) : det_spectrum(A, sp_d, o);
            print_spectrum(res, sp_counts, sp_json);
        } else if (*ev) {
            const FieldCtx f = make_field(ev_p);
            std::map<std::string, FpSet> env;
            for (const auto& bind : ev_binds) {
                const auto eq = bind.find('=');
                if (eq == std::string::npos)
                    throw ConfigInvalidError("expected NAME=SPEC in --bind '" + bind + "'");
                env.emplace(bind.substr(0, eq), parse_spec(f, bind.substr(eq + 1)));
            }
            const auto ast = parse_expr(ev_expr);
            const FpSet result = eval_expr(*ast, env, f);
            std::cout << "cardinality: " << result.card() << "\n";
            std::cout << "values: " << set_to_string(result) << "\n";
        } else if (*ce) {
            const FieldCtx f = make_field(ce_p);
            const FpSet A = parse_spec(f, ce_set);
            const auto cert = chain_certificate(
                A, ce_d, ce_target == "per" ? SpectrumTarget::per : SpectrumTarget::det);
            std::cout << "target: " << ce_target << "  d: " << cert.d << "\n";
            std::cout << "formula: " << cert.formula << "\n";
            if (cert.scale != 1) std::cout << "scale: " << cert.scale << "\n";
            if (cert.degenerate) std::cout << "degenerate: factorial vanished mod p\n";
            std::cout << "certified subset (" << cert.subset.card()
                      << "): " << set_to_string(cert.subset) << "\n";
            std::cout << "cost: " << cert.cost << "\n";
        } else if (*in) {
            const FieldCtx f = make_field(in_p);
            const GridPoints g{parse_spec(f, in_xs), parse_spec(f, in_ys)};
            const LineFamily l{parse_spec(f, in_slopes), parse_spec(f, in_offsets)};
            const auto rep = check_incidence_bound(g, l, in_workers);
            std::cout << "incidences: " << rep.incidences << "  lines: " << rep.n_lines << "\n";
            std::cout << "rhs: " << rep.rhs << "  ratio: " << rep.ratio << "\n";
            std::cout << "size hypothesis (|P1||P2|^2 <= |L|^3): "
                      << (rep.size_hypothesis ? "ok" : "violated") << "\n";
            std::cout << "field hypothesis (|P1||L| <= p^2): "
                      << (rep.field_hypothesis ? "ok" : "violated")
                      << " (ratio " << rep.field_hypothesis_ratio << ")\n";
            if (rep.swapped) std::cout << "note: grid sides swapped so |P1| <= |P2|\n";
        } else if (*sc) {
            ExperimentConfig cfg;
            cfg.preset = preset_from_name(sc_preset);
            cfg.p = sc_p;
            cfg.family.kind = parse_family_kind(sc_family);
            cfg.sizes = parse_sizes(sc_sizes);
            cfg.d = sc_d;
            cfg.trials = sc_trials;
            cfg.seed = sc_seed;
            cfg.budget = sc_budget;
            cfg.workers = sc_workers;
            const auto records = run_scan(cfg);
            const bool json = sc_out.size() > 5 && sc_out.substr(sc_out.size() - 5) == ".json";
            if (sc_out.empty()) {
                write_csv(std::cout, records, sc_timing);
            } else {
                std::ofstream out(sc_out, std::ios::binary);
                if (!out) throw Error("cannot open output file " + sc_out);
                if (json)
                    write_json(out, records, sc_timing);
                else
                    write_csv(out, records, sc_timing);
            }
        } else if (*ve) {
            const auto report = run_verify(ve_level == "full" ? VerifyLevel::full : VerifyLevel::quick,
                                           ve_workers);
            for (const auto& c : report.checks) {
                std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "\n";
                if (!c.pass && !c.detail.empty()) std::cout << "       " << c.detail << "\n";
            }
            if (!report.all_pass()) return 2;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
