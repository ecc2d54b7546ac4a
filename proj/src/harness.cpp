#include "detper/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "detper/constructions.hpp"
#include "detper/incidence.hpp"
#include "detper/rng.hpp"
#include "detper/spectrum.hpp"

namespace detper {

namespace {

struct PresetInfo {
    Preset preset;
    const char* name;
};

constexpr PresetInfo kPresets[] = {
    {Preset::thm1i, "thm1i"},   {Preset::thm1ii, "thm1ii"}, {Preset::thm2i, "thm2i"},
    {Preset::thm2ii, "thm2ii"}, {Preset::thm3, "thm3"},     {Preset::thm4, "thm4"},
    {Preset::thm5, "thm5"},     {Preset::conj1, "conj1"},   {Preset::conj2, "conj2"},
    {Preset::lemma7, "lemma7"}, {Preset::lemma8, "lemma8"}, {Preset::lemma9, "lemma9"},
    {Preset::lemma11, "lemma11"}, {Preset::dist2, "dist2"},
};

std::int64_t ipow2(std::uint32_t e) { return static_cast<std::int64_t>(1) << e; }

std::int64_t ipow5(std::uint32_t e) {
    std::int64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= 5;
    return r;
}

std::uint32_t default_d(Preset p) {
    switch (p) {
        case Preset::thm1i:
        case Preset::thm3:
        case Preset::thm5:
        case Preset::lemma7:
        case Preset::lemma8:
        case Preset::lemma11:
        case Preset::dist2:
            return 2;
        case Preset::thm2i:
        case Preset::thm4:
        case Preset::conj2:
        case Preset::lemma9:
            return 3;
        case Preset::thm1ii:
        case Preset::conj1:
            return 4;
        case Preset::thm2ii:
            return 5;
    }
    return 2;
}

void validate_d(Preset p, std::uint32_t d) {
    switch (p) {
        case Preset::thm1ii:
            if (d < 4 || d % 2 != 0) throw ConfigInvalidError("thm1ii needs even d >= 4");
            break;
        case Preset::thm2ii:
            if (d < 5 || d % 2 == 0) throw ConfigInvalidError("thm2ii needs odd d >= 5");
            break;
        case Preset::thm2i:
            if (d != 3) throw ConfigInvalidError("thm2i is the d = 3 case");
            break;
        case Preset::thm4:
        case Preset::conj2:
            if (d < 2) throw ConfigInvalidError("dimension must be >= 2");
            break;
        case Preset::thm1i:
        case Preset::thm3:
        case Preset::thm5:
        case Preset::dist2:
            if (d != 2) throw ConfigInvalidError("this preset is the d = 2 case");
            break;
        case Preset::lemma9:
            if (d < 2) throw ConfigInvalidError("iterate count must be >= 2");
            break;
        default:
            break;
    }
    if (d > 8) throw ConfigInvalidError("dimension capped at 8");
}

bool hypothesis_holds(std::uint64_t card, std::uint64_t p, const Frac& w) {
    // |A| <= p^{num/den}  <=>  den*log|A| <= num*log p
    const long double lhs = static_cast<long double>(w.den) * std::log(static_cast<long double>(card));
    const long double rhs = static_cast<long double>(w.num) * std::log(static_cast<long double>(p));
    return lhs <= rhs + 1e-9L;
}

struct CellResult {
    double measured = 0.0;
    double bound = 0.0;
    bool exact = false;
    bool hypothesis_ok = true;
};

CellResult run_cell(const ExperimentConfig& cfg, Preset preset, const FieldCtx& f, const FpSet& A,
                    std::uint32_t d, std::uint64_t cell_seed) {
    CellResult out;
    const std::uint64_t card = A.card();
    Frac w;
    if (window_exponent(preset, d, w)) out.hypothesis_ok = hypothesis_holds(card, f.p, w);
    Frac be;
    const bool has_power_bound = bound_exponent(preset, d, be);
    if (has_power_bound)
        out.bound = std::pow(static_cast<double>(card), be.value());
    if (preset == Preset::conj1 || preset == Preset::conj2)
        out.bound = std::min(out.bound, static_cast<double>(f.p));

    SpectrumOptions sopts;
    sopts.budget = cfg.budget;
    sopts.seed = cell_seed;
    sopts.workers = cfg.workers;

    auto spectrum_or_cert = [&](SpectrumTarget target) {
        if (saturating_pow(card, d * d) <= cfg.budget) {
            const auto res = target == SpectrumTarget::det ? det_spectrum(A, d, sopts)
                                                          : per_spectrum(A, d, sopts);
            out.exact = res.exact;
            return static_cast<double>(res.values.card());
        }
        const auto cert = chain_certificate(A, d, target);
        // the 2x2 base is an exact identity, not just a containment
        out.exact = (d == 2);
        return static_cast<double>(cert.subset.card());
    };

    switch (preset) {
        case Preset::thm1i:
        case Preset::thm1ii:
        case Preset::thm2i:
        case Preset::thm2ii:
        case Preset::conj1:
            out.measured = spectrum_or_cert(SpectrumTarget::det);
            break;
        case Preset::thm3:
        case Preset::thm4:
        case Preset::conj2:
            out.measured = spectrum_or_cert(SpectrumTarget::per);
            break;
        case Preset::thm5: {
            const FpSet f2 = diff_det_spectrum_f2(A);
            const FpSet g2 = diff_per_spectrum_g2(A);
            out.measured = static_cast<double>(std::min(f2.card(), g2.card()));
            out.exact = true;
            break;
        }
        case Preset::lemma7: {
            const auto rep = check_sum_product_bridge(A, A, A, cfg.workers);
            out.measured = static_cast<double>(rep.incidences);
            out.bound = rep.incidence_report.rhs;
            out.hypothesis_ok =
                rep.incidence_report.size_hypothesis && rep.incidence_report.field_hypothesis;
            out.exact = true;
            break;
        }
        case Preset::lemma8: {
            const auto rep = check_sum_product_bridge(A, A, A, cfg.workers);
            out.measured = rep.product;
            out.hypothesis_ok = rep.hypothesis_ok;
            out.exact = true;
            break;
        }
        case Preset::lemma9: {
            const FpSet prods = iter_productset(d, A);
            const FpSet sums = iter_sumset(d, A);
            out.measured = static_cast<double>(prods.card()) * static_cast<double>(sums.card());
            out.exact = true;
            break;
        }
        case Preset::lemma11: {
            const FpSet diff = diffset(A, A);
            const FpSet prod = productset(A, A);
            out.measured = std::pow(static_cast<double>(diff.card()), 18.0) *
                           std::pow(static_cast<double>(prod.card()), 9.0);
            out.exact = true;
            break;
        }
        case Preset::dist2: {
            sopts.want_counts = true;
            if (saturating_pow(card, 4) > cfg.budget)
                throw BudgetExceededError("dist2 needs the exact count table within budget");
            const auto res = det_spectrum(A, 2, sopts);
            std::uint64_t max_count = 0;
            for (std::uint64_t t = 1; t < f.p; ++t)
                max_count = std::max(max_count, (*res.counts)[t]);
            out.measured = static_cast<double>(max_count);
            out.bound = static_cast<double>(saturating_pow(card, 4)) / static_cast<double>(f.p);
            out.exact = res.exact;
            break;
        }
    }
    return out;
}

std::string fmt_measured(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

Preset preset_from_name(const std::string& name) {
    for (const auto& pi : kPresets)
        if (name == pi.name) return pi.preset;
    throw ConfigInvalidError("unknown preset '" + name + "'");
}

const char* preset_name(Preset p) {
    for (const auto& pi : kPresets)
        if (pi.preset == p) return pi.name;
    return "?";
}

bool window_exponent(Preset preset, std::uint32_t d, Frac& out) {
    switch (preset) {
        case Preset::thm1i:
        case Preset::thm3:
            out = {2, 3};
            return true;
        case Preset::thm2i:
            out = {4, 7};
            return true;
        case Preset::thm1ii: {
            const std::int64_t t = ipow2(d / 2);
            out = {45 * t, 136 * t - 137};
            return true;
        }
        case Preset::thm2ii: {
            const std::int64_t t = ipow2((d - 1) / 2);
            out = {45 * t, 136 * t - 137};
            return true;
        }
        case Preset::thm4:
        case Preset::lemma8:
        case Preset::lemma9:
            out = {1, 2};
            return true;
        case Preset::thm5:
        case Preset::lemma11:
            out = {9, 16};
            return true;
        default:
            return false;
    }
}

bool bound_exponent(Preset preset, std::uint32_t d, Frac& out) {
    switch (preset) {
        case Preset::thm1i:
        case Preset::thm3:
            out = {3, 2};
            return true;
        case Preset::thm2i:
            out = {7, 4};
            return true;
        case Preset::thm1ii: {
            const std::int64_t t = ipow2(d / 2);
            out = {136 * t - 137, 45 * t};
            return true;
        }
        case Preset::thm2ii: {
            const std::int64_t t = ipow2((d + 1) / 2);
            out = {113 * t - 137, 45 * t};
            return true;
        }
        case Preset::thm4: {
            const std::int64_t q = ipow5(d - 2);
            out = {11 * q - ipow2(d - 1), 6 * q};
            return true;
        }
        case Preset::thm5:
            out = {53, 30};
            return true;
        case Preset::conj1:
            out = {4, 1};
            return true;
        case Preset::conj2:
            out = {2, 1};
            return true;
        case Preset::lemma8:
            out = {12, 5};
            return true;
        case Preset::lemma9: {
            const std::int64_t q = ipow5(d - 1);
            out = {8 * q - ipow2(d), 3 * q};
            return true;
        }
        case Preset::lemma11:
            out = {32, 1};
            return true;
        default:
            return false;
    }
}

std::vector<ExperimentRecord> run_scan(const ExperimentConfig& cfg) {
    const FieldCtx f = make_field(cfg.p);
    if (cfg.sizes.empty()) throw ConfigInvalidError("at least one size is required");
    if (cfg.trials < 1) throw ConfigInvalidError("trials must be >= 1");
    for (auto s : cfg.sizes)
        if (s < 1 || s > f.p) throw ConfigInvalidError("size " + std::to_string(s) + " out of range");
    const std::uint32_t d = cfg.d == 0 ? default_d(cfg.preset) : cfg.d;
    validate_d(cfg.preset, d);

    const std::size_t n_cells = cfg.sizes.size() * cfg.trials;
    std::vector<ExperimentRecord> records(n_cells);

    auto run_one = [&](std::size_t cell) {
        const std::size_t size_idx = cell / cfg.trials;
        const std::uint32_t trial = static_cast<std::uint32_t>(cell % cfg.trials);
        const std::uint64_t size = cfg.sizes[size_idx];
        const std::uint64_t cell_seed = derive_seed(cfg.seed, size_idx, trial);
        const auto t0 = std::chrono::steady_clock::now();

        SetFamilySpec spec = cfg.family;
        spec.size = size;
        spec.seed = cell_seed;
        if (spec.kind == SetFamilySpec::Kind::interval || spec.kind == SetFamilySpec::Kind::geometric)
            spec.start = (spec.start + trial) % f.p; // distinct deterministic trials
        const FpSet A = gen_set(f, spec);

        CellResult res = run_cell(cfg, cfg.preset, f, A, d, cell_seed);
        ExperimentRecord& rec = records[cell];
        rec.preset = preset_name(cfg.preset);
        rec.p = f.p;
        rec.card_A = A.card();
        rec.d = d;
        rec.trial = trial;
        rec.seed = cell_seed;
        rec.measured = res.measured;
        rec.bound = res.bound;
        rec.ratio = res.bound > 0 ? res.measured / res.bound : 0.0;
        rec.exact = res.exact;
        rec.hypothesis_ok = res.hypothesis_ok;
        rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const unsigned w = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(n_cells)));
    if (w == 1) {
        for (std::size_t cell = 0; cell < n_cells; ++cell) run_one(cell);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wi = 0; wi < w; ++wi) {
            pool.emplace_back([&, wi] {
                for (std::size_t cell = wi; cell < n_cells; cell += w) run_one(cell);
            });
        }
        for (auto& t : pool) t.join();
    }
    return records;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records, bool with_timing) {
    os << "preset,p,card_A,d,trial,seed,measured,bound,ratio,exact,hypothesis_ok,elapsed_s\n";
    for (const auto& r : records) {
        os << r.preset << ',' << r.p << ',' << r.card_A << ',' << r.d << ',' << r.trial << ','
           << r.seed << ',' << fmt_measured(r.measured) << ',' << fmt_g6(r.bound) << ','
           << fmt_g6(r.ratio) << ',' << (r.exact ? 1 : 0) << ',' << (r.hypothesis_ok ? 1 : 0) << ',';
        if (with_timing) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.6f", r.elapsed_s);
            os << buf;
        } else {
            os << 0;
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records, bool with_timing) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"preset", r.preset},
                       {"p", r.p},
                       {"card_A", r.card_A},
                       {"d", r.d},
                       {"trial", r.trial},
                       {"seed", r.seed},
                       {"measured", r.measured},
                       {"bound", r.bound},
                       {"ratio", r.ratio},
                       {"exact", r.exact},
                       {"hypothesis_ok", r.hypothesis_ok},
                       {"elapsed_s", with_timing ? r.elapsed_s : 0.0}});
    }
    os << arr.dump(2) << '\n';
}

ExponentFit estimate_exponent(const std::vector<ExperimentRecord>& records) {
    std::vector<std::pair<double, double>> pts;
    bool any_cert = false;
    std::vector<std::uint64_t> cards;
    for (const auto& r : records) {
        if (r.measured <= 0 || r.card_A < 1) continue;
        pts.emplace_back(std::log(static_cast<double>(r.card_A)), std::log(r.measured));
        cards.push_back(r.card_A);
        if (!r.exact) any_cert = true;
    }
    std::sort(cards.begin(), cards.end());
    cards.erase(std::unique(cards.begin(), cards.end()), cards.end());
    if (cards.size() < 2)
        throw InsufficientDataError("exponent fit needs measurements at >= 2 distinct |A| values");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    ExponentFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (auto [x, y] : pts) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    fit.n = pts.size();
    fit.lower_bound_only = any_cert;
    return fit;
}

} // namespace detper
