// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses its own independent
// oracles (permutation sums, nested loops, pair brute force).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "detper/constructions.hpp"
#include "detper/harness.hpp"
#include "detper/incidence.hpp"
#include "detper/rng.hpp"
#include "detper/setexpr.hpp"
#include "detper/spectrum.hpp"

using namespace detper;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

FpSet random_subset(const FieldCtx& f, std::uint64_t size, Rng& rng) {
    FpSet s(f);
    while (s.card() < size) s.insert(rng.bounded(f.p));
    return s;
}

std::uint64_t perm_sum(const MatrixView& m, bool signed_terms) {
    std::vector<std::uint32_t> perm(m.d);
    std::iota(perm.begin(), perm.end(), 0u);
    std::uint64_t acc = 0;
    do {
        std::uint64_t term = 1;
        for (std::uint32_t i = 0; i < m.d; ++i)
            term = fmul(m.ctx, term, m.entries[i * m.d + perm[i]]);
        if (signed_terms) {
            unsigned inversions = 0;
            for (std::uint32_t i = 0; i < m.d; ++i)
                for (std::uint32_t j = i + 1; j < m.d; ++j)
                    if (perm[i] > perm[j]) ++inversions;
            if (inversions % 2) term = fneg(m.ctx, term);
        }
        acc = fadd(m.ctx, acc, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// enumerate every subset of F_p of the given cardinality
void for_each_subset(const FieldCtx& f, std::uint64_t size,
                     const std::function<void(const FpSet&)>& fn) {
    std::vector<std::uint64_t> pick(size);
    std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t from,
                                                                std::uint64_t depth) {
        if (depth == size) {
            fn(FpSet::from_elements(f, pick));
            return;
        }
        for (std::uint64_t v = from; v < f.p; ++v) {
            pick[depth] = v;
            rec(v + 1, depth + 1);
        }
    };
    rec(0, 0);
}

// criteria 1 & 2: the 2x2 spectrum identities against setexpr
void run_identity_battery(int criterion, bool use_det) {
    Rng rng(criterion);
    const auto ast = parse_expr(use_det ? "A*A - A*A" : "A*A + A*A");
    std::uint64_t mismatches = 0, checked = 0;
    for (std::uint64_t p : {101ULL, 1009ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 100; ++it) {
            const FpSet a = random_subset(f, 2 + rng.bounded(11), rng);
            const auto spec = use_det ? det_spectrum(a, 2) : per_spectrum(a, 2);
            const FpSet direct = eval_expr(*ast, {{"A", a}}, f);
            ++checked;
            if (!(spec.exact && spec.values == direct)) ++mismatches;
        }
    }
    std::ostringstream os;
    os << (use_det ? "f2(A) = |AA - AA|" : "g2(A) = |AA + AA|") << " on " << checked
       << " random sets, mismatches = " << mismatches;
    report(criterion, mismatches == 0, os.str());
}

void criterion3() {
    std::uint64_t mismatches = 0, sets = 0;
    for (std::uint64_t p : {7ULL, 11ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint64_t size = 1; size <= 3; ++size) {
            for_each_subset(f, size, [&](const FpSet& a) {
                ++sets;
                const auto elems = a.elements();
                FpSet fdet(f), fper(f);
                const std::size_t n = elems.size();
                std::uint64_t e[4];
                // all |A|^8 matrix pairs, decoded from an odometer
                std::vector<std::size_t> idx(8, 0);
                for (;;) {
                    for (int k = 0; k < 4; ++k)
                        e[k] = fsub(f, elems[idx[2 * k]], elems[idx[2 * k + 1]]);
                    fdet.insert(fsub(f, fmul(f, e[0], e[3]), fmul(f, e[1], e[2])));
                    fper.insert(fadd(f, fmul(f, e[0], e[3]), fmul(f, e[1], e[2])));
                    std::size_t k = 0;
                    while (k < 8 && ++idx[k] == n) idx[k++] = 0;
                    if (k == 8) break;
                }
                if (!(diff_det_spectrum_f2(a) == fdet)) ++mismatches;
                if (!(diff_per_spectrum_g2(a) == fper)) ++mismatches;
            });
        }
    }
    std::ostringstream os;
    os << "F2/G2 identity vs matrix-pair brute force on " << sets
       << " sets, mismatches = " << mismatches;
    report(3, mismatches == 0, os.str());
}

void criterion4() {
    std::uint64_t violations = 0, certs = 0;
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint64_t size = 1; size <= 3; ++size) {
            for_each_subset(f, size, [&](const FpSet& a) {
                const FpSet x2 = det_spectrum(a, 2).values;
                const FpSet x3 = det_spectrum(a, 3).values;
                const FpSet p3 = per_spectrum(a, 3).values;
                ++certs;
                if (!lastrow_lift(a, x2, 3).subset.subset_of(x3)) ++violations;
                ++certs;
                if (!per_rank_structured(a, 3).subset.subset_of(p3)) ++violations;
            });
        }
    }
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        const FieldCtx f = make_field(p);
        for_each_subset(f, 2, [&](const FpSet& a) {
            // exact X4 by 65,536-matrix permutation-sum brute force
            const auto elems = a.elements();
            FpSet x4(f);
            std::vector<std::size_t> idx(16, 0);
            std::vector<std::uint64_t> entries(16);
            for (;;) {
                for (int i = 0; i < 16; ++i) entries[i] = elems[idx[i]];
                x4.insert(perm_sum({4, entries, f}, true));
                std::size_t k = 0;
                while (k < 16 && ++idx[k] == elems.size()) idx[k++] = 0;
                if (k == 16) break;
            }
            const FpSet x2 = det_spectrum(a, 2).values;
            ++certs;
            if (!block_lift(a, x2, 4).subset.subset_of(x4)) ++violations;
        });
    }
    std::ostringstream os;
    os << certs << " containment certificates checked, violations = " << violations;
    report(4, violations == 0, os.str());
}

void criterion5() {
    Rng rng(5);
    std::uint64_t mismatches = 0, checked = 0;
    while (checked < 10000) {
        for (std::uint64_t p : {7ULL, 101ULL}) {
            const FieldCtx f = make_field(p);
            for (std::uint32_t d = 1; d <= 4; ++d) {
                std::vector<std::uint64_t> e(d * d);
                for (auto& x : e) x = rng.bounded(p);
                MatrixView m{d, e, f};
                checked += 2;
                if (det_value(m) != perm_sum(m, true)) ++mismatches;
                if (per_value(m) != perm_sum(m, false)) ++mismatches;
            }
        }
    }
    std::ostringstream os;
    os << checked << " det/per evaluations vs permutation sums, mismatches = " << mismatches;
    report(5, mismatches == 0, os.str());
}

void criterion6() {
    Rng rng(6);
    std::uint64_t violations = 0, spectra = 0;
    SpectrumOptions opts;
    opts.want_counts = true;

    // frozen row: D2({0,1} in F_5)
    const FieldCtx f5 = make_field(5);
    const auto frozen = det_spectrum(parse_set_literal(f5, "0,1"), 2, opts);
    ++spectra;
    if (!((*frozen.counts)[0] == 10 && (*frozen.counts)[1] == 3 && (*frozen.counts)[4] == 3))
        ++violations;

    for (std::uint64_t p : {5ULL, 7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 10; ++it) {
            const FpSet a = random_subset(f, 1 + rng.bounded(3), rng);
            for (std::uint32_t d : {2u, 3u}) {
                for (bool use_det : {true, false}) {
                    const auto r = use_det ? det_spectrum(a, d, opts) : per_spectrum(a, d, opts);
                    ++spectra;
                    const std::uint64_t total =
                        std::accumulate(r.counts->begin(), r.counts->end(), std::uint64_t{0});
                    if (!(r.exact && total == saturating_pow(a.card(), d * d))) ++violations;
                }
            }
        }
    }
    std::ostringstream os;
    os << spectra << " counted spectra, conservation violations = " << violations;
    report(6, violations == 0, os.str());
}

void criterion7() {
    Rng rng(7);
    std::uint64_t violations = 0;
    for (int it = 0; it < 50; ++it) {
        const std::uint64_t p = (it % 2 == 0) ? 31 : 101;
        const FieldCtx f = make_field(p);
        const FpSet a = random_subset(f, 1 + rng.bounded(4), rng);
        const std::uint64_t lambda = 1 + rng.bounded(p - 1);
        const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.bounded(2));
        const FpSet lhs = det_spectrum(set_dilate(a, lambda), d).values;
        const FpSet rhs = set_dilate(det_spectrum(a, d).values, fpow(f, lambda, d));
        if (!(lhs == rhs)) ++violations;
    }
    std::ostringstream os;
    os << "50 dilation triples, equivariance violations = " << violations;
    report(7, violations == 0, os.str());
}

void criterion8() {
    const FieldCtx f = make_field(10007);
    const std::uint64_t size = 22; // ceil(10007^{1/3})
    bool ok = true;
    double min_r2 = 1e300, min_r3 = 1e300;
    for (std::uint32_t trial = 0; trial < 5; ++trial) {
        SetFamilySpec spec;
        spec.kind = SetFamilySpec::Kind::random;
        spec.size = size;
        spec.seed = derive_seed(0, 8, trial);
        const FpSet a = gen_set(f, spec);
        const double f2 = static_cast<double>(det_spectrum(a, 2).values.card());
        const double c3 =
            static_cast<double>(chain_certificate(a, 3, SpectrumTarget::det).subset.card());
        const double r2 = f2 / std::pow(static_cast<double>(size), 1.5);
        const double r3 = c3 / std::pow(static_cast<double>(size), 1.75);
        min_r2 = std::min(min_r2, r2);
        min_r3 = std::min(min_r3, r3);
        if (r2 < 0.5 || r3 < 0.5) ok = false;
    }
    std::ostringstream os;
    os << "p=10007, |A|=22, 5 trials: min f2/|A|^1.5 = " << min_r2
       << ", min f3cert/|A|^1.75 = " << min_r3 << " (threshold 0.5)";
    report(8, ok, os.str());
}

void criterion9() {
    Rng rng(9);
    std::uint64_t mismatches = 0;
    for (int it = 0; it < 100; ++it) {
        const std::uint64_t p = (it % 2 == 0) ? 13 : 31;
        const FieldCtx f = make_field(p);
        const GridPoints g{random_subset(f, 1 + rng.bounded(5), rng),
                           random_subset(f, 1 + rng.bounded(5), rng)};
        const LineFamily l{random_subset(f, 1 + rng.bounded(4), rng),
                           random_subset(f, 1 + rng.bounded(4), rng)};
        std::uint64_t naive = 0;
        for (auto c : l.slopes.elements())
            for (auto b : l.offsets.elements())
                for (auto x : g.xs.elements())
                    for (auto y : g.ys.elements())
                        if (y == fmul(f, c, fsub(f, x, b))) ++naive;
        if (count_incidences(g, l) != naive) ++mismatches;
    }

    std::uint64_t lower_violations = 0;
    double max_ratio = 0.0;
    Rng brng(99);
    for (std::uint64_t p : {101ULL, 1009ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 10; ++it) {
            const std::uint64_t na = 2 + brng.bounded(4);
            const FpSet a = random_subset(f, na, brng);
            const FpSet b = random_subset(f, na + brng.bounded(4), brng);
            const FpSet c = random_subset(f, na + brng.bounded(4), brng);
            const auto rep = check_sum_product_bridge(a, b, c);
            if (!rep.incidence_ok) ++lower_violations;
            max_ratio = std::max(max_ratio, rep.incidence_report.ratio);
        }
    }
    std::ostringstream os;
    os << "naive mismatches = " << mismatches << ", lower-bound violations = " << lower_violations
       << ", max I/RHS = " << max_ratio << " (cap 4.0)";
    report(9, mismatches == 0 && lower_violations == 0 && max_ratio <= 4.0, os.str());
}

void criterion10() {
    auto battery_csv = [](unsigned workers) {
        std::ostringstream os;
        for (std::uint64_t p : {101ULL, 1009ULL, 10007ULL}) {
            for (auto kind : {SetFamilySpec::Kind::random, SetFamilySpec::Kind::interval}) {
                ExperimentConfig cfg;
                cfg.preset = Preset::thm1i;
                cfg.p = p;
                cfg.family.kind = kind;
                cfg.family.start = 1;
                const auto croot = static_cast<std::uint64_t>(
                    std::ceil(std::cbrt(static_cast<double>(p))));
                const auto sroot = static_cast<std::uint64_t>(
                    std::ceil(std::sqrt(static_cast<double>(p))));
                cfg.sizes = {croot, sroot};
                cfg.trials = 5;
                cfg.seed = 0;
                cfg.workers = workers;
                write_csv(os, run_scan(cfg));
            }
        }
        return os.str();
    };
    const std::string one = battery_csv(1);
    const bool ok = one == battery_csv(2) && one == battery_csv(8);
    report(10, ok, "scan battery byte-identical across 1, 2, 8 workers");
}

} // namespace

int main() {
    run_identity_battery(1, true);
    run_identity_battery(2, false);
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
