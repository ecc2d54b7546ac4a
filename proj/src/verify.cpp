#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "detper/constructions.hpp"
#include "detper/harness.hpp"
#include "detper/incidence.hpp"
#include "detper/rng.hpp"
#include "detper/setexpr.hpp"
#include "detper/spectrum.hpp"

namespace detper {

namespace {

// ---- naive oracles (double loops and permutation sums, no shared kernels) ----

FpSet naive_sum(const FpSet& a, const FpSet& b) {
    FpSet r(a.ctx());
    for (auto s : a.elements())
        for (auto t : b.elements()) r.insert(fadd(a.ctx(), s, t));
    return r;
}

FpSet naive_diff(const FpSet& a, const FpSet& b) {
    FpSet r(a.ctx());
    for (auto s : a.elements())
        for (auto t : b.elements()) r.insert(fsub(a.ctx(), s, t));
    return r;
}

FpSet naive_prod(const FpSet& a, const FpSet& b) {
    FpSet r(a.ctx());
    for (auto s : a.elements())
        for (auto t : b.elements()) r.insert(fmul(a.ctx(), s, t));
    return r;
}

FpSet naive_eval(const SetExpr& e, const std::map<std::string, FpSet>& env, const FieldCtx& ctx) {
    switch (e.kind) {
        case SetExpr::Kind::Var:
            return env.at(e.name);
        case SetExpr::Kind::Add:
            return naive_sum(naive_eval(*e.lhs, env, ctx), naive_eval(*e.rhs, env, ctx));
        case SetExpr::Kind::Sub:
            return naive_diff(naive_eval(*e.lhs, env, ctx), naive_eval(*e.rhs, env, ctx));
        case SetExpr::Kind::Mul:
            return naive_prod(naive_eval(*e.lhs, env, ctx), naive_eval(*e.rhs, env, ctx));
        case SetExpr::Kind::Neg: {
            FpSet r(ctx);
            for (auto s : naive_eval(*e.lhs, env, ctx).elements()) r.insert(fneg(ctx, s));
            return r;
        }
        case SetExpr::Kind::IterSum: {
            FpSet r = naive_eval(*e.lhs, env, ctx);
            for (std::uint32_t i = 1; i < e.repeat; ++i) r = naive_sum(r, naive_eval(*e.lhs, env, ctx));
            return r;
        }
        case SetExpr::Kind::IterProd: {
            FpSet r = naive_eval(*e.lhs, env, ctx);
            for (std::uint32_t i = 1; i < e.repeat; ++i) r = naive_prod(r, naive_eval(*e.lhs, env, ctx));
            return r;
        }
    }
    throw Error("corrupt expression node");
}

std::uint64_t perm_sum(const FieldCtx& f, const std::uint64_t* m, std::uint32_t d, bool signed_sum) {
    std::vector<std::uint32_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0u);
    std::uint64_t total = 0;
    do {
        std::uint64_t prod = 1;
        for (std::uint32_t i = 0; i < d; ++i) prod = fmul(f, prod, m[i * d + perm[i]]);
        if (signed_sum) {
            std::uint32_t inversions = 0;
            for (std::uint32_t i = 0; i < d; ++i)
                for (std::uint32_t j = i + 1; j < d; ++j)
                    if (perm[i] > perm[j]) ++inversions;
            if (inversions & 1)
                total = fsub(f, total, prod);
            else
                total = fadd(f, total, prod);
        } else {
            total = fadd(f, total, prod);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Full enumeration of M_d(A) with direct permutation sums.
void naive_spectrum(const FpSet& A, std::uint32_t d, bool permanent, bool transpose, FpSet& values,
                    std::vector<std::uint64_t>& counts) {
    const FieldCtx f = A.ctx();
    const auto elems = A.elements();
    const std::uint64_t m = elems.size();
    const std::uint32_t L = d * d;
    values = FpSet(f);
    counts.assign(f.p, 0);
    std::vector<std::uint32_t> digits(L, 0);
    std::vector<std::uint64_t> mat(L, elems[0]);
    const std::uint64_t total = saturating_pow(m, L);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t v;
        if (transpose) {
            std::vector<std::uint64_t> t(L);
            for (std::uint32_t i = 0; i < d; ++i)
                for (std::uint32_t j = 0; j < d; ++j) t[j * d + i] = mat[i * d + j];
            v = perm_sum(f, t.data(), d, !permanent);
        } else {
            v = perm_sum(f, mat.data(), d, !permanent);
        }
        values.insert(v);
        ++counts[v];
        for (std::uint32_t i = L; i-- > 0;) {
            if (++digits[i] < m) {
                mat[i] = elems[digits[i]];
                break;
            }
            digits[i] = 0;
            mat[i] = elems[0];
        }
    }
}

FpSet random_subset(const FieldCtx& f, std::uint64_t size, Rng& rng) {
    FpSet s(f);
    while (s.card() < size) s.insert(rng.bounded(f.p));
    return s;
}

struct Battery {
    VerifyReport report;
    VerifyLevel level;
    unsigned workers;
    bool inject_fault;

    void check(const std::string& name, bool pass, const std::string& detail = {}) {
        report.checks.push_back({name, pass, pass ? std::string{} : detail});
    }
};

void check_field(Battery& b) {
    bool ok = true;
    std::ostringstream why;
    for (std::uint64_t p : {7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint64_t a = 0; a < p && ok; ++a) {
            if (fadd(f, a, fneg(f, a)) != 0) {
                ok = false;
                why << "a + (-a) != 0 at a=" << a << " p=" << p;
            }
            if (a != 0 && fmul(f, a, finv(f, a)) != 1) {
                ok = false;
                why << "a * a^-1 != 1 at a=" << a << " p=" << p;
            }
            if (a != 0 && fpow(f, a, p - 1) != 1) {
                ok = false;
                why << "a^(p-1) != 1 at a=" << a << " p=" << p;
            }
            for (std::uint64_t c = 0; c < p; ++c) {
                if (fmul(f, a, c) != (a * c) % p || fadd(f, a, c) != (a + c) % p) {
                    ok = false;
                    why << "arith mismatch at a=" << a << " b=" << c << " p=" << p;
                    break;
                }
            }
        }
    }
    for (std::uint64_t bad : {0ULL, 1ULL, 2ULL, 9ULL, 91ULL}) {
        try {
            make_field(bad);
            ok = false;
            why << "make_field accepted " << bad;
        } catch (const NotPrimeError&) {
        }
    }
    b.check("field.axioms", ok, why.str());
}

void check_fset(Battery& b) {
    const FieldCtx f = make_field(31);
    Rng rng(11);
    bool ok = true;
    std::ostringstream why;
    for (int it = 0; it < 50 && ok; ++it) {
        const FpSet s = random_subset(f, 1 + rng.bounded(8), rng);
        const FpSet t = random_subset(f, 1 + rng.bounded(8), rng);
        const std::uint64_t lambda = 1 + rng.bounded(f.p - 1);
        if (set_dilate(s, lambda).card() != s.card()) {
            ok = false;
            why << "|lambda*S| != |S| for S={" << set_to_string(s) << "} lambda=" << lambda;
        }
        if (set_union(s, t).card() + set_intersect(s, t).card() != s.card() + t.card()) {
            ok = false;
            why << "inclusion-exclusion failed for S={" << set_to_string(s) << "} T={"
                << set_to_string(t) << "}";
        }
    }
    SetFamilySpec spec;
    spec.kind = SetFamilySpec::Kind::random;
    spec.size = 7;
    spec.seed = 99;
    if (!(gen_set(f, spec) == gen_set(f, spec))) {
        ok = false;
        why << "random generator not reproducible";
    }
    if (gen_set(f, spec).card() != 7) {
        ok = false;
        why << "random generator wrong cardinality";
    }
    b.check("fset.cardinality_laws", ok, why.str());
}

const char* kExprBattery[] = {
    "A*A - A*A", "A*A + A*A", "(A-A)*(A-A)", "B*(C - D)", "X + B*B",  "X - B*B",
    "3#A",       "A^3",       "2#(A*B)",     "-(A - B)",  "A^2*(2#A + A)",
};

void check_setexpr(Battery& b) {
    bool ok = true;
    std::ostringstream why;
    Rng rng(17);
    for (std::uint64_t p : {7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 10 && ok; ++it) {
            std::map<std::string, FpSet> env;
            for (const char* name : {"A", "B", "C", "D", "X"})
                env.emplace(name, random_subset(f, 1 + rng.bounded(std::min<std::uint64_t>(8, p - 1)), rng));
            for (const char* src : kExprBattery) {
                const auto ast = parse_expr(src);
                if (!(eval_expr(*ast, env, f) == naive_eval(*ast, env, f))) {
                    ok = false;
                    why << "kernel/naive mismatch for '" << src << "' with A={"
                        << set_to_string(env.at("A")) << "} p=" << p;
                    break;
                }
            }
        }
    }
    b.check("setexpr.oracle_equivalence", ok, why.str());

    ok = true;
    for (const char* src : kExprBattery) {
        const auto ast = parse_expr(src);
        if (!expr_equal(*ast, *parse_expr(to_source(*ast)))) {
            ok = false;
            why.str("round trip changed '" + std::string(src) + "'");
            break;
        }
    }
    b.check("setexpr.roundtrip", ok, why.str());
}

void check_matrix_defs(Battery& b) {
    bool ok = true;
    std::ostringstream why;
    Rng rng(23);
    for (std::uint64_t p : {7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint32_t d = 2; d <= 4 && ok; ++d) {
            for (int it = 0; it < 200; ++it) {
                std::vector<std::uint64_t> m(d * d);
                for (auto& x : m) x = rng.bounded(p);
                const MatrixView mv{d, m, f};
                if (det_value(mv) != perm_sum(f, m.data(), d, true) ||
                    per_value(mv) != perm_sum(f, m.data(), d, false)) {
                    ok = false;
                    why << "det/per definition mismatch at p=" << p << " d=" << d;
                    break;
                }
            }
        }
    }
    b.check("spectra.definition_oracle", ok, why.str());
}

void check_spectra(Battery& b) {
    std::ostringstream why;
    Rng rng(31);
    const FieldCtx f31 = make_field(31);

    // 2x2 identities against the expression evaluator
    bool ok = true;
    for (int it = 0; it < 30 && ok; ++it) {
        const FpSet A = random_subset(f31, 1 + rng.bounded(6), rng);
        std::map<std::string, FpSet> env{{"A", A}};
        SpectrumOptions o;
        o.workers = b.workers;
        if (!(det_spectrum(A, 2, o).values == eval_expr(*parse_expr("A*A - A*A"), env, f31))) {
            ok = false;
            why << "f2 identity failed for A={" << set_to_string(A) << "}";
        }
        if (!(per_spectrum(A, 2, o).values == eval_expr(*parse_expr("A*A + A*A"), env, f31))) {
            ok = false;
            why << "g2 identity failed for A={" << set_to_string(A) << "}";
        }
    }
    b.check("spectra.identity_2x2", ok, why.str());

    // prefix enumeration vs naive full enumeration, values and counts
    ok = true;
    for (std::uint64_t p : {7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint32_t d = 2; d <= 3 && ok; ++d) {
            for (int it = 0; it < 6 && ok; ++it) {
                const FpSet A = random_subset(f, 1 + rng.bounded(3), rng);
                for (bool permanent : {false, true}) {
                    SpectrumOptions o;
                    o.want_counts = true;
                    o.workers = b.workers;
                    const auto res = permanent ? per_spectrum(A, d, o) : det_spectrum(A, d, o);
                    FpSet nv(f);
                    std::vector<std::uint64_t> nc;
                    naive_spectrum(A, d, permanent, false, nv, nc);
                    if (!(res.values == nv) || *res.counts != nc || !res.exact) {
                        ok = false;
                        why << (permanent ? "per" : "det") << " spectrum mismatch for A={"
                            << set_to_string(A) << "} p=" << p << " d=" << d;
                        break;
                    }
                    const std::uint64_t total =
                        std::accumulate(nc.begin(), nc.end(), std::uint64_t{0});
                    if (total != saturating_pow(A.card(), d * d) ||
                        total != res.matrices_enumerated) {
                        ok = false;
                        why << "conservation failed for A={" << set_to_string(A) << "} p=" << p
                            << " d=" << d;
                        break;
                    }
                    // transpose invariance of the count table
                    FpSet tv(f);
                    std::vector<std::uint64_t> tc;
                    naive_spectrum(A, d, permanent, true, tv, tc);
                    if (tc != nc) {
                        ok = false;
                        why << "transpose counts differ for A={" << set_to_string(A) << "}";
                        break;
                    }
                }
            }
        }
    }
    b.check("spectra.full_enumeration_consistency", ok, why.str());

    // dilation equivariance
    ok = true;
    for (int it = 0; it < 20 && ok; ++it) {
        const FpSet A = random_subset(f31, 1 + rng.bounded(3), rng);
        const std::uint32_t d = 2 + static_cast<std::uint32_t>(rng.bounded(2));
        const std::uint64_t lambda = 1 + rng.bounded(f31.p - 1);
        SpectrumOptions o;
        o.workers = b.workers;
        const FpSet lhs = det_spectrum(set_dilate(A, lambda), d, o).values;
        const FpSet rhs = set_dilate(det_spectrum(A, d, o).values, fpow(f31, lambda, d));
        const FpSet plhs = per_spectrum(set_dilate(A, lambda), d, o).values;
        const FpSet prhs = set_dilate(per_spectrum(A, d, o).values, fpow(f31, lambda, d));
        if (!(lhs == rhs) || !(plhs == prhs)) {
            ok = false;
            why << "dilation equivariance failed for A={" << set_to_string(A) << "} lambda="
                << lambda << " d=" << d;
        }
    }
    b.check("spectra.dilation_equivariance", ok, why.str());

    // difference spectra vs brute force over matrix pairs
    ok = true;
    for (std::uint64_t p : {7ULL, 11ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 4 && ok; ++it) {
            const FpSet A = random_subset(f, 1 + rng.bounded(2), rng);
            const auto elems = A.elements();
            const std::uint64_t m = elems.size();
            FpSet bf_det(f), bf_per(f);
            const std::uint64_t total = saturating_pow(m, 8);
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                std::uint64_t v = idx;
                std::uint64_t e[8];
                for (int i = 0; i < 8; ++i) {
                    e[i] = elems[v % m];
                    v /= m;
                }
                const std::uint64_t a = fsub(f, e[0], e[4]), bb = fsub(f, e[1], e[5]);
                const std::uint64_t c = fsub(f, e[2], e[6]), dd = fsub(f, e[3], e[7]);
                bf_det.insert(fsub(f, fmul(f, a, dd), fmul(f, bb, c)));
                bf_per.insert(fadd(f, fmul(f, a, dd), fmul(f, bb, c)));
            }
            if (!(diff_det_spectrum_f2(A) == bf_det) || !(diff_per_spectrum_g2(A) == bf_per)) {
                ok = false;
                why << "difference spectrum mismatch for A={" << set_to_string(A) << "} p=" << p;
            }
        }
    }
    b.check("spectra.difference_bruteforce", ok, why.str());

    // worker determinism
    ok = true;
    {
        const FpSet A = random_subset(f31, 3, rng);
        SpectrumOptions o1, o4;
        o1.want_counts = o4.want_counts = true;
        o1.workers = 1;
        o4.workers = 4;
        const auto r1 = det_spectrum(A, 3, o1);
        const auto r4 = det_spectrum(A, 3, o4);
        if (!(r1.values == r4.values) || *r1.counts != *r4.counts) {
            ok = false;
            why << "worker count changed the result for A={" << set_to_string(A) << "}";
        }
    }
    b.check("spectra.worker_determinism", ok, why.str());
}

void check_constructions(Battery& b) {
    std::ostringstream why;
    Rng rng(41);
    bool ok = true;
    for (std::uint64_t p : {7ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 8 && ok; ++it) {
            const FpSet A = random_subset(f, 1 + rng.bounded(3), rng);
            SpectrumOptions o;
            o.workers = b.workers;
            FpSet x2 = det_spectrum(A, 2, o).values;
            FpSet x3 = det_spectrum(A, 3, o).values;
            if (b.inject_fault && !x3.empty()) {
                // negative control: drop one attained value from the exact spectrum
                const auto el = x3.elements();
                FpSet corrupted(f);
                for (std::size_t i = 1; i < el.size(); ++i) corrupted.insert(el[i]);
                x3 = corrupted;
            }
            const auto cert = lastrow_lift(A, x2, 3);
            if (!cert.subset.subset_of(x3)) {
                ok = false;
                why << "last-row certificate not contained for A={" << set_to_string(A)
                    << "} p=" << p << ": certificate {" << set_to_string(cert.subset)
                    << "} vs spectrum {" << set_to_string(x3) << "}";
            }
            const FpSet p3 = per_spectrum(A, 3, o).values;
            const auto pcert = per_rank_structured(A, 3);
            if (!pcert.subset.subset_of(p3)) {
                ok = false;
                why << "rank-structured certificate not contained for A={" << set_to_string(A)
                    << "} p=" << p;
            }
        }
    }
    b.check("constructions.containment_d3", ok, why.str());

    // degenerate factorial: p <= d-1 forces {0}
    ok = true;
    {
        const FieldCtx f3 = make_field(3);
        const FpSet A = parse_set_literal(f3, "1,2");
        const auto cert = per_rank_structured(A, 4);
        FpSet zero(f3);
        zero.insert(0);
        if (!cert.degenerate || !(cert.subset == zero)) {
            ok = false;
            why.str("3! mod 3 should degenerate the certificate to {0}");
        }
    }
    b.check("constructions.degenerate_factorial", ok, why.str());

    // monotonicity in A
    ok = true;
    {
        const FieldCtx f = make_field(31);
        for (int it = 0; it < 10 && ok; ++it) {
            FpSet A = random_subset(f, 2, rng);
            FpSet A2 = A;
            A2.insert(rng.bounded(f.p));
            for (std::uint32_t d : {2u, 3u, 4u}) {
                const auto c1 = chain_certificate(A, d, SpectrumTarget::det);
                const auto c2 = chain_certificate(A2, d, SpectrumTarget::det);
                if (!c1.subset.subset_of(c2.subset)) {
                    ok = false;
                    why << "chain certificate not monotone for A={" << set_to_string(A) << "} d="
                        << d;
                    break;
                }
            }
        }
    }
    b.check("constructions.monotonicity", ok, why.str());
}

void check_incidence(Battery& b) {
    std::ostringstream why;
    Rng rng(53);
    bool ok = true;
    for (int it = 0; it < 40 && ok; ++it) {
        const FieldCtx f = make_field(it % 2 ? 31 : 13);
        const GridPoints g{random_subset(f, 1 + rng.bounded(5), rng),
                           random_subset(f, 1 + rng.bounded(5), rng)};
        const LineFamily l{random_subset(f, 1 + rng.bounded(4), rng),
                           random_subset(f, 1 + rng.bounded(4), rng)};
        std::uint64_t naive = 0;
        for (auto c : l.slopes.elements())
            for (auto off : l.offsets.elements())
                for (auto x : g.xs.elements())
                    for (auto y : g.ys.elements())
                        if (y == fmul(f, c, fsub(f, x, off))) ++naive;
        if (count_incidences(g, l, b.workers) != naive) {
            ok = false;
            why << "incidence count mismatch: xs={" << set_to_string(g.xs) << "} ys={"
                << set_to_string(g.ys) << "} slopes={" << set_to_string(l.slopes) << "} offsets={"
                << set_to_string(l.offsets) << "}";
        }
    }
    b.check("incidence.naive_equivalence", ok, why.str());

    ok = true;
    for (int it = 0; it < 15 && ok; ++it) {
        const FieldCtx f = make_field(101);
        const FpSet A = random_subset(f, 2 + rng.bounded(6), rng);
        const auto rep = check_sum_product_bridge(A, A, A, b.workers);
        if (!rep.incidence_ok) {
            ok = false;
            why << "grid incidence lower bound failed for A={" << set_to_string(A) << "}";
        }
    }
    b.check("incidence.grid_lower_bound", ok, why.str());

    // duality: per-line counts are preserved under (x,y) -> (y,x)
    ok = true;
    {
        const FieldCtx f = make_field(31);
        for (int it = 0; it < 20 && ok; ++it) {
            const GridPoints g{random_subset(f, 1 + rng.bounded(5), rng),
                               random_subset(f, 1 + rng.bounded(5), rng)};
            const std::uint64_t c = 1 + rng.bounded(f.p - 1);
            const std::uint64_t off = rng.bounded(f.p);
            FpSet sc(f), so(f), tc(f), to(f);
            sc.insert(c);
            so.insert(off);
            tc.insert(finv(f, c));
            to.insert(fneg(f, fmul(f, c, off)));
            const std::uint64_t fwd = count_incidences(g, {sc, so});
            const std::uint64_t rev = count_incidences({g.ys, g.xs}, {tc, to});
            if (fwd != rev) {
                ok = false;
                why << "duality transform changed the count for slope " << c << " offset " << off;
            }
        }
    }
    b.check("incidence.duality", ok, why.str());
}

void check_full(Battery& b) {
    std::ostringstream why;
    bool ok = true;
    // block containment at d = 4 for every pair set, p <= 13
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint64_t a = 0; a < p && ok; ++a) {
            for (std::uint64_t c = a + 1; c < p; ++c) {
                FpSet A(f);
                A.insert(a);
                A.insert(c);
                SpectrumOptions o;
                o.workers = b.workers;
                const FpSet x4 = det_spectrum(A, 4, o).values;
                const FpSet x2 = det_spectrum(A, 2, o).values;
                if (!block_lift(A, x2, 4).subset.subset_of(x4) ||
                    !chain_certificate(A, 4, SpectrumTarget::det).subset.subset_of(x4)) {
                    ok = false;
                    why << "block certificate not contained for A={" << set_to_string(A)
                        << "} p=" << p;
                    break;
                }
            }
        }
    }
    b.check("constructions.block_containment_d4", ok, why.str());

    // million-matrix enumeration: conservation and worker determinism
    ok = true;
    {
        const FieldCtx f = make_field(101);
        Rng rng(61);
        const FpSet A = random_subset(f, 5, rng); // 5^9 ~ 1.9e6 matrices
        SpectrumOptions o1, o4;
        o1.want_counts = o4.want_counts = true;
        o1.workers = 1;
        o4.workers = 4;
        const auto r1 = det_spectrum(A, 3, o1);
        const auto r4 = det_spectrum(A, 3, o4);
        const std::uint64_t total =
            std::accumulate(r1.counts->begin(), r1.counts->end(), std::uint64_t{0});
        if (total != saturating_pow(5, 9) || !(r1.values == r4.values) || *r1.counts != *r4.counts) {
            ok = false;
            why << "large enumeration inconsistency for A={" << set_to_string(A) << "}";
        }
    }
    b.check("spectra.large_enumeration", ok, why.str());
}

} // namespace

VerifyReport run_verify(VerifyLevel level, unsigned workers, bool inject_fault) {
    Battery b{{}, level, std::max(1u, workers), inject_fault};
    check_field(b);
    check_fset(b);
    check_setexpr(b);
    check_matrix_defs(b);
    check_spectra(b);
    check_constructions(b);
    check_incidence(b);
    if (level == VerifyLevel::full) check_full(b);
    return b.report;
}

} // namespace detper
