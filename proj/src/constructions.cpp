#include "detper/constructions.hpp"

namespace detper {

namespace {

void require_nonempty(const FpSet& s, const char* what) {
    if (s.empty()) throw EmptySetError(std::string(what) + " must be non-empty");
}

std::uint64_t pair_cost(const FpSet& a, const FpSet& b) { return a.card() * b.card(); }

std::uint64_t factorial_mod(const FieldCtx& f, std::uint32_t n) {
    std::uint64_t r = 1 % f.p;
    for (std::uint32_t i = 2; i <= n; ++i) r = fmul(f, r, i % f.p);
    return r;
}

const char* kBlockFactorExpr = "(A-A)*(A-A) - (A-A)*(A-A)";

} // namespace

Certificate lastrow_lift(const FpSet& A, const FpSet& s_prev, std::uint32_t d) {
    require_nonempty(A, "entry set");
    require_nonempty(s_prev, "previous spectrum subset");
    require_same_ctx(A, s_prev);
    if (d < 2) throw DimensionOutOfRangeError("last-row lift needs d >= 2");
    const FpSet diff = diffset(A, A);
    Certificate cert{SpectrumTarget::det, d, productset(diff, s_prev), "(A-A)*S", 1,
                     pair_cost(A, A) + pair_cost(diff, s_prev), false};
    return cert;
}

Certificate block_lift(const FpSet& A, const FpSet& s_prev2, std::uint32_t d) {
    require_nonempty(A, "entry set");
    require_nonempty(s_prev2, "previous spectrum subset");
    require_same_ctx(A, s_prev2);
    if (d < 4 || d % 2 != 0)
        throw OddDimensionError("block lift needs even d >= 4, got " + std::to_string(d));
    const FpSet diff = diffset(A, A);
    const FpSet dd = productset(diff, diff);
    const FpSet factor = diffset(dd, dd);
    Certificate cert{SpectrumTarget::det, d, productset(s_prev2, factor),
                     std::string("S*(") + kBlockFactorExpr + ")", 1,
                     pair_cost(A, A) + pair_cost(diff, diff) + pair_cost(dd, dd) +
                         pair_cost(s_prev2, factor),
                     false};
    return cert;
}

Certificate per_rank_structured(const FpSet& A, std::uint32_t d) {
    require_nonempty(A, "entry set");
    if (d < 2) throw DimensionOutOfRangeError("rank-structured construction needs d >= 2");
    const FieldCtx f = A.ctx();
    const std::uint64_t fact = factorial_mod(f, d - 1);
    const std::string formula = "A^" + std::to_string(d - 1) + "*(" + std::to_string(d - 1) + "#A + A)";
    const FpSet prods = iter_productset(d - 1, A);
    const FpSet sums = sumset(iter_sumset(d - 1, A), A);
    FpSet subset = set_dilate(productset(prods, sums), fact);
    const bool degenerate = fact == 0;
    Certificate cert{SpectrumTarget::per, d, std::move(subset), formula, fact,
                     (d - 1) * pair_cost(A, A) + pair_cost(prods, sums), degenerate};
    return cert;
}

Certificate chain_certificate(const FpSet& A, std::uint32_t d, SpectrumTarget target) {
    require_nonempty(A, "entry set");
    if (d < 2) throw DimensionOutOfRangeError("chain certificate needs d >= 2");
    if (target == SpectrumTarget::per) {
        if (d == 2) {
            const FpSet aa = productset(A, A);
            Certificate cert{SpectrumTarget::per, 2, sumset(aa, aa), "A*A + A*A", 1,
                             pair_cost(A, A) + pair_cost(aa, aa), false};
            return cert;
        }
        return per_rank_structured(A, d);
    }

    // exact 2x2 base: f_2(A) = |AA - AA|
    const FpSet aa = productset(A, A);
    Certificate cert{SpectrumTarget::det, 2, diffset(aa, aa), "A*A - A*A", 1,
                     pair_cost(A, A) + pair_cost(aa, aa), false};
    std::uint32_t even_top = (d % 2 == 0) ? d : d - 1;
    for (std::uint32_t dd = 4; dd <= even_top; dd += 2) {
        Certificate step = block_lift(A, cert.subset, dd);
        cert.subset = std::move(step.subset);
        cert.formula = "(" + cert.formula + ")*(" + kBlockFactorExpr + ")";
        cert.cost += step.cost;
        cert.d = dd;
    }
    if (d % 2 != 0) {
        Certificate step = lastrow_lift(A, cert.subset, d);
        cert.subset = std::move(step.subset);
        cert.formula = "(A-A)*(" + cert.formula + ")";
        cert.cost += step.cost;
        cert.d = d;
    }
    return cert;
}

} // namespace detper
