#include "detper/incidence.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace detper {

namespace {

void require_config(const GridPoints& g, const LineFamily& l) {
    require_same_ctx(g.xs, g.ys);
    require_same_ctx(g.xs, l.slopes);
    require_same_ctx(g.xs, l.offsets);
    if (g.xs.empty() || g.ys.empty()) throw EmptySetError("grid point sets must be non-empty");
}

} // namespace

std::uint64_t count_incidences(const GridPoints& g, const LineFamily& l, unsigned workers) {
    require_config(g, l);
    const FieldCtx f = g.xs.ctx();
    const auto slopes = l.slopes.elements();
    const auto offsets = l.offsets.elements();
    const auto xs = g.xs.elements();

    auto count_slopes = [&](std::size_t lo, std::size_t hi) {
        std::uint64_t n = 0;
        for (std::size_t si = lo; si < hi; ++si) {
            const std::uint64_t c = slopes[si];
            for (const auto b : offsets) {
                for (const auto x : xs) {
                    if (g.ys.contains(fmul(f, c, fsub(f, x, b)))) ++n;
                }
            }
        }
        return n;
    };

    const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(slopes.size())));
    if (w == 1) return count_slopes(0, slopes.size());
    std::vector<std::uint64_t> partial(w, 0);
    std::vector<std::thread> pool;
    for (unsigned wi = 0; wi < w; ++wi) {
        const std::size_t lo = slopes.size() * wi / w;
        const std::size_t hi = slopes.size() * (wi + 1) / w;
        pool.emplace_back([&, wi, lo, hi] { partial[wi] = count_slopes(lo, hi); });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (auto v : partial) total += v;
    return total;
}

IncidenceReport check_incidence_bound(const GridPoints& g, const LineFamily& l, unsigned workers) {
    require_config(g, l);
    IncidenceReport r;
    r.incidences = count_incidences(g, l, workers);
    r.n_lines = l.slopes.card() * l.offsets.card();
    const double p = static_cast<double>(g.xs.p());
    double n1 = static_cast<double>(g.xs.card());
    double n2 = static_cast<double>(g.ys.card());
    if (n1 > n2) {
        std::swap(n1, n2);
        r.swapped = true;
    }
    const double L = static_cast<double>(r.n_lines);
    r.rhs = std::pow(n1, 0.75) * std::pow(n2, 0.5) * std::pow(L, 0.75) + L;
    r.ratio = r.rhs > 0 ? static_cast<double>(r.incidences) / r.rhs : 0.0;
    r.size_hypothesis = n1 * n2 * n2 <= L * L * L;
    r.field_hypothesis_ratio = n1 * L / (p * p);
    r.field_hypothesis = r.field_hypothesis_ratio <= 1.0;
    return r;
}

BridgeReport check_sum_product_bridge(const FpSet& A, const FpSet& B, const FpSet& C,
                                      unsigned workers) {
    require_same_ctx(A, B);
    require_same_ctx(A, C);
    if (A.empty() || B.empty() || C.empty()) throw EmptySetError("bridge inputs must be non-empty");
    const FieldCtx f = A.ctx();
    BridgeReport r;
    const FpSet sum = sumset(A, B);
    const FpSet prod = productset(A, C);
    r.card_sum = sum.card();
    r.card_prod = prod.card();
    r.product = static_cast<double>(r.card_sum) * static_cast<double>(r.card_prod);
    const double a = static_cast<double>(A.card());
    const double b = static_cast<double>(B.card());
    const double c = static_cast<double>(C.card());
    r.bound = std::pow(a, 1.6) * std::pow(b, 0.4) * std::pow(c, 0.4);
    r.ratio = r.product / r.bound;
    r.hypothesis_ok = B.card() >= A.card() && C.card() >= A.card() &&
                      a <= std::sqrt(static_cast<double>(f.p));

    FpSet slopes = C;
    if (slopes.contains(0)) {
        FpSet pruned(f);
        slopes.for_each([&](std::uint64_t x) {
            if (x != 0) pruned.insert(x);
        });
        slopes = std::move(pruned);
    }
    if (!slopes.empty()) {
        const GridPoints grid{sum, prod};
        const LineFamily lines{slopes, B};
        r.incidence_report = check_incidence_bound(grid, lines, workers);
        r.incidences = r.incidence_report.incidences;
        r.incidence_lower = A.card() * B.card() * slopes.card();
        r.incidence_ok = r.incidences >= r.incidence_lower;
    } else {
        // C = {0}: no representable lines; the lower bound is vacuous
        r.incidence_ok = true;
    }
    return r;
}

} // namespace detper
