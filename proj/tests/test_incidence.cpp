#include <doctest.h>

#include <cmath>

#include "detper/incidence.hpp"
#include "detper/rng.hpp"

using namespace detper;

namespace {

FpSet lit(const FieldCtx& f, const char* text) { return parse_set_literal(f, text); }

FpSet random_subset(const FieldCtx& f, std::uint64_t size, Rng& rng) {
    FpSet s(f);
    while (s.card() < size) s.insert(rng.bounded(f.p));
    return s;
}

std::uint64_t naive_count(const GridPoints& g, const LineFamily& l) {
    const FieldCtx f = g.xs.ctx();
    std::uint64_t n = 0;
    for (auto c : l.slopes.elements())
        for (auto b : l.offsets.elements())
            for (auto x : g.xs.elements())
                for (auto y : g.ys.elements())
                    if (y == fmul(f, c, fsub(f, x, b))) ++n;
    return n;
}

} // namespace

TEST_CASE("frozen incidence counts") {
    const FieldCtx f7 = make_field(7);
    const GridPoints g{lit(f7, "0,1,2"), lit(f7, "0,1,2")};
    const LineFamily l{lit(f7, "1,2"), lit(f7, "0")};
    CHECK(count_incidences(g, l) == 5);

    const GridPoints origin{lit(f7, "0"), lit(f7, "0")};
    CHECK(count_incidences(origin, LineFamily{lit(f7, "1"), lit(f7, "0")}) == 1);

    const GridPoints miss{lit(f7, "1"), lit(f7, "2")};
    CHECK(count_incidences(miss, LineFamily{lit(f7, "1"), lit(f7, "0")}) == 0);
}

TEST_CASE("count matches the naive quadruple loop") {
    Rng rng(29);
    for (std::uint64_t p : {7ULL, 13ULL, 31ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 35; ++it) {
            const GridPoints g{random_subset(f, 1 + rng.bounded(5), rng),
                               random_subset(f, 1 + rng.bounded(5), rng)};
            const LineFamily l{random_subset(f, 1 + rng.bounded(4), rng),
                               random_subset(f, 1 + rng.bounded(4), rng)};
            const std::uint64_t want = naive_count(g, l);
            CHECK(count_incidences(g, l) == want);
            CHECK(count_incidences(g, l, 4) == want);
        }
    }
}

TEST_CASE("duality: swapping axes with transformed lines preserves the count") {
    Rng rng(41);
    const FieldCtx f = make_field(31);
    for (int it = 0; it < 30; ++it) {
        const GridPoints g{random_subset(f, 1 + rng.bounded(6), rng),
                           random_subset(f, 1 + rng.bounded(6), rng)};
        const std::uint64_t c = 1 + rng.bounded(f.p - 1);
        const std::uint64_t b = rng.bounded(f.p);
        const LineFamily l{lit(f, std::to_string(c).c_str()), lit(f, std::to_string(b).c_str())};
        // y = c(x-b)  <=>  x = c^{-1} y + b = c^{-1} (y - (-cb))
        FpSet inv_slope(f);
        inv_slope.insert(finv(f, c));
        FpSet neg_off(f);
        neg_off.insert(fneg(f, fmul(f, c, b)));
        const GridPoints swapped{g.ys, g.xs};
        const LineFamily dual{inv_slope, neg_off};
        CHECK(count_incidences(g, l) == count_incidences(swapped, dual));
    }
}

TEST_CASE("incidence bound report") {
    const FieldCtx f101 = make_field(101);
    const FpSet abc = lit(f101, "1,2,3");
    // Lemma-8-style configuration: grid (A+B) x (AC), lines (c, b)
    const GridPoints g{sumset(abc, abc), productset(abc, abc)};
    const LineFamily l{abc, abc};
    const auto r = check_incidence_bound(g, l);
    CHECK(r.incidences >= 27); // each line carries the points (a+b, ac)
    CHECK(r.n_lines == 9);
    CHECK(r.rhs > 0);
    CHECK(r.ratio == doctest::Approx(static_cast<double>(r.incidences) / r.rhs));

    // single line: rhs >= |L| = 1, ratio well-defined
    const GridPoints tiny{lit(f101, "0"), lit(f101, "0")};
    const auto single = check_incidence_bound(tiny, LineFamily{lit(f101, "1"), lit(f101, "0")});
    CHECK(single.rhs >= 1.0);
    CHECK(single.ratio >= 0.0);

    // hypothesis-violated input still yields a count
    const FieldCtx f7 = make_field(7);
    const GridPoints big{lit(f7, "0,1,2,3,4,5,6"), lit(f7, "0,1,2,3,4,5,6")};
    const auto v = check_incidence_bound(big, LineFamily{lit(f7, "1,2,3,4,5,6"), lit(f7, "0,1,2,3,4,5,6")});
    CHECK_FALSE(v.field_hypothesis);
    CHECK(v.incidences == 6ULL * 7ULL * 7ULL);
}

TEST_CASE("full grid with all lines has exactly p incidences per line") {
    const FieldCtx f7 = make_field(7);
    const GridPoints big{lit(f7, "0,1,2,3,4,5,6"), lit(f7, "0,1,2,3,4,5,6")};
    const LineFamily all{lit(f7, "1,2,3,4,5,6"), lit(f7, "0,1,2,3,4,5,6")};
    CHECK(count_incidences(big, all) == 6ULL * 7ULL * 7ULL);
}

TEST_CASE("sum-product bridge examples") {
    const FieldCtx f11 = make_field(11);
    const FpSet a = lit(f11, "1,2");
    const auto r = check_sum_product_bridge(a, a, a);
    CHECK(r.card_sum == 3);
    CHECK(r.card_prod == 3);
    CHECK(r.product == doctest::Approx(9.0));
    CHECK(r.bound == doctest::Approx(std::pow(2.0, 12.0 / 5.0)));
    CHECK(r.ratio > 1.0);
    CHECK(r.hypothesis_ok); // |A| = 2 <= sqrt(11), |B|,|C| >= |A|
    CHECK(r.incidence_ok);
    CHECK(r.incidence_lower == 2 * 2 * 2);

    const FpSet one = lit(f11, "1");
    const auto s = check_sum_product_bridge(one, one, one);
    CHECK(s.product == doctest::Approx(1.0));
    CHECK(s.bound == doctest::Approx(1.0));
    CHECK(s.ratio == doctest::Approx(1.0));

    // |A| > sqrt(p) violates the window; reported, not fatal
    const FieldCtx f7 = make_field(7);
    const FpSet wide = lit(f7, "1,2,3,4");
    const auto v = check_sum_product_bridge(wide, wide, wide);
    CHECK_FALSE(v.hypothesis_ok);
    CHECK(v.incidences > 0);

    // C = {0}: no representable lines, lower bound vacuous
    const auto z = check_sum_product_bridge(one, one, lit(f11, "0"));
    CHECK(z.incidence_ok);
    CHECK(z.incidences == 0);
}

TEST_CASE("bridge incidence lower bound holds on random triples") {
    Rng rng(53);
    for (std::uint64_t p : {11ULL, 31ULL, 101ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 20; ++it) {
            const std::uint64_t na = 1 + rng.bounded(3);
            const FpSet a = random_subset(f, na, rng);
            const FpSet b = random_subset(f, na + rng.bounded(3), rng);
            const FpSet c = random_subset(f, na + rng.bounded(3), rng);
            const auto r = check_sum_product_bridge(a, b, c);
            CHECK(r.incidence_ok);
        }
    }
}

TEST_CASE("configuration validation") {
    const FieldCtx f7 = make_field(7);
    const FieldCtx f5 = make_field(5);
    const GridPoints g{lit(f7, "0"), lit(f7, "0")};
    CHECK_THROWS_AS(count_incidences(g, LineFamily{lit(f5, "1"), lit(f5, "0")}),
                    CtxMismatchError);
    CHECK_THROWS_AS(count_incidences(GridPoints{FpSet(f7), lit(f7, "0")},
                                     LineFamily{lit(f7, "1"), lit(f7, "0")}),
                    EmptySetError);
    CHECK_THROWS_AS(check_sum_product_bridge(FpSet(f7), lit(f7, "1"), lit(f7, "1")),
                    EmptySetError);
}
