#include <doctest.h>

#include "detper/fset.hpp"
#include "detper/rng.hpp"

using namespace detper;

namespace {

FpSet lit(const FieldCtx& f, const char* text) { return parse_set_literal(f, text); }

FpSet random_subset(const FieldCtx& f, std::uint64_t size, Rng& rng) {
    FpSet s(f);
    while (s.card() < size) s.insert(rng.bounded(f.p));
    return s;
}

} // namespace

TEST_CASE("generators") {
    const FieldCtx f7 = make_field(7);
    SetFamilySpec spec;

    spec.kind = SetFamilySpec::Kind::interval;
    spec.start = 1;
    spec.size = 3;
    CHECK(gen_set(f7, spec) == lit(f7, "1,2,3"));

    spec.kind = SetFamilySpec::Kind::geometric;
    spec.start = 1;
    spec.ratio = 2;
    CHECK(gen_set(f7, spec) == lit(f7, "1,2,4"));

    const FieldCtx f5 = make_field(5);
    spec.kind = SetFamilySpec::Kind::explicit_;
    spec.elements = {0, 1};
    CHECK(gen_set(f5, spec).card() == 2);

    spec.kind = SetFamilySpec::Kind::random;
    spec.size = 99;
    CHECK_THROWS_AS(gen_set(f7, spec), SizeTooLargeError);
    spec.kind = SetFamilySpec::Kind::geometric;
    spec.size = 2;
    spec.ratio = 7;
    CHECK_THROWS_AS(gen_set(f7, spec), BadRatioError);
}

TEST_CASE("random generator is seed-deterministic with exact cardinality") {
    const FieldCtx f = make_field(101);
    SetFamilySpec spec;
    spec.kind = SetFamilySpec::Kind::random;
    spec.size = 17;
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL}) {
        spec.seed = seed;
        const FpSet a = gen_set(f, spec);
        CHECK(a == gen_set(f, spec));
        CHECK(a.card() == 17);
    }
    spec.seed = 1;
    const FpSet a = gen_set(f, spec);
    spec.seed = 2;
    CHECK_FALSE(a == gen_set(f, spec));
}

TEST_CASE("dilation") {
    const FieldCtx f7 = make_field(7);
    CHECK(set_dilate(lit(f7, "1,2,4"), 2) == lit(f7, "2,4,1"));
    CHECK(set_dilate(lit(f7, "1,2"), 0) == lit(f7, "0"));
    CHECK(set_union(lit(f7, "0,1"), lit(f7, "1,2")) == lit(f7, "0,1,2"));

    Rng rng(5);
    for (int it = 0; it < 50; ++it) {
        const FpSet s = random_subset(f7, 1 + rng.bounded(6), rng);
        const std::uint64_t lambda = 1 + rng.bounded(6);
        CHECK(set_dilate(s, lambda).card() == s.card());
    }
}

TEST_CASE("union and intersection satisfy inclusion-exclusion") {
    const FieldCtx f = make_field(31);
    Rng rng(8);
    for (int it = 0; it < 100; ++it) {
        const FpSet s = random_subset(f, rng.bounded(10), rng);
        const FpSet t = random_subset(f, rng.bounded(10), rng);
        CHECK(set_union(s, t).card() + set_intersect(s, t).card() == s.card() + t.card());
    }
}

TEST_CASE("rotation kernel matches naive sumset") {
    Rng rng(13);
    for (std::uint64_t p : {3ULL, 31ULL, 61ULL, 127ULL, 131ULL}) {
        const FieldCtx f = make_field(p);
        for (int it = 0; it < 30; ++it) {
            const FpSet s = random_subset(f, 1 + rng.bounded(std::min<std::uint64_t>(p - 1, 6)), rng);
            const FpSet t = random_subset(f, 1 + rng.bounded(std::min<std::uint64_t>(p - 1, 20)), rng);
            FpSet naive(f);
            for (auto a : s.elements())
                for (auto b : t.elements()) naive.insert(fadd(f, a, b));
            CHECK(sumset(s, t) == naive);
            FpSet naive_prod(f);
            for (auto a : s.elements())
                for (auto b : t.elements()) naive_prod.insert(fmul(f, a, b));
            CHECK(productset(s, t) == naive_prod);
        }
    }
}

TEST_CASE("ctx mismatch is rejected") {
    const FieldCtx f7 = make_field(7);
    const FieldCtx f5 = make_field(5);
    CHECK_THROWS_AS(set_union(FpSet(f7), FpSet(f5)), CtxMismatchError);
    CHECK_THROWS_AS(sumset(FpSet(f7), FpSet(f5)), CtxMismatchError);
}

TEST_CASE("set literal parsing") {
    const FieldCtx f7 = make_field(7);
    CHECK(parse_set_literal(f7, " 0, 1 ,4 ") == lit(f7, "0,1,4"));
    CHECK_THROWS(parse_set_literal(f7, "0,1,1"));
    CHECK_THROWS(parse_set_literal(f7, "0,9"));
    CHECK_THROWS(parse_set_literal(f7, "0,,1"));
    CHECK_THROWS(parse_set_literal(f7, "x"));
}
