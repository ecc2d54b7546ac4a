#include <doctest.h>

#include "detper/field.hpp"

using namespace detper;

TEST_CASE("make_field accepts odd primes and rejects everything else") {
    CHECK(make_field(7).p == 7);
    CHECK(make_field(3).p == 3);
    CHECK(make_field(2147483647).p == 2147483647); // 2^31 - 1 is prime
    CHECK_THROWS_AS(make_field(9), NotPrimeError);
    CHECK_THROWS_AS(make_field(2), NotPrimeError);
    CHECK_THROWS_AS(make_field(1), NotPrimeError);
    CHECK_THROWS_AS(make_field(0), NotPrimeError);
    CHECK_THROWS_AS(make_field(1ULL << 31), OverflowError);
    CHECK_THROWS_AS(make_field((1ULL << 31) + 11), OverflowError);
}

TEST_CASE("basic arithmetic examples") {
    const FieldCtx f7 = make_field(7);
    CHECK(fmul(f7, 3, 5) == 1);
    CHECK(finv(f7, 3) == 5);
    CHECK_THROWS_AS(finv(f7, 0), DivisionByZeroError);
    const FieldCtx f5 = make_field(5);
    CHECK(fpow(f5, 2, 4) == 1);
    CHECK(fsub(f5, 1, 3) == 3);
    CHECK(fneg(f5, 0) == 0);
}

TEST_CASE("field axioms hold exhaustively for small primes") {
    for (std::uint64_t p : {3ULL, 7ULL, 101ULL}) {
        const FieldCtx f = make_field(p);
        for (std::uint64_t a = 0; a < p; ++a) {
            CHECK(fadd(f, a, fneg(f, a)) == 0);
            if (a != 0) {
                CHECK(fmul(f, a, finv(f, a)) == 1);
                CHECK(fpow(f, a, p - 1) == 1);
            }
        }
    }
}

TEST_CASE("miller-rabin agrees with trial division below 10^4") {
    auto trial = [](std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    for (std::uint64_t n = 0; n < 10000; ++n) CHECK(is_prime_u64(n) == trial(n));
}
