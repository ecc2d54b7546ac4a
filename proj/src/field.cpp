#include "detper/field.hpp"

namespace detper {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FieldCtx make_field(std::uint64_t p) {
    if (p >= (1ULL << 31)) throw OverflowError("modulus must be < 2^31, got " + std::to_string(p));
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
        throw NotPrimeError("modulus must be an odd prime >= 3, got " + std::to_string(p));
    return FieldCtx{p};
}

std::uint64_t fpow(const FieldCtx& f, std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1 % f.p;
    a %= f.p;
    while (e > 0) {
        if (e & 1) r = fmul(f, r, a);
        a = fmul(f, a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t finv(const FieldCtx& f, std::uint64_t a) {
    if (a % f.p == 0) throw DivisionByZeroError("inverse of 0 mod " + std::to_string(f.p));
    return fpow(f, a, f.p - 2);
}

} // namespace detper
