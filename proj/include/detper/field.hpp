#pragma once

#include <cstdint>

#include "detper/errors.hpp"

namespace detper {

/// Prime-field context. Immutable after construction; p is an odd prime < 2^31,
/// so a 64-bit product of two residues never overflows.
struct FieldCtx {
    std::uint64_t p = 0;

    friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.p == b.p; }
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs
/// (witness set 2,3,5,7,11,13,17,19,23,29,31,37).
bool is_prime_u64(std::uint64_t n);

/// Throws NotPrimeError unless p is an odd prime >= 3, OverflowError if p >= 2^31.
FieldCtx make_field(std::uint64_t p);

inline std::uint64_t fadd(const FieldCtx& f, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= f.p ? s - f.p : s;
}

inline std::uint64_t fsub(const FieldCtx& f, std::uint64_t a, std::uint64_t b) {
    return a >= b ? a - b : a + f.p - b;
}

inline std::uint64_t fneg(const FieldCtx& f, std::uint64_t a) {
    return a == 0 ? 0 : f.p - a;
}

inline std::uint64_t fmul(const FieldCtx& f, std::uint64_t a, std::uint64_t b) {
    return (a * b) % f.p;
}

std::uint64_t fpow(const FieldCtx& f, std::uint64_t a, std::uint64_t e);

/// Multiplicative inverse; throws DivisionByZeroError for a == 0.
std::uint64_t finv(const FieldCtx& f, std::uint64_t a);

} // namespace detper
