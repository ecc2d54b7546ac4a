#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "detper/fset.hpp"

namespace detper {

struct MatrixView {
    std::uint32_t d = 0;
    std::span<const std::uint64_t> entries; // row-major, d*d residues
    FieldCtx ctx;
};

/// Determinant mod p by fraction-free Gaussian elimination with partial pivoting.
std::uint64_t det_value(const MatrixView& m);

/// Permanent mod p by Ryser's inclusion-exclusion formula, O(2^d * d).
std::uint64_t per_value(const MatrixView& m);

struct SpectrumResult {
    FpSet values;
    std::optional<std::vector<std::uint64_t>> counts; // indexed by residue
    bool exact = false;
    bool counts_saturated = false;
    std::uint64_t matrices_enumerated = 0;
    double elapsed = 0.0;
};

struct SpectrumOptions {
    bool want_counts = false;
    std::uint64_t budget = 1'000'000'000ULL; // max matrices before sampling kicks in
    std::uint64_t seed = 0;                  // sampling-mode root seed
    unsigned workers = 1;
};

/// Values (and optionally per-value counts) attained by Det over M_d(A).
///
/// Enumerates the |A|^{d(d-1)} row prefixes; per prefix, the last row's
/// contribution is the iterated sumset of cofactor dilates of A, computed with
/// bit-vector rotations. If |A|^{d^2} exceeds the budget, a seeded uniform
/// sample of prefixes is taken instead and exact=false (certified lower bound).
/// Results are bit-identical for any worker count.
SpectrumResult det_spectrum(const FpSet& A, std::uint32_t d, const SpectrumOptions& opts = {});

/// Same enumeration with permanent semantics (signless minor permanents as
/// last-row cofactors).
SpectrumResult per_spectrum(const FpSet& A, std::uint32_t d, const SpectrumOptions& opts = {});

/// {Det(X-Y) : X,Y in M_2(A)}. Entries of X-Y range independently over A-A,
/// so this is the exact 2x2 determinant spectrum of A-A, evaluated through the
/// multilinear set identity (always exact).
FpSet diff_det_spectrum_f2(const FpSet& A);
/// {Per(X-Y) : X,Y in M_2(A)}.
FpSet diff_per_spectrum_g2(const FpSet& A);

/// |A|^e saturating at 2^63; used for budget checks.
std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t e);

} // namespace detper
