#pragma once

#include <cstdint>
#include <string>

#include "detper/fset.hpp"

namespace detper {

enum class SpectrumTarget { det, per };

/// A set certified (by an explicit matrix construction) to lie inside a
/// determinant or permanent spectrum. `formula` is a set-expression source
/// string over the certificate's inputs; re-evaluating it and dilating by
/// `scale` reproduces `subset`.
struct Certificate {
    SpectrumTarget target = SpectrumTarget::det;
    std::uint32_t d = 0;
    FpSet subset;
    std::string formula;
    std::uint64_t scale = 1; // residue factor applied after evaluation
    std::uint64_t cost = 0;  // pairwise set-operation work performed
    bool degenerate = false; // factorial vanished mod p
};

/// (A-A) * S_prev is contained in the d-dimensional determinant spectrum
/// whenever S_prev is contained in the (d-1)-dimensional one (duplicated
/// first/last column construction).
Certificate lastrow_lift(const FpSet& A, const FpSet& s_prev, std::uint32_t d);

/// S_prev2 * ((A-A)(A-A) - (A-A)(A-A)) is contained in the d-dimensional
/// determinant spectrum for even d >= 4 whenever S_prev2 is contained in the
/// (d-2)-dimensional one (2x2 block row-subtraction construction).
Certificate block_lift(const FpSet& A, const FpSet& s_prev2, std::uint32_t d);

/// (d-1)! * A^{d-1} * ((d-1)#A + A): permanent values of matrices whose first
/// d-1 rows are constant. When p <= d-1 the factorial vanishes and the
/// certificate degenerates to {0}.
Certificate per_rank_structured(const FpSet& A, std::uint32_t d);

/// Composes the exact 2x2 base spectrum with block/last-row lifts (det) or the
/// rank-structured construction (per) to certify a lower bound for dimension d.
Certificate chain_certificate(const FpSet& A, std::uint32_t d, SpectrumTarget target);

} // namespace detper
