#pragma once

#include <cstdint>

#include "detper/fset.hpp"

namespace detper {

/// Cartesian grid xs x ys in F_p^2.
struct GridPoints {
    FpSet xs, ys;
};

/// Affine line family y = c*(x - b) for (c, b) in slopes x offsets.
/// Vertical lines and slope 0 are outside the representable family.
struct LineFamily {
    FpSet slopes, offsets;
};

/// Exact incidence count: sum over lines of |{x in xs : c(x-b) in ys}|.
/// Lines stay parametric; membership goes through the ys bit-vector.
std::uint64_t count_incidences(const GridPoints& g, const LineFamily& l, unsigned workers = 1);

struct IncidenceReport {
    std::uint64_t incidences = 0;
    std::uint64_t n_lines = 0;
    double rhs = 0.0;   // |P1|^{3/4} |P2|^{1/2} |L|^{3/4} + |L|
    double ratio = 0.0; // incidences / rhs
    bool size_hypothesis = false;       // |P1||P2|^2 <= |L|^3
    double field_hypothesis_ratio = 0;  // |P1||L| / p^2
    bool field_hypothesis = false;      // |P1||L| <= p^2
    bool swapped = false;               // grid sides swapped so |P1| <= |P2|
};

/// Evaluates the incidence upper bound and its hypotheses. Reports only; the
/// hidden constant is never asserted here.
IncidenceReport check_incidence_bound(const GridPoints& g, const LineFamily& l, unsigned workers = 1);

struct BridgeReport {
    std::uint64_t card_sum = 0;  // |A+B|
    std::uint64_t card_prod = 0; // |AC|
    double product = 0.0;        // |A+B| * |AC|
    double bound = 0.0;          // |A|^{8/5} |B|^{2/5} |C|^{2/5}
    double ratio = 0.0;
    bool hypothesis_ok = false;  // |B|,|C| >= |A| and |A| <= sqrt(p)
    std::uint64_t incidences = 0;
    std::uint64_t incidence_lower = 0; // |A| |B| |C \ {0}|
    bool incidence_ok = false;
    IncidenceReport incidence_report;
};

/// Checks the sum-product growth inequality on (A, B, C) and re-derives the
/// incidence lower bound on the associated grid (A+B) x (AC) with lines from
/// (C \ {0}) x B. Hypothesis violations are reported, not fatal.
BridgeReport check_sum_product_bridge(const FpSet& A, const FpSet& B, const FpSet& C,
                                      unsigned workers = 1);

} // namespace detper
