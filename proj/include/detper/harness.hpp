#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "detper/fset.hpp"

namespace detper {

/// Scan presets. Each preset names a growth inequality or identity to measure.
enum class Preset {
    thm1i,
    thm1ii,
    thm2i,
    thm2ii,
    thm3,
    thm4,
    thm5,
    conj1,
    conj2,
    lemma7,
    lemma8,
    lemma9,
    lemma11,
    dist2,
};

Preset preset_from_name(const std::string& name);
const char* preset_name(Preset p);

/// Exact rational exponent; hypothesis windows and bound exponents are kept
/// rational and compared in log space to avoid float drift.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Hypothesis window exponent theta (valid when |A| <= p^theta), if the preset
/// has one. d is used by the d-dependent presets.
bool window_exponent(Preset preset, std::uint32_t d, Frac& out);
/// Exponent e of the measured-quantity lower bound |A|^e, for presets whose
/// bound is a pure |A|-power.
bool bound_exponent(Preset preset, std::uint32_t d, Frac& out);

struct ExperimentConfig {
    Preset preset = Preset::thm1i;
    std::uint64_t p = 0;
    SetFamilySpec family;            // template; size/seed filled per cell
    std::vector<std::uint64_t> sizes;
    std::uint32_t d = 0;             // 0 = preset default
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000'000ULL;
    unsigned workers = 1;
};

struct ExperimentRecord {
    std::string preset;
    std::uint64_t p = 0;
    std::uint64_t card_A = 0;
    std::uint32_t d = 0;
    std::uint32_t trial = 0;
    std::uint64_t seed = 0;
    double measured = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool exact = false;
    bool hypothesis_ok = false;
    double elapsed_s = 0.0;
};

/// Runs the preset over every (size, trial) cell. Deterministic: cell seeds
/// are derived from the root seed, and record order is by (size, trial)
/// regardless of worker count.
std::vector<ExperimentRecord> run_scan(const ExperimentConfig& cfg);

/// CSV schema: preset,p,card_A,d,trial,seed,measured,bound,ratio,exact,hypothesis_ok,elapsed_s.
/// elapsed_s is written as 0 unless with_timing is set, so that default output
/// is byte-identical across runs and worker counts.
void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records, bool with_timing = false);
void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records, bool with_timing = false);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // RMS in log space
    std::size_t n = 0;
    bool lower_bound_only = false; // some inputs were certificates
};

/// Least-squares fit of log(measured) against log|A|. Needs measurements at
/// two or more distinct |A| values; throws InsufficientDataError otherwise.
ExponentFit estimate_exponent(const std::vector<ExperimentRecord>& records);

enum class VerifyLevel { quick, full };

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail; // counterexample serialization on failure
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Cross-module invariant batteries. quick: p <= 31, |A| <= 3. full: adds the
/// even-dimension block containment at d=4 and million-matrix enumerations.
/// inject_fault corrupts one containment input to prove the harness can fail.
VerifyReport run_verify(VerifyLevel level, unsigned workers = 1, bool inject_fault = false);

} // namespace detper
