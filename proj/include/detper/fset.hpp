#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "detper/errors.hpp"
#include "detper/field.hpp"

namespace detper {

/// Subset of F_p as a p-bit occupancy vector (64-bit words, length ceil(p/64)).
/// Immutable by convention once built; composite set operations return fresh sets.
class FpSet {
public:
    explicit FpSet(FieldCtx ctx);

    static FpSet from_elements(FieldCtx ctx, const std::vector<std::uint64_t>& elems);

    const FieldCtx& ctx() const { return ctx_; }
    std::uint64_t p() const { return ctx_.p; }

    std::uint64_t card() const;
    bool empty() const { return card() == 0; }

    bool contains(std::uint64_t x) const {
        return x < ctx_.p && (words_[x >> 6] >> (x & 63)) & 1;
    }

    /// Inserts x; throws on x >= p.
    void insert(std::uint64_t x);

    std::vector<std::uint64_t> elements() const;

    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int b = __builtin_ctzll(w);
                fn(static_cast<std::uint64_t>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    /// this |= src rotated by s in the p-bit cyclic group (bit i of src sets
    /// bit (i+s) mod p of this). Word-parallel: two shifted OR passes.
    void or_rotated(const FpSet& src, std::uint64_t s);

    /// this |= other (same ctx).
    void or_with(const FpSet& other);
    /// this &= other (same ctx).
    void and_with(const FpSet& other);

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& mutable_words() {
        dirty_ = true;
        return words_;
    }

    friend bool operator==(const FpSet& a, const FpSet& b) {
        return a.ctx_ == b.ctx_ && a.words_ == b.words_;
    }

    /// True if every element of this is in other.
    bool subset_of(const FpSet& other) const;

private:
    FieldCtx ctx_;
    std::vector<std::uint64_t> words_;
    mutable std::uint64_t card_ = 0;
    mutable bool dirty_ = false;
};

inline void require_same_ctx(const FpSet& a, const FpSet& b) {
    if (!(a.ctx() == b.ctx()))
        throw CtxMismatchError("sets belong to different field contexts");
}

FpSet set_union(const FpSet& a, const FpSet& b);
FpSet set_intersect(const FpSet& a, const FpSet& b);
/// {lambda * s : s in a}. lambda = 0 collapses a non-empty set to {0}.
FpSet set_dilate(const FpSet& a, std::uint64_t lambda);
FpSet negset(const FpSet& a);

/// Pairwise sumset {s+t}; rotation kernel driven by the smaller operand.
FpSet sumset(const FpSet& a, const FpSet& b);
/// Pairwise difference set {s-t}.
FpSet diffset(const FpSet& a, const FpSet& b);
/// Pairwise product set {s*t}; scatter kernel driven by the smaller operand.
FpSet productset(const FpSet& a, const FpSet& b);
/// k-fold iterated sumset / product set, k >= 1.
FpSet iter_sumset(std::uint32_t k, const FpSet& a);
FpSet iter_productset(std::uint32_t k, const FpSet& a);

/// Structured set generators for experiments.
struct SetFamilySpec {
    enum class Kind { random, interval, geometric, explicit_ };
    Kind kind = Kind::random;
    std::uint64_t size = 0;
    std::uint64_t start = 0;
    std::uint64_t ratio = 1;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> elements; // explicit kind only
};

/// random: uniform size-subset by seeded partial Fisher-Yates (bit-identical
/// across runs for a fixed seed). interval: {start, ..., start+size-1} mod p.
/// geometric: {start * ratio^i : 0 <= i < size}, collisions allowed (realized
/// cardinality may be below size). explicit: the listed residues.
FpSet gen_set(FieldCtx ctx, const SetFamilySpec& spec);

/// Comma-separated decimal residues, whitespace ignored, duplicates rejected.
FpSet parse_set_literal(FieldCtx ctx, std::string_view text);

std::string set_to_string(const FpSet& s);

} // namespace detper
