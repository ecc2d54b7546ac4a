#include "detper/fset.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "detper/rng.hpp"

namespace detper {

namespace {

std::size_t word_count(std::uint64_t p) { return static_cast<std::size_t>((p + 63) / 64); }

// dst |= (src restricted to bits [0, limit)) << shift
void or_shifted_up(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                   std::uint64_t shift, std::uint64_t limit) {
    const std::size_t W = dst.size();
    const std::size_t ws = static_cast<std::size_t>(shift >> 6);
    const unsigned bs = static_cast<unsigned>(shift & 63);
    for (std::size_t i = 0; i < src.size(); ++i) {
        std::uint64_t v = src[i];
        const std::uint64_t base = static_cast<std::uint64_t>(i) * 64;
        if (base >= limit) break;
        if (base + 64 > limit) v &= (limit - base == 64) ? ~0ULL : ((1ULL << (limit - base)) - 1);
        if (!v) continue;
        if (i + ws < W) dst[i + ws] |= v << bs;
        if (bs && i + ws + 1 < W) dst[i + ws + 1] |= v >> (64 - bs);
    }
}

// dst |= (src >> shift) restricted to result bits [0, limit)
void or_shifted_down(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src,
                     std::uint64_t shift, std::uint64_t limit) {
    const std::size_t W = src.size();
    const std::size_t ws = static_cast<std::size_t>(shift >> 6);
    const unsigned bs = static_cast<unsigned>(shift & 63);
    for (std::size_t k = 0; k * 64 < limit; ++k) {
        std::uint64_t v = 0;
        if (k + ws < W) v = src[k + ws] >> bs;
        if (bs && k + ws + 1 < W) v |= src[k + ws + 1] << (64 - bs);
        const std::uint64_t base = static_cast<std::uint64_t>(k) * 64;
        if (base + 64 > limit) v &= (limit - base == 64) ? ~0ULL : ((1ULL << (limit - base)) - 1);
        dst[k] |= v;
    }
}

} // namespace

FpSet::FpSet(FieldCtx ctx) : ctx_(ctx), words_(word_count(ctx.p), 0) {}

FpSet FpSet::from_elements(FieldCtx ctx, const std::vector<std::uint64_t>& elems) {
    FpSet s(ctx);
    for (auto e : elems) s.insert(e);
    return s;
}

std::uint64_t FpSet::card() const {
    if (dirty_) {
        std::uint64_t c = 0;
        for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
        card_ = c;
        dirty_ = false;
    }
    return card_;
}

void FpSet::insert(std::uint64_t x) {
    if (x >= ctx_.p) throw Error("element " + std::to_string(x) + " out of range for p=" + std::to_string(ctx_.p));
    std::uint64_t& w = words_[x >> 6];
    const std::uint64_t bit = 1ULL << (x & 63);
    if (!(w & bit)) {
        w |= bit;
        if (!dirty_) ++card_;
    }
}

std::vector<std::uint64_t> FpSet::elements() const {
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(card()));
    for_each([&](std::uint64_t x) { out.push_back(x); });
    return out;
}

void FpSet::or_rotated(const FpSet& src, std::uint64_t s) {
    require_same_ctx(*this, src);
    const std::uint64_t p = ctx_.p;
    s %= p;
    dirty_ = true;
    if (s == 0) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= src.words_[i];
        return;
    }
    // bits [0, p-s) of src land on [s, p); bits [p-s, p) wrap to [0, s)
    or_shifted_up(words_, src.words_, s, p - s);
    or_shifted_down(words_, src.words_, p - s, s);
}

void FpSet::or_with(const FpSet& other) {
    require_same_ctx(*this, other);
    dirty_ = true;
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
}

void FpSet::and_with(const FpSet& other) {
    require_same_ctx(*this, other);
    dirty_ = true;
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
}

bool FpSet::subset_of(const FpSet& other) const {
    require_same_ctx(*this, other);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

FpSet set_union(const FpSet& a, const FpSet& b) {
    FpSet r = a;
    r.or_with(b);
    return r;
}

FpSet set_intersect(const FpSet& a, const FpSet& b) {
    FpSet r = a;
    r.and_with(b);
    return r;
}

FpSet set_dilate(const FpSet& a, std::uint64_t lambda) {
    const FieldCtx& f = a.ctx();
    if (lambda >= f.p) throw Error("dilation factor out of range");
    FpSet r(f);
    if (lambda == 0) {
        if (!a.empty()) r.insert(0);
        return r;
    }
    a.for_each([&](std::uint64_t x) { r.insert(fmul(f, lambda, x)); });
    return r;
}

FpSet negset(const FpSet& a) {
    const FieldCtx& f = a.ctx();
    FpSet r(f);
    a.for_each([&](std::uint64_t x) { r.insert(fneg(f, x)); });
    return r;
}

FpSet sumset(const FpSet& a, const FpSet& b) {
    require_same_ctx(a, b);
    const FpSet& small = a.card() <= b.card() ? a : b;
    const FpSet& big = a.card() <= b.card() ? b : a;
    FpSet r(a.ctx());
    small.for_each([&](std::uint64_t s) { r.or_rotated(big, s); });
    return r;
}

FpSet diffset(const FpSet& a, const FpSet& b) { return sumset(a, negset(b)); }

FpSet productset(const FpSet& a, const FpSet& b) {
    require_same_ctx(a, b);
    const FieldCtx& f = a.ctx();
    const FpSet& small = a.card() <= b.card() ? a : b;
    const FpSet& big = a.card() <= b.card() ? b : a;
    FpSet r(f);
    const auto big_elems = big.elements();
    small.for_each([&](std::uint64_t s) {
        if (s == 0) {
            if (!big_elems.empty()) r.insert(0);
            return;
        }
        for (auto t : big_elems) r.insert(fmul(f, s, t));
    });
    return r;
}

FpSet iter_sumset(std::uint32_t k, const FpSet& a) {
    if (k < 1) throw BadRepeatError("iterated sumset repeat count must be >= 1");
    FpSet r = a;
    for (std::uint32_t i = 1; i < k; ++i) r = sumset(r, a);
    return r;
}

FpSet iter_productset(std::uint32_t k, const FpSet& a) {
    if (k < 1) throw BadRepeatError("iterated product repeat count must be >= 1");
    FpSet r = a;
    for (std::uint32_t i = 1; i < k; ++i) r = productset(r, a);
    return r;
}

FpSet gen_set(FieldCtx ctx, const SetFamilySpec& spec) {
    const std::uint64_t p = ctx.p;
    if (spec.kind != SetFamilySpec::Kind::explicit_ && spec.size > p)
        throw SizeTooLargeError("requested cardinality " + std::to_string(spec.size) +
                                " exceeds field size " + std::to_string(p));
    FpSet s(ctx);
    switch (spec.kind) {
        case SetFamilySpec::Kind::random: {
            Rng rng(spec.seed);
            std::vector<std::uint32_t> idx(static_cast<std::size_t>(p));
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::uint64_t i = 0; i < spec.size; ++i) {
                std::uint64_t j = i + rng.bounded(p - i);
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
                s.insert(idx[static_cast<std::size_t>(i)]);
            }
            break;
        }
        case SetFamilySpec::Kind::interval: {
            std::uint64_t x = spec.start % p;
            for (std::uint64_t i = 0; i < spec.size; ++i) {
                s.insert(x);
                x = fadd(ctx, x, 1);
            }
            break;
        }
        case SetFamilySpec::Kind::geometric: {
            if (spec.ratio % p == 0) throw BadRatioError("geometric ratio must be nonzero mod p");
            std::uint64_t x = spec.start % p;
            std::uint64_t q = spec.ratio % p;
            for (std::uint64_t i = 0; i < spec.size; ++i) {
                s.insert(x);
                x = fmul(ctx, x, q);
            }
            break;
        }
        case SetFamilySpec::Kind::explicit_: {
            for (auto e : spec.elements) s.insert(e);
            break;
        }
    }
    return s;
}

FpSet parse_set_literal(FieldCtx ctx, std::string_view text) {
    FpSet s(ctx);
    std::string token;
    std::size_t count = 0;
    auto flush = [&]() {
        if (token.empty()) throw Error("empty entry in set literal");
        std::uint64_t v = 0;
        for (char c : token) {
            if (c < '0' || c > '9') throw Error(std::string("invalid character '") + c + "' in set literal");
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
            if (v >= (1ULL << 40)) throw Error("residue too large in set literal");
        }
        if (v >= ctx.p) throw Error("residue " + std::to_string(v) + " out of range for p=" + std::to_string(ctx.p));
        if (s.contains(v)) throw Error("duplicate residue " + std::to_string(v) + " in set literal");
        s.insert(v);
        token.clear();
        ++count;
    };
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (c == ',')
            flush();
        else
            token += c;
    }
    flush();
    (void)count;
    return s;
}

std::string set_to_string(const FpSet& s) {
    std::string out;
    bool first = true;
    s.for_each([&](std::uint64_t x) {
        if (!first) out += ",";
        out += std::to_string(x);
        first = false;
    });
    return out;
}

} // namespace detper
