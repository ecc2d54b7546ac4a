#include "detper/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <thread>

#include "detper/rng.hpp"

namespace detper {

namespace {

constexpr std::uint64_t kSat = 1ULL << 63;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a >= kSat || b >= kSat || a > kSat / b) return kSat;
    return a * b;
}

std::uint64_t sat_add_counter(std::uint64_t a, std::uint64_t b, bool& saturated) {
    std::uint64_t s = a + b;
    if (s < a) {
        saturated = true;
        return ~0ULL;
    }
    return s;
}

// Determinant of an n x n scratch matrix (destroyed), n <= 8.
std::uint64_t det_small(const FieldCtx& f, std::uint64_t* a, std::uint32_t n) {
    std::uint64_t det = 1;
    bool negate = false;
    for (std::uint32_t col = 0; col < n; ++col) {
        std::uint32_t piv = col;
        while (piv < n && a[piv * n + col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            for (std::uint32_t j = col; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
            negate = !negate;
        }
        const std::uint64_t pv = a[col * n + col];
        det = fmul(f, det, pv);
        const std::uint64_t inv = finv(f, pv);
        for (std::uint32_t r = col + 1; r < n; ++r) {
            const std::uint64_t factor = fmul(f, a[r * n + col], inv);
            if (factor == 0) continue;
            for (std::uint32_t j = col; j < n; ++j)
                a[r * n + j] = fsub(f, a[r * n + j], fmul(f, factor, a[col * n + j]));
        }
    }
    return negate ? fneg(f, det) : det;
}

// Permanent of an n x n matrix by Ryser's formula with Gray-code column sums.
std::uint64_t per_small(const FieldCtx& f, const std::uint64_t* a, std::uint32_t n) {
    if (n == 0) return 1 % f.p;
    std::uint64_t rowsum[8] = {0};
    std::uint64_t total = 0;
    std::uint32_t gray = 0;
    const std::uint32_t end = 1u << n;
    for (std::uint32_t g = 1; g < end; ++g) {
        const std::uint32_t next_gray = g ^ (g >> 1);
        const std::uint32_t bit = gray ^ next_gray; // single toggled column
        const std::uint32_t j = static_cast<std::uint32_t>(__builtin_ctz(bit));
        if (next_gray & bit) {
            for (std::uint32_t i = 0; i < n; ++i) rowsum[i] = fadd(f, rowsum[i], a[i * n + j]);
        } else {
            for (std::uint32_t i = 0; i < n; ++i) rowsum[i] = fsub(f, rowsum[i], a[i * n + j]);
        }
        gray = next_gray;
        std::uint64_t prod = 1;
        for (std::uint32_t i = 0; i < n; ++i) prod = fmul(f, prod, rowsum[i]);
        // sign (-1)^{n - |S|}
        if ((n - static_cast<std::uint32_t>(std::popcount(gray))) & 1)
            total = fsub(f, total, prod);
        else
            total = fadd(f, total, prod);
    }
    return total;
}

// Last-row expansion cofactors of a (d-1) x d prefix: for determinants the
// signed minors (-1)^{(d-1)+j} det(minor_j), for permanents the minor permanents.
void last_row_cofactors(const FieldCtx& f, std::uint32_t d, const std::uint64_t* prefix,
                        bool permanent, std::uint64_t* c) {
    const std::uint32_t n = d - 1;
    std::uint64_t minor[64];
    for (std::uint32_t j = 0; j < d; ++j) {
        for (std::uint32_t r = 0; r < n; ++r) {
            std::uint32_t out = 0;
            for (std::uint32_t col = 0; col < d; ++col) {
                if (col == j) continue;
                minor[r * n + out] = prefix[r * d + col];
                ++out;
            }
        }
        if (permanent) {
            c[j] = per_small(f, minor, n);
        } else {
            std::uint64_t v = det_small(f, minor, n);
            c[j] = ((n + j) & 1) ? fneg(f, v) : v;
        }
    }
}

struct Shard {
    std::vector<std::uint64_t> value_words;
    std::vector<std::uint64_t> counts; // empty unless want_counts
    bool saturated = false;
};

// Scratch for one worker; buffers reused across prefixes.
struct Scratch {
    explicit Scratch(const FieldCtx& f, bool want_counts)
        : acc(f), nxt(f) {
        if (want_counts) {
            cur_cnt.assign(f.p, 0);
            nxt_cnt.assign(f.p, 0);
        }
    }
    FpSet acc, nxt;
    std::vector<std::uint64_t> cur_cnt, nxt_cnt;
    std::vector<std::uint64_t> cur_sup, nxt_sup;
};

// Accumulates the contribution of one prefix (given its cofactors) into a shard.
void accumulate_last_row(const FieldCtx& f, std::uint32_t d, const std::uint64_t* c,
                         const std::vector<std::uint64_t>& elems, bool want_counts,
                         Scratch& sc, Shard& shard) {
    const std::uint64_t m = elems.size();
    if (!want_counts) {
        // value set: iterated sumset of the dilates c_j * A
        auto& accw = sc.acc.mutable_words();
        std::fill(accw.begin(), accw.end(), 0);
        accw[0] = 1; // {0}
        for (std::uint32_t j = 0; j < d; ++j) {
            if (c[j] == 0) continue; // coordinate contributes 0 regardless of entry
            auto& nxtw = sc.nxt.mutable_words();
            std::fill(nxtw.begin(), nxtw.end(), 0);
            for (auto a : elems) sc.nxt.or_rotated(sc.acc, fmul(f, c[j], a));
            std::swap(sc.acc, sc.nxt);
        }
        const auto& src = sc.acc.words();
        for (std::size_t i = 0; i < shard.value_words.size(); ++i) shard.value_words[i] |= src[i];
        return;
    }
    // count vector: d-fold convolution over the support
    sc.cur_sup.clear();
    sc.cur_cnt[0] = 1;
    sc.cur_sup.push_back(0);
    for (std::uint32_t j = 0; j < d; ++j) {
        if (c[j] == 0) {
            for (auto x : sc.cur_sup) {
                const unsigned __int128 v = static_cast<unsigned __int128>(sc.cur_cnt[x]) * m;
                if (v > ~0ULL) {
                    shard.saturated = true;
                    sc.cur_cnt[x] = ~0ULL;
                } else {
                    sc.cur_cnt[x] = static_cast<std::uint64_t>(v);
                }
            }
            continue;
        }
        sc.nxt_sup.clear();
        for (auto x : sc.cur_sup) {
            const std::uint64_t v = sc.cur_cnt[x];
            for (auto a : elems) {
                const std::uint64_t y = fadd(f, x, fmul(f, c[j], a));
                if (sc.nxt_cnt[y] == 0) sc.nxt_sup.push_back(y);
                sc.nxt_cnt[y] = sat_add_counter(sc.nxt_cnt[y], v, shard.saturated);
            }
            sc.cur_cnt[x] = 0;
        }
        std::swap(sc.cur_cnt, sc.nxt_cnt);
        std::swap(sc.cur_sup, sc.nxt_sup);
    }
    for (auto x : sc.cur_sup) {
        shard.counts[x] = sat_add_counter(shard.counts[x], sc.cur_cnt[x], shard.saturated);
        shard.value_words[x >> 6] |= 1ULL << (x & 63);
        sc.cur_cnt[x] = 0;
    }
}

SpectrumResult spectrum_impl(const FpSet& A, std::uint32_t d, bool permanent,
                             const SpectrumOptions& opts) {
    if (d < 2 || d > 8)
        throw DimensionOutOfRangeError("dimension must be in [2, 8], got " + std::to_string(d));
    if (A.empty()) throw EmptySetError("spectrum of the empty set");
    const FieldCtx f = A.ctx();
    const auto t0 = std::chrono::steady_clock::now();
    const auto elems = A.elements();
    const std::uint64_t m = elems.size();
    const std::uint32_t L = d * (d - 1);
    const std::uint64_t total = saturating_pow(m, d * d);
    const std::uint64_t per_prefix = saturating_pow(m, d);
    const bool exact = total <= opts.budget && total < kSat;
    const std::uint64_t n_units =
        exact ? saturating_pow(m, L) : std::max<std::uint64_t>(1, opts.budget / std::max<std::uint64_t>(1, per_prefix));

    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(
                                                std::min<std::uint64_t>(n_units, 64))));
    const std::size_t W = (f.p + 63) / 64;
    std::vector<Shard> shards(workers);
    for (auto& sh : shards) {
        sh.value_words.assign(W, 0);
        if (opts.want_counts) sh.counts.assign(f.p, 0);
    }

    auto run_range = [&](unsigned wi, std::uint64_t lo, std::uint64_t hi) {
        Shard& shard = shards[wi];
        Scratch sc(f, opts.want_counts);
        std::vector<std::uint32_t> digits(L, 0);
        std::vector<std::uint64_t> prefix(static_cast<std::size_t>(L), 0);
        std::uint64_t cof[8];
        if (exact) {
            // decode lo into base-m digits, most significant first
            std::uint64_t v = lo;
            for (std::uint32_t i = 0; i < L; ++i) {
                digits[L - 1 - i] = static_cast<std::uint32_t>(v % m);
                v /= m;
            }
            for (std::uint32_t i = 0; i < L; ++i) prefix[i] = elems[digits[i]];
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                last_row_cofactors(f, d, prefix.data(), permanent, cof);
                accumulate_last_row(f, d, cof, elems, opts.want_counts, sc, shard);
                // odometer
                for (std::uint32_t i = L; i-- > 0;) {
                    if (++digits[i] < m) {
                        prefix[i] = elems[digits[i]];
                        break;
                    }
                    digits[i] = 0;
                    prefix[i] = elems[0];
                }
            }
        } else {
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                Rng rng(derive_seed(opts.seed, idx));
                for (std::uint32_t i = 0; i < L; ++i)
                    prefix[i] = elems[static_cast<std::size_t>(rng.bounded(m))];
                last_row_cofactors(f, d, prefix.data(), permanent, cof);
                accumulate_last_row(f, d, cof, elems, opts.want_counts, sc, shard);
            }
        }
    };

    if (workers == 1) {
        run_range(0, 0, n_units);
    } else {
        std::vector<std::thread> pool;
        for (unsigned wi = 0; wi < workers; ++wi) {
            const std::uint64_t lo = n_units * wi / workers;
            const std::uint64_t hi = n_units * (wi + 1) / workers;
            pool.emplace_back(run_range, wi, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    SpectrumResult res{FpSet(f), std::nullopt, exact, false, 0, 0.0};
    auto& vw = res.values.mutable_words();
    for (const auto& sh : shards)
        for (std::size_t i = 0; i < W; ++i) vw[i] |= sh.value_words[i];
    if (opts.want_counts) {
        std::vector<std::uint64_t> counts(f.p, 0);
        bool sat = false;
        for (const auto& sh : shards) {
            if (sh.saturated) sat = true;
            for (std::uint64_t x = 0; x < f.p; ++x)
                counts[x] = sat_add_counter(counts[x], sh.counts[x], sat);
        }
        res.counts = std::move(counts);
        res.counts_saturated = sat;
    }
    res.matrices_enumerated = exact ? total : sat_mul(n_units, per_prefix);
    res.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace

std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r = sat_mul(r, base);
    return r;
}

std::uint64_t det_value(const MatrixView& m) {
    std::uint64_t scratch[64];
    std::copy(m.entries.begin(), m.entries.end(), scratch);
    return det_small(m.ctx, scratch, m.d);
}

std::uint64_t per_value(const MatrixView& m) { return per_small(m.ctx, m.entries.data(), m.d); }

SpectrumResult det_spectrum(const FpSet& A, std::uint32_t d, const SpectrumOptions& opts) {
    return spectrum_impl(A, d, false, opts);
}

SpectrumResult per_spectrum(const FpSet& A, std::uint32_t d, const SpectrumOptions& opts) {
    return spectrum_impl(A, d, true, opts);
}

FpSet diff_det_spectrum_f2(const FpSet& A) {
    if (A.empty()) throw EmptySetError("difference spectrum of the empty set");
    const FpSet e = diffset(A, A);
    const FpSet ee = productset(e, e);
    return diffset(ee, ee);
}

FpSet diff_per_spectrum_g2(const FpSet& A) {
    if (A.empty()) throw EmptySetError("difference spectrum of the empty set");
    const FpSet e = diffset(A, A);
    const FpSet ee = productset(e, e);
    return sumset(ee, ee);
}

} // namespace detper
