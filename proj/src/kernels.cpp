#include "kernels.hpp"

#include <algorithm>

namespace pairstat::kernels {

namespace {

constexpr std::size_t kLanes = 16;

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define PAIRSTAT_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define PAIRSTAT_CLONES
#endif


}  // namespace

CenteredRows center_rows(const DataMatrix& m)
{
    const std::size_t f = m.features();
    const std::size_t s = m.samples();
    CenteredRows out;
    out.samples = s;
    out.centered.assign(f * s, 0.0);
    out.mask.assign(f * s, 0.0);
    out.center.assign(f, 0.0);
    out.complete.assign(f, 0);
    out.sum.assign(f, 0.0);
    out.sumsq.assign(f, 0.0);
    const MissingValue& missing = m.missing_value();
    for (std::size_t i = 0; i < f; ++i) {
        const auto row = m.row(i);
        double total = 0.0;
        std::size_t n = 0;
        for (const double x : row) {
            if (!missing.matches(x)) {
                total += x;
                ++n;
            }
        }
        const double c = n > 0 ? total / static_cast<double>(n) : 0.0;
        out.center[i] = c;
        out.complete[i] = n == s;
        double* xs = out.centered.data() + i * s;
        double* ms = out.mask.data() + i * s;
        for (std::size_t j = 0; j < s; ++j) {
            if (!missing.matches(row[j])) {
                xs[j] = row[j] - c;
                ms[j] = 1.0;
            }
        }
        const auto w = weighted_sums_dense(ms, xs, s);
        out.sum[i] = w.s;
        out.sumsq[i] = w.ss;
    }
    return out;
}

GroupMasks group_masks(const DataMatrix& groups, int max_k)
{
    const std::size_t f = groups.features();
    const std::size_t s = groups.samples();
    GroupMasks out;
    out.samples = s;
    out.offset.assign(f, 0);
    out.k.assign(f, 0);
    std::size_t rows = 0;
    for (std::size_t i = 0; i < f; ++i) {
        out.offset[i] = rows;
        const int k = groups.category_count(i);
        if (k <= max_k) {
            out.k[i] = k;
            rows += static_cast<std::size_t>(k);
        }
    }
    out.data.assign(rows * s, 0.0);
    out.count.assign(rows, 0.0);
    out.complete.assign(f, 0);
    for (std::size_t i = 0; i < f; ++i) {
        if (out.k[i] == 0) continue;
        const auto codes = groups.codes(i);
        out.complete[i] = std::none_of(codes.begin(), codes.end(), [](std::int32_t c) { return c < 0; });
        double* first = out.data.data() + out.offset[i] * s;
        for (std::size_t j = 0; j < s; ++j) {
            if (codes[j] >= 0) {
                const auto row = static_cast<std::size_t>(codes[j]);
                first[row * s + j] = 1.0;
                out.count[out.offset[i] + row] += 1.0;
            }
        }
    }
    return out;
}

namespace {

typedef double Vec __attribute__((vector_size(32)));

inline Vec load(const double* p)
{
    Vec v;
    __builtin_memcpy(&v, p, sizeof v);
    return v;
}

// Four 4-wide vectors make kLanes lanes; v[b] lane l holds elements
// i + 4 b + l of each block.
struct Acc {
    Vec v[4] = {};
    double fold_with(double tail) const
    {
        const Vec a = (v[0] + v[2]) + (v[1] + v[3]);
        return ((a[0] + a[2]) + (a[1] + a[3])) + tail;
    }
};

}  // namespace

PAIRSTAT_CLONES
double dot(const double* a, const double* b, std::size_t n)
{
    Acc acc;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        for (int v = 0; v < 4; ++v) acc.v[v] += load(a + i + 4 * v) * load(b + i + 4 * v);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return acc.fold_with(tail);
}

PAIRSTAT_CLONES
PairSums pair_sums(const double* x, const double* mx, const double* y, const double* my, std::size_t n)
{
    Acc cn, sx, sy, sxx, syy, sxy;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        for (int v = 0; v < 4; ++v) {
            const std::size_t o = i + 4 * static_cast<std::size_t>(v);
            const Vec a = load(x + o);
            const Vec b = load(y + o);
            const Vec ma = load(mx + o);
            const Vec mb = load(my + o);
            cn.v[v] += ma * mb;
            sx.v[v] += a * mb;
            sy.v[v] += b * ma;
            sxx.v[v] += (a * a) * mb;
            syy.v[v] += (b * b) * ma;
            sxy.v[v] += a * b;
        }
    }
    double t[6] = {};
    for (; i < n; ++i) {
        t[0] += mx[i] * my[i];
        t[1] += x[i] * my[i];
        t[2] += y[i] * mx[i];
        t[3] += (x[i] * x[i]) * my[i];
        t[4] += (y[i] * y[i]) * mx[i];
        t[5] += x[i] * y[i];
    }
    return {cn.fold_with(t[0]), sx.fold_with(t[1]), sy.fold_with(t[2]),
            sxx.fold_with(t[3]), syy.fold_with(t[4]), sxy.fold_with(t[5])};
}

PAIRSTAT_CLONES
WeightedSums weighted_sums(const double* w, const double* x, const double* m, std::size_t n)
{
    Acc cn, s, ss;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        for (int v = 0; v < 4; ++v) {
            const std::size_t o = i + 4 * static_cast<std::size_t>(v);
            const Vec wv = load(w + o);
            const Vec xv = load(x + o);
            const Vec wx = wv * xv;
            cn.v[v] += wv * load(m + o);
            s.v[v] += wx;
            ss.v[v] += wx * xv;
        }
    }
    double t[3] = {};
    for (; i < n; ++i) {
        const double wx = w[i] * x[i];
        t[0] += w[i] * m[i];
        t[1] += wx;
        t[2] += wx * x[i];
    }
    return {cn.fold_with(t[0]), s.fold_with(t[1]), ss.fold_with(t[2])};
}

PAIRSTAT_CLONES
WeightedSums weighted_sums_dense(const double* w, const double* x, std::size_t n)
{
    Acc s, ss;
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        for (int v = 0; v < 4; ++v) {
            const std::size_t o = i + 4 * static_cast<std::size_t>(v);
            const Vec xv = load(x + o);
            const Vec wx = load(w + o) * xv;
            s.v[v] += wx;
            ss.v[v] += wx * xv;
        }
    }
    double t[2] = {};
    for (; i < n; ++i) {
        const double wx = w[i] * x[i];
        t[0] += wx;
        t[1] += wx * x[i];
    }
    return {0.0, s.fold_with(t[0]), ss.fold_with(t[1])};
}

}  // namespace pairstat::kernels
