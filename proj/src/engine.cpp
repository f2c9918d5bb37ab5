#include "pairstat/engine.hpp"

#include "pairstat/categorical.hpp"
#include "pairstat/continuous.hpp"
#include "pairstat/error.hpp"
#include "pairstat/mixed.hpp"
#include "pairstat/multiple_testing.hpp"
#include "pairstat/ranking.hpp"

#include "kernels.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>

namespace pairstat {

WorkAssignment partition(std::size_t units, std::size_t threads)
{
    if (threads == 0) {
        throw StatsError(ErrorCode::InvalidArgument, "thread count must be at least 1");
    }
    WorkAssignment work;
    work.per_worker.resize(threads);
    for (std::size_t u = 0; u < units; ++u) {
        work.per_worker[u % threads].push_back(u);
    }
    return work;
}

void validate_outputs(const TestRequest& request)
{
    if (request.threads == 0) {
        throw StatsError(ErrorCode::InvalidArgument, "thread count must be at least 1");
    }
    const auto allowed = supported_outputs(request.test);
    for (const auto& name : request.outputs) {
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            throw StatsError(ErrorCode::UnsupportedOutputForTest,
                             "output '" + name + "' is not available for " + std::string(to_string(request.test)));
        }
    }
}

namespace {

// stat, p, then up to two effect sizes in effect_names() order.
using PairValues = std::array<double, 4>;

class OutputSlots {
public:
    OutputSlots(const TestRequest& request, std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols)
    {
        const auto effects = effect_names(request.test);
        names_ = {std::string(kStat), std::string(kP)};
        names_.insert(names_.end(), effects.begin(), effects.end());
        const bool any_p = std::any_of(request.outputs.begin(), request.outputs.end(),
                                       [](const std::string& o) { return o.rfind("p", 0) == 0; });
        for (std::size_t k = 0; k < names_.size(); ++k) {
            const bool wanted = std::find(request.outputs.begin(), request.outputs.end(), names_[k])
                != request.outputs.end();
            if (wanted || (k == 1 && any_p)) {
                slots_[k].emplace(rows, cols, kNaN);
            }
        }
    }

    void put(std::size_t i, std::size_t j, const PairValues& v)
    {
        for (std::size_t k = 0; k < names_.size(); ++k) {
            if (slots_[k]) {
                (*slots_[k])(i, j) = v[k];
            }
        }
    }

    ResultSet finish(const TestRequest& request, bool symmetric)
    {
        if (symmetric) {
            mirror_upper();
        }
        ResultSet out;
        out.rows = rows_;
        out.cols = cols_;
        for (const auto& name : request.outputs) {
            if (name.rfind("p_", 0) == 0) {
                const auto method = parse_correction(std::string_view(name).substr(2));
                out.matrices[name] = adjust(*slots_[1], method, symmetric);
            }
        }
        for (std::size_t k = 0; k < names_.size(); ++k) {
            const bool wanted = std::find(request.outputs.begin(), request.outputs.end(), names_[k])
                != request.outputs.end();
            if (wanted) {
                out.matrices[names_[k]] = std::move(*slots_[k]);
            }
        }
        return out;
    }

private:
    // Symmetric runners fill i <= j only; copy to the lower triangle in
    // tiles so neither side is walked with a large stride.
    void mirror_upper()
    {
        constexpr std::size_t kTile = 64;
        for (auto& slot : slots_) {
            if (!slot) continue;
            Matrix& m = *slot;
            for (std::size_t bi = 0; bi < rows_; bi += kTile) {
                for (std::size_t bj = bi; bj < cols_; bj += kTile) {
                    const std::size_t ei = std::min(rows_, bi + kTile);
                    const std::size_t ej = std::min(cols_, bj + kTile);
                    for (std::size_t j = bj; j < ej; ++j) {
                        for (std::size_t i = bi; i < std::min(ei, j); ++i) {
                            m(j, i) = m(i, j);
                        }
                    }
                }
            }
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::string> names_;
    std::array<std::optional<Matrix>, 4> slots_;
};

void require_kind(const DataMatrix& m, std::initializer_list<Kind> kinds, TestKind test, const char* role)
{
    if (std::find(kinds.begin(), kinds.end(), m.kind()) == kinds.end()) {
        throw StatsError(ErrorCode::KindMismatch, std::string(to_string(test)) + " cannot use a "
                                                      + std::string(to_string(m.kind())) + " matrix as " + role);
    }
}

struct Presorted {
    std::vector<RankedFeature> features;
    std::vector<std::uint8_t> present;  // features x samples, 1 = present
};

Presorted presort_all(const DataMatrix& m, std::size_t threads, bool with_mask)
{
    Presorted out;
    out.features.resize(m.features());
    if (with_mask) {
        out.present.assign(m.features() * m.samples(), 0);
    }
    run_assignment(partition(m.features(), threads), [&](std::size_t, std::size_t f) {
        out.features[f] = presort_feature(m.row(f), m.missing_value());
        if (with_mask) {
            auto* mask = out.present.data() + f * m.samples();
            for (std::uint32_t i : out.features[f].order) {
                mask[i] = 1;
            }
        }
    });
    return out;
}

ResultSet run_pearson(const TestRequest& request, const DataMatrix& m)
{
    const std::size_t f = m.features();
    const std::size_t s = m.samples();
    const auto rows = kernels::center_rows(m);
    OutputSlots slots(request, f, f);
    // Units are tiles of kTile rows; each row j >= tile start is read once
    // per tile instead of once per row.
    constexpr std::size_t kTile = 32;
    run_assignment(partition((f + kTile - 1) / kTile, request.threads), [&](std::size_t, std::size_t tile) {
        const std::size_t first = tile * kTile;
        const std::size_t last = std::min(f, first + kTile);
        for (std::size_t j = first; j < f; ++j) {
            for (std::size_t i = first; i < std::min(last, j + 1); ++i) {
                std::optional<CorrelationResult> r;
                if (rows.complete[i] && rows.complete[j]) {
                    r = pearson_from_sums(static_cast<double>(s), rows.sum[i], rows.sum[j], rows.sumsq[i],
                                          rows.sumsq[j], kernels::dot(rows.x(i), rows.x(j), s));
                } else {
                    const auto t = kernels::pair_sums(rows.x(i), rows.m(i), rows.x(j), rows.m(j), s);
                    r = pearson_from_sums(t.n, t.sx, t.sy, t.sxx, t.syy, t.sxy);
                }
                if (!r) {
                    r = pearson_rows(m.row(i), m.row(j), m.missing_value());
                }
                slots.put(i, j, {r->coefficient, r->p, r->coefficient, r->coefficient * r->coefficient});
            }
        }
    });
    return slots.finish(request, true);
}

ResultSet run_spearman(const TestRequest& request, const DataMatrix& m)
{
    const std::size_t f = m.features();
    const std::size_t s = m.samples();
    const Presorted sorted = presort_all(m, request.threads, true);
    OutputSlots slots(request, f, f);
    std::vector<std::vector<double>> scratch(request.threads);
    run_assignment(partition(f, request.threads), [&](std::size_t w, std::size_t i) {
        auto& buf = scratch[w];
        buf.resize(s);
        const std::span<const std::uint8_t> mask_i(sorted.present.data() + i * s, s);
        for (std::size_t j = i; j < f; ++j) {
            const std::span<const std::uint8_t> mask_j(sorted.present.data() + j * s, s);
            const auto r = spearman_pair(sorted.features[i], sorted.features[j], mask_i, mask_j, buf);
            slots.put(i, j, {r.coefficient, r.p, r.coefficient, kNaN});
        }
    });
    return slots.finish(request, true);
}

ResultSet run_chi2(const TestRequest& request, const DataMatrix& m)
{
    const std::size_t f = m.features();
    OutputSlots slots(request, f, f);
    std::vector<ContingencyTable> tables(request.threads);
    run_assignment(partition(f, request.threads), [&](std::size_t w, std::size_t i) {
        for (std::size_t j = i; j < f; ++j) {
            const auto r = chi2_codes(m.codes(i), m.codes(j), m.category_count(i), m.category_count(j), tables[w]);
            slots.put(i, j, {r.chi2, r.p, r.phi, r.cramers_v});
        }
    });
    return slots.finish(request, true);
}

// Per-group moments of feature q split by group feature c, from the dense
// kernels. False when a group variance is close enough to cancelling that
// the caller should redo the pair with exact updates.
bool masked_group_stats(const kernels::GroupMasks& masks, const kernels::CenteredRows& rows, std::size_t c,
                        std::size_t q, GroupStats& stats)
{
    constexpr double kCancel = 1e-8;
    const int k = masks.k[c];
    const std::size_t s = rows.samples;
    stats.reset(k);
    // With no missing label or value the last group is the feature total
    // minus the others.
    const bool dense = rows.complete[q] && masks.complete[c];
    kernels::WeightedSums rest{static_cast<double>(s), rows.sum[q], rows.sumsq[q]};
    for (int j = 0; j < k; ++j) {
        kernels::WeightedSums w;
        if (dense && j == k - 1) {
            w = rest;
        } else if (rows.complete[q]) {
            w = kernels::weighted_sums_dense(masks.member(c, j), rows.x(q), s);
            w.n = masks.member_count(c, j);
        } else {
            w = kernels::weighted_sums(masks.member(c, j), rows.x(q), rows.m(q), s);
        }
        rest.n -= w.n;
        rest.s -= w.s;
        rest.ss -= w.ss;
        GroupStats::Group g;
        g.n = static_cast<std::size_t>(w.n);
        if (g.n > 0) {
            g.mean = rows.center[q] + w.s / w.n;
        }
        if (g.n > 1) {
            g.m2 = w.ss - w.s * w.s / w.n;
            if (!(g.m2 > kCancel * w.ss)) {
                return false;
            }
        }
        stats.set(j, g);
    }
    return true;
}

// Pooled tests (Student t, ANOVA) on a pair with no missing label or value:
// one dot product per group but the last, the rest from feature totals.
struct PooledBuffers {
    std::vector<std::size_t> sizes;
    std::vector<double> means;
};

bool dense_pooled(const kernels::GroupMasks& masks, const kernels::CenteredRows& rows, std::size_t c,
                  std::size_t q, PooledBuffers& b, double& ssw)
{
    constexpr double kCancel = 1e-8;
    const int k = masks.k[c];
    const std::size_t s = rows.samples;
    b.sizes.resize(static_cast<std::size_t>(k));
    b.means.resize(static_cast<std::size_t>(k));
    double rest_n = static_cast<double>(s);
    double rest_s = rows.sum[q];
    double between = 0.0;
    for (int j = 0; j < k; ++j) {
        double n = rest_n;
        double sum = rest_s;
        if (j < k - 1) {
            n = masks.member_count(c, j);
            sum = kernels::dot(masks.member(c, j), rows.x(q), s);
        }
        rest_n -= n;
        rest_s -= sum;
        b.sizes[static_cast<std::size_t>(j)] = static_cast<std::size_t>(n);
        b.means[static_cast<std::size_t>(j)] = n > 0.0 ? rows.center[q] + sum / n : 0.0;
        if (n > 0.0) {
            between += sum * sum / n;
        }
    }
    ssw = rows.sumsq[q] - between;
    return ssw > kCancel * rows.sumsq[q];
}

// Mixed tests: one unit per continuous feature, covering every group feature.
template <class PairFn>
ResultSet run_mixed(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values, PairFn&& pair)
{
    OutputSlots slots(request, groups.features(), values.features());
    run_assignment(partition(values.features(), request.threads), [&](std::size_t w, std::size_t q) {
        for (std::size_t c = 0; c < groups.features(); ++c) {
            slots.put(c, q, pair(w, c, q));
        }
    });
    return slots.finish(request, false);
}

// Same results as run_mixed, with units of kTile continuous features so the
// group-side data of each pair is reused from cache across the tile.
template <class PairFn>
ResultSet run_mixed_tiled(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values,
                          PairFn&& pair)
{
    constexpr std::size_t kTile = 16;
    const std::size_t fq = values.features();
    OutputSlots slots(request, groups.features(), fq);
    run_assignment(partition((fq + kTile - 1) / kTile, request.threads), [&](std::size_t w, std::size_t tile) {
        const std::size_t end = std::min(fq, (tile + 1) * kTile);
        for (std::size_t c = 0; c < groups.features(); ++c) {
            for (std::size_t q = tile * kTile; q < end; ++q) {
                slots.put(c, q, pair(w, c, q));
            }
        }
    });
    return slots.finish(request, false);
}

}  // namespace

ResultSet run(const TestRequest& request, const DataMatrix& matrix)
{
    validate_outputs(request);
    switch (request.test) {
    case TestKind::pearson:
        require_kind(matrix, {Kind::continuous}, request.test, "input");
        return run_pearson(request, matrix);
    case TestKind::spearman:
        require_kind(matrix, {Kind::continuous}, request.test, "input");
        return run_spearman(request, matrix);
    case TestKind::chi2:
        require_kind(matrix, {Kind::categorical, Kind::dichotomous}, request.test, "input");
        return run_chi2(request, matrix);
    default:
        throw StatsError(ErrorCode::KindMismatch,
                         std::string(to_string(request.test)) + " needs a group matrix and a continuous matrix");
    }
}

ResultSet run(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values)
{
    validate_outputs(request);
    if (is_homogeneous(request.test)) {
        throw StatsError(ErrorCode::KindMismatch, std::string(to_string(request.test)) + " takes a single matrix");
    }
    if (request.test == TestKind::ttest || request.test == TestKind::mwu) {
        require_kind(groups, {Kind::dichotomous}, request.test, "group input");
    } else {
        require_kind(groups, {Kind::categorical, Kind::dichotomous}, request.test, "group input");
    }
    require_kind(values, {Kind::continuous}, request.test, "value input");
    if (groups.samples() != values.samples()) {
        throw StatsError(ErrorCode::SampleCountMismatch, "group matrix has " + std::to_string(groups.samples())
                                                             + " samples, value matrix has "
                                                             + std::to_string(values.samples()));
    }

    const std::size_t threads = request.threads;
    switch (request.test) {
    case TestKind::ttest:
    case TestKind::anova: {
        constexpr int kMaxMaskedGroups = 16;
        const auto rows = kernels::center_rows(values);
        const auto masks = kernels::group_masks(groups, kMaxMaskedGroups);
        std::vector<GroupStats> stats(threads);
        std::vector<PooledBuffers> pooled(threads);
        const bool ttest = request.test == TestKind::ttest;
        const bool use_pooled = !ttest || request.t_variant == TVariant::student;
        return run_mixed_tiled(request, groups, values, [&](std::size_t w, std::size_t c, std::size_t q) -> PairValues {
            const int k = ttest ? 2 : groups.category_count(c);
            double ssw = 0.0;
            if (use_pooled && masks.k[c] == k && masks.complete[c] && rows.complete[q]
                && dense_pooled(masks, rows, c, q, pooled[w], ssw)) {
                const auto& b = pooled[w];
                if (ttest) {
                    const auto r = student_from_pooled(b.sizes[0], b.sizes[1], b.means[0], b.means[1], ssw);
                    return {r.t, r.p, r.cohens_d, kNaN};
                }
                const auto r = anova_from_pooled(b.sizes, b.means, ssw);
                return {r.f, r.p, r.partial_eta_sq, kNaN};
            }
            if (masks.k[c] != k || !masked_group_stats(masks, rows, c, q, stats[w])) {
                accumulate_groups(groups.codes(c), values.row(q), values.missing_value(), k, stats[w]);
            }
            if (ttest) {
                const auto r = ttest_from_groups(stats[w], request.t_variant);
                return {r.t, r.p, r.cohens_d, kNaN};
            }
            const auto r = anova_from_groups(stats[w]);
            return {r.f, r.p, r.partial_eta_sq, kNaN};
        });
    }
    case TestKind::mwu: {
        const Presorted sorted = presort_all(values, threads, false);
        return run_mixed(request, groups, values, [&](std::size_t, std::size_t c, std::size_t q) -> PairValues {
            const auto r = mwu_pair(sorted.features[q], groups.codes(c), request.u_mode);
            return {r.u, r.p, r.r, kNaN};
        });
    }
    case TestKind::kruskal: {
        const Presorted sorted = presort_all(values, threads, false);
        struct Buffers {
            std::vector<double> rank_sums;
            std::vector<std::size_t> sizes;
        };
        std::vector<Buffers> buffers(threads);
        return run_mixed(request, groups, values, [&](std::size_t w, std::size_t c, std::size_t q) -> PairValues {
            auto& b = buffers[w];
            const auto k = static_cast<std::size_t>(groups.category_count(c));
            b.rank_sums.resize(k);
            b.sizes.resize(k);
            const auto summary = group_rank_sums(sorted.features[q], groups.codes(c), b.rank_sums, b.sizes);
            const auto r = kruskal_from_ranks(b.rank_sums, b.sizes, summary.tie_term);
            return {r.h, r.p, r.eta_sq, kNaN};
        });
    }
    default:
        break;
    }
    throw StatsError(ErrorCode::KindMismatch, "unsupported mixed test");
}

}  // namespace pairstat
