#include "pairstat/mixed.hpp"

#include "pairstat/error.hpp"
#include "pairstat/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace pairstat {

std::size_t GroupStats::total() const noexcept
{
    std::size_t n = 0;
    for (const auto& g : groups_) {
        n += g.n;
    }
    return n;
}

void accumulate_groups(std::span<const std::int32_t> codes, std::span<const double> values,
                       const MissingValue& missing, int k, GroupStats& stats)
{
    stats.reset(k);
    const std::size_t s = std::min(codes.size(), values.size());
    for (std::size_t i = 0; i < s; ++i) {
        const std::int32_t c = codes[i];
        const double x = values[i];
        if (c >= 0 && !missing.matches(x)) {
            stats.add(c, x);
        }
    }
}

namespace {

std::int32_t checked_label(double label, int k)
{
    if (!(label >= 0.0) || label >= k || std::trunc(label) != label) {
        throw StatsError(ErrorCode::LabelOutOfRange,
                         "group label " + std::to_string(label) + " outside [0, " + std::to_string(k) + ")");
    }
    return static_cast<std::int32_t>(label);
}

GroupStats groups_from_view(const PairView& view, int k)
{
    GroupStats stats;
    stats.reset(k);
    for (std::size_t i = 0; i < view.n(); ++i) {
        stats.add(checked_label(view.xs[i], k), view.ys[i]);
    }
    return stats;
}

}  // namespace

TTestResult student_from_pooled(std::size_t size0, std::size_t size1, double mean0, double mean1, double ssw)
{
    TTestResult out;
    if (size0 < 2 || size1 < 2) {
        return out;
    }
    const double n0 = static_cast<double>(size0);
    const double n1 = static_cast<double>(size1);
    const double diff = mean0 - mean1;
    const double dof = n0 + n1 - 2.0;
    const double pooled_sd = std::sqrt(ssw / dof);
    if (pooled_sd == 0.0) {
        return out;
    }
    out.t = diff / (pooled_sd * std::sqrt(1.0 / n0 + 1.0 / n1));
    out.p = std::min(1.0, 2.0 * specfun::t_sf(std::abs(out.t), dof));
    out.cohens_d = diff / pooled_sd;
    return out;
}

TTestResult ttest_from_groups(const GroupStats& stats, TVariant variant)
{
    TTestResult out;
    const auto& g0 = stats.group(0);
    const auto& g1 = stats.group(1);
    if (g0.n < 2 || g1.n < 2 || g0.n + g1.n < 3) {
        return out;
    }
    const double n0 = static_cast<double>(g0.n);
    const double n1 = static_cast<double>(g1.n);
    const double var0 = g0.m2 / (n0 - 1.0);
    const double var1 = g1.m2 / (n1 - 1.0);
    const double diff = g0.mean - g1.mean;

    if (variant == TVariant::student) {
        return student_from_pooled(g0.n, g1.n, g0.mean, g1.mean, g0.m2 + g1.m2);
    }

    if (var0 + var1 == 0.0) {
        return out;
    }
    const double se0 = var0 / n0;
    const double se1 = var1 / n1;
    const double se = se0 + se1;
    const double dof = se * se / (se0 * se0 / (n0 - 1.0) + se1 * se1 / (n1 - 1.0));
    out.t = diff / std::sqrt(se);
    out.p = std::min(1.0, 2.0 * specfun::t_sf(std::abs(out.t), dof));
    out.cohens_d = diff / std::sqrt(0.5 * (var0 + var1));
    return out;
}

TTestResult ttest_pair(const PairView& view, TVariant variant)
{
    return ttest_from_groups(groups_from_view(view, 2), variant);
}

// ---------------------------------------------------------------------------
// Exact U distribution

namespace {

constexpr std::uint64_t kMaxTableCount = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

// C(n, k) or 0 if it exceeds kMaxTableCount.
std::uint64_t binomial_or_zero(std::size_t n, std::size_t k)
{
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > kMaxTableCount) {
            return 0;
        }
    }
    return static_cast<std::uint64_t>(c);
}

}  // namespace

bool exact_u_feasible(std::size_t n1, std::size_t n2)
{
    return n1 >= 1 && n2 >= 1 && binomial_or_zero(n1 + n2, n1) != 0;
}

std::uint64_t ExactUDistribution::cumulative(std::size_t u) const noexcept
{
    std::uint64_t sum = 0;
    const std::size_t last = std::min(u, max_u());
    for (std::size_t v = 0; v <= last; ++v) {
        sum += counts_[v];
    }
    return sum;
}

std::uint64_t ExactUDistribution::two_sided_numerator(std::size_t u) const
{
    const std::size_t full = n1_ * n2_;
    if (u > full) {
        throw StatsError(ErrorCode::InvalidArgument, "U exceeds n1 * n2");
    }
    const std::size_t low = std::min(u, full - u);
    if (low > max_u()) {
        throw StatsError(ErrorCode::InvalidArgument, "U outside the truncated table");
    }
    const std::uint64_t tail = cumulative(low);
    // 2 * tail cannot overflow: tail <= total < 2^63.
    return std::min<std::uint64_t>(2 * tail, total_);
}

double ExactUDistribution::two_sided_p(std::size_t u) const
{
    return static_cast<double>(two_sided_numerator(u)) / static_cast<double>(total_);
}

ExactUDistribution exact_u_distribution(std::size_t n1, std::size_t n2, std::size_t max_u)
{
    if (n1 == 0 || n2 == 0) {
        throw StatsError(ErrorCode::InvalidArgument, "exact U distribution needs two non-empty groups");
    }
    const std::uint64_t total = binomial_or_zero(n1 + n2, n1);
    if (total == 0) {
        throw StatsError(ErrorCode::TableTooLarge, "C(" + std::to_string(n1 + n2) + ", " + std::to_string(n1)
                                                       + ") arrangements overflow the count table");
    }
    const std::size_t degree = std::min(max_u, n1 * n2);
    const std::size_t small = std::min(n1, n2);
    const std::size_t large = std::max(n1, n2);

    // Counts are the coefficients of the Gaussian binomial
    // prod_{i=1..small} (1 - q^(large + i)) / (1 - q^i), truncated at `degree`.
    // Every intermediate coefficient is bounded by `total`.
    std::vector<std::int64_t> c(degree + 1, 0);
    c[0] = 1;
    for (std::size_t i = 1; i <= small; ++i) {
        const std::size_t up = large + i;
        for (std::size_t u = degree + 1; u-- > up;) {
            c[u] -= c[u - up];
        }
        for (std::size_t u = i; u <= degree; ++u) {
            c[u] += c[u - i];
        }
    }

    ExactUDistribution dist;
    dist.n1_ = n1;
    dist.n2_ = n2;
    dist.total_ = total;
    dist.counts_.assign(c.begin(), c.end());
    return dist;
}

ExactUDistribution exact_u_distribution(std::size_t n1, std::size_t n2)
{
    return exact_u_distribution(n1, n2, n1 * n2);
}

// ---------------------------------------------------------------------------
// Mann-Whitney U

MwuResult mwu_from_ranks(double rank_sum0, std::size_t n0, std::size_t n1, double tie_term, UMode mode)
{
    MwuResult out;
    if (n0 == 0 || n1 == 0) {
        return out;
    }
    const double a = static_cast<double>(n0);
    const double b = static_cast<double>(n1);
    const double n = a + b;
    const double u = rank_sum0 - a * (a + 1.0) / 2.0;
    const double mean = a * b / 2.0;
    out.u = u;

    bool exact = false;
    switch (mode) {
    case UMode::exact:
        if (tie_term > 0.0) {
            throw StatsError(ErrorCode::ExactModeWithTies, "exact U p-values require tie-free data");
        }
        exact = true;
        break;
    case UMode::automatic:
        exact = tie_term == 0.0 && std::min(n0, n1) < 8 && exact_u_feasible(n0, n1);
        break;
    case UMode::asymptotic:
        break;
    }

    const double var = a * b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    double z = kNaN;
    if (var > 0.0) {
        z = std::max(std::abs(u - mean) - 0.5, 0.0) / std::sqrt(var);
        out.r = (u < mean ? -z : z) / std::sqrt(n);
    }

    if (exact) {
        const auto whole = static_cast<std::size_t>(std::llround(u));
        const std::size_t low = std::min(whole, n0 * n1 - whole);
        out.p = exact_u_distribution(n0, n1, low).two_sided_p(whole);
        out.exact = true;
    } else if (var > 0.0) {
        out.p = std::min(1.0, 2.0 * specfun::normal_sf(z));
    }
    return out;
}

MwuResult mwu_pair(const RankedFeature& continuous, std::span<const std::int32_t> codes, UMode mode)
{
    double rank_sum0 = 0.0;
    std::size_t n0 = 0;
    RankSummary summary;
    if (!continuous.has_ties) {
        // Integer ranks and masks; a compare feeding a double conversion
        // compiles to a branch that mispredicts once labels go missing.
        std::uint64_t count = 0;
        std::uint64_t sum0 = 0;
        std::uint64_t zeros = 0;
        for (const std::uint32_t i : continuous.order) {
            const auto c = static_cast<std::uint32_t>(codes[i]);
            const std::uint64_t keep = (~c) >> 31;
            const std::uint64_t zero = c == 0;
            count += keep;
            sum0 += count & (0 - zero);
            zeros += zero;
        }
        rank_sum0 = static_cast<double>(sum0);
        summary.n = count;
        n0 = zeros;
    } else {
        summary = for_each_joint_rank(
            continuous, [&](std::uint32_t i) { return codes[i] >= 0; },
            [&](std::uint32_t i, double rank) {
                if (codes[i] == 0) {
                    rank_sum0 += rank;
                    ++n0;
                }
            });
    }
    return mwu_from_ranks(rank_sum0, n0, summary.n - n0, summary.tie_term, mode);
}

// ---------------------------------------------------------------------------
// ANOVA

namespace {

// Shared by the per-group and pooled entry points; size(j) and mean(j)
// describe group j, ssw is the within-group sum of squares.
template <class Size, class Mean>
AnovaResult anova_core(int k, Size&& size, Mean&& mean, double ssw)
{
    AnovaResult out;
    std::size_t n = 0;
    for (int j = 0; j < k; ++j) {
        n += size(j);
    }
    if (k < 2 || n <= static_cast<std::size_t>(k)) {
        return out;
    }
    double weighted = 0.0;
    for (int j = 0; j < k; ++j) {
        if (size(j) == 0) {
            return out;
        }
        weighted += static_cast<double>(size(j)) * mean(j);
    }
    const double grand = weighted / static_cast<double>(n);
    double ssb = 0.0;
    for (int j = 0; j < k; ++j) {
        const double d = mean(j) - grand;
        ssb += static_cast<double>(size(j)) * d * d;
    }

    if (ssw == 0.0) {
        const double m0 = mean(0);
        bool equal = true;
        for (int j = 1; j < k && equal; ++j) {
            const double mj = mean(j);
            equal = std::abs(mj - m0) <= 1e-12 * std::max(std::abs(mj), std::abs(m0));
        }
        if (!equal) {
            out.f = std::numeric_limits<double>::infinity();
            out.p = 0.0;
            out.partial_eta_sq = 1.0;
        }
        return out;
    }

    const double df_between = static_cast<double>(k - 1);
    const double df_within = static_cast<double>(n) - static_cast<double>(k);
    out.f = (ssb / df_between) / (ssw / df_within);
    out.p = specfun::f_sf(out.f, df_between, df_within);
    out.partial_eta_sq = ssb / (ssb + ssw);
    return out;
}

}  // namespace

AnovaResult anova_from_groups(const GroupStats& stats)
{
    double ssw = 0.0;
    for (int j = 0; j < stats.k(); ++j) {
        ssw += stats.group(j).m2;
    }
    return anova_core(
        stats.k(), [&](int j) { return stats.group(j).n; }, [&](int j) { return stats.group(j).mean; }, ssw);
}

AnovaResult anova_from_pooled(std::span<const std::size_t> sizes, std::span<const double> means, double ssw)
{
    return anova_core(
        static_cast<int>(sizes.size()), [&](int j) { return sizes[static_cast<std::size_t>(j)]; },
        [&](int j) { return means[static_cast<std::size_t>(j)]; }, ssw);
}

AnovaResult anova_pair(const PairView& view, int k)
{
    return anova_from_groups(groups_from_view(view, k));
}

// ---------------------------------------------------------------------------
// Kruskal-Wallis

KruskalResult kruskal_from_ranks(std::span<const double> rank_sums, std::span<const std::size_t> sizes,
                                 double tie_term)
{
    KruskalResult out;
    const std::size_t k = sizes.size();
    std::size_t total = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] == 0) {
            return out;
        }
        total += sizes[j];
    }
    const double n = static_cast<double>(total);
    const double n3 = n * n * n - n;
    const double tie_factor = n3 > 0.0 ? 1.0 - tie_term / n3 : 0.0;
    if (tie_factor <= 0.0) {
        return out;
    }
    // 12 / (n (n + 1)) * sum n_j (mean rank_j - (n + 1) / 2)^2, the
    // cancellation-free form of 12 / (n (n + 1)) sum R_j^2 / n_j - 3 (n + 1).
    const double centre = 0.5 * (n + 1.0);
    double spread = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double nj = static_cast<double>(sizes[j]);
        const double d = rank_sums[j] / nj - centre;
        spread += nj * d * d;
    }
    out.h = 12.0 * spread / (n * (n + 1.0)) / tie_factor;
    if (k >= 2) {
        out.p = specfun::chi2_sf(out.h, static_cast<double>(k - 1));
        if (total > k) {
            out.eta_sq = (out.h - static_cast<double>(k) + 1.0) / (n - static_cast<double>(k));
        }
    }
    return out;
}

RankSummary group_rank_sums(const RankedFeature& continuous, std::span<const std::int32_t> codes,
                            std::span<double> rank_sums, std::span<std::size_t> sizes)
{
    constexpr std::size_t kSmall = 16;
    const std::size_t k = rank_sums.size();
    std::fill(rank_sums.begin(), rank_sums.end(), 0.0);
    std::fill(sizes.begin(), sizes.end(), 0);
    RankSummary summary;
    if (!continuous.has_ties && k < kSmall) {
        // Slot 0 absorbs unlabelled samples so the loop has no branch.
        std::array<std::uint64_t, kSmall + 1> sums{};
        std::array<std::size_t, kSmall + 1> counts{};
        std::uint64_t count = 0;
        for (const std::uint32_t i : continuous.order) {
            const auto c = static_cast<std::uint32_t>(codes[i]);
            const std::size_t slot = c + 1;
            count += (~c) >> 31;
            sums[slot] += count;
            ++counts[slot];
        }
        for (std::size_t j = 0; j < k; ++j) rank_sums[j] = static_cast<double>(sums[j + 1]);
        std::copy_n(counts.begin() + 1, k, sizes.begin());
        summary.n = count;
        return summary;
    }
    return for_each_joint_rank(
        continuous, [&](std::uint32_t i) { return codes[i] >= 0; },
        [&](std::uint32_t i, double rank) {
            const auto j = static_cast<std::size_t>(codes[i]);
            rank_sums[j] += rank;
            ++sizes[j];
        });
}

KruskalResult kruskal_pair(const RankedFeature& continuous, std::span<const std::int32_t> codes, int k)
{
    std::vector<double> rank_sums(static_cast<std::size_t>(k), 0.0);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    const auto summary = group_rank_sums(continuous, codes, rank_sums, sizes);
    return kruskal_from_ranks(rank_sums, sizes, summary.tie_term);
}

}  // namespace pairstat
