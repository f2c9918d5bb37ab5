#pragma once

#include "pairstat/matrix.hpp"
#include "pairstat/ranking.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pairstat {

enum class TVariant { student, welch };
enum class UMode { exact, asymptotic, automatic };

// Per-group count, mean and centered sum of squares, updated with Welford's
// recurrence. A constant group keeps m2 at exactly zero.
class GroupStats {
public:
    struct Group {
        std::size_t n = 0;
        double mean = 0.0;
        double m2 = 0.0;
    };

    void reset(int k)
    {
        groups_.assign(static_cast<std::size_t>(k), Group{});
    }

    void add(std::int32_t group, double x) noexcept
    {
        Group& g = groups_[static_cast<std::size_t>(group)];
        ++g.n;
        const double delta = x - g.mean;
        g.mean += delta / static_cast<double>(g.n);
        g.m2 += delta * (x - g.mean);
    }

    void set(int j, const Group& g) noexcept { groups_[static_cast<std::size_t>(j)] = g; }

    int k() const noexcept { return static_cast<int>(groups_.size()); }
    const Group& group(int j) const noexcept { return groups_[static_cast<std::size_t>(j)]; }
    std::size_t total() const noexcept;

private:
    std::vector<Group> groups_;
};

// Fills `stats` with k groups from jointly present (label, value) samples.
// codes: dense labels, -1 when missing.
void accumulate_groups(std::span<const std::int32_t> codes, std::span<const double> values,
                       const MissingValue& missing, int k, GroupStats& stats);

struct TTestResult {
    double t = kNaN;
    double p = kNaN;
    double cohens_d = kNaN;
};

TTestResult ttest_from_groups(const GroupStats& stats, TVariant variant);

// Student's t from group sizes, means and the pooled within-group sum of
// squares, which is all the pooled test reads.
TTestResult student_from_pooled(std::size_t n0, std::size_t n1, double mean0, double mean1, double ssw);

// view.xs holds group labels (0 or 1), view.ys the continuous values.
TTestResult ttest_pair(const PairView& view, TVariant variant);

// Null distribution of the Mann-Whitney U statistic for group sizes n1, n2:
// counts(u) is the number of the C(n1 + n2, n1) arrangements with U = u.
class ExactUDistribution {
public:
    std::size_t n1() const noexcept { return n1_; }
    std::size_t n2() const noexcept { return n2_; }
    std::uint64_t total() const noexcept { return total_; }
    // Highest u stored; the full table stores up to n1 * n2.
    std::size_t max_u() const noexcept { return counts_.size() - 1; }
    std::uint64_t count(std::size_t u) const noexcept { return u < counts_.size() ? counts_[u] : 0; }
    std::uint64_t cumulative(std::size_t u) const noexcept;

    // Two-sided p = min(1, 2 P(U <= min(u, n1 n2 - u))) as numerator / total.
    std::uint64_t two_sided_numerator(std::size_t u) const;
    double two_sided_p(std::size_t u) const;

private:
    friend ExactUDistribution exact_u_distribution(std::size_t, std::size_t, std::size_t);

    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> counts_;
};

// True when C(n1 + n2, n1) fits the 63-bit count table.
bool exact_u_feasible(std::size_t n1, std::size_t n2);

// Table for u in [0, min(max_u, n1 * n2)]. Throws TableTooLarge when the
// arrangement count overflows the table.
ExactUDistribution exact_u_distribution(std::size_t n1, std::size_t n2, std::size_t max_u);
ExactUDistribution exact_u_distribution(std::size_t n1, std::size_t n2);

struct MwuResult {
    double u = kNaN;
    double p = kNaN;
    double r = kNaN;  // z / sqrt(n), signed like U - n0 n1 / 2
    bool exact = false;
};

// Mann-Whitney U from the rank sum of group 0. codes are dichotomous codes
// (0, 1, or -1 when missing) indexed by sample.
MwuResult mwu_pair(const RankedFeature& continuous, std::span<const std::int32_t> codes, UMode mode);

// Same, from already-computed rank sums. Exposed for the engine and tests.
MwuResult mwu_from_ranks(double rank_sum0, std::size_t n0, std::size_t n1, double tie_term, UMode mode);

struct AnovaResult {
    double f = kNaN;
    double p = kNaN;
    double partial_eta_sq = kNaN;
};

AnovaResult anova_from_groups(const GroupStats& stats);

// Same from sizes, means and the within-group sum of squares.
AnovaResult anova_from_pooled(std::span<const std::size_t> sizes, std::span<const double> means, double ssw);

// view.xs holds group labels in [0, k), view.ys the continuous values.
AnovaResult anova_pair(const PairView& view, int k);

struct KruskalResult {
    double h = kNaN;
    double p = kNaN;
    double eta_sq = kNaN;
};

// rank_sums[j] and sizes[j] per group over the jointly present samples.
KruskalResult kruskal_from_ranks(std::span<const double> rank_sums, std::span<const std::size_t> sizes,
                                 double tie_term);

// Fills rank_sums[j] and sizes[j] (k entries each) for the samples with a
// label, ranked among themselves.
RankSummary group_rank_sums(const RankedFeature& continuous, std::span<const std::int32_t> codes,
                            std::span<double> rank_sums, std::span<std::size_t> sizes);

KruskalResult kruskal_pair(const RankedFeature& continuous, std::span<const std::int32_t> codes, int k);

}  // namespace pairstat
