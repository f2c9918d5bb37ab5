#include "pairstat/continuous.hpp"

#include "pairstat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pairstat {

CorrelationResult PearsonAccumulator::finish() const
{
    CorrelationResult out;
    if (n_ <= 1 || !x_varies_ || !y_varies_) {
        return out;
    }
    const double n = static_cast<double>(n_);
    const double cov = sxy_ - sx_ * sy_ / n;
    const double vx = sxx_ - sx_ * sx_ / n;
    const double vy = syy_ - sy_ * sy_ / n;
    if (!(vx > 0.0) || !(vy > 0.0)) {
        return out;
    }
    const double r = std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
    out.coefficient = r;
    if (n_ >= 3) {
        out.p = pearson_p(r, n);
    }
    return out;
}

double pearson_p(double r, double n)
{
    const double a = std::abs(r);
    if (a >= 1.0) {
        return 0.0;
    }
    // I_{1-r^2}(dof/2, 1/2) is the two-sided t tail at t^2 = dof r^2 / (1 - r^2).
    return std::min(1.0, specfun::reg_inc_beta((1.0 - a) * (1.0 + a), a * a, 0.5 * (n - 2.0), 0.5));
}

std::optional<CorrelationResult> pearson_from_sums(double n, double sx, double sy, double sxx, double syy, double sxy)
{
    constexpr double kCancel = 1e-8;
    CorrelationResult out;
    if (n <= 1.0) {
        return out;
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    if (!(vx > kCancel * sxx) || !(vy > kCancel * syy)) {
        return std::nullopt;
    }
    const double r = std::clamp((sxy - sx * sy / n) / std::sqrt(vx * vy), -1.0, 1.0);
    out.coefficient = r;
    if (n >= 3.0) {
        out.p = pearson_p(r, n);
    }
    return out;
}

CorrelationResult pearson_pair(const PairView& view)
{
    PearsonAccumulator acc;
    for (std::size_t i = 0; i < view.n(); ++i) {
        acc.add(view.xs[i], view.ys[i]);
    }
    return acc.finish();
}

CorrelationResult pearson_rows(std::span<const double> g, std::span<const double> h, const MissingValue& missing)
{
    PearsonAccumulator acc;
    const std::size_t s = std::min(g.size(), h.size());
    for (std::size_t i = 0; i < s; ++i) {
        const double x = g[i];
        const double y = h[i];
        if (!missing.matches(x) && !missing.matches(y)) {
            acc.add(x, y);
        }
    }
    return acc.finish();
}

CorrelationResult spearman_pair(const RankedFeature& g, const RankedFeature& h, std::span<const std::uint8_t> mask_g,
                                std::span<const std::uint8_t> mask_h, std::span<double> scratch)
{
    CorrelationResult out;
    RankSummary rg, rh;
    double cross = 0.0;
    if (!g.has_ties && !h.has_ties) {
        // Without ties the joint rank is a running count of kept samples, so
        // both walks run branch free. scratch holds stale ranks at samples
        // g lacks, and those are multiplied by a zero mask below.
        double count = 0.0;
        for (const std::uint32_t i : g.order) {
            const double keep = mask_h[i];
            count += keep;
            scratch[i] = count * keep;
        }
        double count_h = 0.0;
        for (const std::uint32_t i : h.order) {
            const double keep = mask_g[i];
            count_h += keep;
            cross += (count_h * keep) * scratch[i];
        }
        rg.n = rh.n = static_cast<std::size_t>(count);
    } else {
        rg = for_each_joint_rank(
            g, [&](std::uint32_t i) { return mask_h[i] != 0; }, [&](std::uint32_t i, double rank) { scratch[i] = rank; });
        rh = for_each_joint_rank(
            h, [&](std::uint32_t i) { return mask_g[i] != 0; },
            [&](std::uint32_t i, double rank) { cross += scratch[i] * rank; });
    }

    if (rg.n <= 1) {
        return out;
    }
    // Rank sums of squares follow from n and the tie term alone:
    // sum (r - mean)^2 = (n^3 - n - sum(t^3 - t)) / 12.
    const double n = static_cast<double>(rg.n);
    const double n3 = n * n * n - n;
    const double sgg = (n3 - rg.tie_term) / 12.0;
    const double shh = (n3 - rh.tie_term) / 12.0;
    if (sgg <= 0.0 || shh <= 0.0) {
        return out;
    }
    const double mean = 0.5 * (n + 1.0);
    const double sgh = cross - n * mean * mean;
    const double rho = std::clamp(sgh / std::sqrt(sgg * shh), -1.0, 1.0);
    out.coefficient = rho;
    if (rg.n <= 2) {
        return out;
    }
    out.p = pearson_p(rho, n);
    return out;
}

CorrelationResult spearman_pair(const RankedFeature& g, const RankedFeature& h, std::span<const std::uint8_t> mask_g,
                                std::span<const std::uint8_t> mask_h)
{
    std::vector<double> scratch(mask_g.size());
    return spearman_pair(g, h, mask_g, mask_h, scratch);
}

}  // namespace pairstat
