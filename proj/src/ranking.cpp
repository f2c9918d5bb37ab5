#include "pairstat/ranking.hpp"

#include <algorithm>

namespace pairstat {

RankedFeature presort_feature(std::span<const double> g, const MissingValue& missing)
{
    RankedFeature out;
    out.order.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!missing.matches(g[i])) {
            out.order.push_back(static_cast<std::uint32_t>(i));
        }
    }
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return g[a] < g[b]; });
    out.sorted_values.resize(out.order.size());
    std::transform(out.order.begin(), out.order.end(), out.sorted_values.begin(),
                   [&](std::uint32_t i) { return g[i]; });
    out.n_present = out.order.size();
    out.has_ties = std::adjacent_find(out.sorted_values.begin(), out.sorted_values.end()) != out.sorted_values.end();
    return out;
}

JointRanks joint_ranks(const RankedFeature& feature, std::span<const std::uint8_t> mask)
{
    JointRanks out;
    const auto summary = for_each_joint_rank(
        feature, [&](std::uint32_t i) { return mask[i] != 0; },
        [&](std::uint32_t i, double rank) {
            out.indices.push_back(i);
            out.ranks.push_back(rank);
        });
    out.n = summary.n;
    out.tie_term = summary.tie_term;
    return out;
}

}  // namespace pairstat
