#pragma once

#include "pairstat/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pairstat {

// A feature's present samples sorted ascending, computed once per feature so
// pairwise rank statistics only need a linear filtering pass.
struct RankedFeature {
    std::vector<std::uint32_t> order;   // sample indices, stable ascending by value
    std::vector<double> sorted_values;  // values in that order
    std::size_t n_present = 0;
    bool has_ties = false;              // any two present values equal
};

RankedFeature presort_feature(std::span<const double> g, const MissingValue& missing);

struct RankSummary {
    std::size_t n = 0;
    double tie_term = 0.0;  // sum over tie groups of t^3 - t
};

// Walks `feature` once, keeping only samples with keep(index) == true, and
// calls visit(index, rank) with 1-based tie-averaged ranks over the kept set.
template <class Keep, class Visit>
RankSummary for_each_joint_rank(const RankedFeature& feature, Keep&& keep, Visit&& visit)
{
    RankSummary summary;
    const std::size_t total = feature.order.size();
    const std::uint32_t* order = feature.order.data();
    const double* values = feature.sorted_values.data();
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i + 1;
        while (j < total && values[j] == values[i]) {
            ++j;
        }
        if (j == i + 1) {
            if (keep(order[i])) {
                ++summary.n;
                visit(order[i], static_cast<double>(summary.n));
            }
        } else {
            std::size_t t = 0;
            for (std::size_t k = i; k < j; ++k) {
                t += keep(order[k]) ? 1 : 0;
            }
            if (t > 0) {
                const double rank = static_cast<double>(summary.n) + 0.5 * static_cast<double>(t + 1);
                for (std::size_t k = i; k < j; ++k) {
                    if (keep(order[k])) {
                        visit(order[k], rank);
                    }
                }
                const double td = static_cast<double>(t);
                summary.tie_term += td * td * td - td;
                summary.n += t;
            }
        }
        i = j;
    }
    return summary;
}

struct JointRanks {
    std::vector<std::uint32_t> indices;  // kept sample indices, ascending by value
    std::vector<double> ranks;           // rank of each kept sample
    double tie_term = 0.0;
    std::size_t n = 0;
};

// Ranks of `feature` restricted to samples where mask[i] != 0.
JointRanks joint_ranks(const RankedFeature& feature, std::span<const std::uint8_t> mask);

}  // namespace pairstat
