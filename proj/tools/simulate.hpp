#pragma once

#include "pairstat/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pairstat::cli {

struct SimulationSpec {
    std::size_t features = 0;
    std::size_t samples = 0;
    Kind kind = Kind::continuous;
    int categories = 4;  // ignored for continuous, forced to 2 for dichotomous
    double na_ratio = 0.0;
    std::uint64_t seed = 0;
};

// floor(na_ratio * samples), tolerant of ratios like 0.1 that are not exact
// in binary.
std::size_t missing_per_feature(std::size_t samples, double na_ratio);

// Features x samples, row-major, NaN marking missing entries. Continuous
// values are uniform on [0, 1); labels are 0..c-1 with every label present
// in every feature. Each feature gets exactly missing_per_feature() NaNs at
// uniformly random positions. Throws InputError when the labels cannot all
// fit among the present entries.
std::vector<double> simulate(const SimulationSpec& spec);

DataMatrix simulate_matrix(const SimulationSpec& spec);

}  // namespace pairstat::cli
