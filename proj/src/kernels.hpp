#pragma once

// Branch-free reductions over dense rows in which missing samples hold 0 and
// a parallel 0/1 mask marks presence. Each sum is split over fixed lanes
// and combined in a fixed order, so results do not depend on threading.

#include "pairstat/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pairstat::kernels {

// Rows shifted by their present-sample mean, zero where missing.
struct CenteredRows {
    std::size_t samples = 0;
    std::vector<double> centered;
    std::vector<double> mask;
    std::vector<double> center;
    std::vector<std::uint8_t> complete;  // no missing sample
    std::vector<double> sum;             // of centered values
    std::vector<double> sumsq;

    const double* x(std::size_t f) const noexcept { return centered.data() + f * samples; }
    const double* m(std::size_t f) const noexcept { return mask.data() + f * samples; }
};

CenteredRows center_rows(const DataMatrix& m);

// One-hot rows of a group matrix: member(f, j) marks the samples with code j.
struct GroupMasks {
    std::size_t samples = 0;
    std::vector<double> data;
    std::vector<std::size_t> offset;  // first row of feature f
    std::vector<int> k;
    std::vector<double> count;        // ones per row
    std::vector<std::uint8_t> complete;  // every sample labelled

    const double* member(std::size_t f, int j) const noexcept
    {
        return data.data() + (offset[f] + static_cast<std::size_t>(j)) * samples;
    }
    double member_count(std::size_t f, int j) const noexcept
    {
        return count[offset[f] + static_cast<std::size_t>(j)];
    }
};

// Only features with at most max_k categories get masks; k[f] is 0 otherwise.
GroupMasks group_masks(const DataMatrix& groups, int max_k);

struct PairSums {
    double n, sx, sy, sxx, syy, sxy;
};

double dot(const double* a, const double* b, std::size_t n);
PairSums pair_sums(const double* x, const double* mx, const double* y, const double* my, std::size_t n);

struct WeightedSums {
    double n, s, ss;  // sum of w*m, w*x, w*x^2
};

WeightedSums weighted_sums(const double* w, const double* x, const double* m, std::size_t n);
// Same with every m equal to 1; n is left to the caller.
WeightedSums weighted_sums_dense(const double* w, const double* x, std::size_t n);

}  // namespace pairstat::kernels
