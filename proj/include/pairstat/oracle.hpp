#pragma once

// Slow reference implementations of every test. Each pair is filtered into
// fresh vectors, ranked with a fresh sort and evaluated with textbook
// formulas; distribution tails come from Boost.Math. Nothing here is shared
// with the fast path beyond the data containers.

#include "pairstat/matrix.hpp"
#include "pairstat/mixed.hpp"
#include "pairstat/multiple_testing.hpp"
#include "pairstat/request.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pairstat::oracle {

// Keyed by output name: "stat", "p" and the test's effect names.
using Result = std::map<std::string, double>;

Result pearson(std::span<const double> x, std::span<const double> y, const MissingValue& na);
Result spearman(std::span<const double> x, std::span<const double> y, const MissingValue& na);
// Categories are the distinct labels of the full rows, before pairwise deletion.
Result chi2(std::span<const double> x, std::span<const double> y, const MissingValue& na);

// labels: group labels (0/1 for ttest and mwu), values: continuous.
Result ttest(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
             const MissingValue& na_values, TVariant variant);
Result mwu(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
           const MissingValue& na_values, UMode mode);
Result anova(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
             const MissingValue& na_values);
Result kruskal(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
               const MissingValue& na_values);

// Null distribution of U by the recurrence
// N(a, b, u) = N(a - 1, b, u - b) + N(a, b - 1, u). Entry u is the count.
std::vector<std::uint64_t> exact_u_counts(std::size_t n0, std::size_t n1);

struct Rational {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;
};

// Two-sided exact p of U for x0 vs x1 by listing every group assignment and
// counting those at least as far from n0 n1 / 2 as the observed U. Requires
// n0 + n1 <= 12 and tie-free values; throws TooLarge otherwise.
Rational permutation_mwu(std::span<const double> x0, std::span<const double> x1);

// Adjusted p by the definition: each value takes the minimum of the scaled
// p over its own rank and every higher rank, evaluated without a running
// minimum. Quadratic in the family size.
std::vector<double> adjust_bruteforce(std::span<const double> p, Correction method);

// Sort-based variant used by run().
std::vector<double> adjust_sorted(std::span<const double> p, Correction method);
Matrix adjust_matrix(const Matrix& p, Correction method, bool symmetric);

// Pair-by-pair engine with the same result layout as pairstat::run.
ResultSet run(const TestRequest& request, const DataMatrix& matrix);
ResultSet run(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values);

}  // namespace pairstat::oracle
