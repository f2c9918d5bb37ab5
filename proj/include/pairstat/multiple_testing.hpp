#pragma once

#include "pairstat/matrix.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace pairstat {

enum class Correction { bonferroni, bh, by };

Correction parse_correction(std::string_view name);
std::string_view to_string(Correction method);

// Adjusts one family of p-values. NaN entries are not part of the family:
// they do not count towards m and stay NaN.
std::vector<double> adjust_family(std::span<const double> p, Correction method);

// Adjusts a whole p-value matrix. With symmetric == true the family is the
// strict upper triangle, the result is mirrored and the diagonal is NaN;
// otherwise every cell belongs to the family.
Matrix adjust(const Matrix& p, Correction method, bool symmetric);

}  // namespace pairstat
