#pragma once

#include "pairstat/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pairstat {

struct Chi2Result {
    double chi2 = kNaN;
    double p = kNaN;
    double phi = kNaN;
    double cramers_v = kNaN;
};

// c_g x c_h contingency counts, reusable across pairs.
class ContingencyTable {
public:
    void reset(int rows, int cols)
    {
        rows_ = rows;
        cols_ = cols;
        counts_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
    }
    void add(std::int32_t r, std::int32_t c) noexcept { ++counts_[static_cast<std::size_t>(r * cols_ + c)]; }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::int64_t operator()(int r, int c) const noexcept { return counts_[static_cast<std::size_t>(r * cols_ + c)]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::int64_t> counts_;
};

// Chi-square test of independence without continuity correction. The table
// dimensions are the full-column category counts, so an empty row or column
// means a category vanished under pairwise deletion.
Chi2Result chi2_from_table(const ContingencyTable& table);

// Codes are dense labels with -1 for missing.
Chi2Result chi2_codes(std::span<const std::int32_t> codes_g, std::span<const std::int32_t> codes_h, int c_g, int c_h,
                      ContingencyTable& scratch);

// view holds integer labels; throws LabelOutOfRange for labels outside
// [0, c_g) x [0, c_h).
Chi2Result chi2_pair(const PairView& view, int c_g, int c_h);

}  // namespace pairstat
