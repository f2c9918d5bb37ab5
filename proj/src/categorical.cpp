#include "pairstat/categorical.hpp"

#include "pairstat/error.hpp"
#include "pairstat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pairstat {

Chi2Result chi2_from_table(const ContingencyTable& table)
{
    Chi2Result out;
    const int rows = table.rows();
    const int cols = table.cols();
    if (rows == 0 || cols == 0) {
        return out;
    }
    std::vector<double> row_sums(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> col_sums(static_cast<std::size_t>(cols), 0.0);
    double n = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double o = static_cast<double>(table(r, c));
            row_sums[static_cast<std::size_t>(r)] += o;
            col_sums[static_cast<std::size_t>(c)] += o;
            n += o;
        }
    }
    if (n == 0.0) {
        return out;
    }
    const auto empty = [](double s) { return s == 0.0; };
    if (std::any_of(row_sums.begin(), row_sums.end(), empty) || std::any_of(col_sums.begin(), col_sums.end(), empty)) {
        return out;
    }

    double chi2 = 0.0;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double e = row_sums[static_cast<std::size_t>(r)] * col_sums[static_cast<std::size_t>(c)] / n;
            const double d = static_cast<double>(table(r, c)) - e;
            chi2 += d * d / e;
        }
    }
    out.chi2 = chi2;
    out.phi = std::sqrt(chi2 / n);
    const int smaller = std::min(rows, cols);
    if (smaller > 1) {
        out.p = specfun::chi2_sf(chi2, static_cast<double>((rows - 1) * (cols - 1)));
        out.cramers_v = std::sqrt(chi2 / (n * static_cast<double>(smaller - 1)));
    }
    return out;
}

Chi2Result chi2_codes(std::span<const std::int32_t> codes_g, std::span<const std::int32_t> codes_h, int c_g, int c_h,
                      ContingencyTable& scratch)
{
    scratch.reset(c_g, c_h);
    const std::size_t s = std::min(codes_g.size(), codes_h.size());
    for (std::size_t i = 0; i < s; ++i) {
        const std::int32_t a = codes_g[i];
        const std::int32_t b = codes_h[i];
        if (a >= 0 && b >= 0) {
            scratch.add(a, b);
        }
    }
    return chi2_from_table(scratch);
}

Chi2Result chi2_pair(const PairView& view, int c_g, int c_h)
{
    const auto label = [](double v, int bound) {
        if (!(v >= 0.0) || v >= bound || std::trunc(v) != v) {
            throw StatsError(ErrorCode::LabelOutOfRange,
                             "label " + std::to_string(v) + " outside [0, " + std::to_string(bound) + ")");
        }
        return static_cast<std::int32_t>(v);
    };
    ContingencyTable table;
    table.reset(c_g, c_h);
    for (std::size_t i = 0; i < view.n(); ++i) {
        table.add(label(view.xs[i], c_g), label(view.ys[i], c_h));
    }
    return chi2_from_table(table);
}

}  // namespace pairstat
