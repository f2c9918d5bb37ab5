#include "pairstat/matrix.hpp"

#include "pairstat/error.hpp"

#include <algorithm>
#include <string>

namespace pairstat {

std::string_view to_string(Kind kind)
{
    switch (kind) {
    case Kind::continuous: return "continuous";
    case Kind::dichotomous: return "dichotomous";
    case Kind::categorical: return "categorical";
    }
    return "unknown";
}

int DataMatrix::max_category_count() const noexcept
{
    int result = 0;
    for (int c : category_counts_) {
        result = std::max(result, c);
    }
    return result;
}

namespace {

void validate_label(double v, Kind kind, std::size_t f, std::size_t s)
{
    const auto where = [&] { return " (feature " + std::to_string(f) + ", sample " + std::to_string(s) + ")"; };
    if (!std::isfinite(v) || std::trunc(v) != v) {
        throw StatsError(ErrorCode::NonIntegerCategoryLabel, "label " + std::to_string(v) + where());
    }
    if (v < 0) {
        throw StatsError(ErrorCode::NegativeLabel, "label " + std::to_string(v) + where());
    }
    if (kind == Kind::dichotomous && v > 1) {
        throw StatsError(ErrorCode::LabelOutOfRange, "dichotomous label must be 0 or 1" + where());
    }
    if (v > std::numeric_limits<std::int32_t>::max()) {
        throw StatsError(ErrorCode::LabelOutOfRange, "label too large" + where());
    }
}

}  // namespace

DataMatrix make_matrix(std::span<const double> raw, std::size_t rows, std::size_t cols, Kind kind,
                       double na_sentinel, bool features_on_rows)
{
    if (rows == 0 || cols == 0) {
        throw StatsError(ErrorCode::EmptyMatrix, "matrix has no rows or no columns");
    }
    if (raw.size() != rows * cols) {
        throw StatsError(ErrorCode::InvalidArgument, "buffer size does not match rows * cols");
    }

    DataMatrix m;
    m.kind_ = kind;
    m.missing_ = MissingValue(na_sentinel);
    m.features_ = features_on_rows ? rows : cols;
    m.samples_ = features_on_rows ? cols : rows;

    if (features_on_rows) {
        m.values_.assign(raw.begin(), raw.end());
    } else {
        m.values_.resize(raw.size());
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                m.values_[c * rows + r] = raw[r * cols + c];
            }
        }
    }

    if (kind == Kind::continuous) {
        return m;
    }

    m.codes_.assign(m.values_.size(), -1);
    m.category_counts_.assign(m.features_, 0);
    m.labels_.resize(m.features_);
    std::vector<double> labels;
    for (std::size_t f = 0; f < m.features_; ++f) {
        labels.clear();
        const auto row = m.row(f);
        for (std::size_t s = 0; s < m.samples_; ++s) {
            if (m.missing_.matches(row[s])) {
                continue;
            }
            validate_label(row[s], kind, f, s);
            labels.push_back(row[s]);
        }
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

        auto codes = m.codes_.begin() + static_cast<std::ptrdiff_t>(f * m.samples_);
        for (std::size_t s = 0; s < m.samples_; ++s) {
            if (!m.missing_.matches(row[s])) {
                codes[static_cast<std::ptrdiff_t>(s)] = static_cast<std::int32_t>(
                    std::lower_bound(labels.begin(), labels.end(), row[s]) - labels.begin());
            }
        }
        m.category_counts_[f] = static_cast<int>(labels.size());
        m.labels_[f] = labels;
    }
    return m;
}

DataMatrix make_matrix(const std::vector<std::vector<double>>& raw, Kind kind, double na_sentinel,
                       bool features_on_rows)
{
    if (raw.empty() || raw.front().empty()) {
        throw StatsError(ErrorCode::EmptyMatrix, "matrix has no rows or no columns");
    }
    const std::size_t cols = raw.front().size();
    std::vector<double> flat;
    flat.reserve(raw.size() * cols);
    for (const auto& r : raw) {
        if (r.size() != cols) {
            throw StatsError(ErrorCode::InvalidArgument, "ragged input rows");
        }
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return make_matrix(flat, raw.size(), cols, kind, na_sentinel, features_on_rows);
}

void pair_view_into(std::span<const double> g, std::span<const double> h, const MissingValue& missing_g,
                    const MissingValue& missing_h, PairView& out)
{
    if (g.size() != h.size()) {
        throw StatsError(ErrorCode::SampleCountMismatch, "features differ in length");
    }
    out.xs.clear();
    out.ys.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!missing_g.matches(g[i]) && !missing_h.matches(h[i])) {
            out.xs.push_back(g[i]);
            out.ys.push_back(h[i]);
        }
    }
}

PairView pair_view(std::span<const double> g, std::span<const double> h, const MissingValue& missing_g,
                   const MissingValue& missing_h)
{
    PairView view;
    pair_view_into(g, h, missing_g, missing_h, view);
    return view;
}

}  // namespace pairstat
