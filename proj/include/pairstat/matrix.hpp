#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace pairstat {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Dense row-major 2-D array of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class Kind { continuous, dichotomous, categorical };

std::string_view to_string(Kind kind);

// Missing-value marker. A NaN sentinel matches any NaN; any other sentinel
// matches only its exact bit pattern.
class MissingValue {
public:
    explicit MissingValue(double sentinel = kNaN) noexcept
        : bits_(std::bit_cast<std::uint64_t>(sentinel)), is_nan_(std::isnan(sentinel)) {}

    bool matches(double x) const noexcept
    {
        return is_nan_ ? std::isnan(x) : std::bit_cast<std::uint64_t>(x) == bits_;
    }

    double value() const noexcept { return std::bit_cast<double>(bits_); }
    bool is_nan() const noexcept { return is_nan_; }

private:
    std::uint64_t bits_;
    bool is_nan_;
};

// Feature x sample matrix with a missing-value sentinel. For dichotomous and
// categorical matrices every feature also carries dense category codes
// (-1 = missing) and the set of labels seen in the full column.
class DataMatrix {
public:
    std::size_t features() const noexcept { return features_; }
    std::size_t samples() const noexcept { return samples_; }
    Kind kind() const noexcept { return kind_; }
    const MissingValue& missing_value() const noexcept { return missing_; }

    std::span<const double> row(std::size_t f) const noexcept
    {
        return {values_.data() + f * samples_, samples_};
    }
    double operator()(std::size_t f, std::size_t s) const noexcept { return values_[f * samples_ + s]; }
    bool missing(std::size_t f, std::size_t s) const noexcept { return missing_.matches((*this)(f, s)); }

    bool has_categories() const noexcept { return kind_ != Kind::continuous; }

    // Dense codes in [0, category_count(f)), ordered like the original labels.
    std::span<const std::int32_t> codes(std::size_t f) const noexcept
    {
        return {codes_.data() + f * samples_, samples_};
    }
    int category_count(std::size_t f) const noexcept { return category_counts_[f]; }
    std::span<const int> category_counts() const noexcept { return category_counts_; }
    const std::vector<double>& category_labels(std::size_t f) const noexcept { return labels_[f]; }

    int max_category_count() const noexcept;

private:
    friend DataMatrix make_matrix(std::span<const double>, std::size_t, std::size_t, Kind, double, bool);

    std::size_t features_ = 0;
    std::size_t samples_ = 0;
    Kind kind_ = Kind::continuous;
    MissingValue missing_;
    std::vector<double> values_;
    std::vector<std::int32_t> codes_;
    std::vector<int> category_counts_;
    std::vector<std::vector<double>> labels_;
};

// Builds a DataMatrix from a rows x cols row-major buffer. With
// features_on_rows == false the buffer is read as samples x features.
DataMatrix make_matrix(std::span<const double> raw, std::size_t rows, std::size_t cols, Kind kind,
                       double na_sentinel, bool features_on_rows = true);

DataMatrix make_matrix(const std::vector<std::vector<double>>& raw, Kind kind, double na_sentinel,
                       bool features_on_rows = true);

// Jointly non-missing samples of two features, in sample order.
struct PairView {
    std::vector<double> xs;
    std::vector<double> ys;

    std::size_t n() const noexcept { return xs.size(); }
};

PairView pair_view(std::span<const double> g, std::span<const double> h, const MissingValue& missing_g,
                   const MissingValue& missing_h);

// Same as pair_view but refills a caller-owned buffer.
void pair_view_into(std::span<const double> g, std::span<const double> h, const MissingValue& missing_g,
                    const MissingValue& missing_h, PairView& out);

}  // namespace pairstat
