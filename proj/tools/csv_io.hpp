#pragma once

#include "pairstat/matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pairstat::cli {

// Problems with files, cells or flags; the CLI exits with status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A delimited numeric table: header row of column ids, first column of row
// ids, values row-major.
struct Table {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    std::vector<double> values;
    std::string corner = "feature";

    std::size_t rows() const noexcept { return row_ids.size(); }
    std::size_t cols() const noexcept { return col_ids.size(); }
};

char separator_for(std::string_view format);

double parse_number(std::string_view cell);
Table parse_table(std::istream& in, char sep, const std::string& source);
Table read_table(const std::filesystem::path& path, char sep);

// 17 significant digits, so values survive a round trip unchanged. NaN is
// written as "nan".
std::string format_number(double x);
void write_table(std::ostream& out, const Table& table, char sep);
void write_table(const std::filesystem::path& path, const Table& table, char sep);

// Continuous if any present value is fractional or infinite, dichotomous if
// every present value is 0 or 1, categorical otherwise.
Kind infer_kind(std::span<const double> values, const MissingValue& missing);

struct LoadedMatrix {
    DataMatrix matrix;
    std::vector<std::string> feature_ids;
};

// Reads a table and builds a DataMatrix. Features are rows of the file
// unless features_on_rows is false.
LoadedMatrix load_matrix(const Table& table, bool features_on_rows, std::optional<Kind> kind, double na_value);

}  // namespace pairstat::cli
