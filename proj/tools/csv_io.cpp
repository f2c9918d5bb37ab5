#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pairstat::cli {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

char separator_for(std::string_view format)
{
    if (format == "csv") return ',';
    if (format == "tsv") return '\t';
    throw InputError("unknown format '" + std::string(format) + "'");
}

double parse_number(std::string_view cell)
{
    const auto text = trim(cell);
    if (text.empty()) {
        throw InputError("empty cell");
    }
    const char* first = text.data();
    if (*first == '+') ++first;
    double value = 0.0;
    const auto [end, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw InputError("'" + std::string(text) + "' is not a number");
    }
    return value;
}

Table parse_table(std::istream& in, char sep, const std::string& source)
{
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, sep);
        if (header) {
            if (cells.size() < 2) {
                throw InputError(source + ": header needs at least one column id");
            }
            table.corner = std::string(trim(cells[0]));
            for (std::size_t c = 1; c < cells.size(); ++c) table.col_ids.emplace_back(trim(cells[c]));
            header = false;
            continue;
        }
        if (cells.size() != table.cols() + 1) {
            throw InputError(source + ": line " + std::to_string(line_no) + " has " + std::to_string(cells.size())
                             + " cells, expected " + std::to_string(table.cols() + 1));
        }
        table.row_ids.emplace_back(trim(cells[0]));
        for (std::size_t c = 1; c < cells.size(); ++c) {
            try {
                table.values.push_back(parse_number(cells[c]));
            } catch (const InputError& e) {
                throw InputError(source + ": malformed numeric cell at row " + std::to_string(table.rows()) + ", column "
                                 + std::to_string(c) + " (line " + std::to_string(line_no) + "): " + e.what());
            }
        }
    }
    if (header) {
        throw InputError(source + ": file is empty");
    }
    if (table.rows() == 0) {
        throw InputError(source + ": no data rows");
    }
    return table;
}

Table read_table(const std::filesystem::path& path, char sep)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path.string() + "'");
    }
    return parse_table(in, sep, path.string());
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_table(std::ostream& out, const Table& table, char sep)
{
    out << table.corner;
    for (const auto& id : table.col_ids) out << sep << id;
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out << table.row_ids[r];
        for (std::size_t c = 0; c < table.cols(); ++c) out << sep << format_number(table.values[r * table.cols() + c]);
        out << '\n';
    }
}

void write_table(const std::filesystem::path& path, const Table& table, char sep)
{
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write '" + path.string() + "'");
    }
    write_table(out, table, sep);
    if (!out) {
        throw InputError("failed writing '" + path.string() + "'");
    }
}

Kind infer_kind(std::span<const double> values, const MissingValue& missing)
{
    bool binary = true;
    for (double x : values) {
        if (missing.matches(x)) continue;
        if (!std::isfinite(x) || x != std::floor(x)) return Kind::continuous;
        binary = binary && (x == 0.0 || x == 1.0);
    }
    return binary ? Kind::dichotomous : Kind::categorical;
}

LoadedMatrix load_matrix(const Table& table, bool features_on_rows, std::optional<Kind> kind, double na_value)
{
    const Kind k = kind ? *kind : infer_kind(table.values, MissingValue(na_value));
    LoadedMatrix out{make_matrix(table.values, table.rows(), table.cols(), k, na_value, features_on_rows),
                     features_on_rows ? table.row_ids : table.col_ids};
    return out;
}

}  // namespace pairstat::cli
