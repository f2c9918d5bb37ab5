#include "pairstat/error.hpp"
#include "pairstat/matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace pairstat;

namespace {

void check_code(ErrorCode expected, auto&& fn)
{
    try {
        fn();
        FAIL("expected StatsError");
    } catch (const StatsError& e) {
        CHECK(e.code() == expected);
    }
}

}  // namespace

TEST_CASE("orientation: rows and columns give the same logical matrix")
{
    const std::vector<double> rows = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> cols(12);
    for (std::size_t f = 0; f < 3; ++f) {
        for (std::size_t s = 0; s < 4; ++s) {
            cols[s * 3 + f] = rows[f * 4 + s];
        }
    }
    const auto a = make_matrix(rows, 3, 4, Kind::continuous, kNaN, true);
    const auto b = make_matrix(cols, 4, 3, Kind::continuous, kNaN, false);
    REQUIRE(a.features() == 3);
    REQUIRE(a.samples() == 4);
    REQUIRE(b.features() == 3);
    REQUIRE(b.samples() == 4);
    for (std::size_t f = 0; f < 3; ++f) {
        for (std::size_t s = 0; s < 4; ++s) {
            CHECK(a(f, s) == b(f, s));
        }
    }
}

TEST_CASE("category count is the number of distinct present labels")
{
    const double m = -9.0;
    const auto dm = make_matrix({{0, 2, 1, m, 2}}, Kind::categorical, m);
    CHECK(dm.category_count(0) == 3);
    const auto codes = dm.codes(0);
    CHECK(codes[0] == 0);
    CHECK(codes[1] == 2);
    CHECK(codes[2] == 1);
    CHECK(codes[3] == -1);
    CHECK(codes[4] == 2);
}

TEST_CASE("non-contiguous labels are densely coded")
{
    const auto dm = make_matrix({{7, 3, 3, 11}}, Kind::categorical, kNaN);
    CHECK(dm.category_count(0) == 3);
    CHECK(dm.category_labels(0) == std::vector<double>{3, 7, 11});
    CHECK(dm.codes(0)[0] == 1);
    CHECK(dm.codes(0)[3] == 2);
}

TEST_CASE("label validation")
{
    check_code(ErrorCode::NonIntegerCategoryLabel, [] { make_matrix({{0, 1.5}}, Kind::categorical, kNaN); });
    check_code(ErrorCode::NonIntegerCategoryLabel,
               [] { make_matrix({{0, INFINITY}}, Kind::categorical, -1.0); });
    check_code(ErrorCode::NegativeLabel, [] { make_matrix({{0, -2}}, Kind::categorical, kNaN); });
    check_code(ErrorCode::LabelOutOfRange, [] { make_matrix({{0, 2}}, Kind::dichotomous, kNaN); });
    check_code(ErrorCode::EmptyMatrix, [] { make_matrix(std::vector<std::vector<double>>{}, Kind::continuous, kNaN); });
    check_code(ErrorCode::InvalidArgument, [] { make_matrix({{1, 2}, {3}}, Kind::continuous, kNaN); });
    // A sentinel that is itself a negative number is not a label.
    CHECK_NOTHROW(make_matrix({{0, -1}}, Kind::dichotomous, -1.0));
}

TEST_CASE("sentinel matching")
{
    const MissingValue nan_na;
    CHECK(nan_na.matches(kNaN));
    CHECK(nan_na.matches(-kNaN));
    CHECK_FALSE(nan_na.matches(0.0));

    const MissingValue nine(-999.0);
    CHECK(nine.matches(-999.0));
    CHECK_FALSE(nine.matches(kNaN));
    CHECK_FALSE(nine.matches(-998.9999999));
}

TEST_CASE("pair view keeps jointly present samples in order")
{
    const MissingValue na;
    const std::vector<double> g = {1, 2, kNaN, 4};
    const std::vector<double> h = {5, kNaN, 7, 8};
    const auto v = pair_view(g, h, na, na);
    REQUIRE(v.n() == 2);
    CHECK(v.xs == std::vector<double>{1, 4});
    CHECK(v.ys == std::vector<double>{5, 8});

    const std::vector<double> full = {1, 2, 3};
    const auto w = pair_view(full, full, na, na);
    CHECK(w.n() == 3);
    CHECK(w.xs == full);

    const std::vector<double> none = {kNaN, kNaN, kNaN};
    CHECK(pair_view(none, full, na, na).n() == 0);

    const std::vector<double> shorter = {1, 2};
    check_code(ErrorCode::SampleCountMismatch, [&] { pair_view(full, shorter, na, na); });
}
