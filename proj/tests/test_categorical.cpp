#include "pairstat/categorical.hpp"
#include "pairstat/error.hpp"
#include "pairstat/matrix.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace pairstat;

namespace {

PairView from_counts(const std::vector<std::vector<int>>& counts)
{
    PairView v;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t j = 0; j < counts[i].size(); ++j) {
            for (int k = 0; k < counts[i][j]; ++k) {
                v.xs.push_back(static_cast<double>(i));
                v.ys.push_back(static_cast<double>(j));
            }
        }
    }
    return v;
}

}  // namespace

TEST_CASE("chi2: exact independence")
{
    const auto r = chi2_pair(from_counts({{10, 10}, {10, 10}}), 2, 2);
    CHECK(r.chi2 == 0.0);
    CHECK(r.p == 1.0);
    CHECK(r.phi == 0.0);
    CHECK(r.cramers_v == 0.0);
}

TEST_CASE("chi2: perfect association")
{
    const auto r = chi2_pair(from_counts({{5, 0}, {0, 5}}), 2, 2);
    CHECK(r.chi2 == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(r.phi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.cramers_v == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.p == doctest::Approx(0.001565402258002549).epsilon(1e-12));
}

TEST_CASE("chi2: rectangular table")
{
    const auto r = chi2_pair(from_counts({{3, 1, 0}, {1, 2, 4}}), 2, 3);
    // scipy.stats.chi2_contingency(correction=False)
    CHECK(r.chi2 == doctest::Approx(4.877976190476191).epsilon(1e-14));
    CHECK(r.p == doctest::Approx(0.08724909458191425).epsilon(1e-12));
    CHECK(r.phi == doctest::Approx(std::sqrt(4.877976190476191 / 11.0)).epsilon(1e-14));
    CHECK(r.cramers_v == doctest::Approx(std::sqrt(4.877976190476191 / 11.0)).epsilon(1e-14));
}

TEST_CASE("chi2: a category lost to missing values makes the pair undefined")
{
    // Feature h has category 2 in its full row, but that sample is missing in g.
    const auto dm = make_matrix({{0, 1, 0, 1, kNaN}, {0, 1, 1, 0, 2}}, Kind::categorical, kNaN);
    ContingencyTable table;
    const auto r = chi2_codes(dm.codes(0), dm.codes(1), dm.category_count(0), dm.category_count(1), table);
    CHECK(std::isnan(r.chi2));
    CHECK(std::isnan(r.p));
    CHECK(std::isnan(r.phi));
    CHECK(std::isnan(r.cramers_v));
}

TEST_CASE("chi2: a single-category feature has no degrees of freedom")
{
    const auto r = chi2_pair(from_counts({{3, 4}}), 1, 2);
    CHECK(r.chi2 == 0.0);
    CHECK(std::isnan(r.p));
    CHECK(std::isnan(r.cramers_v));
}

TEST_CASE("chi2: labels outside the declared range")
{
    PairView v;
    v.xs = {0, 1, 2};
    v.ys = {0, 1, 1};
    CHECK_THROWS_AS(chi2_pair(v, 2, 2), StatsError);
}
