#include "pairstat/error.hpp"
#include "pairstat/mixed.hpp"
#include "pairstat/ranking.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace pairstat;

namespace {

// Flattens groups into (labels, values) with group index as label.
PairView grouped(const std::vector<std::vector<double>>& groups)
{
    PairView v;
    for (std::size_t j = 0; j < groups.size(); ++j) {
        for (double x : groups[j]) {
            v.xs.push_back(static_cast<double>(j));
            v.ys.push_back(x);
        }
    }
    return v;
}

struct Coded {
    RankedFeature ranked;
    std::vector<std::int32_t> codes;
};

Coded coded(const std::vector<std::vector<double>>& groups)
{
    const auto v = grouped(groups);
    Coded c;
    c.ranked = presort_feature(v.ys, MissingValue());
    for (double x : v.xs) c.codes.push_back(static_cast<std::int32_t>(x));
    return c;
}

bool all_nan(std::initializer_list<double> xs)
{
    for (double x : xs) {
        if (!std::isnan(x)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("t-test: identical groups")
{
    const auto r = ttest_pair(grouped({{1, 2, 3}, {1, 2, 3}}), TVariant::student);
    CHECK(r.t == 0.0);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.cohens_d == 0.0);
}

TEST_CASE("t-test: Student hand example")
{
    const auto r = ttest_pair(grouped({{1, 2, 3, 4}, {3, 4, 5, 6}}), TVariant::student);
    CHECK(r.t == doctest::Approx(-2.0 / std::sqrt(5.0 / 6.0)).epsilon(1e-14));
    // scipy.stats.ttest_ind
    CHECK(r.p == doctest::Approx(0.07098765432098764).epsilon(1e-12));
    CHECK(r.cohens_d == doctest::Approx(-2.0 / std::sqrt(5.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("t-test: Welch")
{
    const auto r = ttest_pair(grouped({{1, 2, 3, 4}, {3, 4, 5, 9}}), TVariant::welch);
    // scipy.stats.ttest_ind(equal_var=False)
    CHECK(r.t == doctest::Approx(-1.8773044091622955).epsilon(1e-13));
    CHECK(r.p == doctest::Approx(0.1276804127833924).epsilon(1e-11));
    CHECK(r.cohens_d == doctest::Approx(-1.327454678070064).epsilon(1e-13));
}

TEST_CASE("t-test: zero pooled deviation is undefined")
{
    const auto s = ttest_pair(grouped({{2, 2}, {2, 2}}), TVariant::student);
    CHECK(all_nan({s.t, s.p, s.cohens_d}));
    const auto w = ttest_pair(grouped({{2, 2}, {3, 3}}), TVariant::welch);
    CHECK(all_nan({w.t, w.p, w.cohens_d}));
}

TEST_CASE("t-test: a group with fewer than two samples is undefined")
{
    const auto r = ttest_pair(grouped({{1}, {3, 4, 5}}), TVariant::student);
    CHECK(all_nan({r.t, r.p, r.cohens_d}));
    const auto e = ttest_pair(grouped({{}, {3, 4, 5}}), TVariant::welch);
    CHECK(all_nan({e.t, e.p, e.cohens_d}));
}

TEST_CASE("exact U distribution: small tables")
{
    const auto d11 = exact_u_distribution(1, 1);
    CHECK(d11.count(0) == 1);
    CHECK(d11.count(1) == 1);
    CHECK(d11.total() == 2);

    const auto d22 = exact_u_distribution(2, 2);
    std::vector<std::uint64_t> counts;
    for (std::size_t u = 0; u <= 4; ++u) counts.push_back(d22.count(u));
    CHECK(counts == std::vector<std::uint64_t>{1, 1, 2, 1, 1});
    CHECK(d22.total() == 6);
}

TEST_CASE("exact U distribution: symmetry and totals")
{
    for (std::size_t n1 = 1; n1 <= 9; ++n1) {
        for (std::size_t n2 = 1; n2 <= 9; ++n2) {
            const auto d = exact_u_distribution(n1, n2);
            std::uint64_t sum = 0;
            for (std::size_t u = 0; u <= n1 * n2; ++u) {
                CHECK(d.count(u) == d.count(n1 * n2 - u));
                sum += d.count(u);
            }
            CHECK(sum == d.total());
        }
    }
}

TEST_CASE("exact U distribution: size cap")
{
    CHECK(exact_u_feasible(32, 32));
    CHECK(exact_u_feasible(60, 4));
    CHECK_FALSE(exact_u_feasible(40, 40));
    CHECK_THROWS_AS(exact_u_distribution(40, 40), StatsError);
}

TEST_CASE("mwu: exact small example")
{
    const auto c = coded({{1, 2}, {3, 4}});
    const auto r = mwu_pair(c.ranked, c.codes, UMode::exact);
    CHECK(r.u == 0.0);
    CHECK(r.p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(r.exact);
}

TEST_CASE("mwu: exact p matches scipy")
{
    const auto c = coded({{1, 2, 3, 7, 9}, {4, 5, 6, 8, 10, 11}});
    const auto r = mwu_pair(c.ranked, c.codes, UMode::automatic);
    CHECK(r.exact);
    CHECK(r.u == 7.0);
    CHECK(r.p == doctest::Approx(82.0 / 462.0).epsilon(1e-15));
    CHECK(r.r == doctest::Approx(-0.41286141192238524).epsilon(1e-12));
}

TEST_CASE("mwu: asymptotic with continuity correction")
{
    const auto centered = coded({{1, 4}, {2, 3}});
    const auto z = mwu_pair(centered.ranked, centered.codes, UMode::asymptotic);
    CHECK(z.u == 2.0);
    CHECK(z.p == 1.0);
    CHECK_FALSE(z.exact);

    const auto c = coded({{1, 2, 3, 7, 9}, {4, 5, 6, 8, 10, 11}});
    const auto r = mwu_pair(c.ranked, c.codes, UMode::asymptotic);
    CHECK(r.p == doctest::Approx(0.17090352023079747).epsilon(1e-12));
}

TEST_CASE("mwu: ties use the tie-corrected normal approximation")
{
    const auto c = coded({{1, 2, 2, 7, 9}, {4, 5, 6, 9, 10, 11}});
    const auto r = mwu_pair(c.ranked, c.codes, UMode::automatic);
    CHECK_FALSE(r.exact);
    CHECK(r.u == 6.5);
    CHECK(r.p == doctest::Approx(0.14230040238845926).epsilon(1e-12));
    CHECK(r.r == doctest::Approx(-0.4424010108874647).epsilon(1e-12));
    CHECK_THROWS_AS(mwu_pair(c.ranked, c.codes, UMode::exact), StatsError);
}

TEST_CASE("mwu: an empty group is undefined")
{
    Coded c = coded({{1, 2, 3}, {4, 5}});
    c.codes[3] = -1;
    c.codes[4] = -1;
    const auto r = mwu_pair(c.ranked, c.codes, UMode::automatic);
    CHECK(all_nan({r.u, r.p, r.r}));
}

TEST_CASE("mwu: all values tied")
{
    const auto c = coded({{5, 5}, {5, 5, 5}});
    const auto r = mwu_pair(c.ranked, c.codes, UMode::automatic);
    CHECK(r.u == 3.0);
    CHECK(all_nan({r.p, r.r}));
}

TEST_CASE("anova: identical groups")
{
    const auto r = anova_pair(grouped({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}), 3);
    CHECK(r.f == 0.0);
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.partial_eta_sq == 0.0);
}

TEST_CASE("anova: zero within-group variance")
{
    const auto r = anova_pair(grouped({{1, 1}, {2, 2}}), 2);
    CHECK(std::isinf(r.f));
    CHECK(r.f > 0);
    CHECK(r.p == 0.0);
    CHECK(r.partial_eta_sq == 1.0);

    const auto same = anova_pair(grouped({{2, 2}, {2, 2}}), 2);
    CHECK(all_nan({same.f, same.p, same.partial_eta_sq}));
}

TEST_CASE("anova: three groups")
{
    const auto r = anova_pair(grouped({{1, 2}, {3, 4}, {5, 6}}), 3);
    CHECK(r.f == doctest::Approx(16.0).epsilon(1e-14));
    // scipy.stats.f_oneway
    CHECK(r.p == doctest::Approx(0.025094573304390855).epsilon(1e-12));
    CHECK(r.partial_eta_sq == doctest::Approx(16.0 / 17.5).epsilon(1e-14));
}

TEST_CASE("anova: an empty category is undefined")
{
    const auto r = anova_pair(grouped({{1, 2}, {}, {5, 6}}), 3);
    CHECK(all_nan({r.f, r.p, r.partial_eta_sq}));
}

TEST_CASE("kruskal: hand example")
{
    const auto c = coded({{1, 4}, {2, 5}, {3, 6}});
    const auto r = kruskal_pair(c.ranked, c.codes, 3);
    CHECK(r.h == doctest::Approx(8.0 / 7.0).epsilon(1e-14));
    CHECK(r.p == doctest::Approx(std::exp(-4.0 / 7.0)).epsilon(1e-13));
    CHECK(r.eta_sq == doctest::Approx((8.0 / 7.0 - 2.0) / 3.0).epsilon(1e-14));
}

TEST_CASE("kruskal: equal rank sums")
{
    const auto c = coded({{1, 6}, {2, 5}, {3, 4}});
    const auto r = kruskal_pair(c.ranked, c.codes, 3);
    CHECK(r.h == doctest::Approx(0.0));
    CHECK(r.p == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kruskal: an empty category is undefined")
{
    const auto c = coded({{1, 4}, {2, 5}, {3, 6}});
    const auto r = kruskal_pair(c.ranked, c.codes, 4);
    CHECK(all_nan({r.h, r.p, r.eta_sq}));
}

TEST_CASE("kruskal: all values tied")
{
    const auto c = coded({{1, 1}, {1, 1}});
    const auto r = kruskal_pair(c.ranked, c.codes, 2);
    CHECK(all_nan({r.h, r.p, r.eta_sq}));
}
