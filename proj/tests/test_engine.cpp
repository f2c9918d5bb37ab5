#include "pairstat/engine.hpp"
#include "pairstat/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <vector>

using namespace pairstat;

namespace {

std::vector<std::vector<double>> random_rows(std::size_t f, std::size_t s, double na_ratio, int labels,
                                             std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> rows(f, std::vector<double>(s));
    for (auto& row : rows) {
        for (auto& v : row) {
            v = labels > 0 ? static_cast<double>(rng() % static_cast<std::uint64_t>(labels)) : unit(rng);
            if (unit(rng) < na_ratio) v = kNaN;
        }
    }
    return rows;
}

bool bit_equal(const Matrix& a, const Matrix& b)
{
    return a.rows() == b.rows() && a.cols() == b.cols()
        && std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(double)) == 0;
}

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

TEST_CASE("partition covers every unit exactly once")
{
    const auto w = partition(10, 3);
    REQUIRE(w.per_worker.size() == 3);
    std::multiset<std::size_t> seen;
    for (const auto& units : w.per_worker) seen.insert(units.begin(), units.end());
    CHECK(seen.size() == 10);
    CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == 10);

    const auto one = partition(1, 8);
    std::size_t busy = 0;
    for (const auto& units : one.per_worker) busy += units.empty() ? 0 : 1;
    CHECK(busy == 1);

    CHECK_THROWS_AS(partition(5, 0), StatsError);
}

TEST_CASE("pearson matrix is symmetric with a unit diagonal")
{
    const auto dm = make_matrix(random_rows(3, 40, 0.1, 0, 1), Kind::continuous, kNaN);
    TestRequest req;
    req.test = TestKind::pearson;
    req.outputs = {"stat"};
    const auto rs = run(req, dm);
    REQUIRE(rs.matrices.size() == 1);
    const auto& m = rs.at("stat");
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m(i, i) == doctest::Approx(1.0).epsilon(1e-15));
        for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == m(j, i));
    }
}

TEST_CASE("mixed results are groups x values")
{
    const auto groups = make_matrix(random_rows(2, 60, 0.0, 3, 2), Kind::categorical, kNaN);
    const auto values = make_matrix(random_rows(3, 60, 0.1, 0, 3), Kind::continuous, kNaN);
    TestRequest req;
    req.test = TestKind::anova;
    req.outputs = {"stat", "p", "p_bh", "partial_eta2"};
    const auto rs = run(req, groups, values);
    CHECK(rs.matrices.size() == 4);
    for (const auto& [name, m] : rs.matrices) {
        CHECK(m.rows() == 2);
        CHECK(m.cols() == 3);
    }
}

TEST_CASE("only requested outputs are returned; adjusted diagonals are NaN")
{
    const auto dm = make_matrix(random_rows(5, 30, 0.0, 0, 4), Kind::continuous, kNaN);
    TestRequest req;
    req.test = TestKind::spearman;
    req.outputs = {"p_by", "rho"};
    const auto rs = run(req, dm);
    CHECK(rs.matrices.size() == 2);
    CHECK_FALSE(rs.contains("p"));
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::isnan(rs.at("p_by")(i, i)));
        CHECK(rs.at("rho")(i, i) == doctest::Approx(1.0));
    }
}

TEST_CASE("determinism across thread counts for every test")
{
    const auto cont = make_matrix(random_rows(23, 50, 0.2, 0, 5), Kind::continuous, kNaN);
    const auto cat = make_matrix(random_rows(7, 50, 0.2, 4, 6), Kind::categorical, kNaN);
    const auto dich = make_matrix(random_rows(7, 50, 0.2, 2, 7), Kind::dichotomous, kNaN);
    for (const auto test : {TestKind::pearson, TestKind::spearman, TestKind::chi2, TestKind::ttest, TestKind::mwu,
                            TestKind::anova, TestKind::kruskal}) {
        TestRequest req;
        req.test = test;
        req.outputs = supported_outputs(test);
        const auto compute = [&](std::size_t threads) {
            req.threads = threads;
            switch (test) {
            case TestKind::pearson:
            case TestKind::spearman: return run(req, cont);
            case TestKind::chi2: return run(req, cat);
            case TestKind::ttest:
            case TestKind::mwu: return run(req, dich, cont);
            default: return run(req, cat, cont);
            }
        };
        const auto base = compute(1);
        for (std::size_t threads : {2u, 3u, 8u}) {
            const auto other = compute(threads);
            for (const auto& [name, m] : base.matrices) {
                CAPTURE(name);
                CHECK(bit_equal(m, other.at(name)));
            }
        }
    }
}

TEST_CASE("contract violations")
{
    const auto cont = make_matrix(random_rows(3, 20, 0.0, 0, 8), Kind::continuous, kNaN);
    const auto cat = make_matrix(random_rows(3, 20, 0.0, 3, 9), Kind::categorical, kNaN);
    const auto short_cont = make_matrix(random_rows(3, 19, 0.0, 0, 10), Kind::continuous, kNaN);

    TestRequest req;
    req.test = TestKind::chi2;
    check_code(ErrorCode::KindMismatch, [&] { run(req, cont); });
    req.test = TestKind::pearson;
    check_code(ErrorCode::KindMismatch, [&] { run(req, cat); });
    check_code(ErrorCode::KindMismatch, [&] { run(req, cat, cont); });
    req.test = TestKind::ttest;
    check_code(ErrorCode::KindMismatch, [&] { run(req, cat, cont); });
    check_code(ErrorCode::KindMismatch, [&] { run(req, cont); });
    req.test = TestKind::anova;
    check_code(ErrorCode::SampleCountMismatch, [&] { run(req, cat, short_cont); });
    req.outputs = {"rho"};
    check_code(ErrorCode::UnsupportedOutputForTest, [&] { run(req, cat, cont); });
    req.outputs = {"stat"};
    req.threads = 0;
    check_code(ErrorCode::InvalidArgument, [&] { run(req, cat, cont); });
}

TEST_CASE("exceptions inside workers reach the caller")
{
    const auto w = partition(6, 3);
    CHECK_THROWS_AS(run_assignment(w,
                                   [](std::size_t, std::size_t unit) {
                                       if (unit == 4) throw StatsError(ErrorCode::DomainError, "boom");
                                   }),
                    StatsError);
}
