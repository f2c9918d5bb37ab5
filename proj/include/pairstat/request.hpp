#pragma once

#include "pairstat/matrix.hpp"
#include "pairstat/mixed.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pairstat {

enum class TestKind { pearson, spearman, chi2, ttest, mwu, anova, kruskal };

TestKind parse_test(std::string_view name);
std::string_view to_string(TestKind test);
TVariant parse_t_variant(std::string_view name);
UMode parse_u_mode(std::string_view name);

// Homogeneous tests take one matrix and give F x F symmetric results.
bool is_homogeneous(TestKind test);

// Output keys. "stat" and "p" exist for every test; "p_<method>" are the
// adjusted p-values; effect sizes are test specific.
inline constexpr std::string_view kStat = "stat";
inline constexpr std::string_view kP = "p";
inline constexpr std::string_view kPBonferroni = "p_bonferroni";
inline constexpr std::string_view kPBh = "p_bh";
inline constexpr std::string_view kPBy = "p_by";

// pearson: r, r2 | spearman: rho | chi2: phi, cramers_v | ttest: cohens_d
// mwu: r | anova: partial_eta2 | kruskal: eta2
std::vector<std::string> effect_names(TestKind test);
std::vector<std::string> supported_outputs(TestKind test);

struct TestRequest {
    TestKind test = TestKind::pearson;
    TVariant t_variant = TVariant::student;
    UMode u_mode = UMode::automatic;
    std::vector<std::string> outputs = {std::string(kStat), std::string(kP)};
    std::size_t threads = 1;
};

// Named result matrices sharing one shape. Undefined cells are NaN.
struct ResultSet {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::map<std::string, Matrix, std::less<>> matrices;

    const Matrix& at(std::string_view name) const;
    bool contains(std::string_view name) const { return matrices.find(name) != matrices.end(); }
};

}  // namespace pairstat
