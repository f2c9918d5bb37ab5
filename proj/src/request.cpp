#include "pairstat/request.hpp"

#include "pairstat/error.hpp"

namespace pairstat {

TestKind parse_test(std::string_view name)
{
    if (name == "pearson") return TestKind::pearson;
    if (name == "spearman") return TestKind::spearman;
    if (name == "chi2") return TestKind::chi2;
    if (name == "ttest") return TestKind::ttest;
    if (name == "mwu") return TestKind::mwu;
    if (name == "anova") return TestKind::anova;
    if (name == "kruskal") return TestKind::kruskal;
    throw StatsError(ErrorCode::InvalidArgument, "unknown test '" + std::string(name) + "'");
}

std::string_view to_string(TestKind test)
{
    switch (test) {
    case TestKind::pearson: return "pearson";
    case TestKind::spearman: return "spearman";
    case TestKind::chi2: return "chi2";
    case TestKind::ttest: return "ttest";
    case TestKind::mwu: return "mwu";
    case TestKind::anova: return "anova";
    case TestKind::kruskal: return "kruskal";
    }
    return "unknown";
}

TVariant parse_t_variant(std::string_view name)
{
    if (name == "student") return TVariant::student;
    if (name == "welch") return TVariant::welch;
    throw StatsError(ErrorCode::InvalidArgument, "unknown t-test variant '" + std::string(name) + "'");
}

UMode parse_u_mode(std::string_view name)
{
    if (name == "exact") return UMode::exact;
    if (name == "asymptotic") return UMode::asymptotic;
    if (name == "auto") return UMode::automatic;
    throw StatsError(ErrorCode::InvalidArgument, "unknown U mode '" + std::string(name) + "'");
}

bool is_homogeneous(TestKind test)
{
    return test == TestKind::pearson || test == TestKind::spearman || test == TestKind::chi2;
}

std::vector<std::string> effect_names(TestKind test)
{
    switch (test) {
    case TestKind::pearson: return {"r", "r2"};
    case TestKind::spearman: return {"rho"};
    case TestKind::chi2: return {"phi", "cramers_v"};
    case TestKind::ttest: return {"cohens_d"};
    case TestKind::mwu: return {"r"};
    case TestKind::anova: return {"partial_eta2"};
    case TestKind::kruskal: return {"eta2"};
    }
    return {};
}

std::vector<std::string> supported_outputs(TestKind test)
{
    std::vector<std::string> out = {std::string(kStat), std::string(kP), std::string(kPBonferroni),
                                    std::string(kPBh), std::string(kPBy)};
    for (auto& e : effect_names(test)) {
        out.push_back(std::move(e));
    }
    return out;
}

const Matrix& ResultSet::at(std::string_view name) const
{
    const auto it = matrices.find(name);
    if (it == matrices.end()) {
        throw StatsError(ErrorCode::InvalidArgument, "no output named '" + std::string(name) + "'");
    }
    return it->second;
}

}  // namespace pairstat
