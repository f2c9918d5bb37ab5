#include "pairstat/multiple_testing.hpp"

#include "pairstat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pairstat {

Correction parse_correction(std::string_view name)
{
    if (name == "bonferroni") return Correction::bonferroni;
    if (name == "bh") return Correction::bh;
    if (name == "by") return Correction::by;
    throw StatsError(ErrorCode::UnknownMethod, "unknown correction '" + std::string(name) + "'");
}

std::string_view to_string(Correction method)
{
    switch (method) {
    case Correction::bonferroni: return "bonferroni";
    case Correction::bh: return "bh";
    case Correction::by: return "by";
    }
    return "unknown";
}

std::vector<double> adjust_family(std::span<const double> p, Correction method)
{
    std::vector<double> out(p.size(), kNaN);
    std::vector<std::size_t> family;
    family.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isnan(p[i])) {
            family.push_back(i);
        }
    }
    const std::size_t m = family.size();
    if (m == 0) {
        return out;
    }
    const double md = static_cast<double>(m);

    if (method == Correction::bonferroni) {
        for (std::size_t i : family) {
            out[i] = std::min(1.0, md * p[i]);
        }
        return out;
    }

    double scale = md;
    if (method == Correction::by) {
        double harmonic = 0.0;
        for (std::size_t i = 1; i <= m; ++i) {
            harmonic += 1.0 / static_cast<double>(i);
        }
        scale *= harmonic;
    }
    std::stable_sort(family.begin(), family.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    double running = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const std::size_t i = family[rank - 1];
        running = std::min(running, p[i] * (scale / static_cast<double>(rank)));
        out[i] = running;
    }
    return out;
}

Matrix adjust(const Matrix& p, Correction method, bool symmetric)
{
    if (!symmetric) {
        Matrix out(p.rows(), p.cols());
        const auto adjusted = adjust_family(p.data(), method);
        std::copy(adjusted.begin(), adjusted.end(), out.data().begin());
        return out;
    }
    if (p.rows() != p.cols()) {
        throw StatsError(ErrorCode::NonSquareSymmetric, "symmetric adjustment needs a square matrix");
    }
    const std::size_t f = p.rows();
    std::vector<double> upper;
    upper.reserve(f * (f - (f > 0 ? 1 : 0)) / 2);
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = i + 1; j < f; ++j) {
            upper.push_back(p(i, j));
        }
    }
    const auto adjusted = adjust_family(upper, method);
    Matrix out(f, f, kNaN);
    std::size_t k = 0;
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = i + 1; j < f; ++j) {
            out(i, j) = adjusted[k];
            out(j, i) = adjusted[k];
            ++k;
        }
    }
    return out;
}

}  // namespace pairstat
