#include "pairstat/oracle.hpp"

#include "pairstat/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

namespace pairstat::oracle {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

struct Pairs {
    std::vector<double> a;
    std::vector<double> b;
};

Pairs filter(std::span<const double> x, std::span<const double> y, const MissingValue& nx, const MissingValue& ny)
{
    if (x.size() != y.size()) {
        throw StatsError(ErrorCode::SampleCountMismatch, "rows differ in length");
    }
    Pairs out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (nx.matches(x[i]) || ny.matches(y[i])) {
            continue;
        }
        out.a.push_back(x[i]);
        out.b.push_back(y[i]);
    }
    return out;
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

bool constant(const std::vector<double>& v)
{
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

struct Ranks {
    std::vector<double> r;
    double tie_term = 0.0;
};

// Average ranks, 1-based.
Ranks rank(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return v[p] < v[q]; });
    Ranks out;
    out.r.assign(v.size(), 0.0);
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) out.r[idx[k]] = avg;
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

double t_two_sided(double t, double dof)
{
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

double chi2_upper(double x, double dof)
{
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

// r and its t-based p; NaN rules shared by both correlations.
std::pair<double, double> correlate(const std::vector<double>& a, const std::vector<double>& b)
{
    const std::size_t n = a.size();
    if (n <= 1 || constant(a) || constant(b)) {
        return {nan_v, nan_v};
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    double r = sab / std::sqrt(saa * sbb);
    r = std::clamp(r, -1.0, 1.0);
    double p = nan_v;
    if (n >= 3) {
        const double dof = static_cast<double>(n) - 2.0;
        p = std::abs(r) == 1.0 ? 0.0 : t_two_sided(r * std::sqrt(dof / ((1.0 - r) * (1.0 + r))), dof);
    }
    return {r, p};
}

std::vector<double> distinct_labels(std::span<const double> row, const MissingValue& na)
{
    std::set<double> s;
    for (double x : row) {
        if (!na.matches(x)) s.insert(x);
    }
    return {s.begin(), s.end()};
}

// Values split by label, with the label set taken from the full row.
std::vector<std::vector<double>> split(std::span<const double> labels, std::span<const double> values,
                                       const MissingValue& nl, const MissingValue& nv)
{
    const auto cats = distinct_labels(labels, nl);
    std::vector<std::vector<double>> groups(cats.size());
    const auto pairs = filter(labels, values, nl, nv);
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
        const auto pos = std::lower_bound(cats.begin(), cats.end(), pairs.a[i]) - cats.begin();
        groups[static_cast<std::size_t>(pos)].push_back(pairs.b[i]);
    }
    return groups;
}

bool fits_int64(std::size_t n, std::size_t k)
{
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::size_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) return false;
    }
    return true;
}

double harmonic(std::size_t m)
{
    double h = 0.0;
    for (std::size_t i = m; i >= 1; --i) h += 1.0 / static_cast<double>(i);
    return h;
}

}  // namespace

Result pearson(std::span<const double> x, std::span<const double> y, const MissingValue& na)
{
    const auto pairs = filter(x, y, na, na);
    const auto [r, p] = correlate(pairs.a, pairs.b);
    return {{"stat", r}, {"p", p}, {"r", r}, {"r2", r * r}};
}

Result spearman(std::span<const double> x, std::span<const double> y, const MissingValue& na)
{
    const auto pairs = filter(x, y, na, na);
    const auto [rho, p] = correlate(rank(pairs.a).r, rank(pairs.b).r);
    return {{"stat", rho}, {"p", p}, {"rho", rho}};
}

Result chi2(std::span<const double> x, std::span<const double> y, const MissingValue& na)
{
    Result out = {{"stat", nan_v}, {"p", nan_v}, {"phi", nan_v}, {"cramers_v", nan_v}};
    const auto rows = distinct_labels(x, na);
    const auto cols = distinct_labels(y, na);
    const auto pairs = filter(x, y, na, na);
    const double n = static_cast<double>(pairs.a.size());
    if (pairs.a.empty()) return out;

    std::map<std::pair<double, double>, double> observed;
    std::map<double, double> row_total, col_total;
    for (double r : rows) row_total[r] = 0.0;
    for (double c : cols) col_total[c] = 0.0;
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
        observed[{pairs.a[i], pairs.b[i]}] += 1.0;
        row_total[pairs.a[i]] += 1.0;
        col_total[pairs.b[i]] += 1.0;
    }
    for (const auto& [label, t] : row_total) {
        if (t == 0.0) return out;
    }
    for (const auto& [label, t] : col_total) {
        if (t == 0.0) return out;
    }
    double stat = 0.0;
    for (double r : rows) {
        for (double c : cols) {
            const double expected = row_total[r] * col_total[c] / n;
            const auto it = observed.find({r, c});
            const double o = it == observed.end() ? 0.0 : it->second;
            stat += (o - expected) * (o - expected) / expected;
        }
    }
    out["stat"] = stat;
    out["phi"] = std::sqrt(stat / n);
    const std::size_t smaller = std::min(rows.size(), cols.size());
    if (smaller > 1) {
        const double dof = static_cast<double>((rows.size() - 1) * (cols.size() - 1));
        out["p"] = chi2_upper(stat, dof);
        out["cramers_v"] = std::sqrt(stat / (n * static_cast<double>(smaller - 1)));
    }
    return out;
}

Result ttest(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
             const MissingValue& na_values, TVariant variant)
{
    Result out = {{"stat", nan_v}, {"p", nan_v}, {"cohens_d", nan_v}};
    const auto pairs = filter(labels, values, na_labels, na_values);
    std::vector<double> g0, g1;
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
        (pairs.a[i] == 0.0 ? g0 : g1).push_back(pairs.b[i]);
    }
    if (g0.size() < 2 || g1.size() < 2) return out;
    if (constant(g0) && constant(g1)) return out;

    const double n0 = static_cast<double>(g0.size());
    const double n1 = static_cast<double>(g1.size());
    const double m0 = mean(g0);
    const double m1 = mean(g1);
    double ss0 = 0.0, ss1 = 0.0;
    for (double v : g0) ss0 += (v - m0) * (v - m0);
    for (double v : g1) ss1 += (v - m1) * (v - m1);
    const double v0 = ss0 / (n0 - 1.0);
    const double v1 = ss1 / (n1 - 1.0);

    double t = 0.0, dof = 0.0, d = 0.0;
    if (variant == TVariant::student) {
        dof = n0 + n1 - 2.0;
        const double sp = std::sqrt(((n0 - 1.0) * v0 + (n1 - 1.0) * v1) / dof);
        t = (m0 - m1) / (sp * std::sqrt(1.0 / n0 + 1.0 / n1));
        d = (m0 - m1) / sp;
    } else {
        const double a = v0 / n0;
        const double b = v1 / n1;
        t = (m0 - m1) / std::sqrt(a + b);
        dof = (a + b) * (a + b) / (a * a / (n0 - 1.0) + b * b / (n1 - 1.0));
        d = (m0 - m1) / std::sqrt((v0 + v1) / 2.0);
    }
    out["stat"] = t;
    out["p"] = t_two_sided(t, dof);
    out["cohens_d"] = d;
    return out;
}

std::vector<std::uint64_t> exact_u_counts(std::size_t n0, std::size_t n1)
{
    // table[i] holds N(i, j, .) for the current j.
    std::vector<std::vector<std::uint64_t>> table(n0 + 1);
    for (std::size_t i = 0; i <= n0; ++i) table[i] = {1};  // j = 0: only u = 0
    for (std::size_t j = 1; j <= n1; ++j) {
        for (std::size_t i = 1; i <= n0; ++i) {
            // N(i, j, u) = N(i - 1, j, u - j) + N(i, j - 1, u)
            std::vector<std::uint64_t> next(i * j + 1, 0);
            for (std::size_t u = 0; u < table[i].size(); ++u) next[u] += table[i][u];
            for (std::size_t u = 0; u < table[i - 1].size(); ++u) next[u + j] += table[i - 1][u];
            table[i] = std::move(next);
        }
    }
    return table[n0];
}

Rational permutation_mwu(std::span<const double> x0, std::span<const double> x1)
{
    const std::size_t n0 = x0.size();
    const std::size_t n1 = x1.size();
    const std::size_t n = n0 + n1;
    if (n > 12) {
        throw StatsError(ErrorCode::TooLarge, "enumeration is limited to 12 samples");
    }
    if (n0 == 0 || n1 == 0) {
        throw StatsError(ErrorCode::InvalidArgument, "both groups need samples");
    }
    std::vector<double> all(x0.begin(), x0.end());
    all.insert(all.end(), x1.begin(), x1.end());
    if (std::set<double>(all.begin(), all.end()).size() != n) {
        throw StatsError(ErrorCode::InvalidArgument, "enumeration needs tie-free values");
    }
    // U counts pairs where the first group's value is larger; doubled to stay integral.
    const auto twice_distance = [&](std::uint32_t mask) {
        long u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1u)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (!(mask >> j & 1u) && all[i] > all[j]) ++u;
            }
        }
        return std::labs(2 * u - static_cast<long>(n0 * n1));
    };
    const std::uint32_t observed_mask = (1u << n0) - 1u;
    const long observed = twice_distance(observed_mask);
    Rational out;
    out.denominator = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != n0) continue;
        ++out.denominator;
        if (twice_distance(mask) >= observed) ++out.numerator;
    }
    return out;
}

Result mwu(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
           const MissingValue& na_values, UMode mode)
{
    Result out = {{"stat", nan_v}, {"p", nan_v}, {"r", nan_v}};
    const auto pairs = filter(labels, values, na_labels, na_values);
    const auto ranks = rank(pairs.b);
    std::size_t n0 = 0, n1 = 0;
    double r0 = 0.0;
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
        if (pairs.a[i] == 0.0) {
            ++n0;
            r0 += ranks.r[i];
        } else {
            ++n1;
        }
    }
    if (n0 == 0 || n1 == 0) return out;

    const double a = static_cast<double>(n0);
    const double b = static_cast<double>(n1);
    const double n = a + b;
    const double u = r0 - a * (a + 1.0) / 2.0;
    out["stat"] = u;

    const bool tied = ranks.tie_term > 0.0;
    bool exact = false;
    if (mode == UMode::exact) {
        if (tied) throw StatsError(ErrorCode::ExactModeWithTies, "ties present");
        if (!fits_int64(n0 + n1, n0)) throw StatsError(ErrorCode::TableTooLarge, "too many arrangements");
        exact = true;
    } else if (mode == UMode::automatic) {
        exact = !tied && std::min(n0, n1) < 8 && fits_int64(n0 + n1, n0);
    }

    const double sigma2 = a * b / 12.0 * ((n + 1.0) - ranks.tie_term / (n * (n - 1.0)));
    double z = nan_v;
    if (sigma2 > 0.0) {
        const double dev = u - a * b / 2.0;
        z = std::max(std::abs(dev) - 0.5, 0.0) / std::sqrt(sigma2);
        out["r"] = (dev < 0.0 ? -z : z) / std::sqrt(n);
    }
    if (exact) {
        const auto counts = exact_u_counts(std::min(n0, n1), std::max(n0, n1));
        const auto ui = static_cast<std::size_t>(std::llround(u));
        const std::size_t low = std::min(ui, n0 * n1 - ui);
        std::uint64_t total = 0, tail = 0;
        for (std::size_t v = 0; v < counts.size(); ++v) {
            total += counts[v];
            if (v <= low) tail += counts[v];
        }
        out["p"] = static_cast<double>(std::min<std::uint64_t>(2 * tail, total)) / static_cast<double>(total);
    } else if (sigma2 > 0.0) {
        out["p"] = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), z)));
    }
    return out;
}

Result anova(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
             const MissingValue& na_values)
{
    Result out = {{"stat", nan_v}, {"p", nan_v}, {"partial_eta2", nan_v}};
    const auto groups = split(labels, values, na_labels, na_values);
    const std::size_t k = groups.size();
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.empty()) return out;
        n += g.size();
    }
    if (k < 2 || n <= k) return out;

    const bool all_constant = std::all_of(groups.begin(), groups.end(), [](const auto& g) { return constant(g); });
    if (all_constant) {
        const double first = groups[0].front();
        for (std::size_t j = 1; j < k; ++j) {
            const double other = groups[j].front();
            if (std::abs(other - first) > 1e-12 * std::max(std::abs(other), std::abs(first))) {
                out["stat"] = std::numeric_limits<double>::infinity();
                out["p"] = 0.0;
                out["partial_eta2"] = 1.0;
                return out;
            }
        }
        return out;
    }

    double grand = 0.0;
    for (const auto& g : groups) {
        for (double v : g) grand += v;
    }
    grand /= static_cast<double>(n);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        const double m = mean(g);
        ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
        for (double v : g) ssw += (v - m) * (v - m);
    }
    const double df1 = static_cast<double>(k - 1);
    const double df2 = static_cast<double>(n - k);
    const double f = (ssb / df1) / (ssw / df2);
    out["stat"] = f;
    out["p"] = boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), f));
    out["partial_eta2"] = ssb / (ssb + ssw);
    return out;
}

Result kruskal(std::span<const double> labels, std::span<const double> values, const MissingValue& na_labels,
               const MissingValue& na_values)
{
    Result out = {{"stat", nan_v}, {"p", nan_v}, {"eta2", nan_v}};
    const auto cats = distinct_labels(labels, na_labels);
    const std::size_t k = cats.size();
    const auto pairs = filter(labels, values, na_labels, na_values);
    const auto ranks = rank(pairs.b);
    std::vector<double> rank_sum(k, 0.0);
    std::vector<double> size(k, 0.0);
    for (std::size_t i = 0; i < pairs.a.size(); ++i) {
        const auto j = static_cast<std::size_t>(std::lower_bound(cats.begin(), cats.end(), pairs.a[i]) - cats.begin());
        rank_sum[j] += ranks.r[i];
        size[j] += 1.0;
    }
    for (double s : size) {
        if (s == 0.0) return out;
    }
    const double n = static_cast<double>(pairs.a.size());
    const double correction = 1.0 - ranks.tie_term / (n * n * n - n);
    if (!(n * n * n - n > 0.0) || correction <= 0.0) return out;

    // sum R_j^2 / n_j - n (n + 1)^2 / 4 written as sum d_j^2 / n_j with
    // d_j = R_j - n_j (n + 1) / 2. Rank sums are multiples of 1/2, so d_j is
    // exact and nothing cancels; near H = 0 the p-value goes like sqrt(H).
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double d = rank_sum[j] - 0.5 * size[j] * (n + 1.0);
        sum += d * d / size[j];
    }
    const double h = 12.0 / (n * (n + 1.0)) * sum / correction;
    out["stat"] = h;
    if (k >= 2) {
        out["p"] = chi2_upper(h, static_cast<double>(k - 1));
        if (n > static_cast<double>(k)) {
            out["eta2"] = (h - static_cast<double>(k) + 1.0) / (n - static_cast<double>(k));
        }
    }
    return out;
}

std::vector<double> adjust_bruteforce(std::span<const double> p, Correction method)
{
    const std::size_t total = p.size();
    std::vector<double> out(total, nan_v);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < total; ++i) {
        if (!std::isnan(p[i])) members.push_back(i);
    }
    const double m = static_cast<double>(members.size());
    if (method == Correction::bonferroni) {
        for (std::size_t i : members) out[i] = std::min(1.0, m * p[i]);
        return out;
    }
    const double c = method == Correction::by ? harmonic(members.size()) : 1.0;
    // rank_of[l]: position of member l when ordered by (p, index).
    std::vector<double> rank_of(total, 0.0);
    for (std::size_t l : members) {
        std::size_t below = 0;
        for (std::size_t q : members) {
            if (p[q] < p[l] || (p[q] == p[l] && q < l)) ++below;
        }
        rank_of[l] = static_cast<double>(below + 1);
    }
    for (std::size_t i : members) {
        double best = 1.0;
        for (std::size_t l : members) {
            if (rank_of[l] >= rank_of[i]) best = std::min(best, c * m * p[l] / rank_of[l]);
        }
        out[i] = best;
    }
    return out;
}

std::vector<double> adjust_sorted(std::span<const double> p, Correction method)
{
    std::vector<double> out(p.size(), nan_v);
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!std::isnan(p[i])) members.push_back(i);
    }
    const double m = static_cast<double>(members.size());
    if (method == Correction::bonferroni) {
        for (std::size_t i : members) out[i] = std::min(1.0, m * p[i]);
        return out;
    }
    const double c = method == Correction::by ? harmonic(members.size()) : 1.0;
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return p[a] < p[b] || (p[a] == p[b] && a < b); });
    double best = 1.0;
    for (std::size_t pos = members.size(); pos > 0; --pos) {
        const std::size_t i = members[pos - 1];
        best = std::min(best, c * m * p[i] / static_cast<double>(pos));
        out[i] = best;
    }
    return out;
}

Matrix adjust_matrix(const Matrix& p, Correction method, bool symmetric)
{
    Matrix out(p.rows(), p.cols(), nan_v);
    if (!symmetric) {
        std::vector<double> flat(p.data().begin(), p.data().end());
        const auto adj = adjust_sorted(flat, method);
        std::copy(adj.begin(), adj.end(), out.data().begin());
        return out;
    }
    std::vector<double> upper;
    std::vector<std::pair<std::size_t, std::size_t>> where;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = i + 1; j < p.cols(); ++j) {
            upper.push_back(p(i, j));
            where.emplace_back(i, j);
        }
    }
    const auto adj = adjust_sorted(upper, method);
    for (std::size_t k = 0; k < adj.size(); ++k) {
        out(where[k].first, where[k].second) = adj[k];
        out(where[k].second, where[k].first) = adj[k];
    }
    return out;
}

namespace {

ResultSet assemble(const TestRequest& request, std::map<std::string, Matrix>& all, bool symmetric)
{
    ResultSet rs;
    rs.rows = all.at("p").rows();
    rs.cols = all.at("p").cols();
    for (const auto& name : request.outputs) {
        if (name.rfind("p_", 0) == 0) {
            rs.matrices[name] = adjust_matrix(all.at("p"), parse_correction(name.substr(2)), symmetric);
        } else if (all.count(name) != 0) {
            rs.matrices[name] = all.at(name);
        } else {
            throw StatsError(ErrorCode::UnsupportedOutputForTest, "unknown output '" + name + "'");
        }
    }
    return rs;
}

void store(std::map<std::string, Matrix>& all, const Result& r, std::size_t rows, std::size_t cols, std::size_t i,
           std::size_t j)
{
    for (const auto& [name, v] : r) {
        auto it = all.find(name);
        if (it == all.end()) it = all.emplace(name, Matrix(rows, cols, nan_v)).first;
        it->second(i, j) = v;
    }
}

}  // namespace

ResultSet run(const TestRequest& request, const DataMatrix& matrix)
{
    const std::size_t f = matrix.features();
    const auto& na = matrix.missing_value();
    std::map<std::string, Matrix> all;
    for (std::size_t i = 0; i < f; ++i) {
        for (std::size_t j = i; j < f; ++j) {
            const auto x = matrix.row(i);
            const auto y = matrix.row(j);
            Result r;
            switch (request.test) {
            case TestKind::pearson: r = pearson(x, y, na); break;
            case TestKind::spearman: r = spearman(x, y, na); break;
            case TestKind::chi2: r = chi2(x, y, na); break;
            default: throw StatsError(ErrorCode::KindMismatch, "test needs two matrices");
            }
            store(all, r, f, f, i, j);
            store(all, r, f, f, j, i);
        }
    }
    return assemble(request, all, true);
}

ResultSet run(const TestRequest& request, const DataMatrix& groups, const DataMatrix& values)
{
    const std::size_t rows = groups.features();
    const std::size_t cols = values.features();
    std::map<std::string, Matrix> all;
    for (std::size_t c = 0; c < rows; ++c) {
        for (std::size_t q = 0; q < cols; ++q) {
            const auto l = groups.row(c);
            const auto v = values.row(q);
            const auto& nl = groups.missing_value();
            const auto& nv = values.missing_value();
            Result r;
            switch (request.test) {
            case TestKind::ttest: r = ttest(l, v, nl, nv, request.t_variant); break;
            case TestKind::mwu: r = mwu(l, v, nl, nv, request.u_mode); break;
            case TestKind::anova: r = anova(l, v, nl, nv); break;
            case TestKind::kruskal: r = kruskal(l, v, nl, nv); break;
            default: throw StatsError(ErrorCode::KindMismatch, "test takes a single matrix");
            }
            store(all, r, rows, cols, c, q);
        }
    }
    return assemble(request, all, false);
}

}  // namespace pairstat::oracle
