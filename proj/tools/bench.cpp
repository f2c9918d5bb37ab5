#include "bench.hpp"

#include "csv_io.hpp"
#include "simulate.hpp"

#include "pairstat/engine.hpp"
#include "pairstat/oracle.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

namespace pairstat::cli {

Engine parse_engine(std::string_view name)
{
    if (name == "fast") return Engine::fast;
    if (name == "oracle") return Engine::oracle;
    throw InputError("unknown engine '" + std::string(name) + "'");
}

std::string_view to_string(Engine engine)
{
    return engine == Engine::fast ? "fast" : "oracle";
}

Workload make_workload(TestKind test, std::size_t features, std::size_t samples, double na_ratio, int categories,
                       std::uint64_t seed)
{
    SimulationSpec spec{features, samples, Kind::continuous, categories, na_ratio, seed};
    switch (test) {
    case TestKind::pearson:
    case TestKind::spearman:
        return {simulate_matrix(spec), std::nullopt};
    case TestKind::chi2:
        spec.kind = Kind::categorical;
        return {simulate_matrix(spec), std::nullopt};
    default:
        break;
    }
    SimulationSpec values = spec;
    values.seed = seed ^ 0x9e3779b97f4a7c15ULL;
    spec.kind = test == TestKind::ttest || test == TestKind::mwu ? Kind::dichotomous : Kind::categorical;
    return {simulate_matrix(spec), simulate_matrix(values)};
}

ResultSet execute(const TestRequest& request, const Workload& work, Engine engine)
{
    if (engine == Engine::fast) {
        return work.values ? run(request, work.primary, *work.values) : run(request, work.primary);
    }
    return work.values ? oracle::run(request, work.primary, *work.values) : oracle::run(request, work.primary);
}

double time_run(const TestRequest& request, const Workload& work, Engine engine)
{
    const auto start = std::chrono::steady_clock::now();
    const auto result = execute(request, work, engine);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

std::vector<BenchRow> run_bench(const BenchConfig& config)
{
    std::vector<BenchRow> rows;
    for (const auto test : config.tests) {
        for (const auto f : config.features) {
            for (const auto s : config.samples) {
                for (const auto r : config.na_ratios) {
                    // (engine, threads) -> seconds per repetition
                    std::map<std::pair<Engine, std::size_t>, std::vector<double>> times;
                    for (int rep = 0; rep < config.repetitions; ++rep) {
                        const auto work = make_workload(test, f, s, r, config.categories,
                                                        config.seed + static_cast<std::uint64_t>(rep));
                        for (const auto engine : config.engines) {
                            for (const auto t : engine == Engine::oracle ? std::vector<std::size_t>{1} : config.threads) {
                                TestRequest request;
                                request.test = test;
                                request.threads = t;
                                times[{engine, t}].push_back(time_run(request, work, engine));
                            }
                        }
                    }
                    double oracle_mean = std::numeric_limits<double>::quiet_NaN();
                    std::vector<BenchRow> block;
                    for (const auto& [key, secs] : times) {
                        BenchRow row;
                        row.test = test;
                        row.features = f;
                        row.samples = s;
                        row.na_ratio = r;
                        row.engine = key.first;
                        row.threads = key.second;
                        double sum = 0.0;
                        for (double x : secs) sum += x;
                        row.mean_seconds = sum / static_cast<double>(secs.size());
                        double sq = 0.0;
                        for (double x : secs) sq += (x - row.mean_seconds) * (x - row.mean_seconds);
                        row.sd_seconds = secs.size() > 1 ? std::sqrt(sq / static_cast<double>(secs.size() - 1)) : 0.0;
                        row.speedup = std::numeric_limits<double>::quiet_NaN();
                        if (row.engine == Engine::oracle) oracle_mean = row.mean_seconds;
                        block.push_back(row);
                    }
                    for (auto& row : block) {
                        if (row.engine == Engine::fast) row.speedup = oracle_mean / row.mean_seconds;
                        rows.push_back(row);
                    }
                }
            }
        }
    }
    return rows;
}

void write_bench(std::ostream& out, const std::vector<BenchRow>& rows)
{
    out << "test,F,S,r,threads,engine,mean_seconds,sd_seconds,speedup\n";
    for (const auto& row : rows) {
        out << to_string(row.test) << ',' << row.features << ',' << row.samples << ',' << format_number(row.na_ratio)
            << ',' << row.threads << ',' << to_string(row.engine) << ',' << format_number(row.mean_seconds) << ','
            << format_number(row.sd_seconds) << ',' << format_number(row.speedup) << '\n';
    }
}

}  // namespace pairstat::cli
