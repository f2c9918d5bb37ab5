#pragma once

#include "pairstat/matrix.hpp"
#include "pairstat/request.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace pairstat::cli {

enum class Engine { fast, oracle };

Engine parse_engine(std::string_view name);
std::string_view to_string(Engine engine);

// Simulated inputs for one test: `primary` is the only matrix for
// homogeneous tests and the group matrix for mixed ones.
struct Workload {
    DataMatrix primary;
    std::optional<DataMatrix> values;
};

Workload make_workload(TestKind test, std::size_t features, std::size_t samples, double na_ratio, int categories,
                       std::uint64_t seed);

ResultSet execute(const TestRequest& request, const Workload& work, Engine engine);

// Wall-clock seconds of one engine call.
double time_run(const TestRequest& request, const Workload& work, Engine engine);

struct BenchConfig {
    std::vector<TestKind> tests;
    std::vector<std::size_t> features;
    std::vector<std::size_t> samples;
    std::vector<double> na_ratios = {0.0};
    std::vector<std::size_t> threads = {1};
    std::vector<Engine> engines = {Engine::fast};
    int repetitions = 3;
    int categories = 4;
    std::uint64_t seed = 1;
};

struct BenchRow {
    TestKind test = TestKind::pearson;
    std::size_t features = 0;
    std::size_t samples = 0;
    double na_ratio = 0.0;
    std::size_t threads = 1;
    Engine engine = Engine::fast;
    double mean_seconds = 0.0;
    double sd_seconds = 0.0;
    double speedup = 0.0;  // oracle mean / this mean on fast rows when the oracle ran, else NaN
};

// One row per configuration. Repetition i uses freshly simulated data from
// seed + i; the oracle runs single-threaded once per data configuration.
std::vector<BenchRow> run_bench(const BenchConfig& config);
void write_bench(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace pairstat::cli
