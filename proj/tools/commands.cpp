#include "commands.hpp"

#include "bench.hpp"
#include "csv_io.hpp"
#include "simulate.hpp"

#include "pairstat/engine.hpp"
#include "pairstat/error.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pairstat::cli {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, Kind> kKinds = {
    {"continuous", Kind::continuous}, {"dichotomous", Kind::dichotomous}, {"categorical", Kind::categorical}};

struct RunOptions {
    std::string test;
    std::string input;
    std::string input2;
    std::string na_value = "nan";
    std::string features_on = "rows";
    std::size_t threads = 1;
    std::vector<std::string> outputs = {"stat", "p"};
    std::string t_variant = "student";
    std::string u_mode = "auto";
    std::string out_dir = ".";
    std::string format = "csv";
    std::string kind;
    std::string kind2;
};

struct SimulateOptions {
    std::size_t features = 0;
    std::size_t samples = 0;
    std::string kind = "continuous";
    int categories = 4;
    double na_ratio = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

struct BenchOptions {
    std::vector<std::string> tests = {"pearson", "spearman", "chi2", "ttest", "mwu", "anova", "kruskal"};
    std::vector<std::size_t> features = {250};
    std::vector<std::size_t> samples = {250};
    std::vector<double> na_ratios = {0.0};
    std::vector<std::size_t> threads = {1};
    std::vector<std::string> engines = {"fast"};
    int repetitions = 3;
    int categories = 4;
    std::uint64_t seed = 1;
    std::string out;
};

std::optional<Kind> kind_flag(const std::string& name)
{
    if (name.empty()) return std::nullopt;
    return kKinds.at(name);
}

// Continuous inputs are always read as continuous; group inputs are inferred
// from their values unless a kind is given.
std::optional<Kind> role_kind(TestKind test, bool group_role, const std::string& flag)
{
    if (!flag.empty()) return kind_flag(flag);
    if (group_role || test == TestKind::chi2) return std::nullopt;
    return Kind::continuous;
}

int cmd_run(const RunOptions& o, std::ostream& out)
{
    TestRequest request;
    request.test = parse_test(o.test);
    request.t_variant = parse_t_variant(o.t_variant);
    request.u_mode = parse_u_mode(o.u_mode);
    request.outputs = o.outputs;
    request.threads = o.threads;
    const bool mixed = !is_homogeneous(request.test);
    if (mixed && o.input2.empty()) {
        throw InputError(o.test + " needs --input2 with the continuous matrix");
    }
    if (!mixed && !o.input2.empty()) {
        throw InputError(o.test + " takes a single --input");
    }
    validate_outputs(request);

    const char sep = separator_for(o.format);
    const double na = parse_number(o.na_value);
    const bool on_rows = o.features_on == "rows";

    const auto first = load_matrix(read_table(o.input, sep), on_rows, role_kind(request.test, mixed, o.kind), na);
    std::optional<LoadedMatrix> second;
    ResultSet result;
    if (mixed) {
        second = load_matrix(read_table(o.input2, sep), on_rows, role_kind(request.test, false, o.kind2), na);
        result = run(request, first.matrix, second->matrix);
    } else {
        result = run(request, first.matrix);
    }

    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw InputError("cannot create '" + dir.string() + "': " + ec.message());
    }
    for (const auto& name : request.outputs) {
        const Matrix& m = result.at(name);
        Table table;
        table.row_ids = first.feature_ids;
        table.col_ids = mixed ? second->feature_ids : first.feature_ids;
        table.values.assign(m.data().begin(), m.data().end());
        const fs::path path = dir / (o.test + "." + name + "." + o.format);
        write_table(path, table, sep);
        out << path.string() << '\n';
    }
    return kExitOk;
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out)
{
    SimulationSpec spec{o.features, o.samples, kKinds.at(o.kind), o.categories, o.na_ratio, o.seed};
    Table table;
    table.values = simulate(spec);
    for (std::size_t f = 0; f < spec.features; ++f) table.row_ids.push_back("f" + std::to_string(f));
    for (std::size_t s = 0; s < spec.samples; ++s) table.col_ids.push_back("s" + std::to_string(s));
    write_table(o.out, table, separator_for(o.format));
    out << o.out << '\n';
    return kExitOk;
}

int cmd_bench(const BenchOptions& o, std::ostream& out)
{
    BenchConfig config;
    for (const auto& t : o.tests) config.tests.push_back(parse_test(t));
    config.features = o.features;
    config.samples = o.samples;
    config.na_ratios = o.na_ratios;
    config.threads = o.threads;
    config.engines.clear();
    for (const auto& e : o.engines) config.engines.push_back(parse_engine(e));
    config.repetitions = o.repetitions;
    config.categories = o.categories;
    config.seed = o.seed;
    const auto rows = run_bench(config);
    if (o.out.empty()) {
        write_bench(out, rows);
    } else {
        std::ofstream file(o.out);
        if (!file) throw InputError("cannot write '" + o.out + "'");
        write_bench(file, rows);
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Pairwise statistical tests over feature matrices with missing values"};
    app.require_subcommand(1);

    RunOptions ro;
    auto* run_cmd = app.add_subcommand("run", "Run one test over all feature pairs");
    run_cmd->add_option("--test", ro.test, "Test to run")
        ->required()
        ->check(CLI::IsMember({"pearson", "spearman", "chi2", "ttest", "mwu", "anova", "kruskal"}));
    run_cmd->add_option("--input", ro.input, "Matrix file (group matrix for mixed tests)")->required();
    run_cmd->add_option("--input2", ro.input2, "Continuous matrix file for mixed tests");
    run_cmd->add_option("--na-value", ro.na_value, "Value marking missing entries")->capture_default_str();
    run_cmd->add_option("--features-on", ro.features_on, "Whether features are rows or columns of the files")
        ->check(CLI::IsMember({"rows", "cols"}))
        ->capture_default_str();
    run_cmd->add_option("--threads", ro.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--outputs", ro.outputs, "Comma separated output names")->delimiter(',');
    run_cmd->add_option("--t-variant", ro.t_variant)->check(CLI::IsMember({"student", "welch"}))->capture_default_str();
    run_cmd->add_option("--u-mode", ro.u_mode)->check(CLI::IsMember({"exact", "asymptotic", "auto"}))->capture_default_str();
    run_cmd->add_option("--out-dir", ro.out_dir, "Directory for result files")->capture_default_str();
    run_cmd->add_option("--format", ro.format)->check(CLI::IsMember({"csv", "tsv"}))->capture_default_str();
    run_cmd->add_option("--kind", ro.kind, "Kind of --input; inferred when omitted")
        ->check(CLI::IsMember({"continuous", "dichotomous", "categorical"}));
    run_cmd->add_option("--kind2", ro.kind2, "Kind of --input2; continuous when omitted")
        ->check(CLI::IsMember({"continuous", "dichotomous", "categorical"}));

    SimulateOptions so;
    auto* sim_cmd = app.add_subcommand("simulate", "Write a random matrix with a fixed missing count per feature");
    sim_cmd->add_option("--features", so.features)->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--samples", so.samples)->required()->check(CLI::PositiveNumber);
    sim_cmd->add_option("--kind", so.kind)
        ->check(CLI::IsMember({"continuous", "dichotomous", "categorical"}))
        ->capture_default_str();
    sim_cmd->add_option("--categories", so.categories)->capture_default_str();
    sim_cmd->add_option("--na-ratio", so.na_ratio)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sim_cmd->add_option("--seed", so.seed)->capture_default_str();
    sim_cmd->add_option("--out", so.out)->required();
    sim_cmd->add_option("--format", so.format)->check(CLI::IsMember({"csv", "tsv"}))->capture_default_str();

    BenchOptions bo;
    auto* bench_cmd = app.add_subcommand("bench", "Time engines over a grid of simulated inputs");
    bench_cmd->add_option("--tests", bo.tests)->delimiter(',');
    bench_cmd->add_option("--features", bo.features)->delimiter(',');
    bench_cmd->add_option("--samples", bo.samples)->delimiter(',');
    bench_cmd->add_option("--na-ratios", bo.na_ratios)->delimiter(',');
    bench_cmd->add_option("--threads", bo.threads)->delimiter(',');
    bench_cmd->add_option("--engines,--engine", bo.engines)->delimiter(',');
    bench_cmd->add_option("--reps", bo.repetitions)->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--categories", bo.categories)->capture_default_str();
    bench_cmd->add_option("--seed", bo.seed)->capture_default_str();
    bench_cmd->add_option("--out", bo.out, "Report file; standard output when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    try {
        if (*run_cmd) return cmd_run(ro, out);
        if (*sim_cmd) return cmd_simulate(so, out);
        return cmd_bench(bo, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const StatsError& e) {
        err << "error: " << e.what() << '\n';
        return is_input_error(e.code()) ? kExitInput : kExitContract;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitContract;
    }
}

}  // namespace pairstat::cli
