#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace phdnas::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
    finish(out, path);
}

std::string archive_csv(const ParetoArchive& archive) {
    std::ostringstream out;
    out << "index,genotype,similarity,cost,on_front\n";
    for (const auto& [index, entry] : archive.entries()) {
        out << index.value() << ',' << entry.genotype.to_string() << ',' << format_double(entry.similarity) << ','
            << format_double(entry.cost) << ',' << (archive.on_front(index) ? 1 : 0) << '\n';
    }
    return out.str();
}

ordered_json point_json(TradeoffPoint p) { return {{"similarity", p.similarity}, {"cost", p.cost}}; }

// ---------------------------------------------------------------------------

struct RunOptions {
    std::string bench;
    std::string device;
    std::size_t pop = 20;
    std::size_t gen = 100;
    std::uint64_t seed = 1;
    int objectives = 3;
    double mutation_rate = 1.0 / 6.0;
    double crossover_prob = 0.9;
    bool normalize_costs = false;
    std::string out = ".";
};

int cmd_run(const RunOptions& opt) {
    const BenchmarkTable table = load_benchmark(opt.bench);

    SearchConfig config;
    config.n_pop = opt.pop;
    config.n_gen = opt.gen;
    config.device = opt.device;
    config.mutation_rate = opt.mutation_rate;
    config.crossover_prob = opt.crossover_prob;
    config.normalize_costs = opt.normalize_costs;
    config.objectives = opt.objectives == 2 ? ObjectiveMode::two : ObjectiveMode::three;
    config.seed = opt.seed;

    const auto start = std::chrono::steady_clock::now();
    const SearchResult result = run_search(config, table);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    const TradeoffPoint ref = reference_point(table, config.device);
    const auto front = result.archive.front_points();

    ordered_json manifest;
    manifest["config"] = {{"bench", opt.bench},
                          {"device", config.device.name},
                          {"n_pop", config.n_pop},
                          {"n_gen", config.n_gen},
                          {"objectives", opt.objectives},
                          {"mutation_rate", config.mutation_rate},
                          {"crossover_prob", config.crossover_prob},
                          {"normalize_costs", config.normalize_costs},
                          {"seed", config.seed}};
    manifest["seed"] = config.seed;
    manifest["generations"] = result.generations;
    manifest["evaluations"] = result.evaluations;
    manifest["evaluation_budget"] = config.n_pop * (config.n_gen + 1);
    manifest["duration_seconds"] = std::max(elapsed.count(), 1e-9);
    manifest["population_diversity"] = result.diversity_series;
    manifest["archive"] = {{"entries", result.archive.size()},
                           {"front_size", front.size()},
                           {"hypervolume", hypervolume_2d(front, ref)},
                           {"reference_point", point_json(ref)}};

    ensure_directory(opt.out);
    write_text(fs::path(opt.out) / "archive.csv", archive_csv(result.archive));
    write_text(fs::path(opt.out) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "evaluated " << result.evaluations << " architectures; archive front has " << front.size()
              << " members\n";
    return kOk;
}

// ---------------------------------------------------------------------------

struct OracleOptions {
    std::string bench;
    std::string device;
    std::string out = "oracle_front.csv";
};

int cmd_oracle(const OracleOptions& opt) {
    const BenchmarkTable table = load_benchmark(opt.bench);
    const DeviceId device(opt.device);
    const std::size_t column = table.device_column(device);
    const auto front = exact_pareto_front(table, device);
    const auto points = front_points(table, device, front);
    const TradeoffPoint ref = reference_point(table, device);

    std::ostringstream csv;
    csv << "index,genotype,similarity,cost";
    if (table.has_accuracy()) csv << ",accuracy";
    csv << '\n';
    for (ArchIndex i : front) {
        const auto& row = table.row(i);
        csv << i.value() << ',' << genotype_from_index(i).to_string() << ',' << format_double(row.similarity) << ','
            << format_double(row.costs[column]);
        if (row.accuracy) csv << ',' << format_double(*row.accuracy);
        csv << '\n';
    }

    ordered_json summary;
    summary["device"] = device.name;
    summary["front_size"] = front.size();
    summary["hypervolume"] = hypervolume_2d(points, ref);
    summary["reference_point"] = point_json(ref);
    if (table.has_accuracy()) {
        std::optional<ArchIndex> best;
        for (std::uint32_t i = 0; i < kNumArchitectures; ++i) {
            const ArchIndex index(i);
            if (!best || *table.accuracy(index) > *table.accuracy(*best)) best = index;
        }
        const auto& row = table.row(*best);
        summary["best_accuracy"] = {{"index", best->value()},
                                    {"genotype", genotype_from_index(*best).to_string()},
                                    {"accuracy", *row.accuracy},
                                    {"similarity", row.similarity},
                                    {"cost", row.costs[column]}};
    }

    const fs::path out(opt.out);
    if (out.has_parent_path()) ensure_directory(out.parent_path().string());
    write_text(out, csv.str());
    write_text(fs::path(opt.out + ".json"), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct AblateOptions {
    std::string bench;
    std::string device;
    std::size_t seeds = 10;
    std::uint64_t seed_base = 1;
    std::size_t pop = 20;
    std::size_t gen = 100;
    std::string out = ".";
};

int cmd_ablate(const AblateOptions& opt) {
    const BenchmarkTable table = load_benchmark(opt.bench);
    AblationConfig config;
    config.device = opt.device;
    config.seeds = opt.seeds;
    config.seed_base = opt.seed_base;
    config.n_pop = opt.pop;
    config.n_gen = opt.gen;
    config.threads = thread_cap();
    const AblationOutcome outcome = run_ablation(table, config);

    std::ostringstream csv;
    csv << "generation,arm,seed,pop_diversity\n";
    for (const auto& s : outcome.series)
        for (std::size_t g = 0; g < s.diversity.size(); ++g)
            csv << g << ',' << s.arm << ',' << s.seed << ',' << format_double(s.diversity[g]) << '\n';

    ordered_json summary;
    summary["device"] = config.device.name;
    summary["seeds"] = config.seeds;
    summary["seed_base"] = config.seed_base;
    summary["n_pop"] = config.n_pop;
    summary["n_gen"] = config.n_gen;
    summary["3obj"] = {{"median_generation_1", outcome.median_first_3obj},
                       {"median_final", outcome.median_final_3obj}};
    summary["2obj"] = {{"median_generation_1", outcome.median_first_2obj},
                       {"median_final", outcome.median_final_2obj}};
    summary["verdict"] = outcome.verdict;

    ensure_directory(opt.out);
    write_text(fs::path(opt.out) / "ablation.csv", csv.str());
    write_text(fs::path(opt.out) / "ablation_summary.json", summary.dump(2) + "\n");
    std::cout << "3obj median diversity: generation 1 = " << outcome.median_first_3obj
              << ", final = " << outcome.median_final_3obj << '\n'
              << "2obj median diversity: generation 1 = " << outcome.median_first_2obj
              << ", final = " << outcome.median_final_2obj << '\n'
              << "verdict: " << outcome.verdict << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct GenBenchOptions {
    std::uint64_t seed = 1;
    std::vector<std::string> devices{"fpga", "edgegpu"};
    std::string out;
};

int cmd_gen_bench(const GenBenchOptions& opt) {
    SyntheticParams params;
    params.devices = opt.devices;
    const BenchmarkTable table = generate_synthetic(opt.seed, params);
    const fs::path out(opt.out);
    if (out.has_parent_path()) ensure_directory(out.parent_path().string());
    save_benchmark(table, opt.out);
    std::cout << "wrote " << table.row_count() << " rows to " << opt.out << '\n';
    return kOk;
}

} // namespace

std::size_t thread_cap() {
    std::size_t cap = 0;
    if (const char* env = std::getenv("PHDNAS_THREADS")) {
        try {
            cap = static_cast<std::size_t>(std::stoul(env));
        } catch (const std::exception&) {
            throw ConfigError(std::string("PHDNAS_THREADS must be a non-negative integer, got '") + env + "'");
        }
    }
    if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
    return cap;
}

AblationOutcome run_ablation(const BenchmarkTable& table, const AblationConfig& config) {
    if (config.seeds == 0) throw ConfigError("ablation needs at least one seed");
    if (config.n_gen < 1) throw ConfigError("ablation needs at least one generation");

    // Slots in canonical order: arm "2obj" before "3obj", then seed.
    AblationOutcome outcome;
    outcome.series.resize(2 * config.seeds);
    for (std::size_t s = 0; s < config.seeds; ++s) {
        outcome.series[s] = {"2obj", config.seed_base + s, {}};
        outcome.series[config.seeds + s] = {"3obj", config.seed_base + s, {}};
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t slot = next++; slot < outcome.series.size() && !failed; slot = next++) {
            try {
                auto& series = outcome.series[slot];
                SearchConfig sc;
                sc.n_pop = config.n_pop;
                sc.n_gen = config.n_gen;
                sc.device = config.device;
                sc.seed = series.seed;
                sc.objectives = series.arm == "2obj" ? ObjectiveMode::two : ObjectiveMode::three;
                series.diversity = run_search(sc, table).diversity_series;
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(config.threads == 0 ? thread_cap() : config.threads, outcome.series.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> first2, final2, first3, final3;
    for (const auto& s : outcome.series) {
        auto& first = s.arm == "2obj" ? first2 : first3;
        auto& last = s.arm == "2obj" ? final2 : final3;
        first.push_back(s.diversity[1]);
        last.push_back(s.diversity.back());
    }
    outcome.median_first_2obj = median(first2);
    outcome.median_final_2obj = median(final2);
    outcome.median_first_3obj = median(first3);
    outcome.median_final_3obj = median(final3);

    if (config.seeds < kMinAblationSeeds) {
        outcome.verdict = "insufficient seeds";
    } else if (outcome.median_final_3obj > outcome.median_first_3obj &&
               outcome.median_final_2obj < outcome.median_first_2obj) {
        outcome.verdict = "trend reproduced";
    } else {
        outcome.verdict = "trend not reproduced";
    }
    return outcome;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Hardware-aware multi-objective architecture search over a tabular benchmark", "phdnas"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run_cmd = app.add_subcommand("run", "Run one search and write archive.csv and manifest.json");
    run_cmd->add_option("--bench", run_opt.bench, "Benchmark CSV")->required();
    run_cmd->add_option("--device", run_opt.device, "Target device (cost column)")->required();
    run_cmd->add_option("--pop", run_opt.pop, "Population size")->capture_default_str();
    run_cmd->add_option("--gen", run_opt.gen, "Generations after initialization")->capture_default_str();
    run_cmd->add_option("--seed", run_opt.seed, "Random seed")->capture_default_str();
    run_cmd->add_option("--objectives", run_opt.objectives, "3 = with cost diversity, 2 = without")
        ->check(CLI::IsMember({2, 3}))
        ->capture_default_str();
    run_cmd->add_option("--mutation-rate", run_opt.mutation_rate, "Per-edge mutation probability")
        ->capture_default_str();
    run_cmd->add_option("--crossover-prob", run_opt.crossover_prob, "Crossover probability")->capture_default_str();
    run_cmd->add_flag("--normalize-costs", run_opt.normalize_costs, "Min-max scale costs inside the diversity term");
    run_cmd->add_option("--out", run_opt.out, "Output directory")->capture_default_str();

    OracleOptions oracle_opt;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive Pareto front of a benchmark table");
    oracle_cmd->add_option("--bench", oracle_opt.bench, "Benchmark CSV")->required();
    oracle_cmd->add_option("--device", oracle_opt.device, "Target device (cost column)")->required();
    oracle_cmd->add_option("--out", oracle_opt.out, "Front CSV (summary goes to <out>.json)")->capture_default_str();

    AblateOptions ablate_opt;
    auto* ablate_cmd = app.add_subcommand("ablate", "Paired searches with and without the diversity objective");
    ablate_cmd->add_option("--bench", ablate_opt.bench, "Benchmark CSV")->required();
    ablate_cmd->add_option("--device", ablate_opt.device, "Target device (cost column)")->required();
    ablate_cmd->add_option("--seeds", ablate_opt.seeds, "Number of paired seeds")->required()->check(
        CLI::PositiveNumber);
    ablate_cmd->add_option("--seed-base", ablate_opt.seed_base, "First seed")->capture_default_str();
    ablate_cmd->add_option("--pop", ablate_opt.pop, "Population size")->capture_default_str();
    ablate_cmd->add_option("--gen", ablate_opt.gen, "Generations after initialization")->capture_default_str();
    ablate_cmd->add_option("--out", ablate_opt.out, "Output directory")->capture_default_str();

    GenBenchOptions gen_opt;
    auto* gen_cmd = app.add_subcommand("gen-bench", "Write a synthetic benchmark CSV");
    gen_cmd->add_option("--seed", gen_opt.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("--devices", gen_opt.devices, "Comma-separated device names")->delimiter(',');
    gen_cmd->add_option("--out", gen_opt.out, "Output CSV")->required();

    std::vector<const char*> argv;
    argv.push_back(args.empty() ? "phdnas" : args.front().c_str());
    for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kDomainError;
    }

    try {
        if (*run_cmd) return cmd_run(run_opt);
        if (*oracle_cmd) return cmd_oracle(oracle_opt);
        if (*ablate_cmd) return cmd_ablate(ablate_opt);
        if (*gen_cmd) return cmd_gen_bench(gen_opt);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kDomainError;
}

} // namespace phdnas::cli
