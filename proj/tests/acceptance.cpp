// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Thresholds and time limits are pinned below.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "phdnas/phdnas.hpp"

using namespace phdnas;
namespace fs = std::filesystem;

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kSelfMiTol = 1e-9;
constexpr double kIndependentMiPerLayer = 0.02;
constexpr double kHypervolumeRatio = 0.90;

constexpr double kSortLimitS = 10.0;
constexpr double kExactFrontLimitS = 5.0; // per table
constexpr double kAblationLimitS = 120.0;
constexpr double kSearchLimitS = 30.0; // per run

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

bool rel_close(double a, double b) { return std::abs(a - b) <= kRelTol * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int quiet_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "phdnas");
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = cli::run(args);
    std::cout.rdbuf(old);
    return code;
}

const BenchmarkTable& frozen_bench() {
    static const BenchmarkTable table = generate_synthetic(1);
    return table;
}

// ---------------------------------------------------------------------------

Outcome ac1_sort_equivalence() {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<int> size(1, 200);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> grid(0, 9);
    std::uniform_real_distribution<double> u(0, 1);
    const auto start = Clock::now();
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Sense> senses(3);
        for (auto& s : senses) s = coin(rng) ? Sense::maximize : Sense::minimize;
        // Half the instances sit on a coarse grid to exercise ties.
        const bool coarse = trial % 2 == 0;
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(size(rng)), std::vector<double>(3));
        for (auto& p : pts)
            for (double& v : p) v = coarse ? grid(rng) : u(rng);
        if (fast_nondominated_sort(pts, senses) != oracle::peel_fronts(pts, senses)) ++mismatches;
    }
    const double t = seconds_since(start);
    return {mismatches == 0 && t < kSortLimitS,
            std::to_string(mismatches) + " mismatching instances of 100, " + num(t) + " s"};
}

Outcome ac2_exact_front() {
    Outcome out;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto table = generate_synthetic(seed);
        for (const auto& device : table.devices()) {
            const auto start = Clock::now();
            const auto exact = exact_pareto_front(table, device);
            const auto pts = table_points(table, device);
            std::vector<std::vector<double>> rows;
            rows.reserve(pts.size());
            for (const auto& p : pts) rows.push_back({p.similarity, p.cost});
            const auto fronts = fast_nondominated_sort(rows, kTwoObjectiveSenses);
            const double t = seconds_since(start);
            std::vector<ArchIndex> first;
            for (std::size_t i : fronts[0]) first.push_back(ArchIndex(static_cast<std::uint32_t>(i)));
            const bool ok = first == exact && t < kExactFrontLimitS;
            out.pass = out.pass && ok;
            if (!out.detail.empty()) out.detail += "; ";
            out.detail += "seed " + std::to_string(seed) + "/" + device + ": " + std::to_string(exact.size()) +
                          (ok ? " equal" : " DIFFER") + " (" + num(t) + " s)";
        }
    }
    return out;
}

Outcome ac3_ablation_trend() {
    cli::AblationConfig config;
    config.device = "fpga";
    config.seeds = 10;
    config.n_pop = 20;
    config.n_gen = 100;
    config.threads = cli::thread_cap();
    const auto start = Clock::now();
    const auto r = cli::run_ablation(frozen_bench(), config);
    const double t = seconds_since(start);
    const bool up = r.median_final_3obj > r.median_first_3obj;
    const bool down = r.median_final_2obj < r.median_first_2obj;
    return {up && down && t < kAblationLimitS,
            "3obj " + num(r.median_first_3obj) + " -> " + num(r.median_final_3obj) + ", 2obj " +
                num(r.median_first_2obj) + " -> " + num(r.median_final_2obj) + ", verdict '" + r.verdict + "', " +
                num(t) + " s"};
}

Outcome ac4_search_quality() {
    const auto& table = frozen_bench();
    const DeviceId device("fpga");
    const auto ref = reference_point(table, device);
    const auto exact = exact_pareto_front(table, device);
    const double exact_hv = hypervolume_2d(front_points(table, device, exact), ref);
    std::vector<double> ratios;
    double slowest = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SearchConfig config;
        config.n_pop = 20;
        config.n_gen = 100;
        config.device = device;
        config.seed = seed;
        const auto start = Clock::now();
        const auto result = run_search(config, table);
        slowest = std::max(slowest, seconds_since(start));
        ratios.push_back(hypervolume_2d(result.archive.front_points(), ref) / exact_hv);
    }
    const double m = median(ratios);
    return {m >= kHypervolumeRatio && slowest < kSearchLimitS,
            "median hypervolume ratio " + num(m) + " (min " + num(*std::min_element(ratios.begin(), ratios.end())) +
                "), slowest run " + num(slowest) + " s"};
}

Outcome ac5_budget(const std::string& bench, const fs::path& work) {
    const auto dir = work / "ac5";
    if (quiet_cli({"run", "--bench", bench, "--device", "fpga", "--seed", "1", "--out", dir.string()}) != cli::kOk)
        return {false, "run command failed"};
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    const auto evaluations = manifest["evaluations"].get<std::size_t>();
    const auto budget = manifest["evaluation_budget"].get<std::size_t>();
    const auto front = manifest["archive"]["front_size"].get<std::size_t>();
    return {budget == 2020 && evaluations <= budget && front > 1,
            std::to_string(evaluations) + " evaluations of " + std::to_string(budget) + " (" +
                num(100.0 * static_cast<double>(evaluations) / kNumArchitectures) + "% of space), front " +
                std::to_string(front) + " points"};
}

Outcome ac6_diversity_identities() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
    std::uniform_real_distribution<double> scale(0.01, 10.0);
    std::uniform_int_distribution<int> size(1, 64);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> c(static_cast<std::size_t>(size(rng)));
        for (double& x : c) x = u(rng);
        const double base = population_diversity(c);
        const double b = shift(rng), k = scale(rng);
        std::vector<double> moved = c, scaled = c;
        for (double& x : moved) x += b;
        for (double& x : scaled) x *= k;
        const std::vector<double> flat(c.size(), c[0]);
        const bool all_equal = std::all_of(c.begin(), c.end(), [&](double x) { return x == c[0]; });

        bool ok = true;
        // Translation error is bounded by the shifted magnitudes, not by the result.
        const double shift_scale = static_cast<double>(c.size()) * (std::abs(b) + 100.0) * (std::abs(b) + 100.0);
        ok = ok && std::abs(population_diversity(moved) - base) <= kRelTol * std::max(1.0, shift_scale);
        ok = ok && rel_close(population_diversity(scaled), k * k * base);
        ok = ok && population_diversity(flat) == 0.0;
        ok = ok && ((base == 0.0) == all_equal);
        ok = ok && rel_close(base, oracle::population_diversity(c));
        for (double own : c) {
            double direct = 0.0;
            for (double other : c) direct += (own - other) * (own - other);
            ok = ok && rel_close(cost_diversity(own, c), direct);
        }
        failures += ok ? 0 : 1;
    }
    return {failures == 0, std::to_string(failures) + " failing vectors of 1000"};
}

Outcome ac7_determinism(const std::string& bench, const fs::path& work) {
    const auto a = work / "ac7a", b = work / "ac7b";
    for (const auto& d : {a, b})
        if (quiet_cli({"run", "--bench", bench, "--device", "edgegpu", "--seed", "7", "--out", d.string()}) != cli::kOk)
            return {false, "run command failed"};
    const auto x = slurp(a / "archive.csv"), y = slurp(b / "archive.csv");
    return {!x.empty() && x == y, std::to_string(x.size()) + " bytes, " + (x == y ? "identical" : "different")};
}

Outcome ac8_mutual_information() {
    Outcome out;
    std::vector<double> levels;
    for (int level = 0; level < 4; ++level)
        for (int i = 0; i < 250; ++i) levels.push_back(level * 1.5 - 2.0);
    const FeatureSample self({LayerSamples(levels)});
    const double self_mi = estimate_layerwise_mi(self, self, 4);
    const bool self_ok = std::abs(self_mi - std::log(4.0)) <= kSelfMiTol;

    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    auto sample = [&](std::size_t layers, std::size_t n, std::size_t features) {
        std::vector<LayerSamples> out;
        for (std::size_t l = 0; l < layers; ++l) {
            std::vector<double> v(n * features);
            for (double& x : v) x = g(rng);
            out.emplace_back(n, features, std::move(v));
        }
        return FeatureSample(std::move(out));
    };
    const std::size_t layers = 3;
    const auto x = sample(layers, 10000, 4);
    const auto y = sample(layers, 10000, 4);
    const double per_layer = estimate_layerwise_mi(x, y, 4) / static_cast<double>(layers);
    const bool independent_ok = per_layer <= kIndependentMiPerLayer;

    std::uniform_int_distribution<int> n(2, 200), bins(2, 12), features(1, 5), nl(1, 4), discrete(0, 3);
    int negative = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t count = static_cast<std::size_t>(n(rng));
        const std::size_t nf = static_cast<std::size_t>(features(rng));
        const std::size_t L = static_cast<std::size_t>(nl(rng));
        std::vector<LayerSamples> a, b;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<double> va(count * nf), vb(count * nf);
            // Alternate continuous and heavily tied inputs.
            for (double& v : va) v = trial % 2 ? g(rng) : discrete(rng);
            for (double& v : vb) v = trial % 2 ? g(rng) : discrete(rng);
            a.emplace_back(count, nf, std::move(va));
            b.emplace_back(count, nf, std::move(vb));
        }
        if (estimate_layerwise_mi(FeatureSample(std::move(a)), FeatureSample(std::move(b)),
                                  static_cast<std::size_t>(bins(rng))) < 0.0)
            ++negative;
    }
    out.pass = self_ok && independent_ok && negative == 0;
    out.detail = "self " + num(self_mi) + " vs ln4 " + num(std::log(4.0)) + ", independent " + num(per_layer) +
                 " nats/layer, " + std::to_string(negative) + " negative of 1000";
    return out;
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / ("phdnas_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string bench = (work / "bench.csv").string();
    save_benchmark(frozen_bench(), bench);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC-1 nondominated sort matches pairwise oracle", ac1_sort_equivalence},
        {"AC-2 exact front equals first sorted front", ac2_exact_front},
        {"AC-3 diversity trend with and without the diversity objective", ac3_ablation_trend},
        {"AC-4 archive hypervolume against exact front", ac4_search_quality},
        {"AC-5 evaluation budget with multi-point front", [&] { return ac5_budget(bench, work); }},
        {"AC-6 cost diversity identities", ac6_diversity_identities},
        {"AC-7 byte-identical archives for equal seeds", [&] { return ac7_determinism(bench, work); }},
        {"AC-8 mutual information estimator sanity", ac8_mutual_information},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " | " << num(seconds_since(start))
                  << " s" << std::endl;
        failed += o.pass ? 0 : 1;
    }
    fs::remove_all(work);
    std::cout << (failed ? std::to_string(failed) + " of 8 criteria failed" : std::string("all 8 criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
