#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "phdnas/phdnas.hpp"

namespace phdnas::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kIoError = 2 };

/// Entry point shared by the executable and the tests. `args[0]` is the
/// program name.
int run(const std::vector<std::string>& args);

/// Diversity trace of one ablation search.
struct AblationSeries {
    std::string arm; // "3obj" or "2obj"
    std::uint64_t seed = 0;
    std::vector<double> diversity;
};

struct AblationOutcome {
    std::vector<AblationSeries> series; // sorted by arm, seed
    double median_first_3obj = 0.0;
    double median_final_3obj = 0.0;
    double median_first_2obj = 0.0;
    double median_final_2obj = 0.0;
    std::string verdict;
};

struct AblationConfig {
    DeviceId device;
    std::size_t seeds = 10;
    std::uint64_t seed_base = 1;
    std::size_t n_pop = 20;
    std::size_t n_gen = 100;
    /// 0 = hardware concurrency.
    std::size_t threads = 0;
};

inline constexpr std::size_t kMinAblationSeeds = 5;

/// Paired 3-objective / 2-objective searches over consecutive seeds. The
/// verdict compares medians of generation 1 and the final generation.
AblationOutcome run_ablation(const BenchmarkTable& table, const AblationConfig& config);

/// Thread cap from PHDNAS_THREADS (unset or 0 = hardware concurrency).
std::size_t thread_cap();

} // namespace phdnas::cli
