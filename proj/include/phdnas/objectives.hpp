#pragma once

/// @file objectives.hpp
/// @brief The three search objectives: similarity to the reference model
/// (maximize), hardware cost on the target device (minimize) and hardware
/// cost diversity within the current population (maximize).
///
/// Similarity and cost are table lookups. Diversity is population-coupled:
/// the diversity of a member is the sum of squared cost differences to every
/// member of the population, itself included.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phdnas/errors.hpp"
#include "phdnas/searchspace.hpp"
#include "phdnas/table.hpp"

namespace phdnas {

enum class Sense : std::uint8_t { maximize, minimize };

struct ObjectiveVector {
    double similarity = 0.0; // maximize
    double cost = 0.0;       // minimize, device units
    double diversity = 0.0;  // maximize, squared cost units

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

inline constexpr std::array<Sense, 3> kThreeObjectiveSenses{Sense::maximize, Sense::minimize, Sense::maximize};
inline constexpr std::array<Sense, 2> kTwoObjectiveSenses{Sense::maximize, Sense::minimize};

/// Number of objectives a search optimizes: all three, or similarity and
/// cost only (diversity disabled).
enum class ObjectiveMode : std::uint8_t { three = 3, two = 2 };

[[nodiscard]] constexpr std::span<const Sense> senses_for(ObjectiveMode mode) noexcept {
    if (mode == ObjectiveMode::two) return kTwoObjectiveSenses;
    return kThreeObjectiveSenses;
}

/// Leading `size` components of `v` in objective order (similarity, cost, diversity).
[[nodiscard]] inline std::vector<double> as_point(const ObjectiveVector& v, std::size_t size = 3) {
    std::vector<double> p{v.similarity, v.cost, v.diversity};
    p.resize(size);
    return p;
}

[[nodiscard]] inline double similarity_score(const BenchmarkTable& table, const Genotype& g) {
    return table.similarity(index_from_genotype(g));
}

[[nodiscard]] inline double hardware_cost(const BenchmarkTable& table, const Genotype& g, const DeviceId& device) {
    const std::size_t column = table.device_column(device);
    return table.cost(index_from_genotype(g), column);
}

[[nodiscard]] inline double cost_diversity(double own_cost, std::span<const double> population_costs) {
    if (population_costs.empty()) throw PreconditionError("cost diversity of an empty population");
    double sum = 0.0;
    for (double other : population_costs) {
        const double d = own_cost - other;
        sum += d * d;
    }
    return sum;
}

/// Diversity term of every member against the whole list.
[[nodiscard]] inline std::vector<double> cost_diversities(std::span<const double> population_costs) {
    std::vector<double> out;
    out.reserve(population_costs.size());
    for (double own : population_costs) out.push_back(cost_diversity(own, population_costs));
    return out;
}

[[nodiscard]] inline double population_diversity(std::span<const double> population_costs) {
    if (population_costs.empty()) throw PreconditionError("population diversity of an empty population");
    double sum = 0.0;
    for (double own : population_costs) sum += cost_diversity(own, population_costs);
    return sum / static_cast<double>(population_costs.size());
}

struct DiversityOptions {
    /// Min-max scale costs by the device's range over the whole table before
    /// computing diversity. Off by default (raw device units).
    bool normalize_costs = false;
};

/// Similarity and raw cost of each genotype, in input order.
struct PopulationLookups {
    std::vector<double> similarity;
    std::vector<double> cost;
};

[[nodiscard]] inline PopulationLookups lookup_population(std::span<const Genotype> pop, const BenchmarkTable& table,
                                                         const DeviceId& device) {
    const std::size_t column = table.device_column(device);
    PopulationLookups out;
    out.similarity.reserve(pop.size());
    out.cost.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const ArchIndex index = index_from_genotype(pop[i]);
        if (!table.has_row(index)) throw MissingArchitectureError(index.value(), "population member " + std::to_string(i));
        const auto& row = table.row(index);
        out.similarity.push_back(row.similarity);
        out.cost.push_back(row.costs[column]);
    }
    return out;
}

/// Costs as seen by the diversity objective (raw or table-normalized).
[[nodiscard]] inline std::vector<double> diversity_costs(std::span<const double> raw_costs, const BenchmarkTable& table,
                                                         const DeviceId& device, const DiversityOptions& options) {
    std::vector<double> costs(raw_costs.begin(), raw_costs.end());
    if (!options.normalize_costs) return costs;
    const auto [lo, hi] = table.cost_range(table.device_column(device));
    const double span = hi - lo;
    for (double& c : costs) c = span > 0.0 ? (c - lo) / span : 0.0;
    return costs;
}

/// Two-phase evaluation: table lookups for every member, then diversity of
/// every member against the complete cost list.
[[nodiscard]] inline std::vector<ObjectiveVector> evaluate_population(std::span<const Genotype> pop,
                                                                      const BenchmarkTable& table,
                                                                      const DeviceId& device,
                                                                      const DiversityOptions& options = {}) {
    const PopulationLookups looked = lookup_population(pop, table, device);
    const std::vector<double> div = cost_diversities(diversity_costs(looked.cost, table, device, options));
    std::vector<ObjectiveVector> out(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) out[i] = {looked.similarity[i], looked.cost[i], div[i]};
    return out;
}

} // namespace phdnas
