#pragma once

/// @file moea.hpp
/// @brief Generational NSGA-II driving the hardware-aware architecture search.
///
/// Each generation the current population is evaluated on all objectives,
/// ranked, and merged into the archive; NSGA-II then breeds the next
/// population (binary tournament, uniform crossover, per-edge mutation) and
/// keeps the best n_pop of parents plus offspring. Offspring diversity is
/// measured against the combined parent + offspring cost list, and parents
/// are rescored against the same list so the 2N pool compares on a common
/// footing.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phdnas/errors.hpp"
#include "phdnas/hypervolume.hpp"
#include "phdnas/objectives.hpp"
#include "phdnas/pareto.hpp"
#include "phdnas/searchspace.hpp"
#include "phdnas/table.hpp"

namespace phdnas {

struct Individual {
    Genotype genotype;
    std::optional<ObjectiveVector> objectives;
    std::optional<std::size_t> rank; // front index, 0 = best
    double crowding = 0.0;

    [[nodiscard]] bool evaluated() const noexcept { return objectives.has_value(); }
    [[nodiscard]] bool sorted() const noexcept { return rank.has_value(); }
};

struct Population {
    std::vector<Individual> members;
    std::size_t generation = 0;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    [[nodiscard]] bool sorted() const noexcept {
        return !members.empty() && std::all_of(members.begin(), members.end(), [](const auto& m) { return m.sorted(); });
    }
    [[nodiscard]] std::vector<Genotype> genotypes() const {
        std::vector<Genotype> out;
        out.reserve(members.size());
        for (const auto& m : members) out.push_back(m.genotype);
        return out;
    }
    [[nodiscard]] std::vector<double> costs() const {
        std::vector<double> out;
        out.reserve(members.size());
        for (const auto& m : members) {
            if (!m.evaluated()) throw StateError("population member has not been evaluated");
            out.push_back(m.objectives->cost);
        }
        return out;
    }
};

struct SearchConfig {
    std::size_t n_pop = 20;
    std::size_t n_gen = 100;
    DeviceId device;
    double mutation_rate = 1.0 / 6.0;
    double crossover_prob = 0.9;
    bool normalize_costs = false;
    ObjectiveMode objectives = ObjectiveMode::three;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_pop < 2 || n_pop % 2 != 0)
            throw ConfigError("population size must be even and at least 2, got " + std::to_string(n_pop));
        if (device.name.empty()) throw ConfigError("no target device given");
        if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation rate must lie in [0, 1]");
        if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0))
            throw ConfigError("crossover probability must lie in [0, 1]");
    }
};

namespace detail {

template <class Members>
std::vector<std::vector<double>> objective_points(const Members& members, std::size_t dims) {
    std::vector<std::vector<double>> pts;
    pts.reserve(std::size(members));
    for (const Individual& m : members) {
        if (!m.evaluated()) throw StateError("individual has not been evaluated");
        pts.push_back(as_point(*m.objectives, dims));
    }
    return pts;
}

} // namespace detail

/// Sets rank and crowding of every member from its objectives. Returns the fronts.
inline std::vector<Front> rank_and_crowd(std::span<Individual> members, std::span<const Sense> senses) {
    const auto pts = detail::objective_points(members, senses.size());
    auto fronts = fast_nondominated_sort(pts, senses);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<std::vector<double>> front_pts;
        front_pts.reserve(fronts[f].size());
        for (std::size_t i : fronts[f]) front_pts.push_back(pts[i]);
        const auto dist = crowding_distance(front_pts, senses);
        for (std::size_t r = 0; r < fronts[f].size(); ++r) {
            members[fronts[f][r]].rank = f;
            members[fronts[f][r]].crowding = dist[r];
        }
    }
    return fronts;
}

/// Crowded-comparison winner of two sorted individuals; nullopt on a full tie.
[[nodiscard]] inline std::optional<bool> first_wins(const Individual& a, const Individual& b) noexcept {
    if (*a.rank != *b.rank) return *a.rank < *b.rank;
    if (a.crowding != b.crowding) return a.crowding > b.crowding;
    return std::nullopt;
}

/// Position of the winner of a binary tournament between two distinct,
/// uniformly drawn members.
[[nodiscard]] inline std::size_t binary_tournament_index(const Population& pop, Rng& rng) {
    if (!pop.sorted()) throw StateError("binary tournament needs a ranked population");
    const std::size_t n = pop.size();
    if (n == 1) return 0;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_int_distribution<std::size_t> second(0, n - 2);
    const std::size_t a = first(rng);
    std::size_t b = second(rng);
    if (b >= a) ++b;
    if (const auto w = first_wins(pop.members[a], pop.members[b])) return *w ? a : b;
    return std::bernoulli_distribution(0.5)(rng) ? a : b;
}

[[nodiscard]] inline const Individual& binary_tournament(const Population& pop, Rng& rng) {
    return pop.members[binary_tournament_index(pop, rng)];
}

/// Elitist truncation of parents + offspring to `n_pop` members: whole fronts
/// in rank order, then the splitting front by descending crowding distance
/// (ties keep input order). Survivors keep their input order.
[[nodiscard]] inline Population environmental_selection(std::vector<Individual> combined, std::size_t n_pop,
                                                        std::span<const Sense> senses = kThreeObjectiveSenses) {
    if (combined.size() < n_pop)
        throw PreconditionError("environmental selection needs at least " + std::to_string(n_pop) + " members, got " +
                                std::to_string(combined.size()));
    Population out;
    if (n_pop == 0) return out;
    const auto fronts = rank_and_crowd(combined, senses);

    std::vector<std::size_t> keep;
    keep.reserve(n_pop);
    for (const auto& front : fronts) {
        if (keep.size() + front.size() <= n_pop) {
            keep.insert(keep.end(), front.begin(), front.end());
            if (keep.size() == n_pop) break;
            continue;
        }
        std::vector<std::size_t> by_crowding = front;
        std::stable_sort(by_crowding.begin(), by_crowding.end(), [&](std::size_t a, std::size_t b) {
            return combined[a].crowding > combined[b].crowding;
        });
        keep.insert(keep.end(), by_crowding.begin(), by_crowding.begin() + static_cast<std::ptrdiff_t>(n_pop - keep.size()));
        break;
    }
    std::sort(keep.begin(), keep.end());
    out.members.reserve(n_pop);
    for (std::size_t i : keep) out.members.push_back(std::move(combined[i]));
    return out;
}

struct ArchiveEntry {
    Genotype genotype;
    double similarity = 0.0;
    double cost = 0.0;

    friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

/// Every architecture a search has kept in a population, plus the subset that
/// is non-dominated under (similarity maximize, cost minimize). Diversity is
/// population-relative and plays no part here.
class ParetoArchive {
public:
    [[nodiscard]] const std::map<ArchIndex, ArchiveEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    /// Front members in ascending index order.
    [[nodiscard]] std::vector<ArchIndex> front() const { return {front_.begin(), front_.end()}; }
    [[nodiscard]] bool on_front(ArchIndex index) const { return std::binary_search(front_.begin(), front_.end(), index); }

    [[nodiscard]] std::vector<TradeoffPoint> front_points() const {
        std::vector<TradeoffPoint> out;
        out.reserve(front_.size());
        for (ArchIndex i : front_) {
            const auto& e = entries_.at(i);
            out.push_back({e.similarity, e.cost});
        }
        return out;
    }

    /// Adds an architecture; the first insertion of an index wins.
    /// Returns whether the entry was new.
    bool insert(const Genotype& g, double similarity, double cost) {
        const ArchIndex index = index_from_genotype(g);
        const auto [it, fresh] = entries_.try_emplace(index, ArchiveEntry{g, similarity, cost});
        if (!fresh) return false;
        const TradeoffPoint p{similarity, cost};
        const auto point_of = [&](ArchIndex i) {
            const auto& e = entries_.at(i);
            return TradeoffPoint{e.similarity, e.cost};
        };
        for (ArchIndex member : front_)
            if (weakly_better(point_of(member), p)) return true;
        std::erase_if(front_, [&](ArchIndex member) { return weakly_better(p, point_of(member)); });
        front_.insert(std::lower_bound(front_.begin(), front_.end(), index), index);
        return true;
    }

    friend bool operator==(const ParetoArchive&, const ParetoArchive&) = default;

private:
    std::map<ArchIndex, ArchiveEntry> entries_;
    std::vector<ArchIndex> front_;

    /// `a` dominates `b` in the (similarity max, cost min) plane.
    static bool weakly_better(TradeoffPoint a, TradeoffPoint b) noexcept {
        const bool no_worse = a.similarity >= b.similarity && a.cost <= b.cost;
        const bool strictly = a.similarity > b.similarity || a.cost < b.cost;
        return no_worse && strictly;
    }
};

inline void update_archive_in_place(ParetoArchive& archive, const Population& pop) {
    for (const auto& m : pop.members) {
        if (!m.evaluated()) throw StateError("archive update needs an evaluated population");
        archive.insert(m.genotype, m.objectives->similarity, m.objectives->cost);
    }
}

[[nodiscard]] inline ParetoArchive update_archive(ParetoArchive archive, const Population& pop) {
    update_archive_in_place(archive, pop);
    return archive;
}

/// Snapshot handed to a search observer after each generation's evaluation
/// and archive update.
struct GenerationReport {
    std::size_t generation = 0;
    const Population& population;
    const ParetoArchive& archive;
    double population_diversity = 0.0;
    std::size_t evaluations = 0;
};

using SearchObserver = std::function<void(const GenerationReport&)>;

struct SearchResult {
    ParetoArchive archive;
    Population final_population;
    /// Population diversity (raw costs) of generations 0..n_gen.
    std::vector<double> diversity_series;
    /// Distinct architectures looked up in the table.
    std::size_t evaluations = 0;
    std::size_t generations = 0;
};

namespace detail {

/// Table access for one search; counts distinct architectures looked up.
class Evaluator {
public:
    Evaluator(const BenchmarkTable& table, const SearchConfig& config)
        : table_(table), device_(config.device), options_{config.normalize_costs}, mode_(config.objectives),
          seen_(kNumArchitectures, false) {}

    void evaluate(std::vector<Individual>& members) {
        std::vector<Genotype> genotypes;
        genotypes.reserve(members.size());
        for (const auto& m : members) genotypes.push_back(m.genotype);
        auto objectives = evaluate_population(genotypes, table_, device_, options_);
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (mode_ == ObjectiveMode::two) objectives[i].diversity = 0.0;
            members[i].objectives = objectives[i];
            members[i].rank.reset();
            members[i].crowding = 0.0;
            const std::uint32_t index = index_from_genotype(members[i].genotype).value();
            if (!seen_[index]) {
                seen_[index] = true;
                ++evaluations_;
            }
        }
    }

    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

private:
    const BenchmarkTable& table_;
    DeviceId device_;
    DiversityOptions options_;
    ObjectiveMode mode_;
    std::vector<bool> seen_;
    std::size_t evaluations_ = 0;
};

} // namespace detail

/// Breeds n_pop offspring from a ranked population.
[[nodiscard]] inline std::vector<Individual> make_offspring(const Population& parents, const SearchConfig& config,
                                                            Rng& rng) {
    std::vector<Individual> children;
    children.reserve(config.n_pop);
    std::bernoulli_distribution do_crossover(config.crossover_prob);
    while (children.size() < config.n_pop) {
        const Genotype& a = binary_tournament(parents, rng).genotype;
        const Genotype& b = binary_tournament(parents, rng).genotype;
        auto [first, second] = do_crossover(rng) ? crossover(a, b, rng) : std::pair{a, b};
        children.push_back({mutate(first, config.mutation_rate, rng), std::nullopt, std::nullopt, 0.0});
        children.push_back({mutate(second, config.mutation_rate, rng), std::nullopt, std::nullopt, 0.0});
    }
    return children;
}

/// Runs the search for `config.n_gen` generations after the initial one and
/// returns the archive with its trace. Deterministic in `config.seed`.
[[nodiscard]] inline SearchResult run_search(const SearchConfig& config, const BenchmarkTable& table,
                                             const SearchObserver& observer = {}) {
    config.validate();
    (void)table.device_column(config.device);
    table.validate_complete();

    const auto senses = senses_for(config.objectives);
    Rng rng(config.seed);
    detail::Evaluator evaluator(table, config);

    SearchResult result;
    Population pop;
    pop.members.reserve(config.n_pop);
    for (std::size_t i = 0; i < config.n_pop; ++i)
        pop.members.push_back({random_genotype(rng), std::nullopt, std::nullopt, 0.0});

    for (std::size_t g = 0;; ++g) {
        pop.generation = g;
        evaluator.evaluate(pop.members);
        rank_and_crowd(pop.members, senses);
        update_archive_in_place(result.archive, pop);
        const double diversity = population_diversity(pop.costs());
        result.diversity_series.push_back(diversity);
        if (observer) observer(GenerationReport{g, pop, result.archive, diversity, evaluator.evaluations()});
        if (g == config.n_gen) break;

        std::vector<Individual> combined = pop.members;
        auto children = make_offspring(pop, config, rng);
        combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                        std::make_move_iterator(children.end()));
        evaluator.evaluate(combined);
        pop = environmental_selection(std::move(combined), config.n_pop, senses);
    }

    result.generations = config.n_gen;
    result.evaluations = evaluator.evaluations();
    result.final_population = std::move(pop);
    return result;
}

} // namespace phdnas
