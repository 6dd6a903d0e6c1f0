#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "phdnas/bench.hpp"
#include "phdnas/objectives.hpp"

using namespace phdnas;

namespace {

BenchmarkTable small_table() {
    BenchmarkTable t({"fpga", "edgegpu"});
    t.set_row(ArchIndex(7), {0.83, {4.5, 2.0}, std::nullopt});
    t.set_row(ArchIndex(8), {0.50, {1.5, 3.0}, std::nullopt});
    t.set_row(ArchIndex(9), {0.60, {2.5, 4.0}, std::nullopt});
    return t;
}

} // namespace

TEST(Lookup, SimilarityIsStoredValue) {
    const auto t = small_table();
    EXPECT_DOUBLE_EQ(similarity_score(t, genotype_from_index(7)), 0.83);
}

TEST(Lookup, MissingRowReportsIndex) {
    const auto t = small_table();
    try {
        (void)similarity_score(t, genotype_from_index(100));
        FAIL() << "expected MissingArchitectureError";
    } catch (const MissingArchitectureError& e) {
        EXPECT_EQ(e.index(), 100u);
    }
}

TEST(Lookup, SyntheticTableValue) {
    const auto t = generate_synthetic(1);
    const auto again = generate_synthetic(1);
    EXPECT_DOUBLE_EQ(similarity_score(t, genotype_from_index(0)), again.row(ArchIndex(0)).similarity);
}

TEST(Lookup, HardwareCostPerDevice) {
    const auto t = small_table();
    EXPECT_DOUBLE_EQ(hardware_cost(t, genotype_from_index(7), "fpga"), 4.5);
    EXPECT_DOUBLE_EQ(hardware_cost(t, genotype_from_index(7), "edgegpu"), 2.0);
}

TEST(Lookup, UnknownDeviceListsAvailable) {
    const auto t = small_table();
    try {
        (void)hardware_cost(t, genotype_from_index(7), "tpu_v9");
        FAIL() << "expected UnknownDeviceError";
    } catch (const UnknownDeviceError& e) {
        EXPECT_EQ(e.device(), "tpu_v9");
        EXPECT_EQ(e.available(), (std::vector<std::string>{"fpga", "edgegpu"}));
    }
}

TEST(CostDiversity, Examples) {
    const std::vector<double> same{5, 5, 5};
    const std::vector<double> ramp{1, 2, 3};
    EXPECT_DOUBLE_EQ(cost_diversity(5, same), 0.0);
    EXPECT_DOUBLE_EQ(cost_diversity(1, ramp), 5.0);
    EXPECT_DOUBLE_EQ(cost_diversity(2, ramp), 2.0);
    EXPECT_THROW((void)cost_diversity(1, std::vector<double>{}), PreconditionError);
}

TEST(PopulationDiversity, Examples) {
    EXPECT_DOUBLE_EQ(population_diversity(std::vector<double>{5, 5, 5}), 0.0);
    EXPECT_DOUBLE_EQ(population_diversity(std::vector<double>{1, 2, 3}), 4.0);
    for (double c : {0.5, 3.0, 17.25}) EXPECT_DOUBLE_EQ(population_diversity(std::vector<double>{0.0, c}), c * c);
    EXPECT_THROW((void)population_diversity(std::vector<double>{}), PreconditionError);
}

TEST(PopulationDiversity, MatchesVarianceIdentity) {
    // Mean pairwise squared difference = 2 N * (population variance).
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(1 + trial % 30);
        for (double& x : c) x = u(rng);
        const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
        double var = 0.0;
        for (double x : c) var += (x - mean) * (x - mean);
        var /= static_cast<double>(c.size());
        const double expected = 2.0 * static_cast<double>(c.size()) * var;
        EXPECT_NEAR(population_diversity(c), expected, 1e-9 * std::max(1.0, expected));
    }
}

TEST(EvaluatePopulation, SingleMemberHasZeroDiversity) {
    const auto t = small_table();
    const std::vector<Genotype> pop{genotype_from_index(7)};
    const auto out = evaluate_population(pop, t, "fpga");
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0], (ObjectiveVector{0.83, 4.5, 0.0}));
}

TEST(EvaluatePopulation, IdenticalMembers) {
    const auto t = small_table();
    const std::vector<Genotype> pop(4, genotype_from_index(8));
    for (const auto& v : evaluate_population(pop, t, "edgegpu")) EXPECT_EQ(v, (ObjectiveVector{0.5, 3.0, 0.0}));
}

TEST(EvaluatePopulation, DiversityFromCompleteCostList) {
    BenchmarkTable t({"d"});
    t.set_row(ArchIndex(0), {1.0, {1.0}, std::nullopt});
    t.set_row(ArchIndex(1), {1.0, {2.0}, std::nullopt});
    t.set_row(ArchIndex(2), {1.0, {3.0}, std::nullopt});
    const std::vector<Genotype> pop{genotype_from_index(0), genotype_from_index(1), genotype_from_index(2)};
    const auto out = evaluate_population(pop, t, "d");
    EXPECT_DOUBLE_EQ(out[0].diversity, 5.0);
    EXPECT_DOUBLE_EQ(out[1].diversity, 2.0);
    EXPECT_DOUBLE_EQ(out[2].diversity, 5.0);
    EXPECT_EQ(evaluate_population(pop, t, "d"), out);
}

TEST(EvaluatePopulation, ErrorNamesMemberPosition) {
    const auto t = small_table();
    const std::vector<Genotype> pop{genotype_from_index(7), genotype_from_index(8), genotype_from_index(3)};
    try {
        (void)evaluate_population(pop, t, "fpga");
        FAIL();
    } catch (const MissingArchitectureError& e) {
        EXPECT_EQ(e.index(), 3u);
        EXPECT_NE(std::string(e.what()).find("member 2"), std::string::npos);
    }
}

TEST(EvaluatePopulation, NormalizedCostsUseTableRange) {
    const auto t = small_table(); // fpga range [1.5, 4.5]
    const std::vector<Genotype> pop{genotype_from_index(7), genotype_from_index(8)};
    const auto out = evaluate_population(pop, t, "fpga", {.normalize_costs = true});
    EXPECT_DOUBLE_EQ(out[0].cost, 4.5); // the cost objective stays raw
    EXPECT_DOUBLE_EQ(out[0].diversity, 1.0);
    EXPECT_DOUBLE_EQ(out[1].diversity, 1.0);
}

TEST(CostDiversity, TranslationAndScaling) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> c(2 + trial % 20);
        for (double& x : c) x = u(rng);
        const double shift = u(rng) * 100.0;
        const double k = u(rng);
        std::vector<double> shifted = c, scaled = c;
        for (double& x : shifted) x += shift;
        for (double& x : scaled) x *= k;
        const double base = cost_diversity(c[0], c);
        EXPECT_NEAR(cost_diversity(c[0] + shift, shifted), base, 1e-9 * std::max(1.0, base));
        EXPECT_NEAR(cost_diversity(c[0] * k, scaled), k * k * base, 1e-9 * std::max(1.0, k * k * base));
        EXPECT_NEAR(population_diversity(c), oracle::population_diversity(c), 1e-9 * std::max(1.0, base));
    }
}
