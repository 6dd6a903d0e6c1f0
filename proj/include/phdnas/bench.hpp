#pragma once

/// @file bench.hpp
/// @brief Benchmark tables on disk, a synthetic benchmark generator, and the
/// exhaustive oracles (exact Pareto front, reference hypervolume) used to
/// verify searches.
///
/// CSV layout (UTF-8, header required, rows in any order):
///
///     index,genotype,similarity,cost_<device1>,...,cost_<deviceK>[,accuracy]
///
/// Lines starting with '#' before the header are kept as table metadata.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "phdnas/errors.hpp"
#include "phdnas/hypervolume.hpp"
#include "phdnas/objectives.hpp"
#include "phdnas/searchspace.hpp"
#include "phdnas/table.hpp"

namespace phdnas {

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view field, std::size_t line, std::string_view column) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty() || !std::isfinite(value))
        throw ParseError(line, "column '" + std::string(column) + "': '" + std::string(field) + "' is not a number");
    return value;
}

inline long long parse_integer(std::string_view field, std::size_t line, std::string_view column) {
    field = trim(field);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        throw ParseError(line, "column '" + std::string(column) + "': '" + std::string(field) + "' is not an integer");
    return value;
}

} // namespace detail

/// Shortest text that reads back to the same double.
[[nodiscard]] inline std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw Error("cannot format number");
    return {buf.data(), ptr};
}

[[nodiscard]] inline BenchmarkTable read_benchmark(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::string> meta;
    std::vector<std::string> columns;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            meta.emplace_back(detail::trim(line.substr(1)));
            continue;
        }
        for (auto col : detail::split_csv(line)) columns.emplace_back(detail::trim(col));
        break;
    }
    if (columns.empty()) throw ParseError(line_no, "missing header");
    const std::size_t header_line = line_no;
    if (columns.size() < 4 || columns[0] != "index" || columns[1] != "genotype" || columns[2] != "similarity")
        throw ParseError(header_line, "header must start with index,genotype,similarity followed by cost columns");

    const bool has_accuracy = columns.back() == "accuracy";
    const std::size_t cost_end = columns.size() - (has_accuracy ? 1 : 0);
    std::vector<std::string> devices;
    for (std::size_t c = 3; c < cost_end; ++c) {
        constexpr std::string_view prefix = "cost_";
        if (columns[c].size() <= prefix.size() || columns[c].compare(0, prefix.size(), prefix) != 0)
            throw ParseError(header_line, "unexpected column '" + columns[c] + "'");
        devices.push_back(columns[c].substr(prefix.size()));
    }
    if (devices.empty()) throw ParseError(header_line, "no cost_<device> column");

    BenchmarkTable table = [&] {
        try {
            return BenchmarkTable(devices, has_accuracy, meta);
        } catch (const ValidationError& e) {
            throw ParseError(header_line, e.what());
        }
    }();

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        const auto fields = detail::split_csv(line);
        if (fields.size() != columns.size())
            throw ParseError(line_no, "expected " + std::to_string(columns.size()) + " fields, found " +
                                          std::to_string(fields.size()));

        const long long raw_index = detail::parse_integer(fields[0], line_no, "index");
        if (raw_index < 0 || raw_index >= static_cast<long long>(kNumArchitectures))
            throw ParseError(line_no, "index " + std::to_string(raw_index) + " outside [0, 15624]");
        const ArchIndex index(static_cast<std::uint32_t>(raw_index));

        Genotype g;
        try {
            g = Genotype::parse(detail::trim(fields[1]));
        } catch (const RangeError& e) {
            throw ParseError(line_no, e.what());
        }
        if (index_from_genotype(g) != index)
            throw ParseError(line_no, "genotype " + g.to_string() + " does not encode index " +
                                          std::to_string(index.value()));
        if (table.has_row(index)) throw ParseError(line_no, "duplicate index " + std::to_string(index.value()));

        MetricRow row;
        row.similarity = detail::parse_double(fields[2], line_no, "similarity");
        for (std::size_t c = 3; c < cost_end; ++c) row.costs.push_back(detail::parse_double(fields[c], line_no, columns[c]));
        if (has_accuracy) row.accuracy = detail::parse_double(fields.back(), line_no, "accuracy");
        try {
            table.set_row(index, std::move(row));
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad()) throw IoError("read failure while loading benchmark");
    table.validate_complete();
    return table;
}

/// Loads and fully validates a benchmark CSV.
[[nodiscard]] inline BenchmarkTable load_benchmark(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open benchmark file '" + path + "'");
    return read_benchmark(in);
}

/// Writes rows in ascending index order.
inline void write_benchmark(const BenchmarkTable& table, std::ostream& out) {
    for (const auto& m : table.meta()) out << "# " << m << '\n';
    out << "index,genotype,similarity";
    for (const auto& d : table.devices()) out << ",cost_" << d;
    if (table.has_accuracy()) out << ",accuracy";
    out << '\n';
    for (const Genotype g : enumerate_all()) {
        const ArchIndex index = index_from_genotype(g);
        if (!table.has_row(index)) continue;
        const auto& row = table.row(index);
        out << index.value() << ',' << g.to_string() << ',' << format_double(row.similarity);
        for (double c : row.costs) out << ',' << format_double(c);
        if (row.accuracy) out << ',' << format_double(*row.accuracy);
        out << '\n';
    }
}

inline void save_benchmark(const BenchmarkTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_benchmark(table, out);
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

// ---------------------------------------------------------------------------
// Synthetic benchmark
// ---------------------------------------------------------------------------

/// Knobs of the synthetic table. Similarity is a concave function of a
/// weighted per-edge "capacity" that peaks at moderate capacity, so the best
/// cells are mid-cost while the most expensive cells are over-sized; cost is
/// an additive per-edge model per device. Seeded noise on both.
struct SyntheticParams {
    std::vector<std::string> devices{"fpga", "edgegpu"};
    /// Weight of the capacity signal in the similarity score; raising it
    /// strengthens the similarity/cost correlation.
    double correlation = 1.0;
    /// Capacity (in [0, 1]) at which similarity peaks.
    double peak_capacity = 0.45;
    /// Similarity lost between the peak and full capacity, relative to the
    /// rise from zero capacity to the peak.
    double overshoot_penalty = 0.2;
    double similarity_noise = 0.03;
    /// Relative (log-normal) noise on costs.
    double cost_noise = 0.04;
    /// Bounds on the exact front size checked after generation.
    std::size_t min_front = 10;
    std::size_t max_front = 60;
    double min_correlation = 0.3;
    int max_redraws = 64;
};

namespace detail {

inline constexpr std::array<double, kNumOps> kOpCapacity{0.0, 0.3, 0.6, 1.0, 0.2};
inline constexpr std::array<double, kNumOps> kOpCost{0.0, 0.02, 0.4, 1.0, 0.1};

/// True when node 3 is reachable from node 0 over non-none edges.
inline bool cell_connected(const Genotype& g) {
    std::array<bool, 4> reach{true, false, false, false};
    for (std::size_t e = 0; e < kNumEdges; ++e) {
        const auto [from, to] = kEdgeEndpoints[e];
        if (g[e] != OpCode::none && reach[static_cast<std::size_t>(from)]) reach[static_cast<std::size_t>(to)] = true;
    }
    return reach[3];
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline BenchmarkTable draw_synthetic(std::uint64_t seed, int attempt, const SyntheticParams& params) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt), 0x5eedu};
    Rng rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Structure: edge importance, op-by-edge effects, device profiles.
    std::array<double, kNumEdges> edge_weight{};
    for (std::size_t e = 0; e < kNumEdges; ++e) edge_weight[e] = 0.7 + 0.6 * unit(rng);
    double weight_sum = 0.0;
    for (double w : edge_weight) weight_sum += w;

    std::array<std::array<double, kNumOps>, kNumEdges> op_effect{};
    for (auto& per_edge : op_effect)
        for (auto& v : per_edge) v = 0.05 * gauss(rng);

    struct Profile {
        double base;
        double scale;
        std::array<double, kNumOps> op_cost;
        std::array<double, kNumEdges> edge_scale;
    };
    std::vector<Profile> profiles;
    for (std::size_t d = 0; d < params.devices.size(); ++d) {
        Profile p{};
        p.base = 0.5 + unit(rng);
        p.scale = 1.0 + 2.0 * unit(rng);
        for (std::size_t o = 0; o < kNumOps; ++o) p.op_cost[o] = kOpCost[o] * (0.8 + 0.4 * unit(rng));
        for (auto& s : p.edge_scale) s = 0.8 + 0.4 * unit(rng);
        profiles.push_back(p);
    }

    BenchmarkTable table(params.devices, false,
                         {"synthetic benchmark seed=" + std::to_string(seed) + " attempt=" + std::to_string(attempt),
                          "reference model: synthetic"});
    const double peak = params.peak_capacity;
    for (const Genotype g : enumerate_all()) {
        double capacity = 0.0;
        double effect = 0.0;
        for (std::size_t e = 0; e < kNumEdges; ++e) {
            const auto op = static_cast<std::size_t>(g[e]);
            capacity += edge_weight[e] * kOpCapacity[op];
            effect += op_effect[e][op];
        }
        capacity /= weight_sum;

        // Concave in capacity with its maximum at `peak`; the falling side is
        // scaled by `overshoot_penalty`.
        const double shape = capacity <= peak
                                 ? 1.0 - (capacity - peak) * (capacity - peak) / (peak * peak)
                                 : 1.0 - params.overshoot_penalty * (capacity - peak) * (capacity - peak) /
                                             ((1.0 - peak) * (1.0 - peak));
        double similarity = 1.0 + params.correlation * shape + effect + params.similarity_noise * gauss(rng);
        if (!cell_connected(g)) similarity = 0.5 + 0.1 * similarity + params.similarity_noise * gauss(rng);

        MetricRow row;
        row.similarity = similarity;
        for (const auto& p : profiles) {
            double load = 0.0;
            for (std::size_t e = 0; e < kNumEdges; ++e) load += p.edge_scale[e] * p.op_cost[static_cast<std::size_t>(g[e])];
            row.costs.push_back((p.base + p.scale * load) * std::exp(params.cost_noise * gauss(rng)));
        }
        table.set_row(index_from_genotype(g), std::move(row));
    }
    return table;
}

} // namespace detail

/// Points of every row present, in ascending index order.
[[nodiscard]] inline std::vector<TradeoffPoint> table_points(const BenchmarkTable& table, const DeviceId& device) {
    const std::size_t column = table.device_column(device);
    std::vector<TradeoffPoint> out;
    out.reserve(table.row_count());
    for (const Genotype g : enumerate_all()) {
        const ArchIndex index = index_from_genotype(g);
        if (!table.has_row(index)) continue;
        const auto& row = table.row(index);
        out.push_back({row.similarity, row.costs[column]});
    }
    return out;
}

/// Exhaustive scan: every row that no other row dominates under
/// (similarity maximize, cost minimize). Ascending index order.
[[nodiscard]] inline std::vector<ArchIndex> exact_pareto_front(const BenchmarkTable& table, const DeviceId& device) {
    const std::size_t column = table.device_column(device);
    std::vector<ArchIndex> indices;
    std::vector<TradeoffPoint> pts;
    indices.reserve(table.row_count());
    pts.reserve(table.row_count());
    for (std::uint32_t i = 0; i < kNumArchitectures; ++i) {
        const ArchIndex index(i);
        if (!table.has_row(index)) continue;
        const auto& row = table.row(index);
        indices.push_back(index);
        pts.push_back({row.similarity, row.costs[column]});
    }

    std::vector<ArchIndex> front;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const TradeoffPoint p = pts[i];
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
            const TradeoffPoint q = pts[j];
            dominated = q.similarity >= p.similarity && q.cost <= p.cost && (q.similarity > p.similarity || q.cost < p.cost);
        }
        if (!dominated) front.push_back(indices[i]);
    }
    return front;
}

/// Hypervolume reference point of a table: (min similarity, max cost) pushed
/// outward by 1e-6 of each range.
[[nodiscard]] inline TradeoffPoint reference_point(const BenchmarkTable& table, const DeviceId& device) {
    const auto pts = table_points(table, device);
    if (pts.empty()) throw PreconditionError("reference point of an empty table");
    double s_lo = pts.front().similarity, s_hi = s_lo;
    double c_lo = pts.front().cost, c_hi = c_lo;
    for (const auto& p : pts) {
        s_lo = std::min(s_lo, p.similarity);
        s_hi = std::max(s_hi, p.similarity);
        c_lo = std::min(c_lo, p.cost);
        c_hi = std::max(c_hi, p.cost);
    }
    constexpr double eps = 1e-6;
    return {s_lo - eps * (s_hi - s_lo), c_hi + eps * (c_hi - c_lo)};
}

[[nodiscard]] inline std::vector<TradeoffPoint> front_points(const BenchmarkTable& table, const DeviceId& device,
                                                             std::span<const ArchIndex> front) {
    const std::size_t column = table.device_column(device);
    std::vector<TradeoffPoint> out;
    out.reserve(front.size());
    for (ArchIndex i : front) out.push_back({table.similarity(i), table.cost(i, column)});
    return out;
}

/// Generates a complete synthetic table. Redraws the noise until every
/// device's exact front size lies in [min_front, max_front] and its
/// similarity/cost correlation exceeds `min_correlation`.
[[nodiscard]] inline BenchmarkTable generate_synthetic(std::uint64_t seed, const SyntheticParams& params = {}) {
    if (params.devices.empty()) throw ConfigError("synthetic benchmark needs at least one device");
    for (int attempt = 0; attempt < params.max_redraws; ++attempt) {
        BenchmarkTable table = detail::draw_synthetic(seed, attempt, params);
        bool ok = true;
        std::vector<double> sim;
        std::vector<double> cost;
        for (const auto& device : params.devices) {
            const auto front = exact_pareto_front(table, device);
            if (front.size() < params.min_front || front.size() > params.max_front) {
                ok = false;
                break;
            }
            const auto pts = table_points(table, device);
            sim.clear();
            cost.clear();
            for (const auto& p : pts) {
                sim.push_back(p.similarity);
                cost.push_back(p.cost);
            }
            if (!(detail::pearson(sim, cost) > params.min_correlation)) {
                ok = false;
                break;
            }
        }
        if (ok) return table;
    }
    throw ConfigError("synthetic parameters never met the front-size/correlation constraints");
}

} // namespace phdnas
