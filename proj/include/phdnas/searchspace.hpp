#pragma once

/// @file searchspace.hpp
/// @brief Cell-based architecture encoding and variation operators.
///
/// A cell is a 4-node DAG with 6 directed edges, each carrying one of 5
/// operations. Edges are stored in the canonical order
/// (0->1, 0->2, 1->2, 0->3, 1->3, 2->3). The architecture index is the base-5
/// positional value of the edge codes with edge 0 as the least-significant
/// digit, so every index in [0, 15624] names exactly one cell.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>
#include <utility>

#include "phdnas/errors.hpp"

namespace phdnas {

/// Random source used by every stochastic operator.
using Rng = std::mt19937_64;

enum class OpCode : std::uint8_t {
    none = 0,
    skip_connect = 1,
    conv_1x1 = 2,
    conv_3x3 = 3,
    pool_3x3 = 4, // avg or max pooling; the table decides what it means
};

inline constexpr std::size_t kNumOps = 5;
inline constexpr std::size_t kNumEdges = 6;
inline constexpr std::uint32_t kNumArchitectures = 15625; // 5^6

inline constexpr std::array<std::pair<int, int>, kNumEdges> kEdgeEndpoints{
    {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}}};

[[nodiscard]] constexpr std::string_view op_name(OpCode op) noexcept {
    switch (op) {
    case OpCode::none: return "none";
    case OpCode::skip_connect: return "skip_connect";
    case OpCode::conv_1x1: return "conv_1x1";
    case OpCode::conv_3x3: return "conv_3x3";
    case OpCode::pool_3x3: return "pool_3x3";
    }
    return "invalid";
}

[[nodiscard]] inline OpCode op_from_int(int code) {
    if (code < 0 || code >= static_cast<int>(kNumOps))
        throw RangeError("operation code " + std::to_string(code) + " outside [0, 4]");
    return static_cast<OpCode>(code);
}

/// Stable key of an architecture; always in [0, kNumArchitectures).
class ArchIndex {
public:
    constexpr ArchIndex() = default;

    explicit ArchIndex(std::uint32_t value) : value_(value) {
        if (value >= kNumArchitectures)
            throw RangeError("architecture index " + std::to_string(value) + " outside [0, 15624]");
    }

    /// Accepts any signed input so that negative values are reported, not wrapped.
    [[nodiscard]] static ArchIndex checked(long long value) {
        if (value < 0 || value >= static_cast<long long>(kNumArchitectures))
            throw RangeError("architecture index " + std::to_string(value) + " outside [0, 15624]");
        return ArchIndex(static_cast<std::uint32_t>(value));
    }

    [[nodiscard]] constexpr std::uint32_t value() const noexcept { return value_; }

    friend constexpr auto operator<=>(ArchIndex, ArchIndex) = default;

private:
    std::uint32_t value_ = 0;
};

class Genotype {
public:
    using Edges = std::array<OpCode, kNumEdges>;

    constexpr Genotype() = default;
    constexpr explicit Genotype(const Edges& edges) noexcept : edges_(edges) {}

    /// Builds from integer codes; throws RangeError on a bad code or length.
    Genotype(std::initializer_list<int> codes) {
        if (codes.size() != kNumEdges) throw RangeError("a genotype has exactly 6 edges");
        std::size_t e = 0;
        for (int c : codes) edges_[e++] = op_from_int(c);
    }

    /// Parses the 6-character textual form, edge 0 first (e.g. "210000").
    [[nodiscard]] static Genotype parse(std::string_view text) {
        if (text.size() != kNumEdges)
            throw RangeError("genotype string '" + std::string(text) + "' must have 6 characters");
        Edges edges{};
        for (std::size_t e = 0; e < kNumEdges; ++e) {
            const char ch = text[e];
            if (ch < '0' || ch > '4')
                throw RangeError("genotype string '" + std::string(text) + "' has a non base-5 digit");
            edges[e] = static_cast<OpCode>(ch - '0');
        }
        return Genotype(edges);
    }

    [[nodiscard]] std::string to_string() const {
        std::string out(kNumEdges, '0');
        for (std::size_t e = 0; e < kNumEdges; ++e) out[e] = static_cast<char>('0' + static_cast<int>(edges_[e]));
        return out;
    }

    [[nodiscard]] constexpr OpCode operator[](std::size_t edge) const noexcept { return edges_[edge]; }
    [[nodiscard]] constexpr const Edges& edges() const noexcept { return edges_; }

    constexpr void set(std::size_t edge, OpCode op) noexcept { edges_[edge] = op; }

    friend constexpr bool operator==(const Genotype&, const Genotype&) = default;

private:
    Edges edges_{};
};

[[nodiscard]] inline Genotype genotype_from_index(ArchIndex index) noexcept {
    Genotype::Edges edges{};
    std::uint32_t rest = index.value();
    for (auto& op : edges) {
        op = static_cast<OpCode>(rest % kNumOps);
        rest /= kNumOps;
    }
    return Genotype(edges);
}

[[nodiscard]] inline Genotype genotype_from_index(long long index) {
    return genotype_from_index(ArchIndex::checked(index));
}

[[nodiscard]] inline ArchIndex index_from_genotype(const Genotype& g) noexcept {
    std::uint32_t value = 0;
    for (std::size_t e = kNumEdges; e-- > 0;) value = value * kNumOps + static_cast<std::uint32_t>(g[e]);
    return ArchIndex(value); // always < 5^6
}

/// Hamming distance between two cells (number of differing edges).
[[nodiscard]] inline std::size_t hamming(const Genotype& a, const Genotype& b) noexcept {
    std::size_t d = 0;
    for (std::size_t e = 0; e < kNumEdges; ++e) d += a[e] != b[e];
    return d;
}

[[nodiscard]] inline Genotype random_genotype(Rng& rng) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(kNumOps) - 1);
    Genotype::Edges edges{};
    for (auto& op : edges) op = static_cast<OpCode>(pick(rng));
    return Genotype(edges);
}

inline void check_probability(double p, std::string_view what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw RangeError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

/// Per-edge mutation: each edge is, with probability `per_edge_rate`,
/// replaced by a uniformly chosen *different* operation.
[[nodiscard]] inline Genotype mutate(const Genotype& parent, double per_edge_rate, Rng& rng) {
    check_probability(per_edge_rate, "mutation rate");
    std::bernoulli_distribution flip(per_edge_rate);
    std::uniform_int_distribution<int> shift(1, static_cast<int>(kNumOps) - 1);
    Genotype child = parent;
    for (std::size_t e = 0; e < kNumEdges; ++e) {
        if (!flip(rng)) continue;
        const int code = (static_cast<int>(parent[e]) + shift(rng)) % static_cast<int>(kNumOps);
        child.set(e, static_cast<OpCode>(code));
    }
    return child;
}

/// Uniform crossover: each edge position is swapped between the children
/// with probability 0.5.
[[nodiscard]] inline std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng) {
    std::bernoulli_distribution swap(0.5);
    Genotype first = a;
    Genotype second = b;
    for (std::size_t e = 0; e < kNumEdges; ++e) {
        if (swap(rng)) {
            first.set(e, b[e]);
            second.set(e, a[e]);
        }
    }
    return {first, second};
}

/// Forward range over the whole search space in ascending index order.
class GenotypeSpace {
public:
    class iterator {
    public:
        using value_type = Genotype;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(std::uint32_t pos) : pos_(pos) {}

        Genotype operator*() const noexcept { return genotype_from_index(ArchIndex(pos_)); }
        iterator& operator++() noexcept {
            ++pos_;
            return *this;
        }
        iterator operator++(int) noexcept {
            auto copy = *this;
            ++pos_;
            return copy;
        }
        friend bool operator==(const iterator&, const iterator&) = default;

    private:
        std::uint32_t pos_ = 0;
    };

    [[nodiscard]] iterator begin() const noexcept { return iterator(0); }
    [[nodiscard]] iterator end() const noexcept { return iterator(kNumArchitectures); }
    [[nodiscard]] static constexpr std::size_t size() noexcept { return kNumArchitectures; }
};

[[nodiscard]] inline GenotypeSpace enumerate_all() noexcept { return {}; }

} // namespace phdnas
