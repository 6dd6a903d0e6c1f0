#pragma once

/// @file pareto.hpp
/// @brief Pareto dominance, non-dominated sorting and crowding distance.
///
/// Points are any random-access container of random-access containers of
/// doubles (e.g. std::vector<std::vector<double>>); each objective carries its
/// own optimization sense.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "phdnas/errors.hpp"
#include "phdnas/objectives.hpp"

namespace phdnas {

using Front = std::vector<std::size_t>;

namespace detail {

template <class Point>
void check_dimension(const Point& p, std::span<const Sense> senses) {
    if (std::size(p) != senses.size())
        throw ShapeError("objective vector has " + std::to_string(std::size(p)) + " components, " +
                         std::to_string(senses.size()) + " senses given");
}

/// Strictly better under `sense`.
constexpr bool better(double a, double b, Sense sense) noexcept {
    return sense == Sense::maximize ? a > b : a < b;
}

} // namespace detail

/// True iff `a` is no worse than `b` in every objective and strictly better in one.
template <class PointA, class PointB>
[[nodiscard]] bool dominates(const PointA& a, const PointB& b, std::span<const Sense> senses) {
    detail::check_dimension(a, senses);
    detail::check_dimension(b, senses);
    bool strictly = false;
    for (std::size_t k = 0; k < senses.size(); ++k) {
        if (detail::better(b[k], a[k], senses[k])) return false;
        if (detail::better(a[k], b[k], senses[k])) strictly = true;
    }
    return strictly;
}

/// Dominance over the leading `senses.size()` objectives of two vectors.
[[nodiscard]] inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b, std::span<const Sense> senses) {
    if (senses.size() < 2 || senses.size() > 3)
        throw ShapeError("an objective vector has 2 or 3 compared objectives, got " + std::to_string(senses.size()));
    return dominates(as_point(a, senses.size()), as_point(b, senses.size()), senses);
}

/// Partitions `points` into successive non-dominated fronts.
///
/// Produces the same partition as the classic O(M N^2) bookkeeping sort, but
/// via sequential front search over a lexicographically presorted order, so
/// memory stays O(N) and whole-space tables (15,625 rows) sort quickly.
/// Every point whose predecessor in the presort could dominate it has already
/// been placed, so a point joins the first front that holds no dominator.
/// Positions within each front are ascending.
template <class Points>
[[nodiscard]] std::vector<Front> fast_nondominated_sort(const Points& points, std::span<const Sense> senses) {
    const std::size_t n = std::size(points);
    if (n == 0) throw PreconditionError("non-dominated sort of an empty set");
    for (const auto& p : points) detail::check_dimension(p, senses);
    const std::size_t m = senses.size();

    // Sort key: every objective turned into "smaller is better".
    auto key = [&](std::size_t i, std::size_t k) {
        const double v = points[i][k];
        return senses[k] == Sense::maximize ? -v : v;
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < m; ++k) {
            const double ka = key(a, k);
            const double kb = key(b, k);
            if (ka != kb) return ka < kb;
        }
        return false;
    });

    std::vector<Front> fronts;
    for (std::size_t idx : order) {
        std::size_t target = fronts.size();
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            const auto& front = fronts[f];
            // Latest members are the most likely dominators.
            const bool dominated = std::any_of(front.rbegin(), front.rend(), [&](std::size_t other) {
                return dominates(points[other], points[idx], senses);
            });
            if (!dominated) {
                target = f;
                break;
            }
        }
        if (target == fronts.size()) fronts.emplace_back();
        fronts[target].push_back(idx);
    }
    for (auto& front : fronts) std::sort(front.begin(), front.end());
    return fronts;
}

/// Crowding distance of each member of one front, in input order.
///
/// Per objective: members are ordered by value, both extremes get +infinity,
/// interior members accumulate (next - prev) / (max - min). An objective with
/// max == min adds nothing. Fronts of at most two members are all extremes.
template <class Points>
[[nodiscard]] std::vector<double> crowding_distance(const Points& front, std::span<const Sense> senses) {
    const std::size_t n = std::size(front);
    if (n == 0) throw PreconditionError("crowding distance of an empty front");
    for (const auto& p : front) detail::check_dimension(p, senses);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < senses.size(); ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        const double lo = front[order.front()][k];
        const double hi = front[order.back()][k];
        const double range = hi - lo;
        if (!(range > 0.0)) continue;
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        for (std::size_t r = 1; r + 1 < n; ++r)
            distance[order[r]] += (front[order[r + 1]][k] - front[order[r - 1]][k]) / range;
    }
    return distance;
}

/// Positions of the non-dominated members of `points`.
template <class Points>
[[nodiscard]] Front nondominated_subset(const Points& points, std::span<const Sense> senses) {
    if (std::size(points) == 0) return {};
    return fast_nondominated_sort(points, senses).front();
}

} // namespace phdnas
