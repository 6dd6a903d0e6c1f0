#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace phdnas {

/// A point of the (similarity maximize, cost minimize) plane.
struct TradeoffPoint {
    double similarity = 0.0;
    double cost = 0.0;

    friend bool operator==(const TradeoffPoint&, const TradeoffPoint&) = default;
};

/// Area of the union of the rectangles spanned by each point and `ref`.
/// Points that do not strictly improve on `ref` in both coordinates are
/// dropped; an empty remainder gives 0.
[[nodiscard]] inline double hypervolume_2d(std::span<const TradeoffPoint> points, TradeoffPoint ref) {
    std::vector<TradeoffPoint> kept;
    kept.reserve(points.size());
    for (const auto& p : points)
        if (p.similarity > ref.similarity && p.cost < ref.cost) kept.push_back(p);
    if (kept.empty()) return 0.0;

    // Sweep from the most similar point down; each point adds the strip of
    // cost it improves over everything more similar than itself.
    std::sort(kept.begin(), kept.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.cost < b.cost;
    });
    double area = 0.0;
    double best_cost = ref.cost;
    for (const auto& p : kept) {
        if (p.cost >= best_cost) continue;
        area += (p.similarity - ref.similarity) * (best_cost - p.cost);
        best_cost = p.cost;
    }
    return area;
}

} // namespace phdnas
