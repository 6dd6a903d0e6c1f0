#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phdnas/errors.hpp"
#include "phdnas/searchspace.hpp"

namespace phdnas {

/// Name of a hardware target, matching a cost column of a BenchmarkTable.
struct DeviceId {
    std::string name;

    DeviceId() = default;
    DeviceId(std::string n) : name(std::move(n)) {}
    DeviceId(const char* n) : name(n) {}

    friend bool operator==(const DeviceId&, const DeviceId&) = default;
};

/// Metrics of one architecture. `costs` is aligned with the owning table's
/// device list. `accuracy` is for reporting only and never feeds a search.
struct MetricRow {
    double similarity = 0.0;
    std::vector<double> costs;
    std::optional<double> accuracy;
};

/// Per-architecture lookup table: precomputed similarity score, one cost per
/// device, and an optional held-out accuracy. Rows may be filled one at a
/// time; `validate_complete()` enforces full coverage of the search space.
class BenchmarkTable {
public:
    explicit BenchmarkTable(std::vector<std::string> devices, bool has_accuracy = false,
                            std::vector<std::string> meta = {})
        : devices_(std::move(devices)), meta_(std::move(meta)), has_accuracy_(has_accuracy),
          rows_(kNumArchitectures) {
        if (devices_.empty()) throw ValidationError("a benchmark table needs at least one device");
        for (std::size_t i = 0; i < devices_.size(); ++i) {
            if (devices_[i].empty()) throw ValidationError("device names must be non-empty");
            for (std::size_t j = 0; j < i; ++j)
                if (devices_[i] == devices_[j]) throw ValidationError("duplicate device '" + devices_[i] + "'");
        }
    }

    [[nodiscard]] const std::vector<std::string>& devices() const noexcept { return devices_; }
    [[nodiscard]] const std::vector<std::string>& meta() const noexcept { return meta_; }
    [[nodiscard]] bool has_accuracy() const noexcept { return has_accuracy_; }
    [[nodiscard]] std::size_t row_count() const noexcept { return filled_; }
    [[nodiscard]] std::size_t missing_count() const noexcept { return kNumArchitectures - filled_; }
    [[nodiscard]] bool complete() const noexcept { return filled_ == kNumArchitectures; }

    void add_meta(std::string line) { meta_.push_back(std::move(line)); }

    /// Column position of `device`; throws UnknownDeviceError listing the known devices.
    [[nodiscard]] std::size_t device_column(const DeviceId& device) const {
        const auto it = std::find(devices_.begin(), devices_.end(), device.name);
        if (it == devices_.end()) throw UnknownDeviceError(device.name, devices_);
        return static_cast<std::size_t>(it - devices_.begin());
    }

    /// Inserts or replaces a row after validating it against the table layout.
    void set_row(ArchIndex index, MetricRow row) {
        if (row.costs.size() != devices_.size())
            throw ValidationError("row " + std::to_string(index.value()) + " has " +
                                  std::to_string(row.costs.size()) + " costs, table has " +
                                  std::to_string(devices_.size()) + " devices");
        if (!std::isfinite(row.similarity))
            throw ValidationError("row " + std::to_string(index.value()) + " has a non-finite similarity");
        for (std::size_t d = 0; d < row.costs.size(); ++d) {
            if (!(row.costs[d] > 0.0) || !std::isfinite(row.costs[d]))
                throw ValidationError("row " + std::to_string(index.value()) + " has non-positive cost for device '" +
                                      devices_[d] + "'");
        }
        if (row.accuracy.has_value() != has_accuracy_)
            throw ValidationError("row " + std::to_string(index.value()) +
                                  (has_accuracy_ ? " lacks the accuracy column" : " carries an undeclared accuracy"));
        if (row.accuracy && !(*row.accuracy >= 0.0 && *row.accuracy <= 100.0))
            throw ValidationError("row " + std::to_string(index.value()) + " has accuracy outside [0, 100]");

        auto& slot = rows_[index.value()];
        const bool replacing = slot.has_value();
        if (!replacing) ++filled_;
        slot = std::move(row);
        if (replacing) {
            recompute_ranges();
        } else {
            extend_ranges(*slot);
        }
    }

    [[nodiscard]] bool has_row(ArchIndex index) const noexcept { return rows_[index.value()].has_value(); }

    [[nodiscard]] const MetricRow& row(ArchIndex index) const {
        const auto& slot = rows_[index.value()];
        if (!slot) throw MissingArchitectureError(index.value());
        return *slot;
    }

    [[nodiscard]] double similarity(ArchIndex index) const { return row(index).similarity; }
    [[nodiscard]] double cost(ArchIndex index, std::size_t column) const { return row(index).costs.at(column); }
    [[nodiscard]] std::optional<double> accuracy(ArchIndex index) const { return row(index).accuracy; }

    /// (min, max) of one cost column over the rows present.
    [[nodiscard]] std::pair<double, double> cost_range(std::size_t column) const {
        if (column >= devices_.size()) throw RangeError("cost column out of range");
        if (filled_ == 0) throw PreconditionError("cost range of an empty table");
        return ranges_[column];
    }

    void validate_complete() const {
        if (!complete()) throw CompletenessError(missing_count());
    }

private:
    std::vector<std::string> devices_;
    std::vector<std::string> meta_;
    bool has_accuracy_;
    std::vector<std::optional<MetricRow>> rows_;
    std::size_t filled_ = 0;
    std::vector<std::pair<double, double>> ranges_;

    void extend_ranges(const MetricRow& r) {
        if (ranges_.empty()) {
            for (double c : r.costs) ranges_.emplace_back(c, c);
            return;
        }
        for (std::size_t d = 0; d < r.costs.size(); ++d) {
            ranges_[d].first = std::min(ranges_[d].first, r.costs[d]);
            ranges_[d].second = std::max(ranges_[d].second, r.costs[d]);
        }
    }

    void recompute_ranges() {
        ranges_.clear();
        for (const auto& r : rows_)
            if (r) extend_ranges(*r);
    }
};

} // namespace phdnas
