#pragma once

#include "negeo/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace negeo {

/// Cross-section of one year.
struct PanelSlice {
    int year = 0;
    Vector Y;
    Vector w;
    std::optional<Vector> H;
    std::optional<Matrix> T; // Fujita transport factors for this year
};

/// Region x year panel. Slices are ordered by consecutive years.
struct Panel {
    Geography geography;
    std::vector<PanelSlice> slices;
    std::vector<std::string> region_ids;

    Eigen::Index regions() const { return geography.size(); }
    std::size_t years() const { return slices.size(); }
    bool has_housing() const;
    bool has_transport() const;

    /// Shape checks: >= 2 slices, consecutive years, shared n. Values are not
    /// required to be positive here; estimation drops bad rows.
    void validate() const;
};

}  // namespace negeo
