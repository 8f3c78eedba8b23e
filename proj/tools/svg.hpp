#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obl/geometry/table.hpp"

namespace obl::cli {

struct RenderSegment {
    PointF a, b;
    bool forward = true;
};

struct RenderInput {
    explicit RenderInput(std::variant<PolygonF, Ellipse> t) : table(std::move(t)) {}

    /// Float view of the table.
    std::variant<PolygonF, Ellipse> table;
    std::vector<PointF> orbit;
    std::vector<PointF> tangencies;
    std::vector<std::vector<PointF>> cells;
    std::vector<RenderSegment> singular;
    /// Explicit view box; otherwise fitted to the content.
    std::optional<std::pair<PointF, PointF>> view;
    int width = 800;
};

/// Layers bottom to top: cells, singular lines, table, orbit, legend.
std::string render_svg(const RenderInput& in);

}  // namespace obl::cli
