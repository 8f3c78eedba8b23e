#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "obl/geometry/point.hpp"

namespace obl {

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Table file could not be parsed or has the wrong shape.
class TableParseError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

/// Polygon fails strict convexity / orientation / distinctness at `vertex`.
class ConvexityError : public GeometryError {
public:
    ConvexityError(const std::string& what, std::size_t vertex)
        : GeometryError(what + " at vertex " + std::to_string(vertex)), vertex_(vertex) {}
    std::size_t vertex() const noexcept { return vertex_; }

private:
    std::size_t vertex_;
};

/// Query point is inside the table or on its boundary.
class InteriorPoint : public GeometryError {
public:
    InteriorPoint() : GeometryError("point is inside the table or on its boundary") {}
};

/// Strictly convex, counterclockwise polygon.
template <class T>
class Polygon {
public:
    /// Validates; throws ConvexityError. With `reorient`, clockwise input is
    /// reversed instead of rejected and `reoriented()` reports it.
    explicit Polygon(std::vector<Point<T>> vertices, bool reorient = false);

    const std::vector<Point<T>>& vertices() const noexcept { return v_; }
    const Point<T>& operator[](std::size_t i) const { return v_[i % v_.size()]; }
    std::size_t size() const noexcept { return v_.size(); }
    bool reoriented() const noexcept { return reoriented_; }

    /// Euclidean diameter (float).
    double diameter() const;
    /// Axis-aligned bounding box {min, max}.
    std::pair<Point<T>, Point<T>> bounds() const;

private:
    T polygon_area_twice() const;

    std::vector<Point<T>> v_;
    bool reoriented_ = false;
};

using PolygonF = Polygon<double>;
using PolygonQ = Polygon<Rational>;

struct Ellipse {
    PointF center;
    double a = 1.0;
    double b = 1.0;

    Ellipse() = default;
    Ellipse(PointF c, double a_, double b_);

    PointF at(double t) const;
    PointF tangent(double t) const;
    /// Negative inside, zero on the curve, positive outside.
    double level(const PointF& z) const;
    double diameter() const { return 2.0 * std::max(a, b); }
};

using Table = std::variant<PolygonQ, PolygonF, Ellipse>;

struct LoadOptions {
    bool reorient = false;
};

struct LoadedTable {
    Table table;
    bool reoriented = false;
};

/// Parses the JSON table format. Coordinates are all numbers (float mode) or
/// all "p/q" strings (exact mode).
LoadedTable load_table(std::string_view json_text, const LoadOptions& opts = {});
LoadedTable load_table_file(const std::string& path, const LoadOptions& opts = {});

/// JSON text for a table, coordinates in the table's own scalar mode.
std::string table_to_json(const Table& table);

bool is_exact(const Table& table);
double table_diameter(const Table& table);
/// Bounding box as doubles.
std::pair<PointF, PointF> table_bounds(const Table& table);

/// Float copy of a polygon.
PolygonF to_float(const PolygonQ& p);

}  // namespace obl
