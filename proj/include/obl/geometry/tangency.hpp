#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "obl/geometry/table.hpp"

namespace obl {

enum class TangencyKind { vertex, smooth };

template <class T>
struct TangencyResult {
    Point<T> tau;
    TangencyKind kind = TangencyKind::vertex;
    std::size_t vertex = 0;   // valid for kind == vertex
    double parameter = 0.0;   // valid for kind == smooth
    bool singular = false;
    /// Second vertex on the supporting line when singular.
    std::optional<std::size_t> other_vertex;
};

/// Float-mode degeneracy factor: |cross| <= kSingularTol * scale^2.
inline constexpr double kSingularTol = 1e-12;

/// Supporting vertex with the polygon strictly left of z -> tau.
/// Throws InteriorPoint when z is inside or on the boundary.
template <class T>
TangencyResult<T> tangency(const Polygon<T>& poly, const Point<T>& z);

/// Smooth tangency on an ellipse; throws InteriorPoint, or GeometryError if
/// the root cannot be bracketed.
TangencyResult<double> ellipse_tangency(const Ellipse& e, const PointF& z);

/// Ordered 4-tuples a<b<c<d (polygon order) with v_a + v_c = v_b + v_d.
/// `tol` is relative to the diameter and only used in float mode.
template <class T>
std::vector<std::array<std::size_t, 4>> parallelogram_corners(const Polygon<T>& poly, double tol = 1e-9);

extern template TangencyResult<double> tangency(const PolygonF&, const PointF&);
extern template TangencyResult<Rational> tangency(const PolygonQ&, const PointQ&);
extern template std::vector<std::array<std::size_t, 4>> parallelogram_corners(const PolygonF&, double);
extern template std::vector<std::array<std::size_t, 4>> parallelogram_corners(const PolygonQ&, double);

}  // namespace obl
