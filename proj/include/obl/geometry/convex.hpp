#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "obl/geometry/point.hpp"

namespace obl {

/// Linear inequality a*x + b*y + c > 0 (strict for membership; clipping
/// keeps the closure).
template <class T>
struct HalfPlane {
    T a{}, b{}, c{};

    T eval(const Point<T>& p) const { return T(a * p.x + b * p.y + c); }
};

/// Closed halfplane of points strictly left of the directed line p -> q,
/// i.e. cross(q - p, z - p) >= 0.
template <class T>
HalfPlane<T> left_of(const Point<T>& p, const Point<T>& q) {
    const Point<T> d = q - p;
    return HalfPlane<T>{T(-d.y), d.x, cross(p, q)};
}

template <class T>
std::vector<Point<T>> box_polygon(const Point<T>& lo, const Point<T>& hi) {
    return {lo, Point<T>(hi.x, lo.y), hi, Point<T>(lo.x, hi.y)};
}

/// Signed shoelace area.
template <class T>
T polygon_area(const std::vector<Point<T>>& poly) {
    T twice(0);
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) twice += cross(poly[i], poly[(i + 1) % n]);
    return T(twice / 2);
}

/// Sutherland-Hodgman step for one halfplane on a convex polygon.
template <class T>
std::vector<Point<T>> clip(const std::vector<Point<T>>& poly, const HalfPlane<T>& h) {
    std::vector<Point<T>> out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    out.reserve(n + 1);
    std::vector<T> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = h.eval(poly[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const bool in_i = f[i] >= 0, in_j = f[j] >= 0;
        if (in_i) out.push_back(poly[i]);
        if (in_i != in_j && f[i] != 0 && f[j] != 0) {
            const T t = f[i] / (f[i] - f[j]);
            out.push_back(poly[i] + t * (poly[j] - poly[i]));
        }
    }
    // Drop consecutive duplicates produced by vertices lying on the line.
    std::vector<Point<T>> dedup;
    for (auto& p : out)
        if (dedup.empty() || dedup.back() != p) dedup.push_back(std::move(p));
    while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    return dedup;
}

/// Clips the segment a-b to the intersection of closed halfplanes. Returns
/// the surviving sub-segment, or nothing when it is empty or a single point.
template <class T>
std::optional<std::pair<Point<T>, Point<T>>> clip_segment(const Point<T>& a, const Point<T>& b,
                                                          const std::vector<HalfPlane<T>>& hs) {
    T t0(0), t1(1);
    for (const auto& h : hs) {
        const T fa = h.eval(a), fb = h.eval(b);
        if (fa < 0 && fb < 0) return std::nullopt;
        if (fa >= 0 && fb >= 0) continue;
        const T t = fa / (fa - fb);
        if (fa < 0) {
            if (t > t0) t0 = t;
        } else if (t < t1) {
            t1 = t;
        }
        if (t0 >= t1) return std::nullopt;
    }
    const Point<T> d = b - a;
    return std::make_pair(a + t0 * d, a + t1 * d);
}

/// The four halfplanes of an axis-aligned box.
template <class T>
std::vector<HalfPlane<T>> box_halfplanes(const Point<T>& lo, const Point<T>& hi) {
    return {HalfPlane<T>{T(1), T(0), T(-lo.x)}, HalfPlane<T>{T(-1), T(0), hi.x},
            HalfPlane<T>{T(0), T(1), T(-lo.y)}, HalfPlane<T>{T(0), T(-1), hi.y}};
}

}  // namespace obl
