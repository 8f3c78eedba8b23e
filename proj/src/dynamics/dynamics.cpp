#include "obl/dynamics/dynamics.hpp"

#include <cmath>

namespace obl {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::singular: return "singular";
        case Termination::interior: return "interior";
    }
    return "?";
}

namespace {

template <class T>
T abs_of(const T& v) {
    return v < 0 ? T(-v) : v;
}

template <class T>
T det2(const Point<T>& c0, const Point<T>& c1) {
    return cross(c0, c1);
}

}  // namespace

template <class T>
T area_jacobian_check(const Polygon<T>& table, const Point<T>& z, const T& h) {
    const T hs = h;
    const Point<T> ex(hs, T(0)), ey(T(0), hs);
    const auto base = tangency(table, z);
    if (base.singular) throw StraddleError();
    Point<T> img[4];
    const Point<T> probes[4] = {z + ex, z - ex, z + ey, z - ey};
    for (int k = 0; k < 4; ++k) {
        TangencyResult<T> r;
        try {
            r = tangency(table, probes[k]);
        } catch (const InteriorPoint&) {
            throw StraddleError();
        }
        if (r.singular || r.vertex != base.vertex) throw StraddleError();
        img[k] = reflect(r.tau, probes[k]);
    }
    const T two_h = T(2 * hs);
    const Point<T> jx(T((img[0].x - img[1].x) / two_h), T((img[0].y - img[1].y) / two_h));
    const Point<T> jy(T((img[2].x - img[3].x) / two_h), T((img[2].y - img[3].y) / two_h));
    return abs_of(T(det2(jx, jy) - 1));
}

double area_jacobian_check(const Ellipse& table, const PointF& z, double h) {
    const double hs = h;
    auto P = [&](const PointF& p) { return step(table, p); };
    const PointF ex(hs, 0), ey(0, hs);
    const PointF jx = (1.0 / (2 * hs)) * PointF(P(z + ex) - P(z - ex));
    const PointF jy = (1.0 / (2 * hs)) * PointF(P(z + ey) - P(z - ey));
    return std::abs(cross(jx, jy) - 1.0);
}

template double area_jacobian_check(const PolygonF&, const PointF&, const double&);
template Rational area_jacobian_check(const PolygonQ&, const PointQ&, const Rational&);

namespace {

/// A point far enough along the ray start + k*dir to leave the box.
template <class T>
Point<T> far_point(const Point<T>& start, const Point<T>& dir, const Point<T>& lo, const Point<T>& hi) {
    auto ab = [](const T& v) { return v < 0 ? T(-v) : v; };
    const T reach = T(ab(T(start.x - lo.x)) + ab(T(start.x - hi.x)) + ab(T(start.y - lo.y)) + ab(T(start.y - hi.y)) + 1);
    const T m = ab(dir.x) > ab(dir.y) ? ab(dir.x) : ab(dir.y);
    return start + T(reach / m) * dir;
}

template <class T>
bool positive_length(const std::pair<Point<T>, Point<T>>& s) {
    return s.first != s.second;
}

template <class T>
bool on_line(const std::pair<Point<T>, Point<T>>& s, const Point<T>& p, const Point<T>& q, double tol) {
    const Point<T> d = q - p;
    return Scalar<T>::sign(cross(d, Point<T>(s.first - p)), tol) == 0 &&
           Scalar<T>::sign(cross(d, Point<T>(s.second - p)), tol) == 0;
}

}  // namespace

template <class T>
SingularArrangement<T> singular_lines(const Polygon<T>& table, int depth, const Point<T>& lo, const Point<T>& hi) {
    SingularArrangement<T> out;
    out.depth = depth;
    if (!(lo.x < hi.x && lo.y < hi.y)) return out;
    const auto box = box_halfplanes(lo, hi);
    const std::size_t n = table.size();

    std::vector<SingularSegment<T>> current;
    for (std::size_t i = 0; i < n; ++i) {
        const Point<T>& v0 = table[i];
        const Point<T>& v1 = table[i + 1];
        const Point<T> e = v1 - v0;
        // Behind v_i the two endpoints of the edge both support with the
        // table on the left: the forward map is undefined there.
        if (auto s = clip_segment(v0, far_point(v0, Point<T>(-e), lo, hi), box); s && positive_length(*s))
            current.push_back({s->first, s->second, 0, true});
        if (auto s = clip_segment(v1, far_point(v1, e, lo, hi), box); s && positive_length(*s))
            current.push_back({s->first, s->second, 0, false});
    }
    out.segments = current;

    const double scale = table.diameter() + norm(to_double(Point<T>(hi - lo)));
    const double tol = kSingularTol * scale * scale;
    std::vector<std::vector<HalfPlane<T>>> cells(n);
    for (std::size_t j = 0; j < n; ++j) {
        cells[j] = tangency_cell(table, j);
        cells[j].insert(cells[j].end(), box.begin(), box.end());
    }
    for (int g = 1; g <= depth; ++g) {
        std::vector<SingularSegment<T>> next;
        for (const auto& seg : current)
            for (std::size_t j = 0; j < n; ++j) {
                const Point<T> a = reflect(table[j], seg.a), b = reflect(table[j], seg.b);
                auto s = clip_segment(a, b, cells[j]);
                if (s && on_line(*s, table[j + n - 1], table[j], tol)) {
                    // The closed cell contains the incoming edge itself; keep
                    // only the part beyond v_{j-1}.
                    const Point<T> back = table[j + n - 1] - table[j];
                    s = clip_segment(s->first, s->second,
                                     {HalfPlane<T>{back.x, back.y, T(-dot(back, table[j + n - 1]))}});
                }
                if (s && positive_length(*s)) next.push_back({s->first, s->second, g, seg.forward});
            }
        out.segments.insert(out.segments.end(), next.begin(), next.end());
        current = std::move(next);
    }
    return out;
}

template SingularArrangement<double> singular_lines(const PolygonF&, int, const PointF&, const PointF&);
template SingularArrangement<Rational> singular_lines(const PolygonQ&, int, const PointQ&, const PointQ&);

}  // namespace obl
