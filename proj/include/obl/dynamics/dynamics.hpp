#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "obl/geometry/convex.hpp"
#include "obl/geometry/tangency.hpp"

namespace obl {

/// The map is undefined at z (two supporting vertices).
class SingularPoint : public GeometryError {
public:
    explicit SingularPoint(const std::string& what = "singular tangency: the map is undefined here")
        : GeometryError(what) {}
};

/// Finite-difference stencil crosses a singular line.
class StraddleError : public GeometryError {
public:
    StraddleError() : GeometryError("finite-difference neighbourhood straddles a singular line") {}
};

template <class T>
TangencyResult<T> support(const Polygon<T>& p, const Point<T>& z) {
    return tangency(p, z);
}
inline TangencyResult<double> support(const Ellipse& e, const PointF& z) { return ellipse_tangency(e, z); }

/// One step z -> 2 tau - z. Throws SingularPoint or InteriorPoint.
template <class Tab, class T>
Point<T> step(const Tab& table, const Point<T>& z) {
    const auto r = support(table, z);
    if (r.singular) throw SingularPoint();
    return reflect(r.tau, z);
}

enum class Termination { completed, singular, interior };

const char* to_string(Termination t);

template <class T>
struct OrbitSample {
    std::vector<Point<T>> points;
    std::vector<TangencyResult<T>> tangencies;
    Termination termination = Termination::completed;
    /// Step at which iteration stopped (the index of the offending point).
    std::size_t stop_step = 0;
};

template <class Tab, class T>
OrbitSample<T> orbit(const Tab& table, const Point<T>& z, std::size_t n) {
    OrbitSample<T> s;
    s.points.push_back(z);
    for (std::size_t k = 0; k < n; ++k) {
        TangencyResult<T> r;
        try {
            r = support(table, s.points.back());
        } catch (const InteriorPoint&) {
            s.termination = Termination::interior;
            s.stop_step = k;
            return s;
        }
        if (r.singular) {
            s.termination = Termination::singular;
            s.stop_step = k;
            return s;
        }
        s.points.push_back(reflect(r.tau, s.points.back()));
        s.tangencies.push_back(std::move(r));
    }
    s.stop_step = n;
    return s;
}

/// CSV with header k,x,y,tx,ty. The tangency columns of the last row are
/// filled when the final point has a regular tangency, else left empty.
template <class Tab, class T>
void write_orbit_csv(std::ostream& os, const Tab& table, const OrbitSample<T>& s) {
    os << "k,x,y,tx,ty\n";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
        const auto& p = s.points[k];
        os << k << ',' << Scalar<T>::str(p.x) << ',' << Scalar<T>::str(p.y) << ',';
        if (k < s.tangencies.size()) {
            os << Scalar<T>::str(s.tangencies[k].tau.x) << ',' << Scalar<T>::str(s.tangencies[k].tau.y);
        } else {
            try {
                const auto r = support(table, p);
                if (!r.singular) os << Scalar<T>::str(r.tau.x) << ',' << Scalar<T>::str(r.tau.y);
                else os << ',';
            } catch (const GeometryError&) {
                os << ',';
            }
        }
        os << '\n';
    }
}

/// |det J - 1| of the map at z by central differences with step h.
/// Polygon: throws StraddleError unless all stencil
/// points share z's tangency vertex; the result is then exact in rational mode.
template <class T>
T area_jacobian_check(const Polygon<T>& table, const Point<T>& z, const T& h);
double area_jacobian_check(const Ellipse& table, const PointF& z, double h);

template <class T>
struct SingularSegment {
    Point<T> a, b;
    int generation = 0;
    /// True when the map itself is undefined on the segment; false for the
    /// edge extensions where only the inverse map is undefined.
    bool forward = true;
};

template <class T>
struct SingularArrangement {
    int depth = 0;
    std::vector<SingularSegment<T>> segments;

    std::size_t count(int generation) const {
        std::size_t c = 0;
        for (const auto& s : segments) c += s.generation == generation;
        return c;
    }
};

/// Generation 0: both extensions of every edge line, clipped to the box.
/// Generation k+1: preimages of generation k, i.e. each segment reflected
/// through vertex j and clipped to the closed tangency cell of j and the box.
template <class T>
SingularArrangement<T> singular_lines(const Polygon<T>& table, int depth, const Point<T>& lo, const Point<T>& hi);

/// Closed set of exterior points whose supporting vertex is j.
template <class T>
std::vector<HalfPlane<T>> tangency_cell(const Polygon<T>& table, std::size_t j) {
    std::vector<HalfPlane<T>> hs;
    for (std::size_t w = 0; w < table.size(); ++w)
        if (w != j) hs.push_back(left_of(table[j], table[w]));
    return hs;
}

extern template double area_jacobian_check(const PolygonF&, const PointF&, const double&);
extern template Rational area_jacobian_check(const PolygonQ&, const PointQ&, const Rational&);
extern template SingularArrangement<double> singular_lines(const PolygonF&, int, const PointF&, const PointF&);
extern template SingularArrangement<Rational> singular_lines(const PolygonQ&, int, const PointQ&, const PointQ&);

}  // namespace obl
