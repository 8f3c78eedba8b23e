#include "obl/geometry/tangency.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace obl {

template <class T>
TangencyResult<T> tangency(const Polygon<T>& poly, const Point<T>& z) {
    const std::size_t n = poly.size();
    const double scale = poly.diameter() + norm(to_double(z));
    const double tol = kSingularTol * scale * scale;

    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i)
        if (Scalar<T>::sign(cross(Point<T>(poly[i + 1] - poly[i]), Point<T>(z - poly[i])), tol) < 0) inside = false;
    if (inside) throw InteriorPoint();

    // The supporting vertex is the most clockwise one seen from z.
    std::size_t j = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (Scalar<T>::sign(cross(Point<T>(poly[j] - z), Point<T>(poly[k] - z)), tol) < 0) j = k;

    TangencyResult<T> r;
    r.tau = poly[j];
    r.vertex = j;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        const int s = Scalar<T>::sign(cross(Point<T>(poly[j] - z), Point<T>(poly[k] - z)), tol);
        if (s < 0) throw GeometryError("tangency: inconsistent supporting vertex");
        if (s == 0) {
            r.singular = true;
            r.other_vertex = k;
        }
    }
    return r;
}

template TangencyResult<double> tangency(const PolygonF&, const PointF&);
template TangencyResult<Rational> tangency(const PolygonQ&, const PointQ&);

TangencyResult<double> ellipse_tangency(const Ellipse& e, const PointF& z) {
    if (e.level(z) <= 1e-14) throw InteriorPoint();
    // In axis-rescaled coordinates the table is the unit circle and the left
    // tangent point sits at angle phi + alpha with cos(alpha) = 1/d.
    const double u = (z.x - e.center.x) / e.a, w = (z.y - e.center.y) / e.b;
    const double d = std::hypot(u, w);
    const double phi = std::atan2(w, u);
    const double alpha = std::acos(std::min(1.0, 1.0 / d));
    const double t0 = phi + alpha;

    auto f = [&](double t) { return cross(PointF(e.at(t) - z), e.tangent(t)); };
    // Both tangent angles are roots of f; keep the bracket clear of the other.
    const double half = 0.5 * std::min(alpha, std::numbers::pi - alpha);
    double lo = t0 - half, hi = t0 + half;
    double flo = f(lo), fhi = f(hi);
    double t = t0;
    if (f(t0) != 0.0) {
        if (!(flo * fhi < 0)) {
            std::ostringstream msg;
            msg << "ellipse tangency: root not bracketed (z=" << z << ", t0=" << t0 << ", f(lo)=" << flo
                << ", f(hi)=" << fhi << ")";
            throw GeometryError(msg.str());
        }
        std::uintmax_t iters = 100;
        auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                        boost::math::tools::eps_tolerance<double>(44), iters);
        t = 0.5 * (a + b);
    }
    t = std::remainder(t, 2 * std::numbers::pi);
    TangencyResult<double> r;
    r.kind = TangencyKind::smooth;
    r.parameter = t;
    r.tau = e.at(t);
    return r;
}

template <class T>
std::vector<std::array<std::size_t, 4>> parallelogram_corners(const Polygon<T>& poly, double tol) {
    std::vector<std::array<std::size_t, 4>> out;
    const std::size_t n = poly.size();
    const double abs_tol = tol * poly.diameter();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    const Point<T> diff = poly[a] + poly[c] - poly[b] - poly[d];
                    bool hit;
                    if constexpr (Scalar<T>::exact)
                        hit = diff.x == 0 && diff.y == 0;
                    else
                        hit = norm(diff) <= abs_tol;
                    if (hit) out.push_back({a, b, c, d});
                }
    return out;
}

template std::vector<std::array<std::size_t, 4>> parallelogram_corners(const PolygonF&, double);
template std::vector<std::array<std::size_t, 4>> parallelogram_corners(const PolygonQ&, double);

}  // namespace obl
