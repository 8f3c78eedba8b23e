#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obl/geometry/point.hpp"

// Forms on the space of quadrilaterals z_1..z_4. Indices are 0-based here:
// z[0] is z_1, delta(q, 0) is Delta_1 = Delta_{1,2}, theta(0, ...) is theta^1.

namespace obl::eds {

class DegenerateQuad : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
struct QuadConfig {
    std::array<Point<T>, 4> z;

    const Point<T>& operator[](std::size_t i) const { return z[i % 4]; }
    Point<T> midpoint(std::size_t i) const {
        return Point<T>(T(((*this)[i].x + (*this)[i + 1].x) / 2), T(((*this)[i].y + (*this)[i + 1].y) / 2));
    }
};

template <class T>
struct TangentQuad {
    std::array<Point<T>, 4> dz;

    const Point<T>& operator[](std::size_t i) const { return dz[i % 4]; }
};

using Quad = QuadConfig<double>;
using Tangent = TangentQuad<double>;

/// Delta_i: double area of the triangle z_i, z_{i+1}, z_{i+2}.
template <class T>
T delta(const QuadConfig<T>& q, std::size_t i) {
    return cross(Point<T>(q[i + 1] - q[i]), Point<T>(q[i + 2] - q[i + 1]));
}

template <class T>
std::array<T, 4> deltas(const QuadConfig<T>& q) {
    return {delta(q, 0), delta(q, 1), delta(q, 2), delta(q, 3)};
}

/// Shoelace area (positive for counterclockwise order).
template <class T>
T area(const QuadConfig<T>& q) {
    T s(0);
    for (std::size_t i = 0; i < 4; ++i) s += cross(q[i], q[i + 1]);
    return T(s / 2);
}

/// theta^i = 1/2 (y_i - y_{i+1}) d(x_i + x_{i+1}) - 1/2 (x_i - x_{i+1}) d(y_i + y_{i+1}).
template <class T>
T theta(std::size_t i, const QuadConfig<T>& q, const TangentQuad<T>& d) {
    const Point<T> e = q[i] - q[i + 1];
    const Point<T> s = d[i] + d[i + 1];
    return T((e.y * s.x - e.x * s.y) / 2);
}

/// omega^i = 1/2 (y_i - y_{i+1}) d(x_i - x_{i+1}) - 1/2 (x_i - x_{i+1}) d(y_i - y_{i+1}).
template <class T>
T omega(std::size_t i, const QuadConfig<T>& q, const TangentQuad<T>& d) {
    const Point<T> e = q[i] - q[i + 1];
    const Point<T> s = d[i] - d[i + 1];
    return T((e.y * s.x - e.x * s.y) / 2);
}

template <class T>
std::array<T, 4> thetas(const QuadConfig<T>& q, const TangentQuad<T>& d) {
    return {theta(0, q, d), theta(1, q, d), theta(2, q, d), theta(3, q, d)};
}

template <class T>
std::array<T, 4> omegas(const QuadConfig<T>& q, const TangentQuad<T>& d) {
    return {omega(0, q, d), omega(1, q, d), omega(2, q, d), omega(3, q, d)};
}

/// The unique variation with the given coframe values. Each dz_k is fixed by
/// theta^k + omega^k and theta^{k-1} - omega^{k-1}; the 2x2 determinant is
/// Delta_{k-1}. Throws DegenerateQuad when some Delta vanishes.
template <class T>
TangentQuad<T> coframe_solve(const QuadConfig<T>& q, const std::array<T, 4>& th, const std::array<T, 4>& om) {
    TangentQuad<T> out;
    for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t km = (k + 3) % 4;
        const Point<T> a = q[k] - q[k + 1];   // e_k
        const Point<T> b = q[km] - q[k];      // e_{k-1}
        const T det = cross(a, b);
        if (det == 0) throw DegenerateQuad("coframe degenerates: Delta_" + std::to_string(km + 1) + " = 0");
        // cross(e_k, dz_k) = -(theta^k + omega^k), cross(e_{k-1}, dz_k) = -(theta^{k-1} - omega^{k-1}).
        const T alpha = T(-(th[k] + om[k]));
        const T beta = T(-(th[km] - om[km]));
        out.dz[k] = Point<T>(T((alpha * b.x - beta * a.x) / det), T((alpha * b.y - beta * a.y) / det));
    }
    return out;
}

/// Relative nondegeneracy: distinct vertices and |Delta_i| > tol * scale^2.
bool nondegenerate(const Quad& q, double tol = 1e-12);

/// Two-parameter family of quadrilaterals on the grid [-r, r]^2.
struct FamilyPatch {
    double radius = 0.0;
    int n = 1;
    /// Central-difference step used when `derivatives` is empty (and for the
    /// exterior-derivative checks).
    double fd_step = 1e-4;
    std::function<Quad(double, double)> config;
    /// Analytic (d/ds, d/dt) tangents, when known.
    std::function<std::pair<Tangent, Tangent>(double, double)> derivatives;

    std::vector<double> axis() const;
    /// Tangents at (s, t): analytic when available, else central differences.
    std::pair<Tangent, Tangent> tangents(double s, double t) const;
    /// Central-difference tangents regardless of `derivatives`.
    std::pair<Tangent, Tangent> fd_tangents(double s, double t, double h) const;
};

/// z_1(s,t) = z_1^0 + (s,t), z_{i+1} = 2 zeta_i^0 - z_i, with analytic
/// derivatives. Throws DegenerateQuad naming the offending (s, t).
FamilyPatch midpoint_family(const Quad& q0, double r, int n);

/// The same family under the nonlinear reparametrisation
/// (s, t) -> (s + s^2/2 + s^3/6, t + s t/2), so that exterior derivatives taken by
/// central differences carry a genuine O(fd_step^2) error.
FamilyPatch warped_midpoint_family(const Quad& q0, double r, int n, double fd_step);

/// max |theta^i| over the grid, i and both parameter directions.
double family_residual(const FamilyPatch& fp);

struct StructureResiduals {
    double dtheta = 0;         // spread of dx^i ^ dy^i across i
    double rel = 0;            // spread of Delta_i^-1 omega^i ^ omega^{i+1} across i
    double domega = 0;         // FD d(omega^i) against (4/Delta_i) omega^i ^ omega^{i+1}
    double area = 0;           // dx^{i+1} ^ dy^{i+1} + Delta_i^-1 omega^i ^ omega^{i+1}
    double area_integral = 0;  // drift of Delta_1 + Delta_3 and Delta_2 + Delta_4 from 2 S at the base
};

StructureResiduals structure_residuals(const FamilyPatch& fp);

enum class ElementCase { generic, deg_omega13, deg_D };
const char* to_string(ElementCase c);

struct IntegralElement {
    double v = 0;
    double u = 0;
    double fit_residual = 0;
    double wedge2413_residual = 0;
    double omega13 = 0;  // omega^1 ^ omega^3 on the two directions
    double D = 0;        // Delta_2 Delta_4 - Delta_1 Delta_3
    ElementCase tag = ElementCase::generic;
};

class NotIntegral : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fits omega^2 = v(Delta_2 omega^1 + Delta_1 omega^3), omega^4 = -v(Delta_3
/// omega^1 + Delta_4 omega^3) over both directions by least squares. Tags
/// deg_D when |D| <= degeneracy * scale^4, else deg_omega13 when
/// |omega^1 ^ omega^3| <= degeneracy * scale^4. Throws NotIntegral when some
/// |theta^i| exceeds theta_tol * scale^2.
IntegralElement integral_element(const Quad& q, const Tangent& a, const Tangent& b, double theta_tol = 1e-10,
                                 double degeneracy = 1e-10);

/// (theta^5, theta^6) on a variation.
std::pair<double, double> theta56(const Quad& q, const Tangent& d);

/// Coefficients of theta^5, theta^6 in the coframe (theta^1..4, omega^1..4).
std::array<std::array<double, 8>, 2> theta56_coefficients(const Quad& q);

/// Numerical rank of a 2 x 8 matrix (relative tolerance).
int rank2x8(const std::array<std::array<double, 8>, 2>& m, double tol = 1e-12);

/// Multiplier lambda with (dz_i + dz_{i+1})/2 = lambda (z_{i+1} - z_i).
/// Throws NotIntegral when the midpoint velocity is not parallel to the segment.
double tangency_direction(const Quad& q, const Tangent& d, std::size_t i, double tol = 1e-10);

struct DdeltaResidual {
    double ddelta1 = 0;
    double ddelta2 = 0;
    /// Grid points where the element is degenerate and v is undefined.
    std::size_t skipped = 0;
    double max() const { return ddelta1 > ddelta2 ? ddelta1 : ddelta2; }
};

/// Central differences of Delta_1, Delta_2 along both parameter directions
/// against the right-hand sides written with the v fitted at each point.
/// Non-integral families are fitted anyway and simply report large values.
DdeltaResidual ddelta_check(const FamilyPatch& fp);

/// JSON report: per-grid-point residual maxima and the (v, u) field.
std::string family_report_json(const FamilyPatch& fp);

}  // namespace obl::eds
