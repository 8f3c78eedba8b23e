#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "obl/cas/rational.hpp"

namespace obl {

using cas::Rational;

/// Planar point / vector over a scalar field (double or exact Rational).
template <class T>
struct Point {
    T x{};
    T y{};

    Point() = default;
    Point(T x_, T y_) : x(std::move(x_)), y(std::move(y_)) {}

    Point& operator+=(const Point& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Point& operator-=(const Point& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator-(const Point& a) { return Point(T(-a.x), T(-a.y)); }
    friend Point operator*(const T& k, const Point& p) { return Point(T(k * p.x), T(k * p.y)); }
    friend Point operator*(const Point& p, const T& k) { return k * p; }
    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

using PointF = Point<double>;
using PointQ = Point<Rational>;

template <class T>
T cross(const Point<T>& a, const Point<T>& b) {
    return T(a.x * b.y - a.y * b.x);
}

template <class T>
T dot(const Point<T>& a, const Point<T>& b) {
    return T(a.x * b.x + a.y * b.y);
}

/// Point reflection through c: 2c - z.
template <class T>
Point<T> reflect(const Point<T>& c, const Point<T>& z) {
    return Point<T>(T(2 * c.x - z.x), T(2 * c.y - z.y));
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

template <class T>
PointF to_double(const Point<T>& p) {
    return PointF(to_double(p.x), to_double(p.y));
}

/// Exact conversion: every finite double is a dyadic rational.
inline PointQ to_exact(const PointF& p) { return PointQ(Rational(p.x), Rational(p.y)); }

inline double norm(const PointF& p) { return std::hypot(p.x, p.y); }

/// Scalar-mode traits. Exact mode compares against zero exactly; float mode
/// uses a caller-provided absolute tolerance.
template <class T>
struct Scalar;

template <>
struct Scalar<double> {
    static constexpr bool exact = false;
    static std::string str(double v);
    static int sign(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
};

template <>
struct Scalar<Rational> {
    static constexpr bool exact = true;
    static std::string str(const Rational& v) { return cas::to_string(v); }
    static int sign(const Rational& v, double /*tol*/) { return sgn(v); }
};

template <class T>
std::ostream& operator<<(std::ostream& os, const Point<T>& p) {
    return os << '(' << Scalar<T>::str(p.x) << ", " << Scalar<T>::str(p.y) << ')';
}

}  // namespace obl
