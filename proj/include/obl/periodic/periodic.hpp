#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obl/dynamics/dynamics.hpp"

namespace obl {

/// Tangency vertex sequence; at least 2 entries, consecutive entries distinct.
class Itinerary {
public:
    explicit Itinerary(std::vector<std::size_t> vertices);

    const std::vector<std::size_t>& vertices() const noexcept { return v_; }
    std::size_t period() const noexcept { return v_.size(); }
    std::size_t operator[](std::size_t k) const { return v_[k]; }
    friend bool operator==(const Itinerary&, const Itinerary&) = default;

private:
    std::vector<std::size_t> v_;
};

/// Offset of the composed reflections for an even period: P^n(z) = z + t on
/// the cell. For n = 4 this is 2(v2 + v4 - v1 - v3). Throws on odd period.
template <class T>
Point<T> translation_of(const Polygon<T>& table, const Itinerary& itin);

struct Box {
    PointF lo, hi;
};

template <class T>
struct Cell {
    Itinerary itinerary;
    /// Strict inequalities on the starting point z0.
    std::vector<HalfPlane<T>> halfplanes;
    /// Closure of the cell clipped to the region box (counterclockwise).
    std::vector<Point<T>> region;
    T area{};
    bool nonempty = false;
    /// Even period: P^n(z) = z + offset. Odd period: P^n(z) = offset - z.
    Point<T> offset;
    /// Float mode: area within the safety margin, result needs exact recheck.
    bool near_degenerate = false;

    bool even() const { return itinerary.period() % 2 == 0; }
    /// Strict membership in the cell (box not included).
    bool contains(const Point<T>& z) const;
};

template <class T>
Cell<T> cell_for_itinerary(const Polygon<T>& table, const Itinerary& itin, const Point<T>& lo, const Point<T>& hi);

/// Bounding box of the table scaled about its center by `inflate`.
Box default_region(const Table& table, double inflate = 3.0);

template <class T>
struct ScanReport {
    std::string table_json;
    Point<T> lo, hi;
    std::size_t cells_examined = 0;
    std::size_t nonempty = 0;
    std::vector<Cell<T>> zero_translation;
    /// Float mode: cells whose emptiness was settled in exact arithmetic.
    std::size_t rechecked = 0;

    bool open_set() const { return !zero_translation.empty(); }
    const char* verdict() const { return open_set() ? "open-period-4-set" : "empty-interior"; }
    std::string to_json() const;
};

/// All period-4 itineraries (consecutive entries distinct), classified.
template <class T>
ScanReport<T> period4_scan(const Polygon<T>& table, const Point<T>& lo, const Point<T>& hi);

struct SampleRegion {
    enum class Kind { box, disk, annulus } kind = Kind::box;
    PointF lo, hi;          // box
    PointF center;          // disk / annulus
    double r_inner = 0.0;   // annulus
    double r_outer = 0.0;   // disk radius / annulus outer radius

    static SampleRegion box(PointF lo, PointF hi);
    static SampleRegion disk(PointF c, double r);
    static SampleRegion annulus(PointF c, double r_in, double r_out);
};

/// Annulus about the table's bounding-box center: inner radius reaches the
/// farthest table point, outer radius is `inflate` times that.
SampleRegion bounding_annulus(const Table& table, double inflate = 3.0);

struct MeasureOptions {
    std::size_t period = 4;
    double tol = 1e-9;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::size_t partitions = 16;
    /// Exact iteration for rational polygon tables (sample points are
    /// converted to rationals exactly). Ignored for other tables.
    bool exact = true;
};

struct MeasureResult {
    std::size_t samples = 0;
    std::size_t periodic = 0;
    std::size_t singular = 0;
    double fraction = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

/// Uniform rejection sampling of region minus table; a point counts as
/// periodic when |P^n(z) - z| <= tol, or P^n(z) == z in exact mode.
MeasureResult measure_estimate(const Table& table, const SampleRegion& region, const MeasureOptions& opts);

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::size_t hits, std::size_t n);

class RefinementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RefineOptions {
    std::size_t max_iterations = 100;
    /// Central-difference step, relative to |z| + diameter.
    double fd_step = 1e-6;
    /// Stop once the residual falls below this, relative to |z| + diameter.
    double target = 1e-13;
    /// Accept a stalled iteration only below this absolute residual.
    double accept = 1e-9;
    /// sigma_min / sigma_max of the derivative below this flags degeneracy.
    double degeneracy = 1e-6;
};

struct RefineResult {
    PointF point;
    double residual = 0.0;
    std::size_t iterations = 0;
    bool degenerate = false;
};

/// Levenberg-Marquardt on F(z) = P^n(z) - z with finite-difference
/// derivatives. Throws RefinementError on divergence or when an iterate
/// enters the table.
RefineResult refine_periodic_smooth(const Ellipse& table, const PointF& z0, std::size_t n,
                                    const RefineOptions& opts = {});

}  // namespace obl
