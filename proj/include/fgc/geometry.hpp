#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fgc {

namespace tol {
inline constexpr double kDeterminant = 1e-12;
inline constexpr double kParabolic = 1e-9;
inline constexpr double kDistance = 1e-9;
inline constexpr double kKlein = 1e-9;
inline constexpr double kElementFloat = 1e-9;
}  // namespace tol

inline constexpr double kPi = std::numbers::pi;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point x + iy of the upper half-plane.
struct UhpPoint {
    double x = 0.0;
    double y = 1.0;

    UhpPoint() = default;
    UhpPoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw GeometryError("upper half-plane point needs finite x and y > 0");
    }

    friend bool operator==(const UhpPoint&, const UhpPoint&) = default;
};

/// Point of R ∪ {∞}.
class BoundaryPoint {
public:
    static BoundaryPoint infinity() { return BoundaryPoint(true, 0.0); }
    static BoundaryPoint real(double x) { return BoundaryPoint(false, x); }

    bool is_infinity() const { return infinite_; }
    double value() const {
        if (infinite_) throw GeometryError("boundary point at infinity has no real value");
        return x_;
    }

    friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

private:
    BoundaryPoint(bool inf, double x) : infinite_(inf), x_(inf ? 0.0 : x) {}
    bool infinite_;
    double x_;
};

/// Point of the closed Klein disk (Euclidean coordinates).
struct KleinPoint {
    double u = 0.0;
    double v = 0.0;

    double norm() const { return std::hypot(u, v); }
    double norm2() const { return u * u + v * v; }
    friend KleinPoint operator+(KleinPoint a, KleinPoint b) { return {a.u + b.u, a.v + b.v}; }
    friend KleinPoint operator-(KleinPoint a, KleinPoint b) { return {a.u - b.u, a.v - b.v}; }
    friend KleinPoint operator*(double s, KleinPoint a) { return {s * a.u, s * a.v}; }
    friend bool operator==(const KleinPoint&, const KleinPoint&) = default;
};

inline double dot(KleinPoint a, KleinPoint b) { return a.u * b.u + a.v * b.v; }
inline double cross(KleinPoint a, KleinPoint b) { return a.u * b.v - a.v * b.u; }
inline double klein_distance(KleinPoint a, KleinPoint b) { return (a - b).norm(); }

/// Hyperboloid model vector (t, x, y) with t^2 - x^2 - y^2 = 1.
struct HyperboloidPoint {
    double t = 1.0;
    double x = 0.0;
    double y = 0.0;
};

// Model changes. The Klein chart sends i to the origin, ∞ to (0, 1), 0 to (0, -1)
// and preserves orientation.
HyperboloidPoint to_hyperboloid(UhpPoint z);
KleinPoint to_klein(UhpPoint z);
UhpPoint from_klein(KleinPoint k);
KleinPoint to_klein(const BoundaryPoint& b);
BoundaryPoint boundary_from_klein(KleinPoint k);

/// Hyperbolic distance in the upper half-plane.
double dist(UhpPoint a, UhpPoint b);

/// Monotone surrogate of dist: |a-b|^2 / (ya yb) = 2 (cosh d - 1).
inline double cosh_key(UhpPoint a, UhpPoint b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return (dx * dx + dy * dy) / (a.y * b.y);
}
inline double dist_from_key(double key) { return 2.0 * std::asinh(0.5 * std::sqrt(key)); }

/// Angle (radians) of a unit-circle point, in [0, 2π).
double circle_angle(KleinPoint k);
KleinPoint circle_point(double angle);

/// Point at hyperbolic distance `t` from `from` along the geodesic towards `to`.
UhpPoint geodesic_step(UhpPoint from, UhpPoint to, double t);

}  // namespace fgc
