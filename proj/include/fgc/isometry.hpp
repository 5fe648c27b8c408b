#pragma once

#include "fgc/geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fgc {

enum class Arithmetic { ExactInteger, Floating };

/// Orientation-preserving isometry of H^2: an element of PSL2(R) stored as a
/// determinant-one matrix whose first nonzero entry is positive.
///
/// Exact-integer groups keep integral entries in doubles; products stay exact
/// while entries are below 2^26 (checked by the enumeration layer).
class Isometry {
public:
    Isometry() = default;
    /// Rescales to determinant one; throws GeometryError if det <= 0.
    Isometry(double a, double b, double c, double d);

    static Isometry identity() { return {}; }
    static Isometry translation(double t) { return {1.0, t, 0.0, 1.0}; }
    /// Entries kept bit for bit (no rescaling), for reloading saved elements.
    /// Throws GeometryError unless |det - 1| <= 1e-9.
    static Isometry from_entries(double a, double b, double c, double d);

    double a() const { return m_[0]; }
    double b() const { return m_[1]; }
    double c() const { return m_[2]; }
    double d() const { return m_[3]; }
    const std::array<double, 4>& entries() const { return m_; }

    double trace() const { return m_[0] + m_[3]; }
    double max_abs_entry() const;
    bool is_integral() const;
    bool is_identity(Arithmetic mode = Arithmetic::Floating) const;

    UhpPoint apply(UhpPoint z) const;
    BoundaryPoint apply(const BoundaryPoint& p) const;
    KleinPoint apply_klein(KleinPoint k) const;

    Isometry inverse() const { return {m_[3], -m_[1], -m_[2], m_[0], Raw{}}; }
    friend Isometry operator*(const Isometry& g, const Isometry& h);

    /// Exact equality of canonical representatives.
    friend bool operator==(const Isometry&, const Isometry&) = default;
    /// Lexicographic order on canonical entries (used for canonical orderings).
    friend bool operator<(const Isometry& g, const Isometry& h) { return g.m_ < h.m_; }

private:
    struct Raw {};
    Isometry(double a, double b, double c, double d, Raw);
    void canonicalize_sign();

    std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

std::ostream& operator<<(std::ostream& os, const Isometry& g);
std::string to_string(const Isometry& g);

inline UhpPoint apply(const Isometry& g, UhpPoint z) { return g.apply(z); }
inline Isometry compose(const Isometry& g, const Isometry& h) { return g * h; }
inline Isometry inverse(const Isometry& g) { return g.inverse(); }

/// PSL2 equality: exact (up to sign) for integer groups, entrywise within
/// 1e-9 (relative to the entry scale) for floating groups.
bool elements_equal(const Isometry& g, const Isometry& h, Arithmetic mode);

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };
const char* to_string(IsometryKind kind);

IsometryKind classify(const Isometry& g, Arithmetic mode = Arithmetic::Floating,
                      double parabolic_tolerance = tol::kParabolic);

using FixedPoint = std::variant<UhpPoint, BoundaryPoint>;

/// Elliptic: one interior point; parabolic: one boundary point; hyperbolic:
/// repelling then attracting boundary point. Throws GeometryError for identity.
std::vector<FixedPoint> fixed_points(const Isometry& g, Arithmetic mode = Arithmetic::Floating,
                                     double parabolic_tolerance = tol::kParabolic);

/// Order of an elliptic element of finite order, 0 if not of finite order
/// (within tolerance) or not elliptic.
int elliptic_order(const Isometry& g, int max_order = 64);

/// hyperbolic displacement d(z, g z)
inline double displacement(const Isometry& g, UhpPoint z) { return dist(z, g.apply(z)); }

/// Klein-model half-plane {k : n.k <= h} with |n| = 1.
struct HalfPlane {
    double nu = 0.0;
    double nv = 0.0;
    double h = 0.0;

    double eval(KleinPoint k) const { return nu * k.u + nv * k.v - h; }
    bool contains(KleinPoint k, double eps = 0.0) const { return eval(k) <= eps; }
};

/// Complete geodesic of H^2, stored as a Klein chord with the half-plane on a
/// chosen side.
struct Geodesic {
    KleinPoint e1;
    KleinPoint e2;
    HalfPlane side;  // closed half-plane selected by the orientation flag

    /// Signed Euclidean offset in the Klein chart; <= 0 on the selected side.
    double signed_offset(KleinPoint k) const { return side.eval(k); }
    bool contains_on_side(UhpPoint z, double eps = 0.0) const { return side.contains(to_klein(z), eps); }
};

/// Geodesic through two distinct Klein points (interior or on the circle);
/// the selected side is the one to the left of e1 -> e2 direction.
Geodesic geodesic_through(KleinPoint p, KleinPoint q);

/// Geodesic with given ideal endpoints; side chosen to contain `inside`.
Geodesic geodesic_between(const BoundaryPoint& a, const BoundaryPoint& b, KleinPoint inside);

/// Perpendicular bisector of [z0, z1]; the selected side contains z0.
Geodesic perp_bisector(UhpPoint z0, UhpPoint z1);

/// Half-plane {k : closer to z0 than to z1} in the Klein chart.
HalfPlane bisector_half_plane(UhpPoint z0, UhpPoint z1);

}  // namespace fgc
