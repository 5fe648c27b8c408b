#include "fgc/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fgc {

namespace {

double entry_scale(const std::array<double, 4>& m) {
    double s = 1.0;
    for (double x : m) s = std::max(s, std::abs(x));
    return s;
}

bool near_zero(double x, double scale) { return std::abs(x) <= 1e-14 * scale; }

}  // namespace

Isometry::Isometry(double a, double b, double c, double d) : m_{a, b, c, d} {
    for (double x : m_)
        if (!std::isfinite(x)) throw GeometryError("isometry entries must be finite");
    const double det = a * d - b * c;
    if (!(det > 0.0)) throw GeometryError("isometry matrix must have positive determinant");
    if (det != 1.0) {
        const double s = 1.0 / std::sqrt(det);
        for (double& x : m_) x *= s;
    }
    canonicalize_sign();
}

Isometry Isometry::from_entries(double a, double b, double c, double d) {
    for (double x : {a, b, c, d})
        if (!std::isfinite(x)) throw GeometryError("isometry entries must be finite");
    if (std::abs(a * d - b * c - 1.0) > 1e-9) throw GeometryError("stored isometry does not have determinant one");
    return Isometry(a, b, c, d, Raw{});
}

Isometry::Isometry(double a, double b, double c, double d, Raw) : m_{a, b, c, d} { canonicalize_sign(); }

void Isometry::canonicalize_sign() {
    const double scale = entry_scale(m_);
    for (double& x : m_)
        if (x == 0.0) x = 0.0;  // drop negative zero
    for (double x : m_) {
        if (x == 0.0 || (near_zero(x, scale) && !is_integral())) continue;
        if (x < 0.0)
            for (double& y : m_) y = y == 0.0 ? 0.0 : -y;
        return;
    }
}

double Isometry::max_abs_entry() const { return entry_scale(m_); }

bool Isometry::is_integral() const {
    return std::all_of(m_.begin(), m_.end(), [](double x) { return x == std::nearbyint(x); });
}

bool Isometry::is_identity(Arithmetic mode) const { return elements_equal(*this, Isometry{}, mode); }

UhpPoint Isometry::apply(UhpPoint z) const {
    const auto [a, b, c, d] = m_;
    // (az+b)/(cz+d) with z = x+iy; Im = y / |cz+d|^2 since det = 1.
    const double re_den = c * z.x + d;
    const double im_den = c * z.y;
    const double n = re_den * re_den + im_den * im_den;
    const double re_num = a * z.x + b;
    const double im_num = a * z.y;
    const double x = (re_num * re_den + im_num * im_den) / n;
    const double y = z.y / n;
    return UhpPoint(x, y);
}

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
    const auto [a, b, c, d] = m_;
    if (p.is_infinity()) {
        if (c == 0.0) return BoundaryPoint::infinity();
        return BoundaryPoint::real(a / c);
    }
    const double den = c * p.value() + d;
    if (den == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::real((a * p.value() + b) / den);
}

KleinPoint Isometry::apply_klein(KleinPoint k) const {
    if (k.norm2() < 1.0 - 1e-15) return to_klein(apply(from_klein(k)));
    return to_klein(apply(boundary_from_klein(k)));
}

Isometry operator*(const Isometry& g, const Isometry& h) {
    const auto [a1, b1, c1, d1] = g.m_;
    const auto [a2, b2, c2, d2] = h.m_;
    const double a = a1 * a2 + b1 * c2;
    const double b = a1 * b2 + b1 * d2;
    const double c = c1 * a2 + d1 * c2;
    const double d = c1 * b2 + d1 * d2;
    const double det = a * d - b * c;
    if (det == 1.0) return Isometry(a, b, c, d, Isometry::Raw{});
    const double s = 1.0 / std::sqrt(det);
    return Isometry(a * s, b * s, c * s, d * s, Isometry::Raw{});
}

std::ostream& operator<<(std::ostream& os, const Isometry& g) {
    return os << '(' << g.a() << ',' << g.b() << ';' << g.c() << ',' << g.d() << ')';
}

std::string to_string(const Isometry& g) {
    std::ostringstream os;
    os << std::setprecision(10) << g;
    return os.str();
}

bool elements_equal(const Isometry& g, const Isometry& h, Arithmetic mode) {
    if (mode == Arithmetic::ExactInteger) {
        if (g == h) return true;
        const auto& x = g.entries();
        const auto& y = h.entries();
        return x[0] == -y[0] && x[1] == -y[1] && x[2] == -y[2] && x[3] == -y[3];
    }
    const auto& x = g.entries();
    const auto& y = h.entries();
    const double eps = tol::kElementFloat * std::max(g.max_abs_entry(), h.max_abs_entry());
    double same = 0.0, flipped = 0.0;
    for (int i = 0; i < 4; ++i) {
        same = std::max(same, std::abs(x[i] - y[i]));
        flipped = std::max(flipped, std::abs(x[i] + y[i]));
    }
    return std::min(same, flipped) <= eps;
}

const char* to_string(IsometryKind kind) {
    switch (kind) {
        case IsometryKind::Identity: return "identity";
        case IsometryKind::Elliptic: return "elliptic";
        case IsometryKind::Parabolic: return "parabolic";
        case IsometryKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

IsometryKind classify(const Isometry& g, Arithmetic mode, double parabolic_tolerance) {
    if (g.is_identity(mode)) return IsometryKind::Identity;
    const double t = std::abs(g.trace());
    if (mode == Arithmetic::ExactInteger) {
        if (t < 2.0) return IsometryKind::Elliptic;
        if (t == 2.0) return IsometryKind::Parabolic;
        return IsometryKind::Hyperbolic;
    }
    if (std::abs(t - 2.0) <= parabolic_tolerance) return IsometryKind::Parabolic;
    return t < 2.0 ? IsometryKind::Elliptic : IsometryKind::Hyperbolic;
}

std::vector<FixedPoint> fixed_points(const Isometry& g, Arithmetic mode, double parabolic_tolerance) {
    const auto [a, b, c, d] = g.entries();
    const double scale = g.max_abs_entry();
    const bool c_zero = near_zero(c, scale);
    switch (classify(g, mode, parabolic_tolerance)) {
        case IsometryKind::Identity:
            throw GeometryError("identity has no isolated fixed points");
        case IsometryKind::Elliptic: {
            const double t = g.trace();
            const double im = std::sqrt(std::max(0.0, 4.0 - t * t)) / (2.0 * std::abs(c));
            return {UhpPoint((a - d) / (2.0 * c), im)};
        }
        case IsometryKind::Parabolic:
            if (c_zero) return {BoundaryPoint::infinity()};
            return {BoundaryPoint::real((a - d) / (2.0 * c))};
        case IsometryKind::Hyperbolic: {
            if (c_zero) {
                const BoundaryPoint finite = BoundaryPoint::real(b / (d - a));
                // z -> a^2 z + ab: infinity attracts when |a| > 1
                if (std::abs(a) > 1.0) return {finite, BoundaryPoint::infinity()};
                return {BoundaryPoint::infinity(), finite};
            }
            const double t = g.trace();
            const double root = std::sqrt(t * t - 4.0);
            double x1 = (a - d - root) / (2.0 * c);
            double x2 = (a - d + root) / (2.0 * c);
            // derivative at a fixed point x is (cx+d)^-2; repelling when |cx+d| < 1
            if (std::abs(c * x1 + d) > std::abs(c * x2 + d)) std::swap(x1, x2);
            return {BoundaryPoint::real(x1), BoundaryPoint::real(x2)};
        }
    }
    return {};
}

int elliptic_order(const Isometry& g, int max_order) {
    if (classify(g) != IsometryKind::Elliptic) return 0;
    Isometry p = g;
    for (int m = 2; m <= max_order; ++m) {
        p = p * g;
        if (p.is_identity()) return m;
    }
    return 0;
}

namespace {

HalfPlane normalized(double nu, double nv, double h) {
    const double n = std::hypot(nu, nv);
    if (n == 0.0) throw GeometryError("degenerate half-plane");
    return {nu / n, nv / n, h / n};
}

Geodesic geodesic_from_half_plane(const HalfPlane& hp) {
    if (!(std::abs(hp.h) < 1.0)) throw GeometryError("half-plane boundary misses the disk");
    const KleinPoint foot{hp.h * hp.nu, hp.h * hp.nv};
    const double half = std::sqrt(std::max(0.0, 1.0 - hp.h * hp.h));
    const KleinPoint dir{-hp.nv, hp.nu};
    return {foot - half * dir, foot + half * dir, hp};
}

}  // namespace

Geodesic geodesic_through(KleinPoint p, KleinPoint q) {
    const KleinPoint dvec = q - p;
    if (dvec.norm() == 0.0) throw GeometryError("geodesic needs two distinct points");
    // left side of p -> q is {k : cross(d, k - p) >= 0}, i.e. (d.v, -d.u).k <= (d.v, -d.u).p
    return geodesic_from_half_plane(normalized(dvec.v, -dvec.u, dvec.v * p.u - dvec.u * p.v));
}

Geodesic geodesic_between(const BoundaryPoint& a, const BoundaryPoint& b, KleinPoint inside) {
    Geodesic g = geodesic_through(to_klein(a), to_klein(b));
    if (g.side.eval(inside) > 0.0) g = geodesic_through(to_klein(b), to_klein(a));
    return g;
}

HalfPlane bisector_half_plane(UhpPoint z0, UhpPoint z1) {
    const HyperboloidPoint p0 = to_hyperboloid(z0);
    const HyperboloidPoint p1 = to_hyperboloid(z1);
    // cosh d(k, P) is proportional to P.t - P.x u - P.y v
    return normalized(p1.x - p0.x, p1.y - p0.y, p1.t - p0.t);
}

Geodesic perp_bisector(UhpPoint z0, UhpPoint z1) {
    if (dist(z0, z1) == 0.0) throw GeometryError("bisector of coincident points");
    return geodesic_from_half_plane(bisector_half_plane(z0, z1));
}

}  // namespace fgc
