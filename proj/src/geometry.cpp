#include "fgc/geometry.hpp"

#include <algorithm>

namespace fgc {

HyperboloidPoint to_hyperboloid(UhpPoint z) {
    const double r2 = z.x * z.x + z.y * z.y;
    return {(r2 + 1.0) / (2.0 * z.y), z.x / z.y, (r2 - 1.0) / (2.0 * z.y)};
}

KleinPoint to_klein(UhpPoint z) {
    const double r2 = z.x * z.x + z.y * z.y;
    return {2.0 * z.x / (r2 + 1.0), (r2 - 1.0) / (r2 + 1.0)};
}

UhpPoint from_klein(KleinPoint k) {
    const double r2 = k.norm2();
    if (!(r2 < 1.0)) throw GeometryError("Klein point must lie in the open unit disk");
    // 1 - v = (1 - r^2) / (1 + v) avoids cancellation near the top of the disk.
    const double one_minus_v = k.v > 0.0 ? (1.0 - r2 + k.u * k.u) / (1.0 + k.v) : 1.0 - k.v;
    return UhpPoint(k.u / one_minus_v, std::sqrt(1.0 - r2) / one_minus_v);
}

KleinPoint to_klein(const BoundaryPoint& b) {
    if (b.is_infinity()) return {0.0, 1.0};
    const double x = b.value();
    const double n = x * x + 1.0;
    return {2.0 * x / n, (x * x - 1.0) / n};
}

BoundaryPoint boundary_from_klein(KleinPoint k) {
    const double n = k.norm();
    if (n == 0.0) throw GeometryError("origin is not a boundary point");
    const KleinPoint c{k.u / n, k.v / n};
    if (klein_distance(c, {0.0, 1.0}) < 1e-13) return BoundaryPoint::infinity();
    // For c on the circle, 1 - v = u^2 / (1 + v).
    const double one_minus_v = c.v > 0.0 ? c.u * c.u / (1.0 + c.v) : 1.0 - c.v;
    return BoundaryPoint::real(c.u / one_minus_v);
}

double dist(UhpPoint a, UhpPoint b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return 2.0 * std::asinh(std::hypot(dx, dy) / (2.0 * std::sqrt(a.y * b.y)));
}

double circle_angle(KleinPoint k) {
    double a = std::atan2(k.v, k.u);
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a -= 2.0 * kPi;
    return a;
}

KleinPoint circle_point(double angle) { return {std::cos(angle), std::sin(angle)}; }

UhpPoint geodesic_step(UhpPoint from, UhpPoint to, double t) {
    const double d = dist(from, to);
    if (d == 0.0) return from;
    const HyperboloidPoint p = to_hyperboloid(from);
    const HyperboloidPoint q = to_hyperboloid(to);
    const double ch = std::cosh(d), sh = std::sinh(d);
    const HyperboloidPoint tangent{(q.t - ch * p.t) / sh, (q.x - ch * p.x) / sh, (q.y - ch * p.y) / sh};
    const double c = std::cosh(t), s = std::sinh(t);
    const HyperboloidPoint r{c * p.t + s * tangent.t, c * p.x + s * tangent.x, c * p.y + s * tangent.y};
    // t - y = 1 / Im z on the hyperboloid chart used by to_hyperboloid.
    const double y = 1.0 / (r.t - r.y);
    return UhpPoint(r.x * y, y);
}

}  // namespace fgc
