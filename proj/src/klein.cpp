#include "fgc/klein.hpp"

#include <cmath>

namespace fgc::klein {

ConvexPolygon square(double half) {
    return {{{-half, -half}, {half, -half}, {half, half}, {-half, half}},
            {kBoxLabel, kBoxLabel, kBoxLabel, kBoxLabel}};
}

ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp, int label, double eps) {
    ConvexPolygon out;
    const std::size_t n = poly.size();
    if (n == 0) return out;
    out.vertices.reserve(n + 1);
    out.labels.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint p = poly.vertices[i];
        const KleinPoint q = poly.vertices[(i + 1) % n];
        const double sp = hp.eval(p);
        const double sq = hp.eval(q);
        const bool p_in = sp <= eps;
        const bool q_in = sq <= eps;
        if (p_in) {
            out.vertices.push_back(p);
            if (q_in) {
                out.labels.push_back(poly.labels[i]);
            } else {
                // leaving: the edge from the crossing point runs along the clip line
                const double t = sp / (sp - sq);
                const KleinPoint x = p + t * (q - p);
                if (klein_distance(x, p) > 0.0) {
                    out.labels.push_back(poly.labels[i]);
                    out.vertices.push_back(x);
                }
                out.labels.push_back(label);
            }
        } else if (q_in) {
            const double t = sp / (sp - sq);
            out.vertices.push_back(p + t * (q - p));
            out.labels.push_back(poly.labels[i]);
        }
    }
    // degenerate remains (segment or point) are kept so callers can test
    // closed-set intersections
    return out;
}

void merge_short_edges(ConvexPolygon& poly, double tol) {
    bool changed = true;
    while (changed && poly.size() > 1) {
        changed = false;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            if (klein_distance(poly.vertices[i], poly.vertices[j]) < tol) {
                // collapse edge i: vertex j disappears, vertex i takes over edge j
                poly.labels[i] = poly.labels[j];
                poly.vertices.erase(poly.vertices.begin() + static_cast<std::ptrdiff_t>(j));
                poly.labels.erase(poly.labels.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
                break;
            }
        }
    }
}

std::optional<std::pair<double, double>> segment_in_disk(KleinPoint p, KleinPoint q) {
    const KleinPoint d = q - p;
    const double a = d.norm2();
    const double b = 2.0 * dot(p, d);
    const double c = p.norm2() - 1.0;
    if (a == 0.0) {
        if (c <= 0.0) return std::pair{0.0, 1.0};
        return std::nullopt;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    // numerically stable roots
    const double qq = -0.5 * (b + std::copysign(s, b));
    double r1 = qq / a;
    double r2 = qq != 0.0 ? c / qq : r1;
    if (r1 > r2) std::swap(r1, r2);
    const double t0 = std::max(0.0, r1);
    const double t1 = std::min(1.0, r2);
    if (t0 > t1) return std::nullopt;
    return std::pair{t0, t1};
}

double signed_area(const ConvexPolygon& poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
    return 0.5 * s;
}

}  // namespace fgc::klein
