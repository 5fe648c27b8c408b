#include "fgc/surface.hpp"

#include <algorithm>
#include <cmath>

namespace fgc {

SurfacePoint surface_point(const DirichletPolygon& P, UhpPoint z, double eps) {
    if (!P.contains(z, eps))
        throw SurfaceError("point " + std::to_string(z.x) + " + " + std::to_string(z.y) + "i is not in the domain");
    return {z};
}

SurfacePoint reduce_to_domain(const DirichletPolygon& P, UhpPoint z, int max_steps) {
    for (int step = 0; step < max_steps; ++step) {
        const KleinPoint k = to_klein(z);
        const PolygonSide* worst = nullptr;
        double most = 1e-12;
        for (const auto& s : P.sides) {
            if (s.kind != SideKind::Geodesic || !s.pairing) continue;
            const double e = s.half_plane.eval(k);
            if (e > most) {
                most = e;
                worst = &s;
            }
        }
        if (!worst) return {z};
        z = worst->pairing->inverse().apply(z);
    }
    throw SurfaceError("orbit reduction did not reach the domain");
}

namespace {

void require_verified(const CoverCandidate& C, bool force) {
    if (force) return;
    if (!C.verification || !C.verification->verified)
        throw UnverifiedCoverError("cover has no passing verification (use force to override)");
}

double min_over(const std::vector<Isometry>& els, UhpPoint p, UhpPoint q) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : els) m = std::min(m, dist(p, g.apply(q)));
    return m;
}

}  // namespace

double surface_distance(const SurfacePoint& p, const SurfacePoint& q, const CoverCandidate& C, bool force) {
    require_verified(C, force);
    return min_over(C.isometries(), p.rep, q.rep);
}

double distinct_distance_bound(std::size_t N, std::size_t K) {
    const double n = static_cast<double>(N), k = static_cast<double>(K);
    const double l = std::log(k * n);
    if (!(l > 0.0)) return 0.0;
    return n / (k * k * k * l);
}

DistinctDistanceReport distinct_distances(const std::vector<SurfacePoint>& points, const CoverCandidate& C,
                                          double tolerance, bool force, std::size_t K) {
    require_verified(C, force);
    if (!(tolerance > 0.0)) throw SurfaceError("tolerance must be positive");
    DistinctDistanceReport r;
    r.n = points.size();
    r.tolerance = tolerance;
    r.K = K ? K : C.size();
    r.bound = distinct_distance_bound(r.n, r.K);
    const auto els = C.isometries();
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) r.values.push_back(min_over(els, points[i].rep, points[j].rep));
    std::sort(r.values.begin(), r.values.end());
    // single linkage: a new cluster starts at every gap wider than tolerance
    for (std::size_t i = 0; i < r.values.size(); ++i)
        if (i == 0 || r.values[i] - r.values[i - 1] > tolerance) ++r.count;
    return r;
}

}  // namespace fgc
