#include "fgc/cover.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fgc {

// ---- oracle ------------------------------------------------------------------

CertifiedDistance DistanceOracle::operator()(UhpPoint p, UhpPoint q, bool want_runner_up) const {
    const UhpPoint z0 = domain_.center();
    const double dp = dist(p, z0), dq = dist(q, z0);

    CertifiedDistance out;
    const GroupBall* ball = &domain_.cached_ball();
    for (int attempt = 0;; ++attempt) {
        double best = std::numeric_limits<double>::infinity();
        double runner = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, const Isometry*>> near;
        bool stopped = false;
        for (const auto& e : ball->elements()) {
            const double bound = (want_runner_up ? runner : best + tie_tol_) + dp + dq + 1e-12;
            if (e.displacement > bound) {
                stopped = true;
                break;
            }
            const double d = dist(p, e.element.apply(q));
            if (d < best) {
                // previous near entries beyond the new tie window become runner-up candidates
                best = d;
                std::vector<std::pair<double, const Isometry*>> keep;
                for (const auto& n : near) {
                    if (n.first <= best + tie_tol_) keep.push_back(n);
                    else runner = std::min(runner, n.first);
                }
                near = std::move(keep);
                near.emplace_back(d, &e.element);
            } else if (d <= best + tie_tol_) {
                near.emplace_back(d, &e.element);
            } else {
                runner = std::min(runner, d);
            }
        }
        const double radius = ball->certificate().kind == CertificateKind::Complete ? ball->certificate().radius : 0.0;
        const double needed = (want_runner_up && std::isfinite(runner) ? runner : best + tie_tol_) + dp + dq;
        const bool enough = stopped || radius >= needed;
        if (enough || attempt >= 3) {
            out.value = best;
            std::sort(near.begin(), near.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (const auto& n : near)
                if (n.first <= best + tie_tol_) out.ties.push_back(*n.second);
            out.realizer = out.ties.empty() ? Isometry{} : out.ties.front();
            out.runner_up = runner;
            out.certificate_radius = radius;
            out.certified = enough && ball->certificate().kind == CertificateKind::Complete;
            return out;
        }
        try {
            ball = &domain_.ball(needed + 1e-6);
        } catch (const InsufficientCertificate&) {
            attempt = 3;
        }
    }
}

CertifiedDistance certified_min_distance(UhpPoint p, UhpPoint q, Domain& domain) {
    return DistanceOracle(domain)(p, q);
}

CertifiedDistance certified_min_distance(UhpPoint p, UhpPoint q, const GroupPresentation& group, UhpPoint z0) {
    Domain domain(group, z0);
    return certified_min_distance(p, q, domain);
}

// ---- sampling ----------------------------------------------------------------

namespace {

struct Box {
    double u0 = -1, u1 = 1, v0 = -1, v1 = 1;
};

Box bounding_box(const DirichletPolygon& P) {
    Box b;
    if (P.whole_plane) return b;
    const auto region = P.klein_region();
    if (region.empty()) return b;
    b.u0 = b.v0 = 1.0;
    b.u1 = b.v1 = -1.0;
    for (const auto& k : region.vertices) {
        b.u0 = std::min(b.u0, k.u);
        b.u1 = std::max(b.u1, k.u);
        b.v0 = std::min(b.v0, k.v);
        b.v1 = std::max(b.v1, k.v);
    }
    b.u0 = std::max(b.u0, -1.0);
    b.v0 = std::max(b.v0, -1.0);
    b.u1 = std::min(b.u1, 1.0);
    b.v1 = std::min(b.v1, 1.0);
    return b;
}

std::optional<UhpPoint> accept(const DirichletPolygon& P, KleinPoint k, double cap, double eps) {
    if (k.norm2() >= 1.0 - 1e-12) return std::nullopt;
    const UhpPoint z = from_klein(k);
    if (dist(z, P.center) > cap) return std::nullopt;
    if (!P.contains(z, eps)) return std::nullopt;
    return z;
}

// horocyclic side i as x-range at height t in the cusp frame
struct HoroArc {
    const Horoball* h;
    double x0, x1;
};

HoroArc horo_arc(const DirichletPolygon& P, std::size_t i) {
    const Horoball& h = P.removed.at(static_cast<std::size_t>(P.sides[i].cusp));
    const Isometry ci = h.conjugator.inverse();
    const std::size_t n = P.vertices.size();
    const double x0 = ci.apply(P.vertices[i].point()).x;
    const double x1 = ci.apply(P.vertices[(i + 1) % n].point()).x;
    return {&h, x0, x1};
}

std::vector<UhpPoint> boundary_points(const DirichletPolygon& P, int count, double cap) {
    std::vector<UhpPoint> out;
    if (P.whole_plane || count <= 0) return out;
    const std::size_t n = P.sides.size();
    std::vector<double> lengths(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (P.sides[i].kind == SideKind::Free) continue;
        lengths[i] = klein_distance(P.vertices[i].klein, P.vertices[(i + 1) % n].klein);
        total += lengths[i];
    }
    if (total <= 0.0) return out;
    for (std::size_t i = 0; i < n; ++i) {
        if (lengths[i] <= 0.0) continue;
        const int m = std::max(1, static_cast<int>(std::lround(count * lengths[i] / total)));
        for (int s = 0; s < m; ++s) {
            const double t = (s + 0.5) / m;
            if (P.sides[i].kind == SideKind::Horocyclic) {
                const HoroArc arc = horo_arc(P, i);
                const UhpPoint w{arc.x0 + t * (arc.x1 - arc.x0), arc.h->height};
                const UhpPoint z = arc.h->conjugator.apply(w);
                if (dist(z, P.center) <= cap) out.push_back(z);
                continue;
            }
            const KleinPoint a = P.vertices[i].klein, b = P.vertices[(i + 1) % n].klein;
            if (auto z = accept(P, a + t * (b - a), cap, 1e-9)) out.push_back(*z);
        }
    }
    return out;
}

}  // namespace

std::vector<UhpPoint> sample_domain(const DirichletPolygon& P, const SamplingSpec& spec) {
    std::vector<UhpPoint> out;
    const Box b = bounding_box(P);
    for (int i = 0; i < spec.grid; ++i)
        for (int j = 0; j < spec.grid; ++j) {
            const KleinPoint k{b.u0 + (i + 0.5) / spec.grid * (b.u1 - b.u0), b.v0 + (j + 0.5) / spec.grid * (b.v1 - b.v0)};
            if (auto z = accept(P, k, spec.radius_cap, 0.0)) out.push_back(*z);
        }
    const auto bnd = boundary_points(P, spec.boundary, spec.radius_cap);
    out.insert(out.end(), bnd.begin(), bnd.end());
    if (spec.grid > 0 || spec.boundary > 0)
        for (const auto& v : P.vertices)
            if (!v.ideal && dist(v.point(), P.center) <= spec.radius_cap) out.push_back(v.point());
    out.insert(out.end(), spec.points.begin(), spec.points.end());
    return out;
}

std::vector<UhpPoint> special_points(const DirichletPolygon& P, double radius_cap) {
    std::vector<UhpPoint> out;
    if (P.whole_plane) return {P.center};
    for (const auto& v : P.vertices)
        if (!v.ideal && dist(v.point(), P.center) <= radius_cap) out.push_back(v.point());
    const std::size_t n = P.sides.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = P.sides[i];
        if (s.kind == SideKind::Geodesic && s.pairing) {
            const UhpPoint gz = s.pairing->apply(P.center);
            const UhpPoint m = geodesic_step(P.center, gz, 0.5 * dist(P.center, gz));
            if (dist(m, P.center) > radius_cap || !P.contains(m, 1e-9)) continue;
            // on this side's segment, not just its line
            const KleinPoint a = P.vertices[i].klein, b = P.vertices[(i + 1) % n].klein, k = to_klein(m);
            if (std::abs(klein_distance(a, k) + klein_distance(k, b) - klein_distance(a, b)) > 1e-9) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](UhpPoint z) { return dist(z, m) < 1e-12; });
            if (!dup) out.push_back(m);
        } else if (s.kind == SideKind::Horocyclic) {
            const HoroArc arc = horo_arc(P, i);
            const UhpPoint m = arc.h->conjugator.apply(UhpPoint{0.5 * (arc.x0 + arc.x1), arc.h->height});
            if (dist(m, P.center) <= radius_cap) out.push_back(m);
        }
    }
    return out;
}

PairSuite make_pair_suite(const DirichletPolygon& P, std::size_t count, std::uint64_t seed, double radius_cap) {
    PairSuite suite;
    suite.seed = seed;
    suite.radius_cap = radius_cap;
    std::mt19937_64 rng(seed);

    const auto special = special_points(P, radius_cap);
    for (const auto& a : special)
        for (const auto& b : special)
            if (suite.pairs.size() < count) suite.pairs.emplace_back(a, b);

    SamplingSpec g;
    g.grid = 24;
    g.boundary = 0;
    g.radius_cap = radius_cap;
    const auto grid = sample_domain(P, g);
    const auto bnd = boundary_points(P, 128, radius_cap);

    const Box box = bounding_box(P);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto random_point = [&]() -> UhpPoint {
        for (int tries = 0; tries < 100000; ++tries) {
            const KleinPoint k{box.u0 + U(rng) * (box.u1 - box.u0), box.v0 + U(rng) * (box.v1 - box.v0)};
            if (auto z = accept(P, k, radius_cap, 0.0)) return *z;
        }
        return P.center;
    };
    auto pick = [&](const std::vector<UhpPoint>& v) {
        return v[static_cast<std::size_t>(U(rng) * static_cast<double>(v.size())) % v.size()];
    };

    // clusters around the finite vertices, where the rotation-type realizers live
    std::vector<std::vector<UhpPoint>> clusters;
    const std::size_t nv = P.vertices.size();
    for (std::size_t i = 0; i < nv && !P.whole_plane; ++i) {
        const auto& v = P.vertices[i];
        if (v.ideal || dist(v.point(), P.center) > radius_cap) continue;
        const KleinPoint prev = P.vertices[(i + nv - 1) % nv].klein, next = P.vertices[(i + 1) % nv].klein;
        std::vector<UhpPoint> cl;
        for (double eps : {0.02, 0.1, 0.3})
            for (int k = 0; k <= 4; ++k) {
                // aim between the two neighbouring vertices, pulled slightly inside
                KleinPoint aim = prev + (k / 4.0) * (next - prev);
                aim = aim + 0.05 * (to_klein(P.center) - aim);
                if (aim.norm2() >= 1.0 - 1e-9) continue;
                const UhpPoint z = geodesic_step(v.point(), from_klein(aim), eps);
                if (P.contains(z, 1e-9)) cl.push_back(z);
            }
        clusters.push_back(std::move(cl));
    }
    std::vector<std::pair<UhpPoint, UhpPoint>> near_vertex;
    for (const auto& a : clusters)
        for (const auto& b : clusters)
            for (const auto& x : a)
                for (const auto& y : b) near_vertex.emplace_back(x, y);
    const std::size_t budget = count > suite.pairs.size() ? (count - suite.pairs.size()) / 4 : 0;
    if (near_vertex.size() > budget) {
        std::shuffle(near_vertex.begin(), near_vertex.end(), rng);
        near_vertex.resize(budget);
    }
    suite.pairs.insert(suite.pairs.end(), near_vertex.begin(), near_vertex.end());

    const std::size_t rest = count > suite.pairs.size() ? count - suite.pairs.size() : 0;
    const std::size_t n_grid = grid.empty() ? 0 : rest / 3;
    const std::size_t n_bnd = bnd.empty() ? 0 : rest / 3;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const UhpPoint a = pick(grid), b = pick(grid);
        suite.pairs.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < n_bnd; ++i) {
        const UhpPoint a = pick(bnd), b = random_point();
        if (i % 2 == 0) suite.pairs.emplace_back(a, b);
        else suite.pairs.emplace_back(b, a);
    }
    while (suite.pairs.size() < count) {
        const UhpPoint a = random_point(), b = random_point();
        suite.pairs.emplace_back(a, b);
    }
    return suite;
}

}  // namespace fgc
