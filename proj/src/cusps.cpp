#include "fgc/cover.hpp"

#include <algorithm>
#include <cmath>

namespace fgc {

namespace {

Isometry cusp_conjugator(const BoundaryPoint& s) {
    if (s.is_infinity()) return Isometry{};
    return Isometry(s.value(), -1.0, 1.0, 0.0);  // sends ∞ to s
}

double height_in_frame(const Isometry& ci, const PolygonVertex& v) {
    if (v.ideal) return 0.0;
    return ci.apply(v.point()).y;
}

bool shimizu_ok(const Horoball& h, double t, const GroupBall& ball) {
    const Isometry ci = h.conjugator.inverse();
    for (const auto& e : ball.elements()) {
        const Isometry g = ci * e.element * h.conjugator;
        const double c = std::abs(g.c());
        if (c <= 1e-9 * std::max(1.0, g.max_abs_entry())) continue;
        if (c * t < 1.0 - 1e-12) return false;
    }
    return true;
}

// other vertices on or below the horocycle, and the non-adjacent sides too
bool clear_of_polygon(const DirichletPolygon& P, std::size_t vi, const Horoball& h, double t) {
    const Isometry ci = h.conjugator.inverse();
    const std::size_t n = P.vertices.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (j == vi) continue;
        if (height_in_frame(ci, P.vertices[j]) > t + 1e-9) return false;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (j == vi || (j + 1) % n == vi) continue;
        const KleinPoint a = P.vertices[j].klein, b = P.vertices[(j + 1) % n].klein;
        for (int s = 1; s < 64; ++s) {
            const KleinPoint k = a + (s / 64.0) * (b - a);
            if (k.norm2() >= 1.0 - 1e-12) continue;
            if (ci.apply(from_klein(k)).y > t + 1e-9) return false;
        }
    }
    return true;
}

bool disjoint(const Horoball& a, const Horoball& b) {
    const Isometry m = a.conjugator.inverse() * b.conjugator;
    const double c = m.c();
    return c * c * a.height * b.height >= 1.0 - 1e-12;
}

}  // namespace

bool horoball_precisely_invariant(const Horoball& h, const GroupBall& ball) { return shimizu_ok(h, h.height, ball); }

std::vector<Horoball> select_horoballs(const DirichletPolygon& P, const GroupBall& ball) {
    std::vector<Horoball> out;
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < P.vertices.size(); ++i) {
        const auto& v = P.vertices[i];
        if (v.kind != VertexKind::Cusp || !v.witness) continue;
        Horoball h;
        h.cusp = v.boundary();
        h.conjugator = cusp_conjugator(h.cusp);
        h.stabilizer = *v.witness;
        const Isometry p = h.conjugator.inverse() * h.stabilizer * h.conjugator;
        if (std::abs(p.c()) > 1e-9 * std::max(1.0, p.max_abs_entry()))
            throw CoverError("cusp witness does not fix its vertex");
        h.width = std::abs(p.b() / p.d());
        bool found = false;
        for (int k = 0; k <= 40 && !found; ++k) {
            const double t = h.width * std::ldexp(1.0, k);
            if (shimizu_ok(h, t, ball) && clear_of_polygon(P, i, h, t)) {
                h.height = t;
                found = true;
            }
        }
        if (!found) throw CoverError("no horoball height in the schedule passes at cusp vertex " + std::to_string(i));
        out.push_back(h);
        at.push_back(i);
    }
    // shrink overlapping pairs
    for (int round = 0; round < 64; ++round) {
        bool changed = false;
        for (std::size_t a = 0; a < out.size(); ++a)
            for (std::size_t b = a + 1; b < out.size(); ++b)
                if (!disjoint(out[a], out[b])) {
                    out[a].height *= 2.0;
                    out[b].height *= 2.0;
                    changed = true;
                }
        if (!changed) break;
    }
    return out;
}

DirichletPolygon truncate(const DirichletPolygon& P, const std::vector<Horoball>& horoballs) {
    if (horoballs.empty()) return P;
    DirichletPolygon Q = P;
    Q.vertices.clear();
    Q.sides.clear();
    Q.removed = P.removed;
    const std::size_t base = Q.removed.size();
    Q.removed.insert(Q.removed.end(), horoballs.begin(), horoballs.end());

    const std::size_t n = P.vertices.size();
    std::vector<int> new_index(n, -1);  // old side -> new side
    for (std::size_t i = 0; i < n; ++i) {
        const PolygonVertex& v = P.vertices[i];
        int hit = -1;
        if (v.ideal)
            for (std::size_t k = 0; k < horoballs.size(); ++k)
                if (klein_distance(to_klein(horoballs[k].cusp), v.klein) < 1e-7) hit = static_cast<int>(k);
        if (hit < 0) {
            Q.vertices.push_back(v);
        } else {
            const Horoball& h = horoballs[static_cast<std::size_t>(hit)];
            const Isometry ci = h.conjugator.inverse();
            auto foot = [&](const PolygonVertex& w) {
                return w.ideal ? ci.apply(w.boundary()).value() : ci.apply(w.point()).x;
            };
            const double xa = foot(P.vertices[(i + n - 1) % n]);
            const double xb = foot(P.vertices[(i + 1) % n]);
            PolygonVertex a, b;
            a.klein = to_klein(h.conjugator.apply(UhpPoint{xa, h.height}));
            b.klein = to_klein(h.conjugator.apply(UhpPoint{xb, h.height}));
            a.angle = b.angle = kPi / 2;
            Q.vertices.push_back(a);
            PolygonSide arc;
            arc.kind = SideKind::Horocyclic;
            arc.length = std::abs(xb - xa) / h.height;
            arc.cusp = static_cast<int>(base + static_cast<std::size_t>(hit));
            Q.sides.push_back(arc);
            Q.vertices.push_back(b);
        }
        new_index[i] = static_cast<int>(Q.sides.size());
        Q.sides.push_back(P.sides[i]);
    }
    for (auto& s : Q.sides)
        if (s.kind == SideKind::Geodesic && s.partner >= 0) s.partner = new_index[static_cast<std::size_t>(s.partner)];
    return Q;
}

}  // namespace fgc
