#include "fgc/cover.hpp"

#include <algorithm>
#include <cmath>

namespace fgc {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

double angle_of(const BoundaryPoint& b) { return circle_angle(to_klein(b)); }

}  // namespace

double BoundaryInterval::length() const {
    const double l = wrap(end - start);
    return l == 0.0 ? 0.0 : l;
}

bool BoundaryInterval::covers(const BoundaryInterval& other, double eps) const {
    const double off = wrap(other.start - start);
    const double off2 = off > kTwoPi - eps ? off - kTwoPi : off;
    return off2 >= -eps && off2 + other.length() <= length() + eps;
}

std::vector<BoundaryInterval> nielsen_intervals(const DirichletPolygon& P, const GroupPresentation& group, int depth) {
    std::vector<BoundaryInterval> free;
    const std::size_t n = P.sides.size();
    for (std::size_t i = 0; i < n; ++i)
        if (P.sides[i].kind == SideKind::Free)
            free.push_back({circle_angle(P.vertices[i].klein), circle_angle(P.vertices[(i + 1) % n].klein)});
    if (free.empty()) throw CoverError("polygon has no free sides; the group looks like it is of the first kind");

    const GroupBall words = word_ball(group, depth);
    if (words.certificate().kind == CertificateKind::Uncertified)
        throw CoverError("word ball of depth " + std::to_string(depth) + " hit a resource cap");
    std::vector<BoundaryInterval> arcs;
    for (const auto& e : words.elements())
        for (const auto& f : free)
            arcs.push_back({angle_of(e.element.apply(f.a())), angle_of(e.element.apply(f.b()))});

    // merge overlapping arcs until nothing changes
    constexpr double eps = 1e-12;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < arcs.size() && !changed; ++i)
            for (std::size_t j = 0; j < arcs.size() && !changed; ++j) {
                if (i == j) continue;
                const double off = wrap(arcs[j].start - arcs[i].start);
                if (off > arcs[i].length() + eps && off < kTwoPi - eps) continue;
                const double o = off >= kTwoPi - eps ? 0.0 : off;
                const double len = std::max(arcs[i].length(), o + arcs[j].length());
                if (len >= kTwoPi - 1e-9) throw CoverError("free-side images cover the whole circle");
                arcs[i].end = wrap(arcs[i].start + len);
                arcs.erase(arcs.begin() + static_cast<std::ptrdiff_t>(j));
                changed = true;
            }
    }
    std::sort(arcs.begin(), arcs.end(), [](const BoundaryInterval& a, const BoundaryInterval& b) { return a.start < b.start; });
    return arcs;
}

DirichletPolygon nielsen_clip(const DirichletPolygon& P, const std::vector<BoundaryInterval>& intervals) {
    if (intervals.empty() || P.whole_plane) return P;
    std::vector<detail::SideLabel> labels;
    auto poly = klein::square(2.0);
    for (const auto& s : P.sides) {
        if (s.kind != SideKind::Geodesic && s.kind != SideKind::NielsenCut) continue;
        labels.push_back({s.kind, s.pairing, s.half_plane});
        poly = klein::clip(poly, s.half_plane, static_cast<int>(labels.size() - 1));
    }
    for (const auto& I : intervals) {
        const KleinPoint A = circle_point(I.start), B = circle_point(I.end);
        const KleinPoint m = circle_point(I.start + 0.5 * I.length());
        // normal to the chord, pointing at the arc
        KleinPoint nrm{A.v - B.v, B.u - A.u};
        const double len = nrm.norm();
        nrm = (1.0 / len) * nrm;
        HalfPlane hp{nrm.u, nrm.v, dot(nrm, A)};
        if (hp.eval(m) < 0.0) hp = HalfPlane{-nrm.u, -nrm.v, -dot(nrm, A)};
        labels.push_back({SideKind::NielsenCut, std::nullopt, hp});
        poly = klein::clip(poly, hp, static_cast<int>(labels.size() - 1));
    }
    DirichletPolygon Q = detail::assemble(P.center, P.mode, std::move(poly), labels);
    Q.source_certificate = P.source_certificate;
    Q.source_size = P.source_size;
    Q.removed = P.removed;
    if (Q.whole_plane) return Q;
    detail::pair_sides(Q);
    for (auto& v : Q.vertices) {
        const auto old = std::find_if(P.vertices.begin(), P.vertices.end(),
                                      [&](const PolygonVertex& w) { return klein_distance(w.klein, v.klein) < 1e-9; });
        if (old != P.vertices.end() && old->ideal == v.ideal) {
            v.kind = old->kind;
            v.order = old->order;
            v.witness = old->witness;
            v.unresolved = old->unresolved;
        } else if (v.ideal) {
            v.kind = VertexKind::IdealFree;
            v.unresolved = false;
        }
    }
    return Q;
}

}  // namespace fgc
