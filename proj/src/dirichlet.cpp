#include "fgc/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fgc {

namespace {

constexpr double kIdealSnap = 1e-9;  // |k| within this of 1 counts as on the circle
constexpr double kSameIdeal = 1e-7;
constexpr double kMatch = 1e-6;  // Klein tolerance for matching paired sides
constexpr double kFixed = 1e-7;  // hyperbolic tolerance for fixed points

KleinPoint snap(KleinPoint k, bool& ideal) {
    const double r = k.norm();
    ideal = r >= 1.0 - kIdealSnap;
    if (ideal) return (1.0 / r) * k;
    return k;
}

KleinPoint image(const Isometry& g, const PolygonVertex& v) {
    if (v.ideal) return to_klein(g.apply(v.boundary()));
    return to_klein(g.apply(v.point()));
}

KleinPoint fixed_klein(const FixedPoint& f) {
    if (const auto* z = std::get_if<UhpPoint>(&f)) return to_klein(*z);
    return to_klein(std::get<BoundaryPoint>(f));
}

// unit tangent at v of the geodesic towards w, in upper half-plane coordinates
std::pair<double, double> tangent(UhpPoint v, UhpPoint w) {
    const double scale = std::max({1.0, std::abs(v.x), std::abs(w.x)});
    double tx, ty;
    if (std::abs(w.x - v.x) <= 1e-14 * scale) {
        tx = 0.0;
        ty = w.y > v.y ? 1.0 : -1.0;
    } else {
        const double c = ((w.x * w.x + w.y * w.y) - (v.x * v.x + v.y * v.y)) / (2.0 * (w.x - v.x));
        tx = -v.y;
        ty = v.x - c;
        if (tx * (w.x - v.x) + ty * (w.y - v.y) < 0.0) {
            tx = -tx;
            ty = -ty;
        }
    }
    const double n = std::hypot(tx, ty);
    return {tx / n, ty / n};
}

double min_norm(const klein::ConvexPolygon& q) {
    const std::size_t n = q.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    if (n >= 3) {
        bool inside = true;
        for (std::size_t i = 0; i < n && inside; ++i)
            if (cross(q.vertices[(i + 1) % n] - q.vertices[i], KleinPoint{} - q.vertices[i]) < 0.0) inside = false;
        if (inside) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint a = q.vertices[i], b = q.vertices[(i + 1) % n];
        const KleinPoint d = b - a;
        double t = d.norm2() > 0.0 ? -dot(a, d) / d.norm2() : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, (a + t * d).norm());
    }
    return best;
}

}  // namespace

const char* to_string(SideKind kind) {
    switch (kind) {
        case SideKind::Geodesic: return "geodesic";
        case SideKind::Free: return "free";
        case SideKind::Horocyclic: return "horocyclic";
        case SideKind::NielsenCut: return "nielsen-cut";
    }
    return "?";
}

const char* to_string(VertexKind kind) {
    switch (kind) {
        case VertexKind::Ordinary: return "ordinary";
        case VertexKind::Elliptic: return "elliptic";
        case VertexKind::Cusp: return "cusp";
        case VertexKind::IdealFree: return "ideal-free";
    }
    return "?";
}

bool Horoball::contains(UhpPoint z, double eps) const {
    return conjugator.inverse().apply(z).y > height - eps;
}

bool DirichletPolygon::has_free_sides() const {
    return std::any_of(sides.begin(), sides.end(), [](const PolygonSide& s) { return s.kind == SideKind::Free; });
}

bool DirichletPolygon::has_ideal_vertices() const {
    return std::any_of(vertices.begin(), vertices.end(), [](const PolygonVertex& v) { return v.ideal; });
}

std::vector<Isometry> DirichletPolygon::side_pairings() const {
    std::vector<Isometry> out;
    for (const auto& s : sides) {
        if (s.kind != SideKind::Geodesic || !s.pairing) continue;
        const bool seen = std::any_of(out.begin(), out.end(),
                                      [&](const Isometry& g) { return elements_equal(g, *s.pairing, mode); });
        if (!seen) out.push_back(*s.pairing);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool DirichletPolygon::contains(UhpPoint z, double eps) const {
    if (whole_plane) return true;
    const KleinPoint k = to_klein(z);
    for (const auto& s : sides)
        if ((s.kind == SideKind::Geodesic || s.kind == SideKind::NielsenCut) && s.half_plane.eval(k) > eps)
            return false;
    for (const auto& h : removed)
        if (h.contains(z, -eps)) return false;
    return true;
}

klein::ConvexPolygon DirichletPolygon::klein_region() const {
    auto poly = klein::square(2.0);
    for (std::size_t i = 0; i < sides.size(); ++i) {
        const auto& s = sides[i];
        if (s.kind == SideKind::Geodesic || s.kind == SideKind::NielsenCut)
            poly = klein::clip(poly, s.half_plane, static_cast<int>(i));
    }
    return poly;
}

double DirichletPolygon::finite_radius() const {
    double r = 0.0;
    for (const auto& v : vertices)
        if (!v.ideal) r = std::max(r, dist(center, v.point()));
    return r;
}

namespace {

// Product of inverse pairings around the vertex cycle through vertex `start`,
// leaving along side `start`. Empty when the walk meets a non-geodesic side.
std::optional<std::pair<Isometry, double>> cycle_walk(const DirichletPolygon& P, std::size_t start) {
    const std::size_t n = P.sides.size();
    std::size_t k = start;
    Isometry M;
    double angle = 0.0;
    std::size_t steps = 0;
    do {
        const PolygonSide& s = P.sides[k];
        if (s.kind != SideKind::Geodesic || s.partner < 0) return std::nullopt;
        angle += P.vertices[k].angle;
        M = s.pairing->inverse() * M;
        k = (static_cast<std::size_t>(s.partner) + 1) % n;
        if (++steps > 4 * n) throw DirichletError("vertex cycle does not close");
    } while (k != start);
    return std::make_pair(M, angle);
}

}  // namespace

// ---- assembly --------------------------------------------------------------

namespace detail {

double interior_angle(UhpPoint v, UhpPoint toward_prev, UhpPoint toward_next) {
    const auto [ax, ay] = tangent(v, toward_prev);
    const auto [bx, by] = tangent(v, toward_next);
    return std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by);
}

DirichletPolygon assemble(UhpPoint z0, Arithmetic mode, klein::ConvexPolygon poly,
                          const std::vector<SideLabel>& labels) {
    DirichletPolygon P;
    P.center = z0;
    P.mode = mode;
    klein::merge_short_edges(poly, 1e-9);

    struct Piece {
        KleinPoint a, b;
        bool ia = false, ib = false;
        int label = -1;
    };
    std::vector<Piece> pieces;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const int label = poly.labels[i];
        if (label < 0) continue;
        const KleinPoint p = poly.vertices[i], q = poly.vertices[(i + 1) % n];
        const auto seg = klein::segment_in_disk(p, q);
        if (!seg) continue;
        Piece pc;
        pc.a = snap(p + seg->first * (q - p), pc.ia);
        pc.b = snap(p + seg->second * (q - p), pc.ib);
        if (klein_distance(pc.a, pc.b) < 1e-9) continue;
        pc.label = label;
        pieces.push_back(pc);
    }
    if (pieces.empty()) {
        P.whole_plane = true;
        return P;
    }
    const std::size_t m = pieces.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Piece& pc = pieces[j];
        const Piece& nx = pieces[(j + 1) % m];
        PolygonVertex v;
        v.klein = pc.a;
        v.ideal = pc.ia;
        P.vertices.push_back(v);
        const SideLabel& lab = labels.at(static_cast<std::size_t>(pc.label));
        PolygonSide s;
        s.kind = lab.kind;
        s.pairing = lab.pairing;
        s.half_plane = lab.half_plane;
        P.sides.push_back(s);
        if (klein_distance(pc.b, nx.a) > kSameIdeal) {
            if (!pc.ib || !nx.ia) throw DirichletError("clipped polygon has a gap inside the disk");
            PolygonVertex w;
            w.klein = pc.b;
            w.ideal = true;
            P.vertices.push_back(w);
            PolygonSide f;
            f.kind = SideKind::Free;
            P.sides.push_back(f);
        }
    }
    const std::size_t nv = P.vertices.size();
    for (std::size_t i = 0; i < nv; ++i) {
        PolygonVertex& v = P.vertices[i];
        const PolygonSide& in = P.sides[(i + nv - 1) % nv];
        const PolygonSide& out = P.sides[i];
        if (v.ideal) {
            v.kind = VertexKind::IdealFree;
            v.angle = 0.0;
            v.unresolved = in.kind != SideKind::Free && out.kind != SideKind::Free;
            continue;
        }
        const KleinPoint prev = P.vertices[(i + nv - 1) % nv].klein;
        const KleinPoint next = P.vertices[(i + 1) % nv].klein;
        v.angle = interior_angle(v.point(), from_klein(0.5 * (prev + v.klein)), from_klein(0.5 * (next + v.klein)));
    }
    return P;
}

void pair_sides(DirichletPolygon& P) {
    // split sides paired with themselves at the fixed point of the involution
    for (std::size_t i = 0; i < P.sides.size(); ++i) {
        PolygonSide& s = P.sides[i];
        if (s.kind != SideKind::Geodesic || !s.pairing) continue;
        const Isometry g = *s.pairing;
        if (!elements_equal(g, g.inverse(), P.mode) || classify(g, P.mode) != IsometryKind::Elliptic) continue;
        const auto fp = fixed_points(g, P.mode);
        const UhpPoint f = std::get<UhpPoint>(fp[0]);
        const KleinPoint kf = to_klein(f);
        const std::size_t nv = P.vertices.size();
        const KleinPoint a = P.vertices[i].klein, b = P.vertices[(i + 1) % nv].klein;
        if (klein_distance(kf, a) < kMatch || klein_distance(kf, b) < kMatch) continue;
        PolygonVertex v;
        v.klein = kf;
        v.kind = VertexKind::Elliptic;
        v.order = 2;
        v.angle = kPi;
        v.witness = g;
        PolygonSide copy = s;
        P.vertices.insert(P.vertices.begin() + static_cast<std::ptrdiff_t>(i + 1), v);
        P.sides.insert(P.sides.begin() + static_cast<std::ptrdiff_t>(i + 1), copy);
        ++i;
    }
    const std::size_t n = P.sides.size();
    for (std::size_t i = 0; i < n; ++i) {
        PolygonSide& s = P.sides[i];
        s.partner = -1;
        if (s.kind != SideKind::Geodesic || !s.pairing) continue;
        const Isometry ginv = s.pairing->inverse();
        const KleinPoint ka = image(ginv, P.vertices[i]);
        const KleinPoint kb = image(ginv, P.vertices[(i + 1) % n]);
        for (std::size_t j = 0; j < n; ++j) {
            const PolygonSide& t = P.sides[j];
            if (t.kind != SideKind::Geodesic || !t.pairing || !elements_equal(*t.pairing, ginv, P.mode)) continue;
            if (klein_distance(P.vertices[j].klein, kb) < kMatch &&
                klein_distance(P.vertices[(j + 1) % n].klein, ka) < kMatch) {
                s.partner = static_cast<int>(j);
                break;
            }
        }
    }
}

void classify_vertices(DirichletPolygon& P, const GroupBall& ball) {
    const std::size_t n = P.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        PolygonVertex& v = P.vertices[i];
        if (v.kind == VertexKind::Elliptic) continue;
        if (!v.ideal) {
            const UhpPoint z = v.point();
            const double reach = 2.0 * dist(P.center, z) + 1e-9;
            int count = 0;
            std::optional<Isometry> gen;
            for (const auto& e : ball.elements()) {
                if (e.displacement > reach) break;
                if (e.element.is_identity(P.mode)) continue;
                if (dist(z, e.element.apply(z)) <= kFixed) {
                    ++count;
                    if (!gen) gen = e.element;
                }
            }
            v.order = count + 1;
            if (count > 0) {
                v.kind = VertexKind::Elliptic;
                for (const auto& e : ball.elements()) {
                    if (e.displacement > reach) break;
                    if (e.element.is_identity(P.mode) || dist(z, e.element.apply(z)) > kFixed) continue;
                    if (elliptic_order(e.element) == v.order) {
                        gen = e.element;
                        break;
                    }
                }
                v.witness = gen;
            } else {
                v.kind = VertexKind::Ordinary;
            }
            continue;
        }
        const PolygonSide& in = P.sides[(i + n - 1) % n];
        const PolygonSide& out = P.sides[i];
        if (in.kind == SideKind::Free || out.kind == SideKind::Free) continue;
        // cusp test before ideal-free: smallest-displacement parabolic fixing v
        for (const auto& e : ball.elements()) {
            if (classify(e.element, P.mode) != IsometryKind::Parabolic) continue;
            const auto fp = fixed_points(e.element, P.mode);
            if (klein_distance(fixed_klein(fp[0]), v.klein) < kSameIdeal) {
                v.kind = VertexKind::Cusp;
                v.witness = e.element;
                v.unresolved = false;
                break;
            }
        }
        if (v.unresolved) {
            // the cycle transformation generates the stabilizer when the pairings close up
            std::optional<std::pair<Isometry, double>> c;
            try {
                c = cycle_walk(P, i);
            } catch (const DirichletError&) {
            }
            if (c && classify(c->first, P.mode) == IsometryKind::Parabolic) {
                v.kind = VertexKind::Cusp;
                v.witness = c->first;
                v.unresolved = false;
            }
        }
    }
}

}  // namespace detail

// ---- polygon from a ball ---------------------------------------------------

DirichletPolygon build_polygon(UhpPoint z0, const GroupBall& ball) {
    for (const auto& e : ball.elements())
        if (!e.element.is_identity(ball.mode()) && dist(z0, e.element.apply(z0)) <= tol::kDistance)
            throw EllipticCenterError(e.element, "center is fixed by " + to_string(e.element));

    std::vector<detail::SideLabel> labels;
    auto poly = klein::square(2.0);
    for (const auto& e : ball.elements()) {
        if (e.element.is_identity(ball.mode())) continue;
        detail::SideLabel lab;
        lab.pairing = e.element;
        lab.half_plane = bisector_half_plane(z0, e.element.apply(z0));
        labels.push_back(lab);
        poly = klein::clip(poly, lab.half_plane, static_cast<int>(labels.size() - 1));
    }
    DirichletPolygon P = detail::assemble(z0, ball.mode(), std::move(poly), labels);
    P.source_certificate = ball.certificate();
    P.source_size = ball.size();
    if (P.whole_plane) return P;
    detail::pair_sides(P);
    detail::classify_vertices(P, ball);
    return P;
}

bool membership(UhpPoint z, UhpPoint z0, const GroupBall& ball) {
    const double d = dist(z, z0);
    if (!ball.certificate().complete_for(2.0 * d - 1e-12))
        throw InsufficientCertificate("membership needs a complete ball of radius " + std::to_string(2.0 * d));
    const double key0 = cosh_key(z, z0);
    for (const auto& e : ball.elements()) {
        if (e.displacement > 2.0 * d + 1e-9) break;
        if (cosh_key(z, e.element.apply(z0)) < key0 * (1.0 - 1e-12) - 1e-15) return false;
    }
    return true;
}

// ---- cycles, cusps, area ---------------------------------------------------

double VertexCycle::angle_sum() const { return std::accumulate(angles.begin(), angles.end(), 0.0); }

std::vector<VertexCycle> vertex_cycles(const DirichletPolygon& P, const GroupBall& ball) {
    std::vector<int> finite;
    for (std::size_t i = 0; i < P.vertices.size(); ++i)
        if (!P.vertices[i].ideal) finite.push_back(static_cast<int>(i));
    const double rho = P.finite_radius();
    if (!ball.certificate().complete_for(2.0 * rho - 1e-9))
        throw InsufficientCertificate("vertex congruence needs a complete ball of radius " + std::to_string(2.0 * rho));
    std::vector<int> parent(P.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < finite.size(); ++a) {
        const UhpPoint va = P.vertices[finite[a]].point();
        for (std::size_t b = a + 1; b < finite.size(); ++b) {
            if (find(finite[a]) == find(finite[b])) continue;
            const UhpPoint vb = P.vertices[finite[b]].point();
            const double reach = dist(P.center, va) + dist(P.center, vb) + 1e-9;
            for (const auto& e : ball.elements()) {
                if (e.displacement > reach) break;
                if (dist(e.element.apply(va), vb) <= kFixed) {
                    parent[find(finite[a])] = find(finite[b]);
                    break;
                }
            }
        }
    }
    std::vector<VertexCycle> out;
    std::vector<int> slot(P.vertices.size(), -1);
    for (int i : finite) {
        const int r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(out.size());
            out.emplace_back();
            out.back().order = P.vertices[i].order;
        }
        VertexCycle& c = out[slot[r]];
        c.vertices.push_back(i);
        c.angles.push_back(P.vertices[i].angle);
    }
    return out;
}

std::vector<VertexCycle> elliptic_cycles(const DirichletPolygon& P, const GroupBall& ball) {
    std::vector<VertexCycle> out;
    for (auto& c : vertex_cycles(P, ball))
        if (c.order >= 2) out.push_back(std::move(c));
    return out;
}

std::vector<CuspVertex> cusp_vertices(const DirichletPolygon& P) {
    std::vector<CuspVertex> out;
    for (std::size_t i = 0; i < P.vertices.size(); ++i) {
        const auto& v = P.vertices[i];
        if (v.kind == VertexKind::Cusp && v.witness) out.push_back({static_cast<int>(i), v.boundary(), *v.witness});
    }
    return out;
}

double area(const DirichletPolygon& P) {
    if (P.whole_plane || P.has_free_sides()) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(P.vertices.size());
    double a = (n - 2.0) * kPi;
    for (const auto& v : P.vertices) a -= v.angle;
    for (const auto& s : P.sides)
        if (s.kind == SideKind::Horocyclic) a -= s.length;
    return a;
}

// ---- Γ(F) -------------------------------------------------------------------

std::vector<Isometry> gamma_F(const DirichletPolygon& P, const GroupBall& ball) {
    if (P.whole_plane) return {Isometry{}};
    double need = 2.0 * P.finite_radius();
    for (const auto& s : P.sides)
        if (s.kind == SideKind::Geodesic && s.pairing) need = std::max(need, displacement(*s.pairing, P.center));
    if (!ball.certificate().complete_for(need - 1e-9))
        throw InsufficientCertificate("gamma_F needs a complete ball of radius " + std::to_string(need));
    const auto region = P.klein_region();
    std::vector<Isometry> pairings;
    for (const auto& s : P.sides)
        if (s.kind == SideKind::Geodesic && s.pairing) pairings.push_back(*s.pairing);
    std::vector<Isometry> out;
    for (const auto& e : ball.elements()) {
        if (e.displacement > need + 1e-9) break;
        const UhpPoint gz = e.element.apply(P.center);
        auto q = region;
        for (const auto& s : pairings) {
            q = klein::clip(q, bisector_half_plane(gz, (e.element * s).apply(P.center)), 0, 1e-9);
            if (q.empty()) break;
        }
        if (!q.empty() && min_norm(q) < 1.0 - 1e-7) out.push_back(e.element);
    }
    return out;
}

// ---- validation ---------------------------------------------------------------

ValidationReport validate_domain(const DirichletPolygon& P, const GroupPresentation& group) {
    ValidationReport rep;
    if (P.whole_plane) {
        rep.ok = group.generators.empty();
        if (!rep.ok) rep.reason = "no bisector cuts the plane";
        return rep;
    }
    const std::size_t n = P.sides.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = P.sides[i];
        if (s.kind == SideKind::Geodesic && s.partner < 0) {
            rep.reason = "side " + std::to_string(i) + " has no paired side";
            return rep;
        }
    }
    // vertex cycles
    for (std::size_t start = 0; start < n; ++start) {
        if (P.sides[start].kind != SideKind::Geodesic) continue;
        std::optional<std::pair<Isometry, double>> c;
        try {
            c = cycle_walk(P, start);
        } catch (const DirichletError& e) {
            rep.reason = e.what();
            return rep;
        }
        if (!c) continue;
        const auto& [M, angle] = *c;
        if (P.vertices[start].ideal) {
            if (classify(M, P.mode) != IsometryKind::Parabolic) {
                rep.reason = "ideal vertex " + std::to_string(start) + " has a non-parabolic cycle transformation";
                return rep;
            }
            continue;
        }
        int m = 1;
        if (!M.is_identity(P.mode)) {
            m = classify(M, P.mode) == IsometryKind::Elliptic ? elliptic_order(M) : 0;
            if (m == 0) {
                rep.reason = "cycle transformation at vertex " + std::to_string(start) + " has infinite order";
                return rep;
            }
        }
        if (std::abs(angle * m - 2.0 * kPi) > 1e-6) {
            rep.reason = "angle sum " + std::to_string(angle) + " at vertex " + std::to_string(start) +
                         " does not match order " + std::to_string(m);
            return rep;
        }
    }
    // every generator reduces back to the center through side pairings
    std::vector<Isometry> pairings;
    std::vector<UhpPoint> images;
    for (const auto& s : P.sides)
        if (s.kind == SideKind::Geodesic) {
            pairings.push_back(*s.pairing);
            images.push_back(s.pairing->apply(P.center));
        }
    for (const auto& g : group.generators) {
        UhpPoint q = g.apply(P.center);
        Isometry h;
        for (int iter = 0; iter < 100000; ++iter) {
            const double k0 = cosh_key(q, P.center);
            double best = k0;
            int pick = -1;
            for (std::size_t j = 0; j < pairings.size(); ++j) {
                const double kj = cosh_key(q, images[j]);
                if (kj < best) {
                    best = kj;
                    pick = static_cast<int>(j);
                }
            }
            if (pick < 0 || best >= k0 * (1.0 - 1e-12) - 1e-15) break;
            q = pairings[pick].inverse().apply(q);
            h = h * pairings[pick];
        }
        const Isometry rest = h.inverse() * g;
        if (dist(q, P.center) <= 1e-7) {
            if (!rest.is_identity(group.mode))
                throw EllipticCenterError(rest, "center is fixed by " + to_string(rest));
            continue;
        }
        rep.residues.push_back(rest);
    }
    if (!rep.residues.empty()) {
        rep.reason = "some generators do not reduce into the polygon";
        return rep;
    }
    rep.ok = true;
    return rep;
}

// ---- Domain -------------------------------------------------------------------

Domain::Domain(GroupPresentation group, UhpPoint z0, DomainOptions options)
    : group_(std::move(group)), z0_(z0), options_(options) {
    group_.validate();
    if (group_.generators.empty()) {
        polygon_.center = z0_;
        polygon_.mode = group_.mode;
        polygon_.whole_plane = true;
        Certificate c;
        c.kind = CertificateKind::Complete;
        c.method = CertificationMethod::PairingWalk;
        c.radius = std::numeric_limits<double>::infinity();
        cache_ = GroupBall({{Isometry{}, {}, 0.0}}, c, group_.mode, z0_);
        polygon_.source_certificate = c;
        return;
    }
    entry_scan_ = generates_modular_group(group_);

    std::vector<Isometry> letters;
    std::vector<Word> words;
    for (std::size_t k = 0; k < group_.generators.size(); ++k) {
        letters.push_back(group_.generators[k]);
        words.push_back({static_cast<int>(k) + 1});
        letters.push_back(group_.generators[k].inverse());
        words.push_back({-static_cast<int>(k) - 1});
    }
    std::vector<Isometry> residues;
    double R = options_.initial_radius;
    std::string last_reason;
    for (;;) {
        GroupBall boot;
        if (entry_scan_) {
            boot = norm_ball(group_, z0_, R, {{}, {}, options_.limits, true});
        } else {
            auto elements = pruned_walk(letters, words, group_.mode, z0_, R, options_.limits);
            for (const auto& r : residues) elements.push_back({r, {}, displacement(r, z0_)});
            Certificate c;
            c.note = "bootstrap walk";
            boot = GroupBall(std::move(elements), c, group_.mode, z0_);
        }
        if (boot.basepoint_fixed())
            throw EllipticCenterError(*boot.stabilizer_witness(),
                                      "center is fixed by " + to_string(*boot.stabilizer_witness()));
        DirichletPolygon P = build_polygon(z0_, boot);
        const ValidationReport rep = validate_domain(P, group_);
        if (rep.ok) {
            pairings_ = P.side_pairings();
            break;
        }
        last_reason = rep.reason;
        bool fresh = false;
        for (const auto& r : rep.residues) {
            const bool known = std::any_of(residues.begin(), residues.end(),
                                           [&](const Isometry& x) { return elements_equal(x, r, group_.mode); });
            if (!known && !r.is_identity(group_.mode)) {
                residues.push_back(r);
                residues.push_back(r.inverse());
                fresh = true;
            }
        }
        if (!fresh) R += 1.5;
        if (R > options_.max_radius)
            throw DirichletError("no validated Dirichlet domain up to radius " + std::to_string(options_.max_radius) +
                                 ": " + last_reason);
    }
    // rebuild from a certified ball large enough to classify every vertex
    double Rf = R;
    {
        cache_ = make_ball(R);
        DirichletPolygon P = build_polygon(z0_, cache_);
        Rf = std::max(R, 2.0 * P.finite_radius() + 0.5);
    }
    cache_ = make_ball(Rf);
    if (cache_.certificate().kind != CertificateKind::Complete)
        throw DirichletError("certified ball of radius " + std::to_string(Rf) + " hit a resource cap");
    polygon_ = build_polygon(z0_, cache_);
    const ValidationReport rep = validate_domain(polygon_, group_);
    if (!rep.ok) throw DirichletError("certified rebuild failed validation: " + rep.reason);
    pairings_ = polygon_.side_pairings();
}

GroupBall Domain::make_ball(double R) const {
    NormBallOptions opt;
    opt.limits = options_.limits;
    if (entry_scan_) return norm_ball(group_, z0_, R, opt);
    opt.side_pairings = pairings_;
    opt.allow_entry_scan = false;
    return norm_ball(group_, z0_, R, opt);
}

const GroupBall& Domain::ball(double R) {
    if (cache_.certificate().complete_for(R)) return cache_;
    const double grow = std::max(R, 1.2 * cache_.certificate().radius);
    GroupBall b = make_ball(grow);
    if (b.certificate().kind != CertificateKind::Complete)
        throw InsufficientCertificate("resource cap while growing the certified ball to radius " + std::to_string(grow));
    cache_ = std::move(b);
    return cache_;
}

GroupBall Domain::ball_exact(double R) const {
    if (cache_.certificate().complete_for(R)) return cache_.restricted(R);
    return make_ball(R);
}

}  // namespace fgc
