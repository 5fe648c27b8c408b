#include "fgc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fgc::io {

namespace {

template <class E, std::size_t N>
E parse_enum(const json& j, const E (&values)[N], const char* what) {
    const std::string s = j.get<std::string>();
    for (E v : values)
        if (s == to_string(v)) return v;
    throw InputError(std::string("unknown ") + what + " '" + s + "'");
}

constexpr SideKind kSideKinds[] = {SideKind::Geodesic, SideKind::Free, SideKind::Horocyclic, SideKind::NielsenCut};
constexpr VertexKind kVertexKinds[] = {VertexKind::Ordinary, VertexKind::Elliptic, VertexKind::Cusp, VertexKind::IdealFree};
constexpr CertificateKind kCertKinds[] = {CertificateKind::Complete, CertificateKind::WordOnly, CertificateKind::Uncertified};
constexpr CertificationMethod kMethods[] = {CertificationMethod::None, CertificationMethod::EntryScan,
                                            CertificationMethod::PairingWalk, CertificationMethod::FrontierMargin};
constexpr Provenance kProvenances[] = {Provenance::BasicU, Provenance::TruncatedU, Provenance::NielsenU, Provenance::Lifted,
                                       Provenance::Manual};
constexpr CoverKind kCoverKinds[] = {CoverKind::First, CoverKind::Second};

const char* mode_name(Arithmetic m) { return m == Arithmetic::ExactInteger ? "exact-int" : "float"; }
Arithmetic parse_mode(const json& j) {
    const std::string s = j.get<std::string>();
    if (s == "exact-int") return Arithmetic::ExactInteger;
    if (s == "float") return Arithmetic::Floating;
    throw InputError("mode must be \"exact-int\" or \"float\", got '" + s + "'");
}

json point_json(UhpPoint z) { return json::array({z.x, z.y}); }
UhpPoint point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw InputError("a point is [x, y]");
    try {
        return UhpPoint(j[0].get<double>(), j[1].get<double>());
    } catch (const GeometryError& e) {
        throw InputError(e.what());
    }
}

json boundary_json(const BoundaryPoint& b) { return b.is_infinity() ? json("inf") : json(b.value()); }
BoundaryPoint boundary_from(const json& j) {
    if (j.is_string() && j.get<std::string>() == "inf") return BoundaryPoint::infinity();
    return BoundaryPoint::real(j.get<double>());
}

json optional_isometry(const std::optional<Isometry>& g) { return g ? to_json(*g) : json(nullptr); }
std::optional<Isometry> optional_isometry_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return isometry_from_json(j, Arithmetic::Floating);
}

json horoball_json(const Horoball& h) {
    return {{"cusp", boundary_json(h.cusp)},
            {"height", h.height},
            {"width", h.width},
            {"conjugator", to_json(h.conjugator)},
            {"stabilizer", to_json(h.stabilizer)}};
}
Horoball horoball_from(const json& j) {
    Horoball h;
    h.cusp = boundary_from(j.at("cusp"));
    h.height = j.at("height").get<double>();
    h.width = j.at("width").get<double>();
    h.conjugator = isometry_from_json(j.at("conjugator"), Arithmetic::Floating);
    h.stabilizer = isometry_from_json(j.at("stabilizer"), Arithmetic::Floating);
    return h;
}

template <class F>
auto guarded(F f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(e.what());
    } catch (const GeometryError& e) {
        throw InputError(e.what());
    }
}

}  // namespace

json to_json(const Isometry& g) { return json::array({json::array({g.a(), g.b()}), json::array({g.c(), g.d()})}); }

Isometry isometry_from_json(const json& j, Arithmetic mode) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() || j[1].size() != 2)
        throw InputError("a matrix is [[a, b], [c, d]]");
    const double a = j[0][0].get<double>(), b = j[0][1].get<double>(), c = j[1][0].get<double>(), d = j[1][1].get<double>();
    if (mode == Arithmetic::ExactInteger) {
        for (double x : {a, b, c, d})
            if (x != std::nearbyint(x)) throw InputError("exact-int matrix has a non-integer entry");
        if (a * d - b * c != 1.0)
            throw InputError("matrix [[" + std::to_string(a) + ", " + std::to_string(b) + "], [" + std::to_string(c) + ", " +
                             std::to_string(d) + "]] has determinant " + std::to_string(a * d - b * c) + ", expected 1");
    }
    try {
        return Isometry::from_entries(a, b, c, d);
    } catch (const GeometryError&) {
        throw InputError("matrix has determinant " + std::to_string(a * d - b * c) + ", expected 1 (within 1e-9)");
    }
}

json to_json(const GroupFile& g) {
    json gens = json::array();
    for (const auto& x : g.group.generators) gens.push_back(to_json(x));
    return {{"label", g.group.label},
            {"mode", mode_name(g.group.mode)},
            {"generators", gens},
            {"torsion_free", g.group.torsion_free},
            {"kind_hint", g.kind_hint}};
}

GroupFile group_from_json(const json& j) {
    return guarded([&] {
        GroupFile g;
        g.group.label = j.value("label", std::string());
        g.group.mode = parse_mode(j.at("mode"));
        for (const auto& m : j.at("generators")) g.group.generators.push_back(isometry_from_json(m, g.group.mode));
        g.group.torsion_free = j.value("torsion_free", false);
        g.kind_hint = j.value("kind_hint", std::string("cofinite"));
        if (g.kind_hint != "cofinite" && g.kind_hint != "second-kind" && g.kind_hint != "elementary")
            throw InputError("kind_hint must be cofinite, second-kind or elementary");
        if (g.group.generators.empty()) throw InputError("group has no generators");
        try {
            g.group.validate();
        } catch (const EnumerationError& e) {
            throw InputError(e.what());
        }
        return g;
    });
}

json to_json(const DirichletPolygon& P) {
    const double A = area(P);
    json cert = {{"kind", to_string(P.source_certificate.kind)},
                 {"method", to_string(P.source_certificate.method)},
                 {"radius", P.source_certificate.radius},
                 {"word_length", P.source_certificate.word_length},
                 {"note", P.source_certificate.note}};
    json verts = json::array();
    for (const auto& v : P.vertices) {
        verts.push_back({{"at", v.ideal ? boundary_json(v.boundary()) : point_json(v.point())},
                         {"klein", json::array({v.klein.u, v.klein.v})},
                         {"ideal", v.ideal},
                         {"kind", to_string(v.kind)},
                         {"order", v.order},
                         {"angle", v.angle},
                         {"witness", optional_isometry(v.witness)},
                         {"unresolved", v.unresolved}});
    }
    json sides = json::array();
    for (const auto& s : P.sides) {
        sides.push_back({{"kind", to_string(s.kind)},
                         {"pairing", optional_isometry(s.pairing)},
                         {"partner", s.partner},
                         {"half_plane", json::array({s.half_plane.nu, s.half_plane.nv, s.half_plane.h})},
                         {"length", s.length},
                         {"cusp", s.cusp}});
    }
    json removed = json::array();
    for (const auto& h : P.removed) removed.push_back(horoball_json(h));
    return {{"center", point_json(P.center)},
            {"mode", mode_name(P.mode)},
            {"area", std::isfinite(A) ? json(A) : json(nullptr)},
            {"finite_area", std::isfinite(A)},
            {"whole_plane", P.whole_plane},
            {"certificate", cert},
            {"ball_size", P.source_size},
            {"vertices", verts},
            {"sides", sides},
            {"removed", removed}};
}

DirichletPolygon polygon_from_json(const json& j) {
    return guarded([&] {
        DirichletPolygon P;
        P.center = point_from(j.at("center"));
        P.mode = parse_mode(j.at("mode"));
        P.whole_plane = j.at("whole_plane").get<bool>();
        const json& c = j.at("certificate");
        P.source_certificate.kind = parse_enum(c.at("kind"), kCertKinds, "certificate kind");
        P.source_certificate.method = parse_enum(c.at("method"), kMethods, "certification method");
        P.source_certificate.radius = c.at("radius").get<double>();
        P.source_certificate.word_length = c.at("word_length").get<int>();
        P.source_certificate.note = c.at("note").get<std::string>();
        P.source_size = j.at("ball_size").get<std::size_t>();
        for (const auto& v : j.at("vertices")) {
            PolygonVertex w;
            w.klein = {v.at("klein")[0].get<double>(), v.at("klein")[1].get<double>()};
            w.ideal = v.at("ideal").get<bool>();
            w.kind = parse_enum(v.at("kind"), kVertexKinds, "vertex kind");
            w.order = v.at("order").get<int>();
            w.angle = v.at("angle").get<double>();
            w.witness = optional_isometry_from(v.at("witness"));
            w.unresolved = v.at("unresolved").get<bool>();
            P.vertices.push_back(w);
        }
        for (const auto& s : j.at("sides")) {
            PolygonSide t;
            t.kind = parse_enum(s.at("kind"), kSideKinds, "side kind");
            t.pairing = optional_isometry_from(s.at("pairing"));
            t.partner = s.at("partner").get<int>();
            const json& h = s.at("half_plane");
            t.half_plane = {h[0].get<double>(), h[1].get<double>(), h[2].get<double>()};
            t.length = s.at("length").get<double>();
            t.cusp = s.at("cusp").get<int>();
            P.sides.push_back(t);
        }
        for (const auto& h : j.at("removed")) P.removed.push_back(horoball_from(h));
        if (P.sides.size() != P.vertices.size()) throw InputError("polygon needs as many sides as vertices");
        return P;
    });
}

json to_json(const VerificationSummary& v) {
    return {{"verified", v.verified},
            {"pairs", v.pairs},
            {"failures", v.failures},
            {"seed", v.seed},
            {"all_certified", v.all_certified}};
}

json to_json(const CoverCandidate& C) {
    json els = json::array();
    for (const auto& e : C.elements)
        els.push_back({{"matrix", to_json(e.element)}, {"provenance", to_string(e.provenance)}, {"extra", e.extra}});
    return {{"center", point_json(C.center)},
            {"kind", to_string(C.kind)},
            {"mode", mode_name(C.mode)},
            {"group", C.group_label},
            {"size", C.size()},
            {"elements", els},
            {"verification", C.verification ? to_json(*C.verification) : json(nullptr)}};
}

CoverCandidate cover_from_json(const json& j) {
    return guarded([&] {
        CoverCandidate C;
        C.center = point_from(j.at("center"));
        C.kind = parse_enum(j.at("kind"), kCoverKinds, "cover kind");
        C.mode = parse_mode(j.at("mode"));
        C.group_label = j.value("group", std::string());
        for (const auto& e : j.at("elements")) {
            CoverElement x;
            x.element = isometry_from_json(e.at("matrix"), Arithmetic::Floating);
            x.provenance = parse_enum(e.at("provenance"), kProvenances, "provenance");
            x.extra = e.value("extra", false);
            C.elements.push_back(x);
        }
        const json& v = j.at("verification");
        if (!v.is_null()) {
            VerificationSummary s;
            s.verified = v.at("verified").get<bool>();
            s.pairs = v.at("pairs").get<std::size_t>();
            s.failures = v.at("failures").get<std::size_t>();
            s.seed = v.at("seed").get<std::uint64_t>();
            s.all_certified = v.at("all_certified").get<bool>();
            C.verification = s;
        }
        return C;
    });
}

json to_json(const VerificationFailure& f) {
    return {{"p", point_json(f.p)},
            {"q", point_json(f.q)},
            {"cover_min", f.cover_min},
            {"oracle_min", f.oracle_min},
            {"realizer", to_json(f.realizer)},
            {"uncertified", f.uncertified}};
}

json to_json(const NecessityWitness& w) {
    json j = {{"element", to_json(w.element)}, {"necessary", w.necessary}};
    if (w.necessary) {
        j["p"] = point_json(w.p);
        j["q"] = point_json(w.q);
        j["margin"] = w.margin;
    }
    return j;
}

json to_json(const DistinctDistanceReport& r) {
    return {{"n", r.n},
            {"count", r.count},
            {"tolerance", r.tolerance},
            {"K", r.K},
            {"bound", r.bound},
            {"normalization", r.normalization},
            {"values", r.values}};
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << dump(j);
}

// ---- svg ----------------------------------------------------------------------------

namespace {

struct Pt {
    double x, y;
};

Pt poincare(KleinPoint k) {
    const double s = 1.0 + std::sqrt(std::max(0.0, 1.0 - k.norm2()));
    return {k.u / s, k.v / s};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string polygon_svg(const DirichletPolygon& P, int size) {
    const double R = 0.45 * size, c = 0.5 * size;
    auto screen = [&](Pt p) { return Pt{c + R * p.x, c - R * p.y}; };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 " << size
      << ' ' << size << "\">\n";
    o << "<circle cx=\"" << fmt(c) << "\" cy=\"" << fmt(c) << "\" r=\"" << fmt(R)
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    const std::size_t n = P.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PolygonSide& s = P.sides[i];
        const KleinPoint a = P.vertices[i].klein, b = P.vertices[(i + 1) % n].klein;
        std::vector<Pt> pts;
        constexpr int steps = 48;
        if (s.kind == SideKind::Free) {
            const double t0 = circle_angle(a);
            double t1 = circle_angle(b);
            if (t1 < t0) t1 += 2.0 * kPi;
            for (int k = 0; k <= steps; ++k) pts.push_back(poincare(circle_point(t0 + (t1 - t0) * k / steps)));
        } else if (s.kind == SideKind::Horocyclic && s.cusp >= 0 && static_cast<std::size_t>(s.cusp) < P.removed.size()) {
            const Horoball& h = P.removed[static_cast<std::size_t>(s.cusp)];
            const Isometry ci = h.conjugator.inverse();
            const double xa = ci.apply(from_klein(a)).x, xb = ci.apply(from_klein(b)).x;
            for (int k = 0; k <= steps; ++k)
                pts.push_back(poincare(to_klein(h.conjugator.apply(UhpPoint{xa + (xb - xa) * k / steps, h.height}))));
        } else {
            for (int k = 0; k <= steps; ++k) pts.push_back(poincare(a + (static_cast<double>(k) / steps) * (b - a)));
        }
        const char* colour = s.kind == SideKind::Free ? "#c33" : s.kind == SideKind::Horocyclic ? "#36c"
                             : s.kind == SideKind::NielsenCut                                  ? "#3a3"
                                                                                               : "#000";
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
          << (s.kind == SideKind::Free ? " stroke-dasharray=\"4 3\"" : "") << " points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const Pt q = screen(pts[k]);
            o << (k ? " " : "") << fmt(q.x) << ',' << fmt(q.y);
        }
        o << "\"/>\n";
        const Pt mid = pts[pts.size() / 2];
        const Pt lab = screen({0.88 * mid.x, 0.88 * mid.y});
        o << "<text x=\"" << fmt(lab.x) << "\" y=\"" << fmt(lab.y) << "\" font-size=\"12\" text-anchor=\"middle\">" << i;
        if (s.partner >= 0) o << "&#8594;" << s.partner;
        o << "</text>\n";
    }
    const Pt z0 = screen(poincare(to_klein(P.center)));
    o << "<circle cx=\"" << fmt(z0.x) << "\" cy=\"" << fmt(z0.y) << "\" r=\"2.5\" fill=\"#000\"/>\n";
    o << "</svg>\n";
    return o.str();
}

}  // namespace fgc::io
