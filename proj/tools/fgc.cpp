// fgc: Dirichlet domains, geodesic covers and surface distances from JSON group files.

#include "fgc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace fgc;
using io::json;

namespace {

enum Exit { kOk = 0, kInput = 1, kUncertified = 2, kElliptic = 3, kVerification = 4, kUnverified = 5 };

void emit(const json& j, const std::string& out) {
    if (out.empty())
        std::cout << io::dump(j);
    else
        io::write_file(out, j);
}

struct Common {
    std::string group;
    std::size_t pairs = 2000;
    std::uint64_t seed = 0;
    std::string out;
};

SuiteOracle suite_for(Domain& D, const Common& c) {
    const DistanceOracle oracle(D);
    return evaluate_suite(make_pair_suite(D.polygon(), c.pairs, c.seed), oracle);
}

int report_verification(CoverCandidate& C, const VerificationReport& rep, const std::string& out) {
    C.verification = rep.summary();
    json j = io::to_json(C);
    if (!rep.failures.empty()) j["first_failure"] = io::to_json(rep.failures.front());
    emit(j, out);
    if (rep.verified) return kOk;
    if (!rep.failures.empty()) {
        const auto& f = rep.failures.front();
        std::cerr << "verification failed on " << rep.failures.size() << " of " << rep.pairs_tested << " pairs; first: p = ("
                  << f.p.x << ", " << f.p.y << "), q = (" << f.q.x << ", " << f.q.y << "), cover " << f.cover_min
                  << " vs oracle " << f.oracle_min << " via " << to_string(f.realizer)
                  << (f.uncertified ? " (oracle uncertified)" : "") << "\n";
    }
    return kVerification;
}

Domain domain_for(const io::GroupFile& g, UhpPoint center) { return Domain(g.group, center); }

int cmd_domain(const Common& c, std::vector<double> center, double radius, const std::string& svg) {
    const auto g = io::group_from_json(io::read_file(c.group));
    DomainOptions opt;
    if (radius > 0) opt.initial_radius = radius;
    Domain D(g.group, UhpPoint(center.at(0), center.at(1)), opt);
    emit(io::to_json(D.polygon()), c.out);
    if (!svg.empty()) {
        std::ofstream f(svg);
        if (!f) throw io::InputError("cannot write " + svg);
        f << io::polygon_svg(D.polygon());
    }
    return kOk;
}

int cmd_build(const Common& c, const std::string& polygon, const std::string& construction, int depth, int grid,
              int boundary, bool reduce) {
    const auto g = io::group_from_json(io::read_file(c.group));
    const DirichletPolygon stored = io::polygon_from_json(io::read_file(polygon));
    Domain D = domain_for(g, stored.center);
    const DirichletPolygon& P = D.polygon();
    if (P.vertices.size() != stored.vertices.size()) throw io::InputError("polygon file does not match the group");
    SamplingSpec spec;
    spec.grid = grid;
    spec.boundary = boundary;
    CoverCandidate C;
    if (construction == "basic") {
        C = build_basic_cover(P, D, spec);
    } else if (construction == "truncated") {
        C = build_truncated_cover(P, D, select_horoballs(P, D.ball(4.0)), spec);
    } else if (construction == "nielsen") {
        C = build_nielsen_cover(P, D, depth, spec);
    } else {
        throw io::InputError("construction must be basic, truncated or nielsen");
    }
    const auto answers = suite_for(D, c);
    if (reduce) C = reduce_cover(C, answers);
    auto rep = verify_second_cover(C, answers);
    rep.seed = c.seed;
    return report_verification(C, rep, c.out);
}

int cmd_verify(const Common& c, const std::string& cover) {
    const auto g = io::group_from_json(io::read_file(c.group));
    CoverCandidate C = io::cover_from_json(io::read_file(cover));
    Domain D = domain_for(g, C.center);
    const auto answers = suite_for(D, c);
    auto rep = C.kind == CoverKind::First ? verify_first_cover(C, answers) : verify_second_cover(C, answers);
    rep.seed = c.seed;
    return report_verification(C, rep, c.out);
}

int cmd_lift(const Common& c, const std::string& cover, const std::string& reps_file) {
    const CoverCandidate H = io::cover_from_json(io::read_file(cover));
    const json r = io::read_file(reps_file);
    std::vector<Isometry> reps;
    try {
        for (const auto& m : r.at("reps")) reps.push_back(io::isometry_from_json(m, H.mode));
    } catch (const json::exception& e) {
        throw io::InputError(e.what());
    }
    CoverCandidate C = lift_cover(H, reps);
    if (c.group.empty()) {
        emit(io::to_json(C), c.out);
        return kOk;
    }
    const auto g = io::group_from_json(io::read_file(c.group));
    C.group_label = g.group.label;
    Domain D = domain_for(g, C.center);
    auto rep = verify_second_cover(C, suite_for(D, c));
    rep.seed = c.seed;
    return report_verification(C, rep, c.out);
}

int cmd_probe(const Common& c, const std::string& cover) {
    const auto g = io::group_from_json(io::read_file(c.group));
    const CoverCandidate C = io::cover_from_json(io::read_file(cover));
    Domain D = domain_for(g, C.center);
    const DistanceOracle oracle(D);
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), c.pairs, c.seed), oracle);
    json ws = json::array();
    std::size_t nec = 0;
    for (const auto& w : necessity_probe(C, D.polygon(), oracle, answers)) {
        nec += w.necessary;
        ws.push_back(io::to_json(w));
    }
    emit({{"size", C.size()}, {"necessary", nec}, {"seed", c.seed}, {"witnesses", ws}}, c.out);
    return kOk;
}

int cmd_dist(const Common& c, const std::string& cover, std::vector<double> p, std::vector<double> q, bool force) {
    const auto g = io::group_from_json(io::read_file(c.group));
    const CoverCandidate C = io::cover_from_json(io::read_file(cover));
    Domain D = domain_for(g, C.center);
    const auto sp = reduce_to_domain(D.polygon(), UhpPoint(p.at(0), p.at(1)));
    const auto sq = reduce_to_domain(D.polygon(), UhpPoint(q.at(0), q.at(1)));
    const double d = surface_distance(sp, sq, C, force);
    emit({{"p", json::array({sp.rep.x, sp.rep.y})}, {"q", json::array({sq.rep.x, sq.rep.y})}, {"distance", d}}, c.out);
    return kOk;
}

int cmd_ddist(const Common& c, const std::string& cover, const std::string& points, double tol, bool force) {
    const auto g = io::group_from_json(io::read_file(c.group));
    const CoverCandidate C = io::cover_from_json(io::read_file(cover));
    Domain D = domain_for(g, C.center);
    std::vector<SurfacePoint> pts;
    try {
        const json doc = io::read_file(points);
        for (const auto& z : doc.at("points"))
            pts.push_back(reduce_to_domain(D.polygon(), UhpPoint(z.at(0).get<double>(), z.at(1).get<double>())));
    } catch (const json::exception& e) {
        throw io::InputError(e.what());
    }
    emit(io::to_json(distinct_distances(pts, C, tol, force)), c.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet domains and geodesic covers of Fuchsian groups"};
    app.require_subcommand(1);
    Common c;
    std::vector<double> center{0.0, 1.0}, p, q;
    double radius = 0.0, tol = 1e-7;
    std::string svg, polygon, construction = "truncated", cover, reps, points;
    int depth = 2, grid = 32, boundary = 256;
    bool reduce = false, force = false;

    auto add_suite = [&](CLI::App* s) {
        s->add_option("--pairs", c.pairs, "size of the verification pair suite")->capture_default_str();
        s->add_option("--seed", c.seed, "suite seed")->capture_default_str();
    };

    auto* dom = app.add_subcommand("domain", "Dirichlet polygon of a group");
    dom->add_option("group", c.group, "group file")->required();
    dom->add_option("--center", center, "center x y")->expected(2);
    dom->add_option("--ball-radius", radius, "initial norm-ball radius");
    dom->add_option("--out", c.out, "polygon file to write (stdout otherwise)");
    dom->add_option("--svg", svg, "Poincaré-disk picture");

    auto* cov = app.add_subcommand("cover", "build, verify, lift or probe geodesic covers");
    cov->require_subcommand(1);
    auto* build = cov->add_subcommand("build", "construct a cover and verify it");
    build->add_option("group", c.group)->required();
    build->add_option("--polygon", polygon, "polygon file from `fgc domain`")->required();
    build->add_option("--construction", construction)->check(CLI::IsMember({"basic", "truncated", "nielsen"}))->capture_default_str();
    build->add_option("--depth", depth, "word depth for the Nielsen intervals")->capture_default_str();
    build->add_option("--grid", grid, "sampling grid per axis")->capture_default_str();
    build->add_option("--boundary", boundary, "boundary samples")->capture_default_str();
    build->add_flag("--reduce", reduce, "greedily drop elements the suite does not need");
    build->add_option("--out", c.out);
    add_suite(build);

    auto* verify = cov->add_subcommand("verify", "check a cover file against the oracle");
    verify->add_option("group", c.group)->required();
    verify->add_option("--cover", cover)->required();
    verify->add_option("--out", c.out);
    add_suite(verify);

    auto* lift = cov->add_subcommand("lift", "lift a subgroup cover by coset representatives");
    lift->add_option("--cover", cover, "cover of the subgroup")->required();
    lift->add_option("--reps", reps, "JSON {\"reps\": [matrices]}")->required();
    lift->add_option("--group", c.group, "verify against this (larger) group");
    lift->add_option("--out", c.out);
    add_suite(lift);

    auto* probe = cov->add_subcommand("probe", "look for pairs that need each element");
    probe->add_option("group", c.group)->required();
    probe->add_option("--cover", cover)->required();
    probe->add_option("--out", c.out);
    add_suite(probe);

    auto* dist = app.add_subcommand("dist", "surface distance between two points");
    dist->add_option("group", c.group)->required();
    dist->add_option("--cover", cover)->required();
    dist->add_option("--p", p)->expected(2)->required();
    dist->add_option("--q", q)->expected(2)->required();
    dist->add_flag("--force", force, "use an unverified cover");
    dist->add_option("--out", c.out);

    auto* ddist = app.add_subcommand("ddist", "distinct distances among points");
    ddist->add_option("group", c.group)->required();
    ddist->add_option("--cover", cover)->required();
    ddist->add_option("--points", points, "JSON {\"points\": [[x, y], ...]}")->required();
    ddist->add_option("--tol", tol)->capture_default_str();
    ddist->add_flag("--force", force);
    ddist->add_option("--out", c.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInput;
    }

    try {
        if (*dom) return cmd_domain(c, center, radius, svg);
        if (*build) return cmd_build(c, polygon, construction, depth, grid, boundary, reduce);
        if (*verify) return cmd_verify(c, cover);
        if (*lift) return cmd_lift(c, cover, reps);
        if (*probe) return cmd_probe(c, cover);
        if (*dist) return cmd_dist(c, cover, p, q, force);
        if (*ddist) return cmd_ddist(c, cover, points, tol, force);
    } catch (const io::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const EllipticCenterError& e) {
        std::cerr << e.what() << " (stabilizer " << to_string(e.stabilizer()) << ")\n";
        return kElliptic;
    } catch (const UnverifiedCoverError& e) {
        std::cerr << e.what() << "\n";
        return kUnverified;
    } catch (const SurfaceError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const GeometryError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        // certificate shortfalls, enumeration caps, unvalidated domains
        std::cerr << "uncertified: " << e.what() << "\n";
        return kUncertified;
    }
    return kInput;
}
