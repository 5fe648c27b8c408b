#include <doctest.h>

#include "fgc/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace fgc;

namespace {

const Isometry S(0, -1, 1, 0);
const Isometry T(1, 1, 0, 1);

GroupPresentation modular() { return {{S, T}, Arithmetic::ExactInteger, false, "modular"}; }
GroupPresentation gamma2() { return {{Isometry(1, 2, 0, 1), Isometry(1, 0, 2, 1)}, Arithmetic::ExactInteger, true, "gamma2"}; }
GroupPresentation cyclic4() { return {{Isometry(2, 0, 0, 0.5)}, Arithmetic::Floating, true, "cyclic4"}; }
GroupPresentation schottky3() { return {{Isometry(1, 3, 0, 1), Isometry(1, 0, 3, 1)}, Arithmetic::ExactInteger, true, "s3"}; }

bool contains_element(const std::vector<Isometry>& v, const Isometry& g, Arithmetic mode) {
    return std::any_of(v.begin(), v.end(), [&](const Isometry& h) { return elements_equal(g, h, mode); });
}

// Oracle: the nearest orbit point by direct scan of the ball
bool nearest_is_center(UhpPoint z, UhpPoint z0, const GroupBall& ball) {
    const double d0 = dist(z, z0);
    for (const auto& e : ball.elements())
        if (dist(z, e.element.apply(z0)) < d0 - 1e-9) return false;
    return true;
}

// Points spread along the boundary of P, vertices included (ideal vertices skipped)
std::vector<UhpPoint> boundary_samples(const DirichletPolygon& P, int per_side) {
    std::vector<UhpPoint> out;
    const std::size_t n = P.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const KleinPoint a = P.vertices[i].klein, b = P.vertices[(i + 1) % n].klein;
        if (!P.vertices[i].ideal) out.push_back(P.vertices[i].point());
        for (int s = 1; s < per_side; ++s) {
            const KleinPoint k = a + (double(s) / per_side) * (b - a);
            if (k.norm() < 0.999) out.push_back(from_klein(k));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("modular domain at 2i") {
    Domain D(modular(), {0, 2});
    const auto& P = D.polygon();
    CHECK_FALSE(P.whole_plane);
    CHECK_FALSE(P.has_free_sides());
    CHECK(area(P) == doctest::Approx(kPi / 3).epsilon(1e-9));

    // vertices: rho', i (split side), rho, infinity
    CHECK(P.vertices.size() == 4);
    int finite = 0;
    for (const auto& v : P.vertices) finite += !v.ideal;
    CHECK(finite == 3);

    const auto& ball = D.ball(4.0);
    auto cyc = elliptic_cycles(P, ball);
    REQUIRE(cyc.size() == 2);
    std::sort(cyc.begin(), cyc.end(), [](const VertexCycle& a, const VertexCycle& b) { return a.order < b.order; });
    CHECK(cyc[0].order == 2);
    CHECK(cyc[0].angle_sum() == doctest::Approx(2 * kPi / 2).epsilon(1e-9));
    CHECK(cyc[1].order == 3);
    CHECK(cyc[1].vertices.size() == 2);
    CHECK(cyc[1].angle_sum() == doctest::Approx(2 * kPi / 3).epsilon(1e-9));

    const auto cusps = cusp_vertices(P);
    REQUIRE(cusps.size() == 1);
    CHECK(cusps[0].point.is_infinity());
    CHECK(classify(cusps[0].stabilizer, Arithmetic::ExactInteger) == IsometryKind::Parabolic);
    CHECK((elements_equal(cusps[0].stabilizer, T, Arithmetic::ExactInteger) ||
           elements_equal(cusps[0].stabilizer, T.inverse(), Arithmetic::ExactInteger)));

    // side pairings are S, T, T^-1
    const auto sp = P.side_pairings();
    CHECK(sp.size() == 3);
    for (const auto& g : {S, T, T.inverse()}) CHECK(contains_element(sp, g, Arithmetic::ExactInteger));
    for (const auto& s : P.sides) {
        if (s.kind != SideKind::Geodesic) continue;
        REQUIRE(s.partner >= 0);
        CHECK(elements_equal(*P.sides[s.partner].pairing, s.pairing->inverse(), Arithmetic::ExactInteger));
    }
}

TEST_CASE("modular polygon agrees with the nearest-point oracle") {
    Domain D(modular(), {0, 2});
    const auto& P = D.polygon();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-1.5, 1.5), ly(-1.5, 1.5);
    int agree = 0, total = 0;
    for (int i = 0; i < 400; ++i) {
        const UhpPoint z{x(rng), std::exp(ly(rng))};
        const GroupBall& ball = D.ball(2.0 * dist(z, P.center) + 0.1);
        const bool oracle = nearest_is_center(z, P.center, ball);
        // skip points within a hair of a side where both answers are right
        bool edge = false;
        for (const auto& s : P.sides)
            if (s.kind == SideKind::Geodesic && std::abs(s.half_plane.eval(to_klein(z))) < 1e-8) edge = true;
        if (edge) continue;
        ++total;
        agree += oracle == P.contains(z);
        CHECK(membership(z, P.center, ball) == oracle);
    }
    CHECK(agree == total);
}

TEST_CASE("membership needs a large enough certificate") {
    const GroupBall small = norm_ball(modular(), {0, 2}, 1.0);
    CHECK_THROWS_AS(membership({5, 0.1}, {0, 2}, small), InsufficientCertificate);
}

TEST_CASE("every orbit meets the modular domain") {
    Domain D(modular(), {0, 2});
    const auto& P = D.polygon();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(-4, 4), ly(-3, 1);
    const GroupBall& ball = D.ball(8.0);
    for (int i = 0; i < 200; ++i) {
        const UhpPoint z{x(rng), std::exp(ly(rng))};
        // pull z towards the center by the nearest orbit translate of z0
        double best = dist(z, P.center);
        Isometry g;
        for (const auto& e : ball.elements()) {
            const double d = dist(z, e.element.apply(P.center));
            if (d < best) {
                best = d;
                g = e.element;
            }
        }
        CHECK(P.contains(g.inverse().apply(z), 1e-8));
    }
}

TEST_CASE("gamma_F of the modular domain") {
    Domain D(modular(), {0, 2});
    const auto& P = D.polygon();
    const GroupBall& ball = D.ball(6.0);
    const auto G = gamma_F(P, ball);
    CHECK(G.size() == 10);
    CHECK(contains_element(G, Isometry{}, Arithmetic::ExactInteger));
    for (const auto& g : P.side_pairings()) CHECK(contains_element(G, g, Arithmetic::ExactInteger));
    // translates by T^2 only touch at the cusp
    CHECK_FALSE(contains_element(G, T * T, Arithmetic::ExactInteger));

    // oracle: g is in Γ(F) iff some boundary sample p of F has g^-1 p in F
    const auto samples = boundary_samples(P, 64);
    std::vector<Isometry> oracle;
    for (const auto& e : ball.elements()) {
        if (e.displacement > 4.0) break;
        const Isometry gi = e.element.inverse();
        for (const auto& p : samples)
            if (P.contains(gi.apply(p), 1e-7)) {
                oracle.push_back(e.element);
                break;
            }
    }
    CHECK(oracle.size() == G.size());
    for (const auto& g : oracle) CHECK(contains_element(G, g, Arithmetic::ExactInteger));
}

TEST_CASE("cyclic hyperbolic group: annulus strip with free sides") {
    Domain D(cyclic4(), {0, 1});
    const auto& P = D.polygon();
    CHECK(P.sides.size() == 4);
    CHECK(P.has_free_sides());
    CHECK(std::isinf(area(P)));
    int geodesic = 0;
    for (const auto& s : P.sides) geodesic += s.kind == SideKind::Geodesic;
    CHECK(geodesic == 2);
    // sides are |z| = 2 and |z| = 1/2
    for (const auto& v : P.vertices) {
        REQUIRE(v.ideal);
        CHECK(v.kind == VertexKind::IdealFree);
        const double r = std::abs(v.boundary().value());
        CHECK((std::abs(r - 2.0) < 1e-9 || std::abs(r - 0.5) < 1e-9));
    }
    const GroupBall& ball = D.ball(4.0);
    const auto G = gamma_F(P, ball);
    CHECK(G.size() == 3);
}

TEST_CASE("parabolic cyclic group: strip with a cusp") {
    GroupPresentation par{{T}, Arithmetic::ExactInteger, true, "T"};
    Domain D(par, {0, 1});
    const auto& P = D.polygon();
    CHECK(P.has_free_sides());
    CHECK(std::isinf(area(P)));
    const auto cusps = cusp_vertices(P);
    REQUIRE(cusps.size() == 1);
    CHECK(cusps[0].point.is_infinity());
}

TEST_CASE("Gamma(2) has three cusps and area 2 pi") {
    Domain D(gamma2(), {0, 2});
    const auto& P = D.polygon();
    CHECK(area(P) == doctest::Approx(2 * kPi).epsilon(1e-9));
    CHECK(cusp_vertices(P).size() == 4);  // -1 and 1 are one cusp class, still two vertices
    for (const auto& v : P.vertices) CHECK(v.ideal);
    const auto G = gamma_F(P, D.ball(6.0));
    for (const auto& g : P.side_pairings()) CHECK(contains_element(G, g, Arithmetic::ExactInteger));
}

TEST_CASE("second-kind Schottky group: four geodesic sides and two free sides") {
    Domain D(schottky3(), {0, 1});
    const auto& P = D.polygon();
    int geodesic = 0, free = 0;
    for (const auto& s : P.sides) {
        geodesic += s.kind == SideKind::Geodesic;
        free += s.kind == SideKind::Free;
    }
    CHECK(geodesic == 4);
    CHECK(free == 2);
    CHECK(cusp_vertices(P).size() == 2);
    CHECK(std::isinf(area(P)));
}

TEST_CASE("elliptic center is rejected") {
    CHECK_THROWS_AS(Domain(modular(), {0, 1}), EllipticCenterError);
    try {
        Domain(modular(), {0.5, std::sqrt(3.0) / 2});
        FAIL("expected an elliptic center error");
    } catch (const EllipticCenterError& e) {
        CHECK(classify(e.stabilizer(), Arithmetic::ExactInteger) == IsometryKind::Elliptic);
    }
}

TEST_CASE("interior angle of perpendicular geodesics") {
    // |z| = 1 and Re z = 0 meet at i at a right angle
    CHECK(detail::interior_angle({0, 1}, {0, 2}, {0.6, 0.8}) == doctest::Approx(kPi / 2));
}
