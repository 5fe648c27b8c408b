#include <doctest.h>

#include "fgc/isometry.hpp"
#include "fgc/klein.hpp"

#include <cmath>
#include <random>

using namespace fgc;

namespace {

const Isometry S(0, -1, 1, 0);
const Isometry T(1, 1, 0, 1);

Isometry random_isometry(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const double det = a * d - b * c;
        if (det > 0.05) return Isometry(a, b, c, d);
        if (det < -0.05) return Isometry(b, a, d, c);  // swap columns flips the sign
    }
}

UhpPoint random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> x(-3.0, 3.0), ly(-2.0, 2.0);
    return {x(rng), std::exp(ly(rng))};
}

bool close(UhpPoint a, UhpPoint b, double eps) { return std::abs(a.x - b.x) <= eps && std::abs(a.y - b.y) <= eps; }

}  // namespace

TEST_CASE("apply on the standard examples") {
    CHECK(close(S.apply(UhpPoint{0, 1}), {0, 1}, 1e-15));
    CHECK(close(T.apply(UhpPoint{0, 1}), {1, 1}, 1e-15));
    CHECK(close(Isometry(2, 0, 0, 0.5).apply(UhpPoint{0, 1}), {0, 4}, 1e-15));
}

TEST_CASE("compose and inverse") {
    CHECK(T * T == Isometry(1, 2, 0, 1));
    CHECK((S * S).is_identity(Arithmetic::ExactInteger));
    const Isometry g(2, 1, 1, 1);
    CHECK((g * g.inverse()).is_identity(Arithmetic::ExactInteger));
    CHECK(T.inverse() == Isometry(1, -1, 0, 1));
    CHECK(S.inverse() == S);
    CHECK(Isometry{}.inverse() == Isometry{});
}

TEST_CASE("canonical sign and normalisation") {
    const Isometry g(-1, -2, 0, -1);
    CHECK(g == Isometry(1, 2, 0, 1));
    const Isometry h(4, 0, 0, 1);  // det 4 -> scaled by 1/2
    CHECK(h.a() == doctest::Approx(2.0));
    CHECK(h.d() == doctest::Approx(0.5));
    CHECK_THROWS_AS(Isometry(0, 1, 1, 0), GeometryError);
    CHECK_THROWS_AS(UhpPoint(0, 0), GeometryError);
}

TEST_CASE("distance examples") {
    CHECK(dist({0, 1}, {0, 4}) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(dist({0, 1}, {0, 1}) == 0.0);
    CHECK(dist({0, 1}, {1, 1}) == doctest::Approx(std::acosh(1.5)).epsilon(1e-14));
}

TEST_CASE("classify and fixed points") {
    CHECK(classify(S) == IsometryKind::Elliptic);
    CHECK(classify(T) == IsometryKind::Parabolic);
    CHECK(classify(Isometry(2, 0, 0, 0.5)) == IsometryKind::Hyperbolic);
    CHECK(classify(Isometry{}) == IsometryKind::Identity);

    auto fs = fixed_points(S);
    REQUIRE(fs.size() == 1);
    CHECK(close(std::get<UhpPoint>(fs[0]), {0, 1}, 1e-15));
    fs = fixed_points(T);
    REQUIRE(fs.size() == 1);
    CHECK(std::get<BoundaryPoint>(fs[0]).is_infinity());
    fs = fixed_points(Isometry(2, 0, 0, 0.5));
    REQUIRE(fs.size() == 2);
    // repelling 0, attracting infinity for z -> 4z
    CHECK(std::get<BoundaryPoint>(fs[0]).value() == doctest::Approx(0.0));
    CHECK(std::get<BoundaryPoint>(fs[1]).is_infinity());
    CHECK_THROWS_AS(fixed_points(Isometry{}), GeometryError);
    CHECK(elliptic_order(S) == 2);
    CHECK(elliptic_order(S * T) == 3);
}

TEST_CASE("perpendicular bisectors") {
    SUBCASE("i and 4i: |z| = 2") {
        const Geodesic g = perp_bisector({0, 1}, {0, 4});
        const UhpPoint a = from_klein(0.5 * (g.e1 + g.e2));
        CHECK(std::hypot(a.x, a.y) == doctest::Approx(2.0));
        CHECK(g.contains_on_side({0, 1}));
    }
    SUBCASE("i and 1+i: Re z = 1/2") {
        const Geodesic g = perp_bisector({0, 1}, {1, 1});
        for (double t : {0.2, 0.5, 0.8}) {
            const UhpPoint w = from_klein(g.e1 + t * (g.e2 - g.e1));
            CHECK(w.x == doctest::Approx(0.5));
        }
    }
    SUBCASE("2i and i/2: |z| = 1") {
        const Geodesic g = perp_bisector({0, 2}, S.apply(UhpPoint{0, 2}));
        for (double t : {0.1, 0.5, 0.9}) {
            const UhpPoint w = from_klein(g.e1 + t * (g.e2 - g.e1));
            CHECK(std::hypot(w.x, w.y) == doctest::Approx(1.0));
        }
    }
    CHECK_THROWS_AS(perp_bisector({0, 1}, {0, 1}), GeometryError);
}

TEST_CASE("Klein chart") {
    const KleinPoint o = to_klein(UhpPoint{0, 1});
    CHECK(o.norm() < 1e-15);
    const UhpPoint z{0.3, 0.7};
    const UhpPoint back = from_klein(to_klein(z));
    CHECK(close(back, z, 1e-12));
    CHECK(to_klein(UhpPoint{0.4, 1e-9}).norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(from_klein({0.8, 0.7}), GeometryError);
    CHECK(boundary_from_klein(to_klein(BoundaryPoint::infinity())).is_infinity());
    CHECK(boundary_from_klein(to_klein(BoundaryPoint::real(-0.75))).value() == doctest::Approx(-0.75));
}

TEST_CASE("random properties") {
    std::mt19937_64 rng(7);
    double worst_inv = 0, worst_comp = 0, worst_bis = 0, worst_round = 0;
    for (int i = 0; i < 1000; ++i) {
        const Isometry g = random_isometry(rng), h = random_isometry(rng);
        const UhpPoint z1 = random_point(rng), z2 = random_point(rng);
        worst_inv = std::max(worst_inv, std::abs(dist(g.apply(z1), g.apply(z2)) - dist(z1, z2)));
        const UhpPoint a = (g * h).apply(z1), b = g.apply(h.apply(z1));
        worst_comp = std::max(worst_comp, dist(a, b));

        // classification against the trace
        const double t = std::abs(g.trace());
        const IsometryKind k = classify(g);
        if (t < 2.0 - 1e-9) CHECK(k == IsometryKind::Elliptic);
        if (t > 2.0 + 1e-9) CHECK(k == IsometryKind::Hyperbolic);

        if (dist(z1, z2) > 1e-6) {
            const Geodesic bis = perp_bisector(z1, z2);
            for (int s = 1; s <= 10; ++s) {
                const double u = s / 11.0;
                const UhpPoint w = from_klein(bis.e1 + u * (bis.e2 - bis.e1));
                worst_bis = std::max(worst_bis, std::abs(dist(w, z1) - dist(w, z2)));
            }
        }
        worst_round = std::max(worst_round, dist(from_klein(to_klein(z1)), z1));
    }
    CHECK(worst_inv <= 1e-10);
    CHECK(worst_comp <= 1e-10);
    CHECK(worst_bis <= 1e-9);
    CHECK(worst_round <= 1e-11);
}

TEST_CASE("geodesic_step walks along the segment") {
    const UhpPoint a{0.2, 0.5}, b{-1.0, 2.0};
    const double d = dist(a, b);
    const UhpPoint m = geodesic_step(a, b, 0.3 * d);
    CHECK(dist(a, m) == doctest::Approx(0.3 * d));
    CHECK(dist(m, b) == doctest::Approx(0.7 * d));
}

TEST_CASE("convex clipping keeps labels") {
    auto sq = klein::square(1.0);
    const HalfPlane hp{1.0, 0.0, 0.0};  // u <= 0
    auto half = klein::clip(sq, hp, 7);
    CHECK(half.size() == 4);
    CHECK(klein::signed_area(half) == doctest::Approx(2.0));
    int sevens = 0;
    for (int l : half.labels) sevens += l == 7;
    CHECK(sevens == 1);
    auto seg = klein::segment_in_disk({-2, 0}, {2, 0});
    REQUIRE(seg);
    CHECK(seg->first == doctest::Approx(0.25));
    CHECK(seg->second == doctest::Approx(0.75));
}
