#include <doctest.h>

#include "fgc/surface.hpp"
#include "support.hpp"

#include <cmath>

using namespace fgc;
using namespace fgc::testing;

namespace {

struct Modular {
    Domain D{modular(), {0, 2}};
    SuiteOracle answers;
    CoverCandidate full, reduced;

    Modular() {
        answers = evaluate_suite(make_pair_suite(D.polygon(), 600, 0), DistanceOracle(D));
        full = empty_cover(D);
        for (const auto& g : gamma_F(D.polygon(), D.ball(6.0))) full.add(g, Provenance::Manual);
        full.verification = verify_second_cover(full, answers).summary();
        reduced = reduce_cover(full, answers);
    }
};

Modular& modular_fixture() {
    static Modular m;
    return m;
}

}  // namespace

TEST_CASE("surface distance examples") {
    auto& m = modular_fixture();
    REQUIRE(m.full.verification->verified);
    const auto p = surface_point(m.D.polygon(), {0, 2});
    const auto q = surface_point(m.D.polygon(), {0.4, 2});
    CHECK(surface_distance(p, p, m.full) == doctest::Approx(0.0));
    // acosh(1.02) = 0.1996682; the quoted 0.199666 is good to 5 digits
    CHECK(surface_distance(p, q, m.full) == doctest::Approx(std::acosh(1.02)).epsilon(1e-12));
    CHECK(surface_distance(p, q, m.full) == doctest::Approx(0.199666).epsilon(1e-5));
    CHECK_THROWS_AS(surface_point(m.D.polygon(), {0, 0.5}), SurfaceError);
}

TEST_CASE("unverified covers are refused unless forced") {
    auto& m = modular_fixture();
    CoverCandidate C = m.full;
    C.verification.reset();
    const auto p = surface_point(m.D.polygon(), {0, 2});
    CHECK_THROWS_AS(surface_distance(p, p, C), UnverifiedCoverError);
    CHECK(surface_distance(p, p, C, true) == doctest::Approx(0.0));
    CHECK_THROWS_AS(distinct_distances({p, p}, C), UnverifiedCoverError);
}

TEST_CASE("surface metric properties") {
    auto& m = modular_fixture();
    const auto& P = m.D.polygon();
    const auto pts = random_points(P, 300, 11);
    const auto brute = integer_matrices(6);
    for (std::size_t i = 0; i + 1 < 200; i += 2) {
        const SurfacePoint p{pts[i]}, q{pts[i + 1]};
        const double d = surface_distance(p, q, m.full);
        CHECK(d == doctest::Approx(surface_distance(q, p, m.full)).epsilon(1e-12));
        // cover independence, and agreement with a direct scan
        CHECK(std::abs(d - surface_distance(p, q, m.reduced)) <= 1e-9);
        CHECK(std::abs(d - brute_min(brute, pts[i], pts[i + 1])) <= 1e-9);
    }
    for (std::size_t i = 0; i + 2 < 300; i += 3) {
        const SurfacePoint p{pts[i]}, q{pts[i + 1]}, r{pts[i + 2]};
        CHECK(surface_distance(p, r, m.full) <= surface_distance(p, q, m.full) + surface_distance(q, r, m.full) + 1e-8);
    }
}

TEST_CASE("orbit reduction lands in the domain") {
    auto& m = modular_fixture();
    const auto& P = m.D.polygon();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> X(-20, 20), Y(0.05, 3);
    const auto brute = integer_matrices(7);
    for (int i = 0; i < 100; ++i) {
        const UhpPoint z{X(rng), Y(rng)};
        const auto s = reduce_to_domain(P, z);
        CHECK(P.contains(s.rep, 1e-9));
        // same orbit: some integer matrix carries z to the representative
        const Isometry shift = Isometry::translation(-std::round(z.x));
        CHECK(brute_min(brute, shift.apply(z), s.rep) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("distinct distances") {
    auto& m = modular_fixture();
    const auto& P = m.D.polygon();
    CHECK(distinct_distance_bound(100, 10) == doctest::Approx(100.0 / (1000.0 * std::log(1000.0))).epsilon(1e-12));
    CHECK(distinct_distance_bound(100, 10) == doctest::Approx(0.014477).epsilon(1e-4));

    const auto two = distinct_distances({{{0, 2}}, {{0.3, 1.5}}}, m.full);
    CHECK(two.count == 1);
    CHECK(two.values.size() == 1);

    // lattice-like points: a 4 x 5 grid inside P
    std::vector<SurfacePoint> grid;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 5; ++j) grid.push_back(surface_point(P, {-0.45 + 0.3 * i, 1.0 + 0.4 * j}));
    const auto r = distinct_distances(grid, m.full);
    CHECK(r.n == 20);
    CHECK(r.values.size() == 190);
    CHECK(r.count <= 190);
    CHECK(static_cast<double>(r.count) >= r.bound);
    CHECK(r.K == m.full.size());
    CHECK(r.normalization.find("c = 1") != std::string::npos);
    // the grid is symmetric under x -> -x, so some distances repeat
    CHECK(r.count < 190);

    auto shuffled = grid;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(9));
    CHECK(distinct_distances(shuffled, m.full).count == r.count);

    // single linkage: values chained within tol collapse into one
    CHECK(distinct_distances(grid, m.full, 10.0).count == 1);
}
