#include <doctest.h>

#include "support.hpp"

#include <cmath>

using namespace fgc;
using namespace fgc::testing;

namespace {
SamplingSpec quick() {
    SamplingSpec s;
    s.grid = 24;
    s.boundary = 128;
    return s;
}
}  // namespace

TEST_CASE("oracle examples") {
    Domain M(modular(), {0, 2});
    auto r = certified_min_distance({0, 2}, {0.4, 2}, M);
    CHECK(r.certified);
    CHECK(r.value == doctest::Approx(std::acosh(1.02)).epsilon(1e-12));
    CHECK(r.realizer.is_identity(Arithmetic::ExactInteger));

    Domain C(cyclic4(), {0, 1});
    r = certified_min_distance({0, 1}, {0, 3.9}, C);
    CHECK(r.value == doctest::Approx(std::log(1.0 / 0.975)).epsilon(1e-12));
    CHECK(elements_equal(r.realizer, G4.inverse(), Arithmetic::Floating));

    r = certified_min_distance({0.1, 1.3}, {0.1, 1.3}, M);
    CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("oracle matches brute force") {
    SUBCASE("modular") {
        Domain D(modular(), {0, 2});
        const DistanceOracle oracle(D);
        const auto els = integer_matrices(6);
        const auto pts = random_points(D.polygon(), 60, 1);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) CHECK(oracle(pts[i], pts[i + 1]).value == doctest::Approx(brute_min(els, pts[i], pts[i + 1])).epsilon(1e-10));
    }
    SUBCASE("gamma2") {
        Domain D(gamma2(), {0, 1.5});
        const DistanceOracle oracle(D);
        const auto els = integer_matrices(8, congruent_gamma2);
        const auto pts = random_points(D.polygon(), 60, 2);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) CHECK(oracle(pts[i], pts[i + 1]).value == doctest::Approx(brute_min(els, pts[i], pts[i + 1])).epsilon(1e-10));
    }
    SUBCASE("cyclic4, points anywhere") {
        Domain D(cyclic4(), {0, 1});
        const DistanceOracle oracle(D);
        const auto els = powers(G4, 40);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> U(-3, 3), V(0.05, 5);
        for (int i = 0; i < 50; ++i) {
            const UhpPoint p{U(rng), V(rng)}, q{U(rng), V(rng)};
            CHECK(oracle(p, q).value == doctest::Approx(brute_min(els, p, q)).epsilon(1e-10));
        }
    }
}

TEST_CASE("ties and runner-up") {
    Domain D(modular(), {0, 2});
    const DistanceOracle oracle(D);
    // rho and rho' are the same point of the surface
    const UhpPoint rho{0.5, std::sqrt(3) / 2}, rho2{-0.5, std::sqrt(3) / 2};
    const auto r = oracle(rho, rho2, true);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.ties.size() >= 2);
    const auto s = oracle({0, 2}, {0.4, 2}, true);
    CHECK(s.ties.size() == 1);
    CHECK(s.runner_up > s.value + 0.05);
}

TEST_CASE("pair suite is deterministic and lies in P") {
    Domain D(modular(), {0, 2});
    const auto a = make_pair_suite(D.polygon(), 500, 7), b = make_pair_suite(D.polygon(), 500, 7);
    REQUIRE(a.pairs.size() == 500);
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(a.pairs[i].first == b.pairs[i].first);
        CHECK(D.polygon().contains(a.pairs[i].first, 1e-7));
        CHECK(D.polygon().contains(a.pairs[i].second, 1e-7));
    }
    const auto c = make_pair_suite(D.polygon(), 500, 8);
    CHECK_FALSE(a.pairs.back().first == c.pairs.back().first);
}

TEST_CASE("horoballs") {
    SUBCASE("modular cusp at infinity, t = 1") {
        Domain D(modular(), {0, 2});
        const auto hb = select_horoballs(D.polygon(), D.ball(4.0));
        REQUIRE(hb.size() == 1);
        CHECK(hb[0].cusp.is_infinity());
        CHECK(hb[0].width == doctest::Approx(1.0));
        CHECK(hb[0].height == doctest::Approx(1.0));
        CHECK(horoball_precisely_invariant(hb[0], D.ball(4.0)));
        // t = 1/2 fails: S moves Im z > 1/2 onto itself near i
        Horoball low = hb[0];
        low.height = 0.5;
        CHECK_FALSE(horoball_precisely_invariant(low, D.ball(4.0)));
    }
    SUBCASE("translation group: first height of the schedule") {
        Domain D({{T}, Arithmetic::ExactInteger, true, "T"}, {0, 1});
        const auto hb = select_horoballs(D.polygon(), D.ball(4.0));
        REQUIRE(hb.size() == 1);
        CHECK(hb[0].height == doctest::Approx(hb[0].width));
    }
    SUBCASE("no cusps") {
        Domain D(cyclic4(), {0, 1});
        CHECK(select_horoballs(D.polygon(), D.ball(4.0)).empty());
    }
    SUBCASE("gamma2: four cusps, disjoint horoballs") {
        Domain D(gamma2(), {0, 1.5});
        const auto hb = select_horoballs(D.polygon(), D.ball(4.0));
        REQUIRE(hb.size() == 4);
        for (const auto& h : hb) CHECK(horoball_precisely_invariant(h, D.ball(4.0)));
        // disjointness by sampling: no point lies in two of them
        const auto pts = random_points(D.polygon(), 400, 4, 6.0);
        for (const auto& z : pts) {
            int in = 0;
            for (const auto& h : hb) in += h.contains(z);
            CHECK(in <= 1);
        }
    }
}

TEST_CASE("truncation") {
    Domain D(modular(), {0, 2});
    const auto hb = select_horoballs(D.polygon(), D.ball(4.0));
    const auto Q = truncate(D.polygon(), hb);
    CHECK(Q.compact());
    CHECK(area(Q) == doctest::Approx(kPi / 3 - 1).epsilon(1e-9));
    int arcs = 0;
    for (const auto& s : Q.sides) arcs += s.kind == SideKind::Horocyclic;
    CHECK(arcs == 1);
    // partners still pair congruent sides
    for (std::size_t i = 0; i < Q.sides.size(); ++i)
        if (Q.sides[i].kind == SideKind::Geodesic && Q.sides[i].partner >= 0)
            CHECK(Q.sides[static_cast<std::size_t>(Q.sides[i].partner)].kind == SideKind::Geodesic);
    CHECK(Q.contains({0.3, 0.98}));
    CHECK_FALSE(Q.contains({0, 1.5}));

    Horoball far = hb[0];
    far.height = 1e6;
    CHECK(area(truncate(D.polygon(), {far})) == doctest::Approx(kPi / 3).epsilon(1e-5));
}

TEST_CASE("nielsen intervals for <(1,3;0,1), (1,0;3,1)>") {
    const auto G = schottky3();
    Domain D(G, {0, 1});
    const auto& P = D.polygon();

    const auto I0 = nielsen_intervals(P, G, 0);
    REQUIRE(I0.size() == 2);
    std::vector<std::pair<double, double>> free;
    for (std::size_t i = 0; i < P.sides.size(); ++i)
        if (P.sides[i].kind == SideKind::Free)
            free.push_back({P.vertices[i].boundary().value(), P.vertices[(i + 1) % P.sides.size()].boundary().value()});
    REQUIRE(free.size() == 2);
    for (const auto& I : I0) {
        const double a = I.a().value(), b = I.b().value();
        CHECK(std::any_of(free.begin(), free.end(), [&](auto f) { return std::abs(f.first - a) < 1e-9 && std::abs(f.second - b) < 1e-9; }));
    }

    // depth 1 by hand: the free sides are [-3/2, -2/3] and [2/3, 3/2]; under
    // z+3, z-3, z/(3z+1), z/(1-3z) they chain into [3/7, 7/3] and [-7/3, -3/7]
    const auto I1 = nielsen_intervals(P, G, 1);
    auto find = [&](double a, double b) {
        return std::any_of(I1.begin(), I1.end(), [&](const BoundaryInterval& I) {
            return !I.a().is_infinity() && !I.b().is_infinity() && std::abs(I.a().value() - a) < 1e-9 && std::abs(I.b().value() - b) < 1e-9;
        });
    };
    CHECK(find(3.0 / 7, 7.0 / 3));
    CHECK(find(-7.0 / 3, -3.0 / 7));
    CHECK(find(11.0 / 3, 4.5));
    CHECK(I1.size() == 6);

    // deeper words only shrink the complement; clipped areas decrease towards 2 pi
    double prev = std::numeric_limits<double>::infinity();
    std::vector<BoundaryInterval> last = I0;
    for (int d = 0; d <= 3; ++d) {
        const auto I = nielsen_intervals(P, G, d);
        for (const auto& J : last)
            CHECK(std::any_of(I.begin(), I.end(), [&](const BoundaryInterval& K) { return K.covers(J, 1e-9); }));
        const double A = area(nielsen_clip(P, I));
        CHECK(std::isfinite(A));
        CHECK(A < prev + 1e-9);
        CHECK(A > 2 * kPi - 1e-9);
        prev = A;
        last = I;
    }
    CHECK(area(P) == std::numeric_limits<double>::infinity());
}

TEST_CASE("cyclic cover {id, g, g^-1}") {
    Domain D(cyclic4(), {0, 1});
    const DistanceOracle oracle(D);
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 1000, 0), oracle);
    CoverCandidate C = empty_cover(D);
    C.add(Isometry{}, Provenance::Manual);
    CHECK(!verify_second_cover(C, answers).verified);
    C.add(G4, Provenance::Manual);
    C.add(G4.inverse(), Provenance::Manual);
    const auto rep = verify_second_cover(C, answers);
    CHECK(rep.verified);
    CHECK(rep.all_certified);
    for (const auto& w : necessity_probe(C, D.polygon(), oracle, answers)) {
        CHECK(w.necessary);
        // an independent look at the witness
        const auto els = powers(G4, 30);
        double best = 1e300, second = 1e300;
        for (const auto& g : els) {
            const double v = dist(w.p, g.apply(w.q));
            if (v < best) {
                second = best;
                best = v;
            } else if (v < second) {
                second = v;
            }
        }
        CHECK(dist(w.p, w.element.apply(w.q)) == doctest::Approx(best).epsilon(1e-12));
        CHECK(second - best > 1e-8);
    }
    // the construction finds the same set
    const auto B = build_basic_cover(D.polygon(), D, quick());
    CHECK(B.size() == 3);
    CHECK(verify_second_cover(B, answers).verified);
}

TEST_CASE("failure report carries the witness") {
    Domain D(modular(), {0, 2});
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 300, 0), DistanceOracle(D));
    CoverCandidate C = empty_cover(D);
    C.add(Isometry{}, Provenance::Manual);
    const auto rep = verify_second_cover(C, answers);
    REQUIRE_FALSE(rep.failures.empty());
    const auto& f = rep.failures.front();
    CHECK(f.cover_min > f.oracle_min + 1e-9);
    CHECK(dist(f.p, f.q) == doctest::Approx(f.cover_min));
    CHECK(dist(f.p, f.realizer.apply(f.q)) == doctest::Approx(f.oracle_min).epsilon(1e-9));
}

TEST_CASE("lifting from <g^2> to <g>") {
    Domain H(GroupPresentation{{G4 * G4}, Arithmetic::Floating, true, "g2"}, {0, 1});
    Domain D(cyclic4(), {0, 1});
    CoverCandidate H0 = empty_cover(H);
    H0.add(Isometry{}, Provenance::Manual);
    H0.add(G4 * G4, Provenance::Manual);
    H0.add((G4 * G4).inverse(), Provenance::Manual);
    const auto answers_h = evaluate_suite(make_pair_suite(H.polygon(), 500, 0), DistanceOracle(H));
    CHECK(verify_second_cover(H0, answers_h).verified);

    const auto C = lift_cover(H0, {Isometry{}, G4});
    CHECK(C.size() <= H0.size() * 2);
    for (const auto& e : C.elements) CHECK(e.provenance == Provenance::Lifted);
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 500, 0), DistanceOracle(D));
    CHECK(verify_second_cover(C, answers).verified);
}

TEST_CASE("reduction and first covers on the modular group") {
    Domain D(modular(), {0, 2});
    const DistanceOracle oracle(D);
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 600, 0), oracle);
    CoverCandidate C = empty_cover(D);
    for (const auto& g : gamma_F(D.polygon(), D.ball(6.0))) C.add(g, Provenance::Manual);
    REQUIRE(C.size() == 10);
    CHECK(verify_second_cover(C, answers).verified);

    const auto R = reduce_cover(C, answers);
    CHECK(R.size() <= C.size());
    CHECK(R.verification);
    CHECK(R.verification->verified);
    CHECK(R.contains(Isometry{}));
    // every element left is needed by some suite pair
    for (std::size_t k = 0; k < R.size(); ++k) {
        if (R.elements[k].element.is_identity(Arithmetic::ExactInteger)) continue;
        CoverCandidate smaller = R;
        smaller.elements.erase(smaller.elements.begin() + static_cast<std::ptrdiff_t>(k));
        CHECK_FALSE(verify_second_cover(smaller, answers).verified);
    }

    // C^-1 C of a first cover contains C
    const auto F = search_first_cover(D, C.isometries(), R.isometries(), answers, 4);
    REQUIRE(F.cover);
    CHECK(F.cover->kind == CoverKind::First);
    CHECK(verify_first_cover(*F.cover, answers).verified);
    const auto prods = inverse_products(F.cover->isometries(), Arithmetic::ExactInteger);
    for (const auto& g : F.cover->isometries()) CHECK(has(prods, g, Arithmetic::ExactInteger));
    for (const auto& g : R.isometries()) CHECK(has(prods, g, Arithmetic::ExactInteger));
}

TEST_CASE("monotonicity: supersets of verified covers verify") {
    Domain D(gamma2(), {0, 1.5});
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 400, 1), DistanceOracle(D));
    const auto C = build_truncated_cover(D.polygon(), D, select_horoballs(D.polygon(), D.ball(4.0)), quick());
    REQUIRE(verify_second_cover(C, answers).verified);
    auto bigger = C;
    for (const auto& e : D.ball(3.0).elements()) bigger.add(e.element, Provenance::Manual);
    CHECK(verify_second_cover(bigger, answers).verified);
}

TEST_CASE("torsion-free groups: verified covers contain gamma_F") {
    SUBCASE("cyclic4") {
        Domain D(cyclic4(), {0, 1});
        const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 500, 0), DistanceOracle(D));
        const auto C = build_basic_cover(D.polygon(), D, quick());
        REQUIRE(verify_second_cover(C, answers).verified);
        const auto R = reduce_cover(C, answers);
        for (const auto& g : gamma_F(D.polygon(), D.ball(4.0))) {
            CHECK(C.contains(g));
            CHECK(R.contains(g));
        }
    }
    SUBCASE("gamma2") {
        Domain D(gamma2(), {0, 1.5});
        const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 500, 0), DistanceOracle(D));
        const auto C = build_truncated_cover(D.polygon(), D, select_horoballs(D.polygon(), D.ball(4.0)), quick());
        REQUIRE(verify_second_cover(C, answers).verified);
        const auto R = reduce_cover(C, answers);
        const auto GF = gamma_F(D.polygon(), D.ball(6.0));
        CHECK(GF.size() > 1);
        for (const auto& g : GF) {
            CHECK(C.contains(g));
            CHECK(R.contains(g));
        }
    }
}

TEST_CASE("second-kind pipeline") {
    Domain D(schottky3(), {0, 1});
    const auto C = build_nielsen_cover(D.polygon(), D, 2, quick());
    CHECK(C.size() < 40);
    for (const auto& e : C.elements) CHECK(e.provenance == Provenance::NielsenU);
    const auto answers = evaluate_suite(make_pair_suite(D.polygon(), 500, 0), DistanceOracle(D));
    CHECK(verify_second_cover(C, answers).verified);
}
