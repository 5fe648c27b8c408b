#pragma once

#include "fgc/dirichlet.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fgc {

class CoverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- oracle ------------------------------------------------------------------

struct CertifiedDistance {
    double value = 0.0;
    Isometry realizer;
    std::vector<Isometry> ties;  // every element within the tie tolerance of the minimum
    double runner_up = std::numeric_limits<double>::infinity();  // best value among non-ties (if asked)
    double certificate_radius = 0.0;
    bool certified = false;
};

/// min over the group of dist(p, g q), scanning the domain's certified ball
/// until d(z0, g z0) - d(p, z0) - d(q, z0) exceeds the running minimum.
class DistanceOracle {
public:
    explicit DistanceOracle(Domain& domain, double tie_tol = 1e-9) : domain_(domain), tie_tol_(tie_tol) {}

    CertifiedDistance operator()(UhpPoint p, UhpPoint q, bool want_runner_up = false) const;
    Domain& domain() const { return domain_; }
    double tie_tolerance() const { return tie_tol_; }

private:
    Domain& domain_;
    double tie_tol_;
};

CertifiedDistance certified_min_distance(UhpPoint p, UhpPoint q, Domain& domain);
CertifiedDistance certified_min_distance(UhpPoint p, UhpPoint q, const GroupPresentation& group, UhpPoint z0);

// ---- sampling ------------------------------------------------------------------

struct SamplingSpec {
    int grid = 64;        // Klein bounding-box grid per axis
    int boundary = 256;   // points spread along the sides
    double radius_cap = 3.0;  // drop samples farther than this from the center
    std::vector<UhpPoint> points;  // always included
};

/// Grid, boundary and vertex samples of P (removed horoballs excluded).
std::vector<UhpPoint> sample_domain(const DirichletPolygon& P, const SamplingSpec& spec);

/// Finite vertices, and the feet of the bisectors (midpoint of z0 and g z0) that
/// lie on their sides; these pair up exactly under the side pairings.
std::vector<UhpPoint> special_points(const DirichletPolygon& P, double radius_cap);

struct PairSuite {
    std::vector<std::pair<UhpPoint, UhpPoint>> pairs;
    std::uint64_t seed = 0;
    double radius_cap = 3.0;
};

/// Deterministic pairs from P x P: every pair of special points, then grid,
/// boundary-to-random and random pairs up to `count`.
PairSuite make_pair_suite(const DirichletPolygon& P, std::size_t count, std::uint64_t seed, double radius_cap = 3.0);

// ---- covers --------------------------------------------------------------------

enum class Provenance { BasicU, TruncatedU, NielsenU, Lifted, Manual };
enum class CoverKind { First, Second };
const char* to_string(Provenance p);
const char* to_string(CoverKind k);

struct CoverElement {
    Isometry element;
    Provenance provenance = Provenance::Manual;
    bool extra = false;  // outside the truncated/clipped construction, found from the removed regions
};

struct VerificationSummary {
    bool verified = false;
    std::size_t pairs = 0;
    std::size_t failures = 0;
    std::uint64_t seed = 0;
    bool all_certified = true;
};

struct CoverCandidate {
    UhpPoint center;
    CoverKind kind = CoverKind::Second;
    Arithmetic mode = Arithmetic::Floating;
    std::string group_label;
    std::vector<CoverElement> elements;
    std::optional<VerificationSummary> verification;

    /// Adds g unless already present; returns whether it was new.
    bool add(const Isometry& g, Provenance p, bool extra = false);
    bool contains(const Isometry& g) const;
    std::vector<Isometry> isometries(bool with_extras = true) const;
    std::size_t size() const { return elements.size(); }
    std::size_t core_size() const;
};

CoverCandidate empty_cover(const Domain& domain, CoverKind kind = CoverKind::Second);

/// Realizers of min_g d(z, g w) over sampled z, w in P (ties included): the
/// elements g with g P meeting the union of the Dirichlet domains D(z).
CoverCandidate build_basic_cover(const DirichletPolygon& P, Domain& domain, const SamplingSpec& sampling);

// ---- cusps -----------------------------------------------------------------------

/// Per cusp vertex, the first height t in {1, 2, 4, ...} x width with
/// |c'| t >= 1 for every conjugated ball element with c' != 0, the horoball
/// clear of the other vertices and sides of P, and horoballs pairwise disjoint.
std::vector<Horoball> select_horoballs(const DirichletPolygon& P, const GroupBall& ball);

/// Checks the stabilizer property over the ball: g U meets U only for g fixing the cusp.
bool horoball_precisely_invariant(const Horoball& h, const GroupBall& ball);

/// Replaces each cusp vertex by a horocyclic side.
DirichletPolygon truncate(const DirichletPolygon& P, const std::vector<Horoball>& horoballs);

/// Samples z, w in the truncated polygon; realizers from pairs with a point in a
/// removed horoball that the core misses are added as extras.
CoverCandidate build_truncated_cover(const DirichletPolygon& P, Domain& domain, const std::vector<Horoball>& horoballs,
                                     const SamplingSpec& sampling);

// ---- second kind -------------------------------------------------------------------

/// Arc of the unit circle in the Klein chart, counter-clockwise from `start` to `end`.
struct BoundaryInterval {
    double start = 0.0;
    double end = 0.0;
    double length() const;
    bool covers(const BoundaryInterval& other, double eps = 1e-12) const;
    BoundaryPoint a() const { return boundary_from_klein(circle_point(start)); }
    BoundaryPoint b() const { return boundary_from_klein(circle_point(end)); }
};

/// Images of the free sides of P under word_ball(depth), merged.
std::vector<BoundaryInterval> nielsen_intervals(const DirichletPolygon& P, const GroupPresentation& group, int depth);

/// P cut by the chord over each interval, keeping the side away from the arc.
DirichletPolygon nielsen_clip(const DirichletPolygon& P, const std::vector<BoundaryInterval>& intervals);

CoverCandidate build_nielsen_cover(const DirichletPolygon& P, Domain& domain, int depth, const SamplingSpec& sampling);

// ---- finite index --------------------------------------------------------------------

/// H0 g1 ∪ ... ∪ H0 gn.
CoverCandidate lift_cover(const CoverCandidate& h_cover, const std::vector<Isometry>& coset_reps);

// ---- verification ----------------------------------------------------------------------

struct VerificationFailure {
    UhpPoint p, q;
    double cover_min = 0.0;
    double oracle_min = 0.0;
    Isometry realizer;
    bool uncertified = false;  // the oracle could not certify this pair
};

struct VerificationReport {
    std::size_t pairs_tested = 0;
    std::vector<VerificationFailure> failures;
    bool all_certified = true;
    bool verified = false;
    std::uint64_t seed = 0;
    VerificationSummary summary() const;
};

/// Oracle answers for every pair of a suite, computed once.
struct SuiteOracle {
    std::vector<std::pair<UhpPoint, UhpPoint>> pairs;
    std::vector<CertifiedDistance> answers;  // runner-up included
    std::uint64_t seed = 0;
};
SuiteOracle evaluate_suite(const PairSuite& suite, const DistanceOracle& oracle);

/// min over C of d(p, g q) against the oracle on every pair, tolerance 1e-9.
VerificationReport verify_second_cover(const std::vector<Isometry>& elements, const SuiteOracle& answers);
VerificationReport verify_second_cover(const CoverCandidate& C, const SuiteOracle& answers);

/// C^-1 C as a second cover.
std::vector<Isometry> inverse_products(const std::vector<Isometry>& C, Arithmetic mode);
VerificationReport verify_first_cover(const CoverCandidate& C, const SuiteOracle& answers);

struct NecessityWitness {
    Isometry element;
    bool necessary = false;
    UhpPoint p, q;        // oracle minimum realized only by `element`
    double margin = 0.0;  // runner-up minus minimum
};

/// For each element, a pair whose oracle minimum is realized by that element
/// alone (searched over the suite, then pairs straddling P ∩ gP).
std::vector<NecessityWitness> necessity_probe(const CoverCandidate& C, const DirichletPolygon& P,
                                              const DistanceOracle& oracle, const SuiteOracle& answers);

/// Greedy removal (largest displacement first) keeping verification on the suite.
CoverCandidate reduce_cover(const CoverCandidate& C, const SuiteOracle& answers);

struct FirstCoverSearch {
    std::optional<CoverCandidate> cover;
    std::size_t subsets_tried = 0;
    std::size_t pool_size = 0;
};

/// Smallest C (identity included, other elements from `pool`) whose C^-1 C
/// contains `required` and verifies as a second cover on the suite.
FirstCoverSearch search_first_cover(const Domain& domain, const std::vector<Isometry>& pool,
                                    const std::vector<Isometry>& required, const SuiteOracle& answers, int max_size);

}  // namespace fgc
