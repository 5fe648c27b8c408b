#pragma once

#include "fgc/enumeration.hpp"
#include "fgc/klein.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fgc {

class DirichletError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested center is fixed by a non-identity element.
class EllipticCenterError : public DirichletError {
public:
    EllipticCenterError(const Isometry& stabilizer, const std::string& what)
        : DirichletError(what), stabilizer_(stabilizer) {}
    const Isometry& stabilizer() const { return stabilizer_; }

private:
    Isometry stabilizer_;
};

/// The ball's certificate does not cover the radius the question needs.
class InsufficientCertificate : public DirichletError {
public:
    using DirichletError::DirichletError;
};

enum class SideKind { Geodesic, Free, Horocyclic, NielsenCut };
enum class VertexKind { Ordinary, Elliptic, Cusp, IdealFree };

const char* to_string(SideKind kind);
const char* to_string(VertexKind kind);

struct PolygonVertex {
    KleinPoint klein;
    bool ideal = false;  // on the unit circle
    VertexKind kind = VertexKind::Ordinary;
    int order = 1;        // elliptic order (stabilizer size)
    double angle = 0.0;   // interior angle; 0 at ideal vertices
    std::optional<Isometry> witness;  // elliptic generator or parabolic stabilizer
    bool unresolved = false;          // ideal vertex between two sides without a parabolic witness

    UhpPoint point() const { return from_klein(klein); }
    BoundaryPoint boundary() const { return boundary_from_klein(klein); }
};

/// Side i runs counter-clockwise from vertex i to vertex i+1.
struct PolygonSide {
    SideKind kind = SideKind::Geodesic;
    std::optional<Isometry> pairing;  // geodesic sides: the side lies on bisector(z0, pairing z0)
    int partner = -1;                 // side mapped onto this one by `pairing`
    HalfPlane half_plane;             // supporting half-plane containing the polygon (not for free/horocyclic)
    double length = 0.0;              // horocyclic arcs
    int cusp = -1;                    // horocyclic arcs: index into removed horoballs
};

/// {Im(C^-1 z) > height}: a horoball at C(∞).
struct Horoball {
    BoundaryPoint cusp = BoundaryPoint::infinity();
    double height = 1.0;
    Isometry conjugator;  // maps ∞ to the cusp
    Isometry stabilizer;  // parabolic generator fixing the cusp
    double width = 1.0;   // translation length of C^-1 stabilizer C

    bool contains(UhpPoint z, double eps = 0.0) const;
};

struct DirichletPolygon {
    UhpPoint center;
    Arithmetic mode = Arithmetic::Floating;
    std::vector<PolygonVertex> vertices;
    std::vector<PolygonSide> sides;
    bool whole_plane = false;
    Certificate source_certificate;
    std::size_t source_size = 0;
    std::vector<Horoball> removed;  // horoballs cut away by truncation

    bool has_free_sides() const;
    bool has_ideal_vertices() const;
    bool compact() const { return !whole_plane && !has_ideal_vertices(); }

    /// Distinct pairing elements of the geodesic sides.
    std::vector<Isometry> side_pairings() const;

    /// Closed membership test with tolerance `eps` on the Klein half-planes.
    bool contains(UhpPoint z, double eps = 1e-9) const;

    /// Convex Klein polygon bounded by every geodesic or cut side (extends past
    /// the circle at free sides).
    klein::ConvexPolygon klein_region() const;

    /// Largest distance from the center to a finite vertex (inf if none bound it).
    double finite_radius() const;
};

/// All z with d(z, z0) <= d(z, g z0) for g in the ball. Needs a Complete
/// certificate of radius >= 2 d(z, z0).
bool membership(UhpPoint z, UhpPoint z0, const GroupBall& ball);

/// Intersection of the z0-side bisector half-planes over the ball.
DirichletPolygon build_polygon(UhpPoint z0, const GroupBall& ball);

struct VertexCycle {
    std::vector<int> vertices;
    std::vector<double> angles;
    int order = 1;
    double angle_sum() const;
};

/// Finite vertices grouped by congruence under ball elements.
std::vector<VertexCycle> vertex_cycles(const DirichletPolygon& P, const GroupBall& ball);
std::vector<VertexCycle> elliptic_cycles(const DirichletPolygon& P, const GroupBall& ball);

struct CuspVertex {
    int vertex = -1;
    BoundaryPoint point = BoundaryPoint::infinity();
    Isometry stabilizer;
};
std::vector<CuspVertex> cusp_vertices(const DirichletPolygon& P);

/// Gauss-Bonnet area (horocyclic arcs count with curvature -1); +inf with
/// free sides or for the whole plane.
double area(const DirichletPolygon& P);

/// Elements g of the ball with g P ∩ P ≠ ∅ (closed sets, tolerance 1e-9).
std::vector<Isometry> gamma_F(const DirichletPolygon& P, const GroupBall& ball);

/// Checks that make the side pairings a presentation of the group with P as
/// fundamental domain: paired sides match, vertex cycles close up with the
/// right angle sums, and every generator reduces into P.
struct ValidationReport {
    bool ok = false;
    std::string reason;
    std::vector<Isometry> residues;  // group elements whose bisectors were missing
};
ValidationReport validate_domain(const DirichletPolygon& P, const GroupPresentation& group);

struct DomainOptions {
    double initial_radius = 3.0;
    double max_radius = 16.0;
    EnumerationLimits limits = EnumerationLimits::from_environment();
};

namespace detail {
struct SideLabel {
    SideKind kind = SideKind::Geodesic;
    std::optional<Isometry> pairing;
    HalfPlane half_plane;
};
/// Turns a clipped Klein polygon into sides and vertices (angles included,
/// vertex kinds left Ordinary/IdealFree, partners unset).
DirichletPolygon assemble(UhpPoint z0, Arithmetic mode, klein::ConvexPolygon poly,
                          const std::vector<SideLabel>& labels);
/// Splits self-paired sides at their order-2 fixed point and matches partners.
void pair_sides(DirichletPolygon& P);
/// Elliptic stabilizers of finite vertices and parabolic witnesses at ideal ones.
void classify_vertices(DirichletPolygon& P, const GroupBall& ball);
double interior_angle(UhpPoint v, UhpPoint toward_prev, UhpPoint toward_next);
}  // namespace detail

/// Validated Dirichlet domain with a cache of certified balls. Throws
/// EllipticCenterError, or DirichletError when no radius up to the maximum validates.
class Domain {
public:
    Domain(GroupPresentation group, UhpPoint z0, DomainOptions options = {});

    const GroupPresentation& group() const { return group_; }
    UhpPoint center() const { return z0_; }
    const DirichletPolygon& polygon() const { return polygon_; }
    const std::vector<Isometry>& side_pairings() const { return pairings_; }
    Arithmetic mode() const { return group_.mode; }

    /// Certified ball with radius at least R (the cached one may be larger).
    const GroupBall& ball(double R);

    /// Certified ball of exactly radius R, built fresh.
    GroupBall ball_exact(double R) const;

    /// Largest certified ball built so far.
    const GroupBall& cached_ball() const { return cache_; }

private:
    GroupBall make_ball(double R) const;

    GroupPresentation group_;
    UhpPoint z0_;
    DomainOptions options_;
    DirichletPolygon polygon_;
    std::vector<Isometry> pairings_;
    bool entry_scan_ = false;
    GroupBall cache_;
};

}  // namespace fgc
