#pragma once

#include "fgc/cover.hpp"

#include <string>
#include <vector>

namespace fgc {

class SurfaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a distance query is made through a cover that has not verified.
class UnverifiedCoverError : public SurfaceError {
public:
    using SurfaceError::SurfaceError;
};

/// A point of the quotient surface, by its representative in the polygon.
struct SurfacePoint {
    UhpPoint rep;
};

/// Throws SurfaceError when z is not in P (tolerance eps in the Klein chart).
SurfacePoint surface_point(const DirichletPolygon& P, UhpPoint z, double eps = 1e-7);

/// Moves z into P by the side pairings: while z is beyond the bisector of
/// (z0, g z0) it is replaced by g^-1 z, which is strictly closer to z0.
SurfacePoint reduce_to_domain(const DirichletPolygon& P, UhpPoint z, int max_steps = 10000);

/// min over C of d(p, g q). Refuses an unverified cover unless `force`.
double surface_distance(const SurfacePoint& p, const SurfacePoint& q, const CoverCandidate& C, bool force = false);

struct DistinctDistanceReport {
    std::size_t n = 0;
    std::size_t count = 0;      // distinct values after single-linkage at `tolerance`
    double tolerance = 1e-7;
    std::size_t K = 0;          // cover size used in the bound
    double bound = 0.0;         // N / (K^3 ln(K N))
    std::string normalization = "normalized: c = 1, natural log";
    std::vector<double> values;  // all N(N-1)/2 pairwise distances, sorted
};

double distinct_distance_bound(std::size_t N, std::size_t K);

/// K defaults to |C| when zero.
DistinctDistanceReport distinct_distances(const std::vector<SurfacePoint>& points, const CoverCandidate& C,
                                          double tolerance = 1e-7, bool force = false, std::size_t K = 0);

}  // namespace fgc
