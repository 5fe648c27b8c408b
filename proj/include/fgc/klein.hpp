#pragma once

#include "fgc/isometry.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace fgc::klein {

inline constexpr int kBoxLabel = -1;

/// Euclidean convex polygon in the Klein chart; edge i runs from vertex i to
/// vertex i+1 and carries the label of the half-plane that produced it.
struct ConvexPolygon {
    std::vector<KleinPoint> vertices;
    std::vector<int> labels;

    bool empty() const { return vertices.empty(); }
    std::size_t size() const { return vertices.size(); }
};

/// Axis-aligned square [-half, half]^2, counter-clockwise, all edges boxed.
ConvexPolygon square(double half = 2.0);

/// Sutherland-Hodgman step for a convex polygon. Points with eval <= eps are
/// kept, so a line through an existing vertex does not split it.
ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp, int label, double eps = 1e-12);

/// Drops edges shorter than `tol`, keeping the label of the surviving edge.
void merge_short_edges(ConvexPolygon& poly, double tol);

/// Parameter interval [t0, t1] of segment p + t (q - p), t in [0,1], inside the closed unit disk.
std::optional<std::pair<double, double>> segment_in_disk(KleinPoint p, KleinPoint q);

double signed_area(const ConvexPolygon& poly);

}  // namespace fgc::klein
