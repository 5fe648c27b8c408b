#pragma once
// Groups used across the tests, and brute-force distance oracles that do not
// go through the library's enumeration.

#include "fgc/cover.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace fgc::testing {

inline const Isometry S(0, -1, 1, 0);
inline const Isometry T(1, 1, 0, 1);
inline const Isometry G4(2, 0, 0, 0.5);  // z -> 4z

inline GroupPresentation modular() { return {{S, T}, Arithmetic::ExactInteger, false, "modular"}; }
inline GroupPresentation gamma2() { return {{Isometry(1, 2, 0, 1), Isometry(1, 0, 2, 1)}, Arithmetic::ExactInteger, true, "gamma2"}; }
inline GroupPresentation cyclic4() { return {{G4}, Arithmetic::Floating, true, "cyclic4"}; }
inline GroupPresentation schottky3() { return {{Isometry(1, 3, 0, 1), Isometry(1, 0, 3, 1)}, Arithmetic::ExactInteger, true, "s3"}; }

inline bool has(const std::vector<Isometry>& v, const Isometry& g, Arithmetic mode) {
    return std::any_of(v.begin(), v.end(), [&](const Isometry& h) { return elements_equal(g, h, mode); });
}

// every integer matrix with entries in [-M, M] and determinant 1, optionally filtered
inline std::vector<Isometry> integer_matrices(int M, const std::function<bool(int, int, int, int)>& keep = {}) {
    std::vector<Isometry> out;
    for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
            for (int c = -M; c <= M; ++c)
                for (int d = -M; d <= M; ++d)
                    if (a * d - b * c == 1 && (!keep || keep(a, b, c, d))) out.emplace_back(a, b, c, d);
    return out;
}

inline bool congruent_gamma2(int a, int b, int c, int d) {
    auto odd = [](int x) { return x % 2 != 0; };
    return odd(a) && odd(d) && !odd(b) && !odd(c);
}

inline double brute_min(const std::vector<Isometry>& els, UhpPoint p, UhpPoint q) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : els) m = std::min(m, dist(p, g.apply(q)));
    return m;
}

// g^k for |k| <= K
inline std::vector<Isometry> powers(const Isometry& g, int K) {
    std::vector<Isometry> out{Isometry{}};
    Isometry f, b;
    for (int k = 1; k <= K; ++k) {
        f = f * g;
        b = b * g.inverse();
        out.push_back(f);
        out.push_back(b);
    }
    return out;
}

// rejection sample of points of P with bounded distance to the center
inline std::vector<UhpPoint> random_points(const DirichletPolygon& P, std::size_t n, std::uint64_t seed, double cap = 3.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<UhpPoint> out;
    while (out.size() < n) {
        const KleinPoint k{U(rng), U(rng)};
        if (k.norm2() >= 0.999) continue;
        const UhpPoint z = from_klein(k);
        if (P.contains(z, 0.0) && dist(z, P.center) <= cap) out.push_back(z);
    }
    return out;
}

}  // namespace fgc::testing
