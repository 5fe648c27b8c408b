#include "fgc/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fgc {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::BasicU: return "BasicU";
        case Provenance::TruncatedU: return "TruncatedU";
        case Provenance::NielsenU: return "NielsenU";
        case Provenance::Lifted: return "Lifted";
        case Provenance::Manual: return "Manual";
    }
    return "?";
}

const char* to_string(CoverKind k) { return k == CoverKind::First ? "first" : "second"; }

bool CoverCandidate::add(const Isometry& g, Provenance p, bool extra) {
    if (contains(g)) return false;
    elements.push_back({g, p, extra});
    return true;
}

bool CoverCandidate::contains(const Isometry& g) const {
    return std::any_of(elements.begin(), elements.end(),
                       [&](const CoverElement& e) { return elements_equal(e.element, g, mode); });
}

std::vector<Isometry> CoverCandidate::isometries(bool with_extras) const {
    std::vector<Isometry> out;
    for (const auto& e : elements)
        if (with_extras || !e.extra) out.push_back(e.element);
    return out;
}

std::size_t CoverCandidate::core_size() const {
    return static_cast<std::size_t>(
        std::count_if(elements.begin(), elements.end(), [](const CoverElement& e) { return !e.extra; }));
}

CoverCandidate empty_cover(const Domain& domain, CoverKind kind) {
    CoverCandidate C;
    C.center = domain.center();
    C.kind = kind;
    C.mode = domain.mode();
    C.group_label = domain.group().label;
    return C;
}

// ---- constructions -------------------------------------------------------------

namespace {

void collect(const std::vector<UhpPoint>& Z, const std::vector<UhpPoint>& W, const DistanceOracle& oracle,
             CoverCandidate& C, Provenance p, bool extra) {
    for (const auto& z : Z)
        for (const auto& w : W) {
            const CertifiedDistance r = oracle(z, w);
            for (const auto& g : r.ties) C.add(g, p, extra);
        }
}

std::vector<UhpPoint> outside(const std::vector<UhpPoint>& pts, const DirichletPolygon& inner) {
    std::vector<UhpPoint> out;
    for (const auto& z : pts)
        if (!inner.contains(z, 1e-12)) out.push_back(z);
    return out;
}

}  // namespace

CoverCandidate build_basic_cover(const DirichletPolygon& P, Domain& domain, const SamplingSpec& sampling) {
    CoverCandidate C = empty_cover(domain);
    C.add(Isometry{}, Provenance::BasicU);
    const DistanceOracle oracle(domain);
    const auto Z = sample_domain(P, sampling);
    collect(Z, Z, oracle, C, Provenance::BasicU, false);
    return C;
}

CoverCandidate build_truncated_cover(const DirichletPolygon& P, Domain& domain, const std::vector<Horoball>& horoballs,
                                     const SamplingSpec& sampling) {
    CoverCandidate C = empty_cover(domain);
    C.add(Isometry{}, Provenance::TruncatedU);
    const DistanceOracle oracle(domain);
    const DirichletPolygon Pt = truncate(P, horoballs);
    const auto Zt = sample_domain(Pt, sampling);
    collect(Zt, Zt, oracle, C, Provenance::TruncatedU, false);

    const auto Zh = outside(sample_domain(P, sampling), Pt);
    if (!Zh.empty()) {
        std::vector<UhpPoint> all = Zt;
        all.insert(all.end(), Zh.begin(), Zh.end());
        collect(Zh, all, oracle, C, Provenance::TruncatedU, true);
        collect(Zt, Zh, oracle, C, Provenance::TruncatedU, true);
    }
    return C;
}

CoverCandidate build_nielsen_cover(const DirichletPolygon& P, Domain& domain, int depth, const SamplingSpec& sampling) {
    CoverCandidate C = empty_cover(domain);
    C.add(Isometry{}, Provenance::NielsenU);
    const DistanceOracle oracle(domain);
    const auto intervals = nielsen_intervals(P, domain.group(), depth);
    const DirichletPolygon Ph = nielsen_clip(P, intervals);
    const auto Z = sample_domain(P, sampling);
    const auto W = sample_domain(Ph, sampling);
    collect(Z, W, oracle, C, Provenance::NielsenU, false);
    const auto Wout = outside(Z, Ph);
    collect(Z, Wout, oracle, C, Provenance::NielsenU, true);
    return C;
}

CoverCandidate lift_cover(const CoverCandidate& h_cover, const std::vector<Isometry>& coset_reps) {
    CoverCandidate C;
    C.center = h_cover.center;
    C.kind = h_cover.kind;
    C.mode = h_cover.mode;
    C.group_label = h_cover.group_label;
    for (const auto& g : coset_reps)
        for (const auto& h : h_cover.elements) C.add(h.element * g, Provenance::Lifted, h.extra);
    return C;
}

// ---- verification -----------------------------------------------------------------

VerificationSummary VerificationReport::summary() const {
    return {verified, pairs_tested, failures.size(), seed, all_certified};
}

SuiteOracle evaluate_suite(const PairSuite& suite, const DistanceOracle& oracle) {
    SuiteOracle out;
    out.pairs = suite.pairs;
    out.seed = suite.seed;
    out.answers.reserve(suite.pairs.size());
    for (const auto& [p, q] : suite.pairs) out.answers.push_back(oracle(p, q, true));
    return out;
}

namespace {

double cover_min(const std::vector<Isometry>& elements, UhpPoint p, UhpPoint q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : elements) best = std::min(best, dist(p, g.apply(q)));
    return best;
}

}  // namespace

VerificationReport verify_second_cover(const std::vector<Isometry>& elements, const SuiteOracle& answers) {
    VerificationReport rep;
    rep.seed = answers.seed;
    rep.pairs_tested = answers.pairs.size();
    for (std::size_t i = 0; i < answers.pairs.size(); ++i) {
        const auto& [p, q] = answers.pairs[i];
        const CertifiedDistance& a = answers.answers[i];
        const double m = cover_min(elements, p, q);
        if (!a.certified) {
            rep.all_certified = false;
            rep.failures.push_back({p, q, m, a.value, a.realizer, true});
        } else if (std::abs(m - a.value) > 1e-9) {
            rep.failures.push_back({p, q, m, a.value, a.realizer, false});
        }
    }
    rep.verified = rep.failures.empty();
    return rep;
}

VerificationReport verify_second_cover(const CoverCandidate& C, const SuiteOracle& answers) {
    return verify_second_cover(C.isometries(), answers);
}

std::vector<Isometry> inverse_products(const std::vector<Isometry>& C, Arithmetic mode) {
    ElementIndex idx(mode);
    for (const auto& a : C) {
        const Isometry ai = a.inverse();
        for (const auto& b : C) idx.insert(ai * b);
    }
    std::vector<Isometry> out;
    for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(idx[i]);
    return out;
}

VerificationReport verify_first_cover(const CoverCandidate& C, const SuiteOracle& answers) {
    return verify_second_cover(inverse_products(C.isometries(), C.mode), answers);
}

// ---- necessity ----------------------------------------------------------------------

namespace {

constexpr double kWitnessMargin = 1e-8;

bool unique_for(const CertifiedDistance& a, const Isometry& g, Arithmetic mode) {
    return a.certified && a.ties.size() == 1 && elements_equal(a.ties[0], g, mode) &&
           a.runner_up - a.value > kWitnessMargin;
}

}  // namespace

std::vector<NecessityWitness> necessity_probe(const CoverCandidate& C, const DirichletPolygon& P,
                                              const DistanceOracle& oracle, const SuiteOracle& answers) {
    std::vector<NecessityWitness> out;
    const UhpPoint z0 = P.center;

    SamplingSpec bs;
    bs.grid = 0;
    bs.boundary = 128;
    bs.radius_cap = 3.0;
    auto anchors = special_points(P, 3.0);
    const auto bnd = sample_domain(P, bs);
    anchors.insert(anchors.end(), bnd.begin(), bnd.end());
    SamplingSpec gs;
    gs.grid = 6;
    gs.boundary = 0;
    gs.radius_cap = 3.0;
    auto targets = sample_domain(P, gs);
    targets.insert(targets.begin(), z0);
    if (targets.size() > 5) targets.resize(5);

    for (const auto& ce : C.elements) {
        const Isometry& g = ce.element;
        NecessityWitness w;
        w.element = g;
        for (std::size_t i = 0; i < answers.pairs.size(); ++i) {
            const auto& a = answers.answers[i];
            if (!unique_for(a, g, C.mode)) continue;
            const double margin = a.runner_up - a.value;
            if (!w.necessary || margin > w.margin) {
                w.necessary = true;
                w.p = answers.pairs[i].first;
                w.q = answers.pairs[i].second;
                w.margin = margin;
            }
        }
        if (!w.necessary) {
            // pairs straddling a point of P ∩ gP
            const Isometry gi = g.inverse();
            int used = 0;
            for (const auto& x : anchors) {
                if (w.necessary || used >= 40) break;
                if (!P.contains(gi.apply(x), 1e-7)) continue;
                ++used;
                for (const auto& tp : targets) {
                    if (w.necessary) break;
                    for (const auto& tq : targets) {
                        if (w.necessary) break;
                        const UhpPoint gtq = g.apply(tq);
                        if (dist(x, tp) < 1e-9 || dist(x, gtq) < 1e-9) continue;
                        for (double eps : {1e-3, 1e-2, 5e-2}) {
                            const UhpPoint p = geodesic_step(x, tp, eps);
                            const UhpPoint q = gi.apply(geodesic_step(x, gtq, eps));
                            const auto a = oracle(p, q, true);
                            if (unique_for(a, g, C.mode)) {
                                w.necessary = true;
                                w.p = p;
                                w.q = q;
                                w.margin = a.runner_up - a.value;
                                break;
                            }
                        }
                    }
                }
            }
        }
        out.push_back(w);
    }
    return out;
}

// ---- reduction and first covers --------------------------------------------------------

CoverCandidate reduce_cover(const CoverCandidate& C, const SuiteOracle& answers) {
    CoverCandidate R = C;
    const auto all = C.isometries();
    const std::size_t K = all.size(), N = answers.pairs.size();
    if (!verify_second_cover(all, answers).verified) {
        R.verification = verify_second_cover(all, answers).summary();
        return R;
    }
    std::vector<std::vector<double>> M(N, std::vector<double>(K));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < K; ++k) M[i][k] = dist(answers.pairs[i].first, all[k].apply(answers.pairs[i].second));

    std::vector<std::size_t> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> disp(K);
    for (std::size_t k = 0; k < K; ++k) disp[k] = displacement(all[k], C.center);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return disp[a] > disp[b]; });

    std::vector<bool> alive(K, true);
    for (std::size_t k : order) {
        if (all[k].is_identity(C.mode)) continue;
        alive[k] = false;
        bool ok = true;
        for (std::size_t i = 0; i < N && ok; ++i) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < K; ++j)
                if (alive[j]) m = std::min(m, M[i][j]);
            ok = std::abs(m - answers.answers[i].value) <= 1e-9;
        }
        if (!ok) alive[k] = true;
    }
    R.elements.clear();
    for (std::size_t k = 0; k < K; ++k)
        if (alive[k]) R.elements.push_back(C.elements[k]);
    R.verification = verify_second_cover(R, answers).summary();
    return R;
}

FirstCoverSearch search_first_cover(const Domain& domain, const std::vector<Isometry>& pool,
                                    const std::vector<Isometry>& required, const SuiteOracle& answers, int max_size) {
    const Arithmetic mode = domain.mode();
    std::vector<Isometry> cand;
    for (const auto& g : pool) {
        if (g.is_identity(mode)) continue;
        if (std::none_of(cand.begin(), cand.end(), [&](const Isometry& h) { return elements_equal(g, h, mode); }))
            cand.push_back(g);
    }
    FirstCoverSearch out;
    out.pool_size = cand.size();
    const std::size_t n = cand.size();
    for (int k = 0; k + 1 <= max_size; ++k) {
        if (static_cast<std::size_t>(k) > n) break;
        std::vector<std::size_t> idx(static_cast<std::size_t>(k));
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            std::vector<Isometry> C{Isometry{}};
            for (std::size_t i : idx) C.push_back(cand[i]);
            const auto prods = inverse_products(C, mode);
            const bool has_required = std::all_of(required.begin(), required.end(), [&](const Isometry& r) {
                return std::any_of(prods.begin(), prods.end(), [&](const Isometry& h) { return elements_equal(r, h, mode); });
            });
            if (has_required) {
                ++out.subsets_tried;
                if (verify_second_cover(prods, answers).verified) {
                    CoverCandidate F = empty_cover(domain, CoverKind::First);
                    for (const auto& g : C) F.add(g, Provenance::Manual);
                    F.verification = verify_second_cover(prods, answers).summary();
                    out.cover = std::move(F);
                    return out;
                }
            }
            // next combination
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(k - pos)) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t j = static_cast<std::size_t>(pos) + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace fgc
