#include "fgc/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>

namespace fgc {

namespace {

using Clock = std::chrono::steady_clock;

// Exact products in doubles stay exact while entries stay well below 2^53;
// 2^26 keeps every product of two such entries exact.
constexpr double kExactEntryLimit = 67108864.0;

constexpr double kFloatCell = 1e-4;  // coarse: distinct elements of a discrete group rarely share a cell

struct Deadline {
    Clock::time_point end;
    explicit Deadline(std::chrono::milliseconds budget) : end(Clock::now() + budget) {}
    bool passed() const { return Clock::now() > end; }
};

double key_threshold(double radius) {
    // cosh_key = 2 (cosh d - 1); a small slack keeps boundary elements
    const double r = radius + 1e-12 * std::max(1.0, radius);
    return 2.0 * (std::cosh(r) - 1.0) * (1.0 + 1e-12) + 1e-12;
}

std::vector<Isometry> letters_of(const GroupPresentation& group, std::vector<int>& codes) {
    std::vector<Isometry> letters;
    codes.clear();
    for (std::size_t k = 0; k < group.generators.size(); ++k) {
        const int code = static_cast<int>(k) + 1;
        letters.push_back(group.generators[k]);
        codes.push_back(code);
        letters.push_back(group.generators[k].inverse());
        codes.push_back(-code);
    }
    return letters;
}

bool entries_too_large(const Isometry& g, Arithmetic mode) {
    return mode == Arithmetic::ExactInteger && g.max_abs_entry() > kExactEntryLimit;
}

void sort_ball(std::vector<BallElement>& elements) {
    std::sort(elements.begin(), elements.end(), [](const BallElement& a, const BallElement& b) {
        if (a.displacement != b.displacement) return a.displacement < b.displacement;
        return a.element < b.element;
    });
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::abs(a);
    }
    std::int64_t x1 = 0, y1 = 0;
    const std::int64_t g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace

void GroupPresentation::validate() const {
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const Isometry& g = generators[k];
        if (g.is_identity(mode))
            throw EnumerationError("generator " + std::to_string(k + 1) + " is the identity");
        if (mode == Arithmetic::ExactInteger) {
            if (!g.is_integral())
                throw EnumerationError("generator " + std::to_string(k + 1) + " is not integral in exact mode");
            if (g.a() * g.d() - g.b() * g.c() != 1.0)
                throw EnumerationError("generator " + std::to_string(k + 1) + " does not have determinant 1");
        }
    }
}

const char* to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::Complete: return "complete";
        case CertificateKind::WordOnly: return "word-only";
        case CertificateKind::Uncertified: return "uncertified";
    }
    return "?";
}

const char* to_string(CertificationMethod method) {
    switch (method) {
        case CertificationMethod::None: return "none";
        case CertificationMethod::EntryScan: return "entry-scan";
        case CertificationMethod::PairingWalk: return "pairing-walk";
        case CertificationMethod::FrontierMargin: return "frontier-margin";
    }
    return "?";
}

// ---- ElementIndex ----------------------------------------------------------

std::size_t ElementIndex::KeyHash::operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t x : k) {
        h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

ElementIndex::Key ElementIndex::cell(const std::array<double, 4>& m) const {
    Key k{};
    for (int i = 0; i < 4; ++i)
        k[i] = mode_ == Arithmetic::ExactInteger ? static_cast<std::int64_t>(m[i])
                                                 : static_cast<std::int64_t>(std::floor(m[i] / kFloatCell));
    return k;
}

std::vector<ElementIndex::Key> ElementIndex::probe_keys(const std::array<double, 4>& m) const {
    if (mode_ == Arithmetic::ExactInteger) {
        // sign is canonical for integer matrices
        return {cell(m)};
    }
    // neighbours only along coordinates close to a cell wall, for m and -m
    // (the canonical sign is unstable when the leading entry is tiny)
    double scale = 1.0;
    for (double x : m) scale = std::max(scale, std::abs(x));
    const double eps = tol::kElementFloat * scale;
    std::vector<Key> keys;
    for (int sign : {1, -1}) {
        std::array<double, 4> v{};
        for (int i = 0; i < 4; ++i) v[i] = sign * m[i];
        std::array<std::vector<std::int64_t>, 4> choices;
        for (int i = 0; i < 4; ++i) {
            const std::int64_t lo = static_cast<std::int64_t>(std::floor((v[i] - eps) / kFloatCell));
            const std::int64_t hi = static_cast<std::int64_t>(std::floor((v[i] + eps) / kFloatCell));
            for (std::int64_t c = lo; c <= hi; ++c) choices[i].push_back(c);
        }
        for (auto c0 : choices[0])
            for (auto c1 : choices[1])
                for (auto c2 : choices[2])
                    for (auto c3 : choices[3]) keys.push_back({c0, c1, c2, c3});
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

std::optional<std::size_t> ElementIndex::find(const Isometry& g) const {
    for (const Key& k : probe_keys(g.entries())) {
        auto [lo, hi] = buckets_.equal_range(k);
        for (auto it = lo; it != hi; ++it)
            if (elements_equal(items_[it->second], g, mode_)) return it->second;
    }
    return std::nullopt;
}

std::pair<std::size_t, bool> ElementIndex::insert(const Isometry& g) {
    if (auto i = find(g)) return {*i, false};
    items_.push_back(g);
    buckets_.emplace(cell(g.entries()), items_.size() - 1);
    return {items_.size() - 1, true};
}

// ---- GroupBall -------------------------------------------------------------

GroupBall::GroupBall(std::vector<BallElement> elements, Certificate certificate, Arithmetic mode,
                     std::optional<UhpPoint> basepoint)
    : elements_(std::move(elements)),
      certificate_(std::move(certificate)),
      mode_(mode),
      basepoint_(basepoint),
      index_(mode) {
    std::vector<BallElement> unique;
    unique.reserve(elements_.size());
    for (auto& e : elements_)
        if (index_.insert(e.element).second) unique.push_back(std::move(e));
    elements_ = std::move(unique);
    if (basepoint_) {
        for (const auto& e : elements_) {
            if (e.element.is_identity(mode_)) continue;
            if (displacement(e.element, *basepoint_) <= tol::kDistance) {
                basepoint_fixed_ = true;
                stabilizer_witness_ = e.element;
                break;
            }
        }
    }
}

GroupBall GroupBall::restricted(double r) const {
    std::vector<BallElement> kept;
    for (const auto& e : elements_)
        if (e.displacement <= r) kept.push_back(e);
    Certificate c = certificate_;
    if (c.kind == CertificateKind::Complete) c.radius = std::min(c.radius, r);
    return GroupBall(std::move(kept), c, mode_, basepoint_);
}

std::vector<Isometry> GroupBall::isometries() const {
    std::vector<Isometry> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e.element);
    return out;
}

// ---- limits ----------------------------------------------------------------

EnumerationLimits EnumerationLimits::from_environment() {
    EnumerationLimits limits;
    if (const char* env = std::getenv("FGC_MAX_ELEMENTS")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) limits.max_elements = static_cast<std::size_t>(v);
    }
    return limits;
}

// ---- word balls ------------------------------------------------------------

GroupBall word_ball(const GroupPresentation& group, int max_length, const EnumerationLimits& limits) {
    if (max_length < 0) throw EnumerationError("word length must be non-negative");
    group.validate();
    std::vector<int> codes;
    const std::vector<Isometry> letters = letters_of(group, codes);
    const Deadline deadline(limits.timeout);

    ElementIndex seen(group.mode);
    std::vector<BallElement> out;
    seen.insert(Isometry{});
    out.push_back({Isometry{}, {}, 0.0});
    std::size_t level_begin = 0;
    bool capped = false;
    for (int len = 1; len <= max_length && !capped; ++len) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end && !capped; ++i) {
            for (std::size_t l = 0; l < letters.size(); ++l) {
                const Isometry g = out[i].element * letters[l];
                if (entries_too_large(g, group.mode) || out.size() >= limits.max_elements || deadline.passed()) {
                    capped = true;
                    break;
                }
                if (!seen.insert(g).second) continue;
                Word w = out[i].word;
                w.push_back(codes[l]);
                out.push_back({g, std::move(w), 0.0});
            }
        }
        level_begin = level_end;
    }
    Certificate cert;
    if (capped) {
        cert.kind = CertificateKind::Uncertified;
        cert.note = "resource cap reached before word length " + std::to_string(max_length);
    } else {
        cert.kind = CertificateKind::WordOnly;
        cert.word_length = max_length;
    }
    return GroupBall(std::move(out), cert, group.mode, std::nullopt);
}

// ---- walks -----------------------------------------------------------------

std::vector<BallElement> pruned_walk(std::span<const Isometry> steps, std::span<const Word> step_words,
                                     Arithmetic mode, UhpPoint z0, double keep_radius,
                                     const EnumerationLimits& limits, bool* capped) {
    const double kmax = key_threshold(keep_radius);
    const Deadline deadline(limits.timeout);
    const bool with_words = step_words.size() == steps.size();
    ElementIndex seen(mode);
    std::vector<BallElement> out;
    seen.insert(Isometry{});
    out.push_back({Isometry{}, {}, 0.0});
    if (capped) *capped = false;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if ((i & 255u) == 0 && deadline.passed()) {
            if (capped) *capped = true;
            break;
        }
        for (std::size_t s = 0; s < steps.size(); ++s) {
            const Isometry g = out[i].element * steps[s];
            if (entries_too_large(g, mode)) {
                if (capped) *capped = true;
                continue;
            }
            const UhpPoint gz = g.apply(z0);
            const double key = cosh_key(z0, gz);
            if (key > kmax) continue;
            if (!seen.insert(g).second) continue;
            if (out.size() >= limits.max_elements) {
                if (capped) *capped = true;
                i = out.size();
                break;
            }
            Word w;
            if (with_words) {
                w = out[i].word;
                w.insert(w.end(), step_words[s].begin(), step_words[s].end());
            }
            out.push_back({g, std::move(w), dist_from_key(key)});
        }
    }
    return out;
}

// ---- modular group ---------------------------------------------------------

bool generates_modular_group(const GroupPresentation& group) {
    if (group.mode != Arithmetic::ExactInteger || group.generators.empty()) return false;
    for (const auto& g : group.generators)
        if (!g.is_integral()) return false;
    EnumerationLimits small;
    small.max_elements = 20000;
    small.timeout = std::chrono::milliseconds(2000);
    const GroupBall ball = word_ball(group, 4, small);
    return ball.contains(Isometry(0, -1, 1, 0)) && ball.contains(Isometry(1, 1, 0, 1));
}

std::int64_t modular_entry_bound(UhpPoint z0, double radius) {
    // g = A h A^-1 with A i = z0 and ||h||^2 = 2 cosh d(i, h i); Frobenius
    // norms are submultiplicative and ||A^-1|| = ||A|| for det 1.
    const double a2 = z0.y + (z0.x * z0.x + 1.0) / z0.y;  // ||A||_F^2
    return static_cast<std::int64_t>(std::ceil(a2 * std::sqrt(2.0 * std::cosh(radius))));
}

std::vector<Isometry> modular_entry_scan(UhpPoint z0, double radius,
                                         const std::function<bool(const Isometry&)>& keep) {
    const double kmax = key_threshold(radius);
    const double x0 = z0.x, y0 = z0.y;
    const double er = std::exp(radius) * (1.0 + 1e-9);
    std::vector<Isometry> out;
    auto consider = [&](const Isometry& g) {
        if (cosh_key(z0, g.apply(z0)) > kmax) return;
        if (keep && !keep(g)) return;
        out.push_back(g);
    };
    // c = 0: translations
    {
        const std::int64_t kmaxabs = static_cast<std::int64_t>(std::floor(y0 * std::sqrt(kmax))) + 1;
        for (std::int64_t k = -kmaxabs; k <= kmaxabs; ++k)
            consider(Isometry(1.0, static_cast<double>(k), 0.0, 1.0));
    }
    // Im(g z0) = y0 / |c z0 + d|^2 must lie in [y0 e^-R, y0 e^R]
    const std::int64_t cmax = static_cast<std::int64_t>(std::floor(std::sqrt(er) / y0)) + 1;
    for (std::int64_t c = 1; c <= cmax; ++c) {
        const double cd = static_cast<double>(c);
        const double room = er - cd * cd * y0 * y0;
        if (room < 0.0) continue;
        const double r = std::sqrt(room);
        const std::int64_t dlo = static_cast<std::int64_t>(std::ceil(-cd * x0 - r)) - 1;
        const std::int64_t dhi = static_cast<std::int64_t>(std::floor(-cd * x0 + r)) + 1;
        for (std::int64_t d = dlo; d <= dhi; ++d) {
            std::int64_t s = 0, t = 0;
            if (ext_gcd(d, c, s, t) != 1) continue;
            // d s + c t = 1 -> a = s, b = -t gives a d - b c = 1
            const double a0 = static_cast<double>(s), b0 = static_cast<double>(-t);
            const double dd = static_cast<double>(d);
            const Isometry g0(a0, b0, cd, dd);
            const UhpPoint w = g0.apply(z0);
            const double h2 = kmax * y0 * w.y - (w.y - y0) * (w.y - y0);
            if (h2 < 0.0) continue;
            const double h = std::sqrt(h2);
            const std::int64_t klo = static_cast<std::int64_t>(std::ceil(x0 - h - w.x)) - 1;
            const std::int64_t khi = static_cast<std::int64_t>(std::floor(x0 + h - w.x)) + 1;
            for (std::int64_t k = klo; k <= khi; ++k) {
                const double kd = static_cast<double>(k);
                consider(Isometry(a0 + kd * cd, b0 + kd * dd, cd, dd));
            }
        }
    }
    return out;
}

// ---- norm balls ------------------------------------------------------------

namespace {

GroupBall frontier_margin_ball(const GroupPresentation& group, UhpPoint z0, double radius,
                               const EnumerationLimits& limits) {
    std::vector<int> codes;
    const std::vector<Isometry> letters = letters_of(group, codes);
    double max_gen = 0.0;
    for (const auto& g : letters) max_gen = std::max(max_gen, displacement(g, z0));
    const double margin = radius + 2.0 * max_gen;
    const Deadline deadline(limits.timeout);

    ElementIndex seen(group.mode);
    std::vector<BallElement> all;
    seen.insert(Isometry{});
    all.push_back({Isometry{}, {}, 0.0});
    std::size_t level_begin = 0;
    bool passed = letters.empty();
    bool capped = false;
    while (!passed && !capped) {
        const std::size_t level_end = all.size();
        for (std::size_t i = level_begin; i < level_end && !capped; ++i) {
            for (std::size_t l = 0; l < letters.size(); ++l) {
                const Isometry g = all[i].element * letters[l];
                if (entries_too_large(g, group.mode) || all.size() >= limits.max_elements || deadline.passed()) {
                    capped = true;
                    break;
                }
                if (!seen.insert(g).second) continue;
                Word w = all[i].word;
                w.push_back(codes[l]);
                all.push_back({g, std::move(w), displacement(g, z0)});
            }
        }
        if (capped) break;
        level_begin = level_end;
        passed = true;
        for (std::size_t i = level_begin; i < all.size(); ++i)
            if (all[i].displacement <= margin) {
                passed = false;
                break;
            }
    }
    std::vector<BallElement> kept;
    for (auto& e : all)
        if (e.displacement <= radius + 1e-12 * std::max(1.0, radius)) kept.push_back(std::move(e));
    sort_ball(kept);
    Certificate cert;
    if (capped) {
        cert.kind = CertificateKind::Uncertified;
        cert.note = "resource cap reached before the frontier cleared R + 2 max generator displacement";
    } else {
        cert.kind = CertificateKind::Complete;
        cert.method = CertificationMethod::FrontierMargin;
        cert.radius = radius;
        if (group.generators.size() > 1)
            cert.note = "frontier margin is exact for cyclic groups and heuristic otherwise";
    }
    return GroupBall(std::move(kept), cert, group.mode, z0);
}

}  // namespace

GroupBall norm_ball(const GroupPresentation& group, UhpPoint z0, double radius, const NormBallOptions& options) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw EnumerationError("ball radius must be finite and >= 0");
    group.validate();

    if (!options.side_pairings.empty()) {
        bool capped = false;
        auto elements = pruned_walk(options.side_pairings, options.side_pairing_words, group.mode, z0, radius,
                                    options.limits, &capped);
        sort_ball(elements);
        Certificate cert;
        if (capped) {
            cert.kind = CertificateKind::Uncertified;
            cert.note = "resource cap reached during pairing walk";
        } else {
            cert.kind = CertificateKind::Complete;
            cert.method = CertificationMethod::PairingWalk;
            cert.radius = radius;
        }
        return GroupBall(std::move(elements), cert, group.mode, z0);
    }

    if (options.allow_entry_scan && generates_modular_group(group)) {
        if (modular_entry_bound(z0, radius) > static_cast<std::int64_t>(kExactEntryLimit)) {
            Certificate cert;
            cert.note = "entry bound exceeds exact range";
            return GroupBall({{Isometry{}, {}, 0.0}}, cert, group.mode, z0);
        }
        std::vector<BallElement> elements;
        const Deadline deadline(options.limits.timeout);
        bool capped = false;
        for (const auto& g : modular_entry_scan(z0, radius)) {
            if (elements.size() >= options.limits.max_elements || deadline.passed()) {
                capped = true;
                break;
            }
            elements.push_back({g, {}, displacement(g, z0)});
        }
        sort_ball(elements);
        Certificate cert;
        if (capped) {
            cert.kind = CertificateKind::Uncertified;
            cert.note = "resource cap reached during entry scan";
        } else {
            cert.kind = CertificateKind::Complete;
            cert.method = CertificationMethod::EntryScan;
            cert.radius = radius;
        }
        return GroupBall(std::move(elements), cert, group.mode, z0);
    }

    return frontier_margin_ball(group, z0, radius, options.limits);
}

}  // namespace fgc
