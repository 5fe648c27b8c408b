#pragma once

#include "fgc/isometry.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fgc {

class EnumerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroupPresentation {
    std::vector<Isometry> generators;
    Arithmetic mode = Arithmetic::Floating;
    bool torsion_free = false;
    std::string label;

    /// Throws EnumerationError on identity generators or non-integral exact input.
    void validate() const;
};

/// Word letters: +k is generator k-1, -k its inverse.
using Word = std::vector<int>;

struct BallElement {
    Isometry element;
    Word word;  // witness in the generators; empty when the strategy does not track words
    double displacement = 0.0;  // d(z0, g z0); 0 for word balls built without a basepoint
};

enum class CertificateKind { Complete, WordOnly, Uncertified };
enum class CertificationMethod { None, EntryScan, PairingWalk, FrontierMargin };

const char* to_string(CertificateKind kind);
const char* to_string(CertificationMethod method);

struct Certificate {
    CertificateKind kind = CertificateKind::Uncertified;
    CertificationMethod method = CertificationMethod::None;
    double radius = 0.0;  // displacement bound for Complete
    int word_length = 0;  // for WordOnly
    std::string note;

    bool complete_for(double r) const { return kind == CertificateKind::Complete && radius >= r; }
};

/// Hash index for PSL2 elements under the arithmetic mode's equality.
class ElementIndex {
public:
    explicit ElementIndex(Arithmetic mode = Arithmetic::Floating) : mode_(mode) {}

    std::optional<std::size_t> find(const Isometry& g) const;
    /// Returns (index, inserted).
    std::pair<std::size_t, bool> insert(const Isometry& g);
    std::size_t size() const { return items_.size(); }
    const Isometry& operator[](std::size_t i) const { return items_[i]; }
    Arithmetic mode() const { return mode_; }

private:
    using Key = std::array<std::int64_t, 4>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    std::vector<Key> probe_keys(const std::array<double, 4>& m) const;
    Key cell(const std::array<double, 4>& m) const;

    Arithmetic mode_;
    std::vector<Isometry> items_;
    std::unordered_multimap<Key, std::size_t, KeyHash> buckets_;
};

/// Finite deduplicated set of group elements with an exhaustiveness certificate.
class GroupBall {
public:
    GroupBall() = default;
    GroupBall(std::vector<BallElement> elements, Certificate certificate, Arithmetic mode,
              std::optional<UhpPoint> basepoint);

    const std::vector<BallElement>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    const Certificate& certificate() const { return certificate_; }
    Arithmetic mode() const { return mode_; }
    const std::optional<UhpPoint>& basepoint() const { return basepoint_; }

    bool contains(const Isometry& g) const { return index_.find(g).has_value(); }
    std::optional<std::size_t> index_of(const Isometry& g) const { return index_.find(g); }

    /// Set when some non-identity element fixes the basepoint.
    bool basepoint_fixed() const { return basepoint_fixed_; }
    const std::optional<Isometry>& stabilizer_witness() const { return stabilizer_witness_; }

    /// Elements with displacement <= r; stays Complete when the parent is.
    GroupBall restricted(double r) const;

    std::vector<Isometry> isometries() const;

private:
    std::vector<BallElement> elements_;
    Certificate certificate_;
    Arithmetic mode_ = Arithmetic::Floating;
    std::optional<UhpPoint> basepoint_;
    ElementIndex index_;
    bool basepoint_fixed_ = false;
    std::optional<Isometry> stabilizer_witness_;
};

struct EnumerationLimits {
    std::size_t max_elements = 1'000'000;
    std::chrono::milliseconds timeout{30'000};

    /// Defaults, with FGC_MAX_ELEMENTS overriding the element cap.
    static EnumerationLimits from_environment();
};

/// All distinct products of at most L generators and inverses, shortlex order.
GroupBall word_ball(const GroupPresentation& group, int max_length,
                    const EnumerationLimits& limits = EnumerationLimits::from_environment());

struct NormBallOptions {
    /// Side pairings of the Dirichlet domain at the basepoint. When given, the
    /// ball is grown by a pairing walk pruned at radius R, which is exhaustive.
    std::span<const Isometry> side_pairings;
    std::span<const Word> side_pairing_words;  // optional, parallel to side_pairings
    EnumerationLimits limits = EnumerationLimits::from_environment();
    /// Allow the integer entry scan when the group is the full modular group.
    bool allow_entry_scan = true;
};

/// All elements g with d(z0, g z0) <= R, sorted by (displacement, entries).
GroupBall norm_ball(const GroupPresentation& group, UhpPoint z0, double radius,
                    const NormBallOptions& options = {});

/// Every PSL2(Z) element moving z0 by at most R: scan of coprime bottom rows
/// (c, d) bounded through Im(g z0), then the translates T^k g in range.
/// `keep` filters (e.g. a congruence condition); empty keeps everything.
std::vector<Isometry> modular_entry_scan(UhpPoint z0, double radius,
                                         const std::function<bool(const Isometry&)>& keep = {});

/// Breadth-first walk over `steps` (closed under inverses by the caller),
/// keeping elements with displacement <= keep_radius.
std::vector<BallElement> pruned_walk(std::span<const Isometry> steps, std::span<const Word> step_words,
                                     Arithmetic mode, UhpPoint z0, double keep_radius,
                                     const EnumerationLimits& limits, bool* capped = nullptr);

/// True when the (integer) generators produce both S and T within short words.
bool generates_modular_group(const GroupPresentation& group);

/// Bound on the entries of PSL2(Z) elements displacing z0 by at most R.
std::int64_t modular_entry_bound(UhpPoint z0, double radius);

}  // namespace fgc
