#pragma once

#include "oambsm/bell.hpp"
#include "oambsm/state.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <utility>

// Coincidence statistics: ideal probability tables, support patterns, SNR,
// parametric noise, and seeded finite-count simulation.
namespace oambsm {

// Support threshold for ideal probability tables.
inline constexpr double kFireThreshold = 1e-6;

/// 4x4 coincidence data over target-basis combinations, as probabilities
/// (sum 1) or event counts.
struct CoincidenceTable {
    enum class Kind { Probability, Counts };

    Mat4d values = Mat4d::Zero();
    Kind kind = Kind::Probability;
    std::optional<double> duration_s;

    double total() const { return values.sum(); }

    /// Throws if a probability table does not sum to 1 within 1e-9, has
    /// negative cells, or a counts table has non-integer cells.
    void validate() const;
};

/// The set of (k,l) combinations a state fires, with k,l in 1..4 matching the
/// target-basis numbering.
struct SupportPattern {
    std::set<std::pair<int, int>> combos;

    bool operator==(const SupportPattern&) const = default;
};

/// Deterministic transform on probability tables standing in for element,
/// alignment and input-state imperfections.
struct NoiseModel {
    enum class Kind { Crosstalk, UniformBackground };
    Kind kind = Kind::Crosstalk;
    double strength = 0.0; // in [0,1]

    NoiseModel() = default;
    NoiseModel(Kind k, double s);

    static NoiseModel crosstalk(double eps) {
        return {Kind::Crosstalk, eps};
    }
    static NoiseModel uniform_background(double beta) {
        return {Kind::UniformBackground, beta};
    }
};

/// Ideal joint detection probabilities |<basisA_k (x) basisB_l | s>|^2.
CoincidenceTable coincidence_table(const TwoPhotonState& s,
                                   const Basis& basisA, const Basis& basisB);

/// Combinations that fired. The default threshold is the absolute floor
/// 1e-6 for probability tables and 5% of the largest cell for count tables;
/// pass `fire` to override either.
SupportPattern support_pattern(const CoincidenceTable& t,
                               std::optional<double> fire = std::nullopt);

/// Mass on the four expected combinations over the mass on the other twelve.
/// +infinity when nothing leaks off-support; throws on an all-zero table or
/// if `expected` does not have exactly 4 combos.
double snr(const CoincidenceTable& t, const SupportPattern& expected);

/// (1-strength) * t + strength * uniform; valid for probability tables only.
CoincidenceTable apply_noise(const CoincidenceTable& t, const NoiseModel& n);

/// Multinomial draw of `total` events over the 16 cells. Deterministic given
/// the seed, independent of platform.
CoincidenceTable simulate_counts(const CoincidenceTable& t, std::int64_t total,
                                 std::uint64_t seed);

} // namespace oambsm
