#pragma once

#include "oambsm/bell.hpp"
#include "oambsm/measurement.hpp"
#include "oambsm/search.hpp"

#include <cstdint>
#include <vector>

// The superdense-coding channel: decoding, confusion matrix, mutual
// information, Blahut-Arimoto capacity, and calibration of the crosstalk
// strength to a target success probability.
namespace oambsm {

/// Row-stochastic conditional matrix W[x][y] = p(decoded y | sent x).
struct ConfusionMatrix {
    Mat4d w = Mat4d::Identity();

    /// Throws unless entries are in [0,1] and rows sum to 1 within 1e-9.
    void validate() const;
};

/// Distribution over the four sent states.
struct InputDistribution {
    Eigen::Vector4d p = Eigen::Vector4d::Constant(0.25);

    /// Throws unless entries are >= 0 and sum to 1 within 1e-9.
    void validate() const;
};

/// The four disjoint support patterns of the standard target basis, keyed by
/// Bell label.
PatternMap standard_patterns();

/// Argmax over labels of the table mass on each label's pattern; ties break
/// in the order PsiPlus < PsiMinus < PhiPlus < PhiMinus. Throws on an
/// all-zero table or non-partitioning patterns.
BellLabel decode(const CoincidenceTable& t, const PatternMap& patterns);

struct TrialsMode {
    enum class Kind { Analytic, Sampled };
    Kind kind = Kind::Analytic;
    std::int64_t n = 0;     // Sampled only
    std::uint64_t seed = 0; // Sampled only

    static TrialsMode analytic() { return {}; }
    static TrialsMode sampled(std::int64_t n, std::uint64_t seed) {
        return {Kind::Sampled, n, seed};
    }
};

/// Send each Bell state through the noisy measurement; analytic mode
/// integrates the single-coincidence decode exactly, sampled mode tallies n
/// simulated single-shot events per sent state.
ConfusionMatrix confusion_matrix(const NoiseModel& noise,
                                 const TrialsMode& mode = TrialsMode::analytic(),
                                 const PatternMap& patterns = standard_patterns());

/// I(X;Y) in bits for input distribution p and channel W; 0 log 0 := 0.
double mutual_information(const InputDistribution& p, const ConfusionMatrix& w);

struct CapacityResult {
    double bits = 0.0;
    InputDistribution p_star;
    int iterations = 0;
};

/// Blahut-Arimoto from the uniform start; stops when the capacity bracket
/// (max - mean of per-symbol divergences) is below tol. Throws after 1e5
/// iterations without convergence. `lower_bounds`, when given, receives the
/// per-iteration objective values (non-decreasing).
CapacityResult capacity(const ConfusionMatrix& w, double tol = 1e-9,
                        std::vector<double>* lower_bounds = nullptr);

struct SuperdenseResult {
    struct Event {
        int sent = 0;    // 2-bit message
        int decoded = 0; // 2-bit message
    };
    std::vector<Event> transcript;
    double success_rate = 0.0;
};

/// Full pipeline per message: encode on photon A, ideal coincidence table in
/// the target basis, apply noise, draw one coincidence event, decode,
/// compare. Deterministic given the seed.
SuperdenseResult superdense_run(const std::vector<int>& messages,
                                const NoiseModel& noise, std::uint64_t seed,
                                const Codebook& codebook = Codebook::standard());

/// Solve (1 - eps) + eps/4 = target_success for eps by bisection (1e-10).
/// Valid targets lie in (0.25, 1].
double calibrate_noise(double target_success);

} // namespace oambsm
