#pragma once

#include "oambsm/bell.hpp"
#include "oambsm/state.hpp"

#include <optional>
#include <string>
#include <vector>

// The linear-optical element toolbox. Mode-space elements (Dove prisms) are
// 4x4; the analyzer chain is modeled on a 16-dim path-extended space
//
//   index = port*8 + oam*2 + pol,
//   port in {0,1}, pol in {H=0, V=1},
//   oam in {0: -m, 1: +m, 2: Gaussian (post q-plate), 3: filtered}
//
// where "filtered" collects the OAM components a single-mode fiber rejects.
// Detector bins are (port, +-45 pol) pairs on the Gaussian OAM track, numbered
// bin = port*2 + pol_out.
namespace oambsm {

namespace path {

inline constexpr int kDim = 16;
inline constexpr int kOamMinus = 0;
inline constexpr int kOamPlus = 1;
inline constexpr int kOamGauss = 2;
inline constexpr int kOamFiltered = 3;

constexpr int index(int port, int oam, int pol) {
    return port * 8 + oam * 2 + pol;
}

/// Embed a 4-dim mode vector into port 0 of the path-extended space.
Eigen::VectorXcd embed_mode4(const Vec4c& v);

} // namespace path

/// Description of one physical element, serializable to {kind, params} JSON.
struct ElementSpec {
    enum class Kind {
        DoveSingle,
        DovePair,
        Pbs,
        Bs,
        PhasePlate,
        QplateQwp,
        Pbs45,
    };
    Kind kind;
    double angle = 0.0; // DoveSingle: prism angle; PhasePlate: phase, radians
    int arm = 0;        // PhasePlate / DovePair inside the MZI
    int port = 0;       // QplateQwp
    int m = 1;

    std::string kind_name() const;
};

/// Single Dove prism at angle alpha: |+-m> -> exp(-+ i 2 m alpha) |-+m>,
/// polarization untouched. An involution for every alpha.
ModeUnitary dove_single(double alpha, int m);

/// Net action of a Dove-prism pair at relative angle pi/(4m):
/// |+-m> -> exp(+- i pi/2) |+-m>, polarization untouched.
ModeUnitary dove_pair(int m);

/// Polarizing beam splitter on the path-extended space: H keeps its path,
/// V toggles it.
ModeUnitary pbs();

/// Symmetric 50/50 beam splitter on the two paths: transmission 1/sqrt(2),
/// reflection i/sqrt(2).
ModeUnitary bs();

/// Glass plate: phase exp(i phi) on everything in the given arm (path).
ModeUnitary phase_plate(double phi, int arm);

/// Dove-prism pair placed inside one MZI arm (path-extended version of
/// dove_pair, acting on that arm only).
ModeUnitary dove_pair_in_arm(int arm, int m);

/// q-plate sandwiched between quarter-wave plates, one per output port.
/// Port 1 converts {|-m,H>, |+m,V>} to the Gaussian track as
/// {|0,H>, i|0,V>}; port 0 converts {|-m,V>, |+m,H>} as {|0,H>, -i|0,V>}.
/// All other OAM content moves to the filtered track. The i phases come from
/// the wave-plate orientation freedom of the sandwich; without them the
/// +-45-degree split cannot separate the target states.
ModeUnitary qplate_qwp(int port);

/// PBS at 45 degrees: maps (|H>+|V>)/sqrt(2) to output pol 0 and
/// (|H>-|V>)/sqrt(2) to output pol 1, per (port, oam) track.
ModeUnitary pbs45();

/// Routing of target-basis states to detector bins, fixed after tuning.
struct DetectorMap {
    std::array<int, 4> bin_for_target = {-1, -1, -1, -1};
    bool valid = false;
    std::vector<ElementSpec> chain;
};

struct AnalyzerConfig {
    double mzi_phase = 0.0;
    int m = 1;
};

struct AnalyzerChain {
    ModeUnitary composite; // 16x16
    DetectorMap map;
    double min_routing_fidelity = 0.0;
    AnalyzerConfig config;
};

/// Build the full chain pbs -> bs -> {dove pair in arm 0, phase plate in
/// arm 1} -> bs -> per-port qplate_qwp -> pbs45 at the given MZI phase.
/// The DetectorMap is valid iff every target-basis state reaches a unique
/// bin with probability >= 1 - 1e-9.
AnalyzerChain analyzer_chain(const AnalyzerConfig& cfg);

/// Scan the MZI phase over a 1-degree grid and return the phase maximizing
/// the minimum routing fidelity over the four target-basis inputs. Throws if
/// no phase reaches fidelity 0.999 (an element convention is then wrong).
double tune_analyzer(int m);

/// Single-photon detection probabilities over the 4 bins; photons on the
/// filtered track are lost.
std::array<double, 4> detector_probs(const Eigen::VectorXcd& v16);

/// Two-photon coincidence probabilities over target-basis combinations,
/// computed by pushing the state through one analyzer chain per photon and
/// reading the (bin_A, bin_B) statistics back through the routing map.
Mat4d chain_coincidence_probs(const AnalyzerChain& chain,
                              const TwoPhotonState& s);

} // namespace oambsm
