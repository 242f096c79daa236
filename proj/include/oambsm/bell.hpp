#pragma once

#include "oambsm/state.hpp"

#include <array>
#include <string>
#include <vector>

// Hyperentangled-source constructors, the four OAM Bell states, message
// encoding on photon A, and projection of two-photon states onto product
// bases.
namespace oambsm {

enum class BellLabel : int { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

inline constexpr std::array<BellLabel, 4> kAllBellLabels = {
    BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus,
    BellLabel::PhiMinus};

std::string to_string(BellLabel label);
BellLabel bell_label_from_string(const std::string& name);

/// An ordered set of four orthonormal single-photon states.
using Basis = std::array<SinglePhotonState, 4>;

/// The product basis {|-m,H>, |+m,V>, |-m,V>, |+m,H>} (mode order).
Basis initial_basis();

/// Rows of U read as coordinates over the initial basis. Throws if U is not
/// a 4-dim mode unitary.
Basis target_basis(const ModeUnitary& u);

/// The U(4) used by the analyzer: a Hadamard on modes {0,1} and another on
/// modes {2,3}. Its rows are the target basis the coincidence measurement
/// projects onto.
ModeUnitary standard_bsm_unitary();

/// Convenience: target_basis(standard_bsm_unitary()).
Basis standard_target_basis();

/// The polarization Bell state (|H>_A|V>_B + |V>_A|H>_B)/sqrt(2) as a 2x2
/// amplitude matrix over {H,V}_A x {H,V}_B.
Eigen::Matrix2cd pol_bell_psi_plus();

/// |OAM Bell(label)> (x) |Psi_s+> expanded over mode-index pairs. m >= 1.
TwoPhotonState hyper_bell(BellLabel label, int m);

/// Weighted OAM spectrum of the source: terms (m, c_m) with sum |c_m|^2 = 1.
struct SourceSpectrum {
    struct Term {
        int m = 1;
        Complex c = 1.0;
    };
    std::vector<Term> weights;

    /// Throws unless all m >= 1, no duplicates, and sum |c|^2 = 1 within 1e-9.
    void validate() const;

    static SourceSpectrum single_subspace(int m = 1);
};

struct SubspaceComponent {
    int m = 1;
    double weight = 1.0; // |c_m|^2
    TwoPhotonState state;
};

/// Subspace-resolved source: one PsiPlus hyperentangled component per term.
/// Coincidence statistics within subspace m carry weight |c_m|^2.
std::vector<SubspaceComponent> hyper_source(const SourceSpectrum& spec);

/// Bijection between 2-bit messages (0..3) and Bell labels.
struct Codebook {
    std::array<BellLabel, 4> label_for_message = {
        BellLabel::PsiPlus, BellLabel::PsiMinus, BellLabel::PhiPlus,
        BellLabel::PhiMinus};

    BellLabel label(int message) const;
    int message(BellLabel label) const;

    /// Throws unless the mapping is a bijection.
    void validate() const;

    static Codebook standard() { return {}; }
};

/// Alice's encoder: maps hyper_bell(PsiPlus, m) to hyper_bell(codebook(msg), m)
/// up to global phase, using only Dove-prism unitaries on photon A.
TwoPhotonState encode(int message, const TwoPhotonState& s,
                      const Codebook& codebook = Codebook::standard());

/// Coefficients c_kl = <basisA_k (x) basisB_l | s>. Throws if either basis is
/// not orthonormal within 1e-10.
Mat4c decompose(const TwoPhotonState& s, const Basis& basisA,
                const Basis& basisB);

/// Max entrywise deviation of the basis Gram matrix from the identity.
double orthonormality_residual(const Basis& basis);

} // namespace oambsm
