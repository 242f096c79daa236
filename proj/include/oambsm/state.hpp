#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>

// Core value types for single- and two-photon states over the 4-dimensional
// OAM (|+-m>) x polarization (|H>,|V>) mode space of one OAM subspace m.
//
// Mode ordering (fixed; everything downstream depends on it):
//   0: |-m,H>   1: |+m,V>   2: |-m,V>   3: |+m,H>
namespace oambsm {

using Complex = std::complex<double>;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using Mat4d = Eigen::Matrix4d;

// Tolerance for algebraic identities (norms, orthogonality, closed forms).
inline constexpr double kAlgebraTol = 1e-12;
// Tolerance for unitarity of composed element chains.
inline constexpr double kUnitaryTol = 1e-10;

enum class Pol : int { H = 0, V = 1 };

namespace mode {

inline constexpr int kDim = 4;

/// OAM sign (-1 or +1) carried by mode index 0..3.
constexpr int oam_sign(int idx) { return (idx == 0 || idx == 2) ? -1 : +1; }

/// Polarization carried by mode index 0..3.
constexpr Pol pol(int idx) { return (idx == 0 || idx == 3) ? Pol::H : Pol::V; }

/// Inverse map: (oam sign, polarization) -> mode index.
constexpr int index_of(int oam_sign, Pol p) {
    if (oam_sign < 0)
        return p == Pol::H ? 0 : 2;
    return p == Pol::H ? 3 : 1;
}

} // namespace mode

/// One photon's normalized amplitude vector over the 4 mode basis states.
struct SinglePhotonState {
    Vec4c amplitudes = Vec4c::Zero();

    SinglePhotonState() = default;
    explicit SinglePhotonState(Vec4c a) : amplitudes(std::move(a)) {}

    static SinglePhotonState basis(int idx) {
        SinglePhotonState s;
        s.amplitudes(idx) = 1.0;
        return s;
    }

    double norm() const { return amplitudes.norm(); }

    SinglePhotonState normalized() const {
        double n = norm();
        if (n == 0.0)
            throw std::invalid_argument("cannot normalize zero state");
        return SinglePhotonState(amplitudes / n);
    }

    bool is_normalized(double tol = kAlgebraTol) const {
        return std::abs(amplitudes.squaredNorm() - 1.0) <= tol;
    }
};

/// Joint two-photon amplitude matrix; row = photon-A mode, column = photon-B
/// mode. Lives in one OAM subspace m >= 1.
struct TwoPhotonState {
    Mat4c amplitudes = Mat4c::Zero();
    int subspace_m = 1;

    TwoPhotonState() = default;
    TwoPhotonState(Mat4c a, int m) : amplitudes(std::move(a)), subspace_m(m) {
        if (m < 1)
            throw std::invalid_argument("subspace_m must be >= 1");
    }

    double norm() const { return amplitudes.norm(); } // Frobenius

    TwoPhotonState normalized() const {
        double n = norm();
        if (n == 0.0)
            throw std::invalid_argument("cannot normalize zero state");
        return TwoPhotonState(amplitudes / n, subspace_m);
    }

    bool is_normalized(double tol = kAlgebraTol) const {
        return std::abs(amplitudes.squaredNorm() - 1.0) <= tol;
    }
};

enum class DimTag { mode4, path_extended };

/// Unitary acting on a single photon's mode space: 4-dim, or 8/16-dim when the
/// propagation path is tracked as an extra factor. Construction checks
/// U U^dag = I entrywise to 1e-10 and throws otherwise.
struct ModeUnitary {
    Eigen::MatrixXcd matrix;
    DimTag dim_tag = DimTag::mode4;

    ModeUnitary() : matrix(Mat4c::Identity()) {}
    ModeUnitary(Eigen::MatrixXcd u, DimTag tag);

    int dim() const { return static_cast<int>(matrix.rows()); }

    /// Max entrywise deviation of U U^dag from the identity.
    double unitarity_residual() const;
};

enum class Photon { A, B };

/// Product state a (x) b in subspace m.
TwoPhotonState tensor(const SinglePhotonState& a, const SinglePhotonState& b,
                      int subspace_m = 1);

/// <x|y>, conjugate-linear in x. Throws if the subspaces differ.
Complex inner(const TwoPhotonState& x, const TwoPhotonState& y);

/// Apply a 4-dim unitary to one photon of the pair.
TwoPhotonState apply_local(const ModeUnitary& u, Photon which,
                           const TwoPhotonState& s);

/// True iff x and y are the same ray: |<x|y>| >= 1 - tol.
bool global_phase_equal(const TwoPhotonState& x, const TwoPhotonState& y,
                        double tol = kUnitaryTol);

} // namespace oambsm
