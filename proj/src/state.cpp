#include "oambsm/state.hpp"

namespace oambsm {

ModeUnitary::ModeUnitary(Eigen::MatrixXcd u, DimTag tag)
    : matrix(std::move(u)), dim_tag(tag) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("ModeUnitary must be square");
    const int d = dim();
    if (dim_tag == DimTag::mode4 && d != 4)
        throw std::invalid_argument("mode4 unitary must be 4x4");
    if (dim_tag == DimTag::path_extended && d != 8 && d != 16)
        throw std::invalid_argument("path-extended unitary must be 8x8 or 16x16");
    if (unitarity_residual() > kUnitaryTol)
        throw std::invalid_argument("matrix is not unitary within 1e-10");
}

double ModeUnitary::unitarity_residual() const {
    Eigen::MatrixXcd r = matrix * matrix.adjoint();
    r -= Eigen::MatrixXcd::Identity(dim(), dim());
    return r.cwiseAbs().maxCoeff();
}

TwoPhotonState tensor(const SinglePhotonState& a, const SinglePhotonState& b,
                      int subspace_m) {
    return TwoPhotonState(a.amplitudes * b.amplitudes.transpose(), subspace_m);
}

Complex inner(const TwoPhotonState& x, const TwoPhotonState& y) {
    if (x.subspace_m != y.subspace_m)
        throw std::invalid_argument("inner: subspace mismatch");
    return (x.amplitudes.conjugate().cwiseProduct(y.amplitudes)).sum();
}

TwoPhotonState apply_local(const ModeUnitary& u, Photon which,
                           const TwoPhotonState& s) {
    if (u.dim_tag != DimTag::mode4)
        throw std::invalid_argument("apply_local requires a 4-dim mode unitary");
    Mat4c m = u.matrix;
    if (which == Photon::A)
        return TwoPhotonState(m * s.amplitudes, s.subspace_m);
    return TwoPhotonState(s.amplitudes * m.transpose(), s.subspace_m);
}

bool global_phase_equal(const TwoPhotonState& x, const TwoPhotonState& y,
                        double tol) {
    return std::abs(inner(x, y)) >= 1.0 - tol;
}

} // namespace oambsm
