#include "oambsm/bell.hpp"

#include "oambsm/elements.hpp"

#include <cmath>

namespace oambsm {

std::string to_string(BellLabel label) {
    switch (label) {
    case BellLabel::PsiPlus: return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
    case BellLabel::PhiPlus: return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
    }
    throw std::invalid_argument("bad BellLabel");
}

BellLabel bell_label_from_string(const std::string& name) {
    for (BellLabel l : kAllBellLabels)
        if (to_string(l) == name)
            return l;
    throw std::invalid_argument("unknown Bell label: " + name);
}

Basis initial_basis() {
    return {SinglePhotonState::basis(0), SinglePhotonState::basis(1),
            SinglePhotonState::basis(2), SinglePhotonState::basis(3)};
}

Basis target_basis(const ModeUnitary& u) {
    if (u.dim_tag != DimTag::mode4)
        throw std::invalid_argument("target_basis requires a 4-dim mode unitary");
    Basis b;
    for (int k = 0; k < 4; ++k)
        b[k] = SinglePhotonState(u.matrix.row(k).transpose());
    return b;
}

ModeUnitary standard_bsm_unitary() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat4c u = Mat4c::Zero();
    u(0, 0) = r;  u(0, 1) = r;
    u(1, 0) = r;  u(1, 1) = -r;
    u(2, 2) = r;  u(2, 3) = r;
    u(3, 2) = r;  u(3, 3) = -r;
    return ModeUnitary(u, DimTag::mode4);
}

Basis standard_target_basis() { return target_basis(standard_bsm_unitary()); }

Eigen::Matrix2cd pol_bell_psi_plus() {
    Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
    const double r = 1.0 / std::sqrt(2.0);
    p(static_cast<int>(Pol::H), static_cast<int>(Pol::V)) = r;
    p(static_cast<int>(Pol::V), static_cast<int>(Pol::H)) = r;
    return p;
}

TwoPhotonState hyper_bell(BellLabel label, int m) {
    if (m < 1)
        throw std::invalid_argument("hyper_bell: m must be >= 1");

    // OAM part: (|s1>_A|s2>_B + sign |−s1>_A|−s2>_B)/sqrt(2)
    const bool psi = label == BellLabel::PsiPlus || label == BellLabel::PsiMinus;
    const double sign =
        (label == BellLabel::PsiPlus || label == BellLabel::PhiPlus) ? 1.0 : -1.0;
    const int sB_first = psi ? -1 : +1; // partner sign of the |+m>_A term

    const Eigen::Matrix2cd pol = pol_bell_psi_plus();
    const double r = 1.0 / std::sqrt(2.0);

    Mat4c amp = Mat4c::Zero();
    struct OamTerm {
        int sA, sB;
        double coef;
    };
    const std::array<OamTerm, 2> oam_terms = {
        OamTerm{+1, sB_first, r}, OamTerm{-1, -sB_first, sign * r}};
    for (const auto& t : oam_terms) {
        for (int pa = 0; pa < 2; ++pa) {
            for (int pb = 0; pb < 2; ++pb) {
                Complex c = pol(pa, pb);
                if (c == 0.0)
                    continue;
                int ia = mode::index_of(t.sA, static_cast<Pol>(pa));
                int ib = mode::index_of(t.sB, static_cast<Pol>(pb));
                amp(ia, ib) += t.coef * c;
            }
        }
    }
    return TwoPhotonState(amp, m);
}

void SourceSpectrum::validate() const {
    if (weights.empty())
        throw std::invalid_argument("source spectrum is empty");
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].m < 1)
            throw std::invalid_argument("source spectrum: m must be >= 1");
        for (std::size_t j = 0; j < i; ++j)
            if (weights[j].m == weights[i].m)
                throw std::invalid_argument("source spectrum: duplicate m");
        total += std::norm(weights[i].c);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("source spectrum: sum |c_m|^2 must be 1");
}

SourceSpectrum SourceSpectrum::single_subspace(int m) {
    SourceSpectrum s;
    s.weights.push_back({m, 1.0});
    return s;
}

std::vector<SubspaceComponent> hyper_source(const SourceSpectrum& spec) {
    spec.validate();
    std::vector<SubspaceComponent> out;
    out.reserve(spec.weights.size());
    for (const auto& t : spec.weights)
        out.push_back({t.m, std::norm(t.c), hyper_bell(BellLabel::PsiPlus, t.m)});
    return out;
}

BellLabel Codebook::label(int message) const {
    if (message < 0 || message > 3)
        throw std::invalid_argument("message must be in 0..3");
    return label_for_message[static_cast<std::size_t>(message)];
}

int Codebook::message(BellLabel label) const {
    for (int msg = 0; msg < 4; ++msg)
        if (label_for_message[static_cast<std::size_t>(msg)] == label)
            return msg;
    throw std::invalid_argument("codebook is not a bijection");
}

void Codebook::validate() const {
    for (BellLabel l : kAllBellLabels)
        (void)message(l);
}

TwoPhotonState encode(int message, const TwoPhotonState& s,
                      const Codebook& codebook) {
    const int m = s.subspace_m;
    switch (codebook.label(message)) {
    case BellLabel::PsiPlus:
        return s;
    case BellLabel::PsiMinus:
        return apply_local(dove_pair(m), Photon::A, s);
    case BellLabel::PhiPlus:
        return apply_local(dove_single(0.0, m), Photon::A, s);
    case BellLabel::PhiMinus:
        return apply_local(dove_pair(m), Photon::A,
                           apply_local(dove_single(0.0, m), Photon::A, s));
    }
    throw std::logic_error("unreachable");
}

double orthonormality_residual(const Basis& basis) {
    Mat4c gram;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            gram(i, j) = basis[static_cast<std::size_t>(i)].amplitudes.dot(
                basis[static_cast<std::size_t>(j)].amplitudes);
    return (gram - Mat4c::Identity()).cwiseAbs().maxCoeff();
}

Mat4c decompose(const TwoPhotonState& s, const Basis& basisA,
                const Basis& basisB) {
    if (orthonormality_residual(basisA) > kUnitaryTol ||
        orthonormality_residual(basisB) > kUnitaryTol)
        throw std::invalid_argument("decompose: basis is not orthonormal");
    Mat4c c;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            c(k, l) = basisA[static_cast<std::size_t>(k)]
                          .amplitudes.conjugate()
                          .transpose() *
                      s.amplitudes *
                      basisB[static_cast<std::size_t>(l)].amplitudes.conjugate();
    return c;
}

} // namespace oambsm
