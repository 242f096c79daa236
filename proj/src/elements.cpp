#include "oambsm/elements.hpp"

#include <cmath>
#include <numbers>

namespace oambsm {

namespace {

constexpr Complex kI{0.0, 1.0};

using Mat16 = Eigen::Matrix<Complex, 16, 16>;

Mat16 identity16() { return Mat16::Identity(); }

// canonical angle range [0, 2*pi)
double wrap_angle(double a) {
    constexpr double kTau = 2.0 * std::numbers::pi;
    a = std::fmod(a, kTau);
    return a < 0.0 ? a + kTau : a;
}

} // namespace

namespace path {

Eigen::VectorXcd embed_mode4(const Vec4c& v) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(kDim);
    for (int i = 0; i < 4; ++i) {
        int oam = mode::oam_sign(i) < 0 ? kOamMinus : kOamPlus;
        out(index(0, oam, static_cast<int>(mode::pol(i)))) = v(i);
    }
    return out;
}

} // namespace path

std::string ElementSpec::kind_name() const {
    switch (kind) {
    case Kind::DoveSingle: return "dove_single";
    case Kind::DovePair: return "dove_pair";
    case Kind::Pbs: return "pbs";
    case Kind::Bs: return "bs";
    case Kind::PhasePlate: return "phase_plate";
    case Kind::QplateQwp: return "qplate_qwp";
    case Kind::Pbs45: return "pbs45";
    }
    throw std::logic_error("bad element kind");
}

ModeUnitary dove_single(double alpha, int m) {
    alpha = wrap_angle(alpha);
    Mat4c u = Mat4c::Zero();
    for (int i = 0; i < 4; ++i) {
        int sign = mode::oam_sign(i);
        int j = mode::index_of(-sign, mode::pol(i));
        u(j, i) = std::exp(-kI * (2.0 * m * alpha) * static_cast<double>(sign));
    }
    return ModeUnitary(u, DimTag::mode4);
}

ModeUnitary dove_pair(int m) {
    (void)m; // the pair angle pi/(4m) scales with m; the net phases do not
    Mat4c u = Mat4c::Zero();
    for (int i = 0; i < 4; ++i)
        u(i, i) = mode::oam_sign(i) > 0 ? kI : -kI;
    return ModeUnitary(u, DimTag::mode4);
}

ModeUnitary pbs() {
    Mat16 u = Mat16::Zero();
    for (int port = 0; port < 2; ++port) {
        for (int oam = 0; oam < 4; ++oam) {
            u(path::index(port, oam, 0), path::index(port, oam, 0)) = 1.0;
            u(path::index(1 - port, oam, 1), path::index(port, oam, 1)) = 1.0;
        }
    }
    return ModeUnitary(u, DimTag::path_extended);
}

ModeUnitary bs() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat16 u = Mat16::Zero();
    for (int oam = 0; oam < 4; ++oam) {
        for (int pol = 0; pol < 2; ++pol) {
            int a = path::index(0, oam, pol);
            int b = path::index(1, oam, pol);
            u(a, a) = r;
            u(b, a) = kI * r;
            u(a, b) = kI * r;
            u(b, b) = r;
        }
    }
    return ModeUnitary(u, DimTag::path_extended);
}

ModeUnitary phase_plate(double phi, int arm) {
    Mat16 u = identity16();
    Complex ph = std::exp(kI * phi);
    for (int oam = 0; oam < 4; ++oam)
        for (int pol = 0; pol < 2; ++pol)
            u(path::index(arm, oam, pol), path::index(arm, oam, pol)) = ph;
    return ModeUnitary(u, DimTag::path_extended);
}

ModeUnitary dove_pair_in_arm(int arm, int m) {
    (void)m;
    Mat16 u = identity16();
    for (int pol = 0; pol < 2; ++pol) {
        u(path::index(arm, path::kOamMinus, pol),
          path::index(arm, path::kOamMinus, pol)) = -kI;
        u(path::index(arm, path::kOamPlus, pol),
          path::index(arm, path::kOamPlus, pol)) = kI;
    }
    return ModeUnitary(u, DimTag::path_extended);
}

ModeUnitary qplate_qwp(int port) {
    Mat16 u = identity16();
    auto swap_pair = [&u](int a, int b, Complex forward) {
        u(a, a) = 0.0;
        u(b, b) = 0.0;
        u(b, a) = forward;
        u(a, b) = std::conj(forward);
    };
    if (port == 1) {
        swap_pair(path::index(1, path::kOamMinus, 0),
                  path::index(1, path::kOamGauss, 0), 1.0);
        swap_pair(path::index(1, path::kOamPlus, 1),
                  path::index(1, path::kOamGauss, 1), kI);
        swap_pair(path::index(1, path::kOamMinus, 1),
                  path::index(1, path::kOamFiltered, 1), 1.0);
        swap_pair(path::index(1, path::kOamPlus, 0),
                  path::index(1, path::kOamFiltered, 0), 1.0);
    } else if (port == 0) {
        // converts V to H on the Gaussian track and vice versa
        swap_pair(path::index(0, path::kOamMinus, 1),
                  path::index(0, path::kOamGauss, 0), 1.0);
        swap_pair(path::index(0, path::kOamPlus, 0),
                  path::index(0, path::kOamGauss, 1), -kI);
        swap_pair(path::index(0, path::kOamMinus, 0),
                  path::index(0, path::kOamFiltered, 0), 1.0);
        swap_pair(path::index(0, path::kOamPlus, 1),
                  path::index(0, path::kOamFiltered, 1), 1.0);
    } else {
        throw std::invalid_argument("qplate_qwp: port must be 0 or 1");
    }
    return ModeUnitary(u, DimTag::path_extended);
}

ModeUnitary pbs45() {
    const double r = 1.0 / std::sqrt(2.0);
    Mat16 u = Mat16::Zero();
    for (int port = 0; port < 2; ++port) {
        for (int oam = 0; oam < 4; ++oam) {
            int h = path::index(port, oam, 0);
            int v = path::index(port, oam, 1);
            u(h, h) = r;
            u(h, v) = r;
            u(v, h) = r;
            u(v, v) = -r;
        }
    }
    return ModeUnitary(u, DimTag::path_extended);
}

std::array<double, 4> detector_probs(const Eigen::VectorXcd& v16) {
    std::array<double, 4> p{};
    for (int port = 0; port < 2; ++port)
        for (int pol = 0; pol < 2; ++pol)
            p[static_cast<std::size_t>(port * 2 + pol)] =
                std::norm(v16(path::index(port, path::kOamGauss, pol)));
    return p;
}

AnalyzerChain analyzer_chain(const AnalyzerConfig& cfg) {
    AnalyzerChain chain;
    chain.config = cfg;
    chain.config.mzi_phase = wrap_angle(cfg.mzi_phase);
    const double phi = chain.config.mzi_phase;

    Mat16 composite = pbs45().matrix * qplate_qwp(1).matrix *
                      qplate_qwp(0).matrix * bs().matrix *
                      phase_plate(phi, 1).matrix *
                      dove_pair_in_arm(0, cfg.m).matrix * bs().matrix *
                      pbs().matrix;
    chain.composite = ModeUnitary(composite, DimTag::path_extended);

    chain.map.chain = {
        {ElementSpec::Kind::Pbs, 0.0, 0, 0, cfg.m},
        {ElementSpec::Kind::Bs, 0.0, 0, 0, cfg.m},
        {ElementSpec::Kind::DovePair, 0.0, 0, 0, cfg.m},
        {ElementSpec::Kind::PhasePlate, phi, 1, 0, cfg.m},
        {ElementSpec::Kind::Bs, 0.0, 0, 0, cfg.m},
        {ElementSpec::Kind::QplateQwp, 0.0, 0, 0, cfg.m},
        {ElementSpec::Kind::QplateQwp, 0.0, 0, 1, cfg.m},
        {ElementSpec::Kind::Pbs45, 0.0, 0, 0, cfg.m},
    };

    const Basis targets = standard_target_basis();
    double min_fid = 1.0;
    std::array<bool, 4> bin_used{};
    bool bijective = true;
    for (int k = 0; k < 4; ++k) {
        Eigen::VectorXcd out =
            chain.composite.matrix *
            path::embed_mode4(targets[static_cast<std::size_t>(k)].amplitudes);
        auto probs = detector_probs(out);
        int best = 0;
        for (int b = 1; b < 4; ++b)
            if (probs[static_cast<std::size_t>(b)] >
                probs[static_cast<std::size_t>(best)])
                best = b;
        chain.map.bin_for_target[static_cast<std::size_t>(k)] = best;
        min_fid = std::min(min_fid, probs[static_cast<std::size_t>(best)]);
        if (bin_used[static_cast<std::size_t>(best)])
            bijective = false;
        bin_used[static_cast<std::size_t>(best)] = true;
    }
    chain.min_routing_fidelity = min_fid;
    chain.map.valid = bijective && min_fid >= 1.0 - 1e-9;
    return chain;
}

double tune_analyzer(int m) {
    constexpr int kSteps = 360; // grid step pi/180
    double best_phi = 0.0;
    double best_fid = -1.0;
    for (int i = 0; i < kSteps; ++i) {
        double phi = i * (std::numbers::pi / 180.0);
        AnalyzerChain c = analyzer_chain({phi, m});
        if (c.min_routing_fidelity > best_fid) {
            best_fid = c.min_routing_fidelity;
            best_phi = phi;
        }
    }
    if (best_fid <= 0.999)
        throw std::runtime_error(
            "tune_analyzer: no MZI phase routes the target basis; "
            "element conventions are inconsistent");
    return best_phi;
}

Mat4d chain_coincidence_probs(const AnalyzerChain& chain,
                              const TwoPhotonState& s) {
    // Path-extend the joint amplitudes (both photons enter on port 0), then
    // transform photon A by the chain and photon B by its transpose.
    Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(path::kDim, path::kDim);
    for (int i = 0; i < 4; ++i) {
        int oa = mode::oam_sign(i) < 0 ? path::kOamMinus : path::kOamPlus;
        int ia = path::index(0, oa, static_cast<int>(mode::pol(i)));
        for (int j = 0; j < 4; ++j) {
            int ob = mode::oam_sign(j) < 0 ? path::kOamMinus : path::kOamPlus;
            int ib = path::index(0, ob, static_cast<int>(mode::pol(j)));
            joint(ia, ib) = s.amplitudes(i, j);
        }
    }
    joint = chain.composite.matrix * joint * chain.composite.matrix.transpose();

    std::array<int, 4> bin_index{};
    for (int port = 0; port < 2; ++port)
        for (int pol = 0; pol < 2; ++pol)
            bin_index[static_cast<std::size_t>(port * 2 + pol)] =
                path::index(port, path::kOamGauss, pol);

    Mat4d probs = Mat4d::Zero();
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            probs(k, l) = std::norm(joint(
                bin_index[static_cast<std::size_t>(
                    chain.map.bin_for_target[static_cast<std::size_t>(k)])],
                bin_index[static_cast<std::size_t>(
                    chain.map.bin_for_target[static_cast<std::size_t>(l)])]));
    return probs;
}

} // namespace oambsm
