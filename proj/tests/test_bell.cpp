#include "oambsm/bell.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <set>

using namespace oambsm;
using testutil::expected_bell_amplitudes;
using testutil::expected_target_coefficients;

TEST_CASE("polarization Bell state") {
    Eigen::Matrix2cd p = pol_bell_psi_plus();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p(0, 1) - r) < kAlgebraTol);
    CHECK(std::abs(p(1, 0) - r) < kAlgebraTol);
    CHECK(std::abs(p(0, 0)) < kAlgebraTol);
    CHECK(std::abs(p(1, 1)) < kAlgebraTol);
    CHECK(std::abs(p.squaredNorm() - 1.0) < kAlgebraTol);
}

TEST_CASE("hyper_bell matches the hand expansion") {
    for (BellLabel label : kAllBellLabels) {
        TwoPhotonState s = hyper_bell(label, 1);
        CHECK((s.amplitudes - expected_bell_amplitudes(label))
                  .cwiseAbs()
                  .maxCoeff() < kAlgebraTol);
        CHECK(s.is_normalized());
    }
    // spot values named explicitly: A=|+1,H> B=|-1,V> is (3,2)
    CHECK(hyper_bell(BellLabel::PsiPlus, 1).amplitudes(3, 2).real() ==
          doctest::Approx(0.5));
    // A=|-1,H> B=|+1,V> is (0,1)
    CHECK(hyper_bell(BellLabel::PsiMinus, 1).amplitudes(0, 1).real() ==
          doctest::Approx(-0.5));

    CHECK_THROWS_AS((void)hyper_bell(BellLabel::PsiPlus, 0),
                    std::invalid_argument);
}

TEST_CASE("hyper Bell states are orthonormal") {
    for (BellLabel x : kAllBellLabels) {
        for (BellLabel y : kAllBellLabels) {
            Complex ip = inner(hyper_bell(x, 1), hyper_bell(y, 1));
            if (x == y)
                CHECK(std::abs(ip - 1.0) < kAlgebraTol);
            else
                CHECK(std::abs(ip) < kAlgebraTol);
        }
    }
}

TEST_CASE("hyper_source") {
    SourceSpectrum single = SourceSpectrum::single_subspace(1);
    auto components = hyper_source(single);
    REQUIRE(components.size() == 1);
    CHECK(components[0].m == 1);
    CHECK(components[0].weight == doctest::Approx(1.0));
    CHECK(global_phase_equal(components[0].state,
                             hyper_bell(BellLabel::PsiPlus, 1), 1e-12));

    SourceSpectrum split;
    split.weights = {{1, 1.0 / std::sqrt(2.0)}, {2, 1.0 / std::sqrt(2.0)}};
    auto two = hyper_source(split);
    REQUIRE(two.size() == 2);
    CHECK(two[0].weight == doctest::Approx(0.5));
    CHECK(two[1].weight == doctest::Approx(0.5));
    CHECK(two[1].state.subspace_m == 2);

    SourceSpectrum empty;
    CHECK_THROWS_AS((void)hyper_source(empty), std::invalid_argument);

    SourceSpectrum dup;
    dup.weights = {{1, 1.0 / std::sqrt(2.0)}, {1, 1.0 / std::sqrt(2.0)}};
    CHECK_THROWS_AS((void)hyper_source(dup), std::invalid_argument);

    SourceSpectrum unnormalized;
    unnormalized.weights = {{1, 0.5}};
    CHECK_THROWS_AS((void)hyper_source(unnormalized), std::invalid_argument);

    SourceSpectrum bad_m;
    bad_m.weights = {{0, 1.0}};
    CHECK_THROWS_AS((void)hyper_source(bad_m), std::invalid_argument);
}

TEST_CASE("encode reaches every Bell state with Dove prisms only") {
    const Codebook cb = Codebook::standard();
    const TwoPhotonState source = hyper_bell(BellLabel::PsiPlus, 1);

    for (int msg = 0; msg < 4; ++msg) {
        TwoPhotonState out = encode(msg, source, cb);
        CHECK(out.is_normalized());
        CHECK(global_phase_equal(out, hyper_bell(cb.label(msg), 1), 1e-12));
    }

    // the four encoded states are pairwise orthogonal
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            CHECK(std::abs(inner(encode(a, source, cb),
                                 encode(b, source, cb))) < kAlgebraTol);

    // photon B is untouched: tracing over A commutes with encoding on B's
    // marginal; check the column space norm per B mode stays equal
    TwoPhotonState encoded = encode(3, source, cb);
    for (int j = 0; j < 4; ++j)
        CHECK(encoded.amplitudes.col(j).norm() ==
              doctest::Approx(source.amplitudes.col(j).norm()));
}

TEST_CASE("codebook") {
    Codebook cb = Codebook::standard();
    cb.validate();
    CHECK(cb.label(0) == BellLabel::PsiPlus);
    CHECK(cb.message(BellLabel::PhiMinus) == 3);

    Codebook broken;
    broken.label_for_message = {BellLabel::PsiPlus, BellLabel::PsiPlus,
                                BellLabel::PhiPlus, BellLabel::PhiMinus};
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)cb.label(4), std::invalid_argument);
}

TEST_CASE("standard unitary and target basis") {
    ModeUnitary u = standard_bsm_unitary();
    CHECK(u.unitarity_residual() < kAlgebraTol);

    const double r = 1.0 / std::sqrt(2.0);
    Basis bt = target_basis(u);
    Mat4c expected;
    expected << r, r, 0, 0,
                r, -r, 0, 0,
                0, 0, r, r,
                0, 0, r, -r;
    for (int k = 0; k < 4; ++k)
        CHECK((bt[static_cast<std::size_t>(k)].amplitudes -
               expected.row(k).transpose())
                  .cwiseAbs()
                  .maxCoeff() < kAlgebraTol);

    // identity gives back the initial basis
    Basis bi = target_basis(ModeUnitary(Mat4c::Identity(), DimTag::mode4));
    for (int k = 0; k < 4; ++k)
        CHECK((bi[static_cast<std::size_t>(k)].amplitudes -
               initial_basis()[static_cast<std::size_t>(k)].amplitudes)
                  .cwiseAbs()
                  .maxCoeff() < kAlgebraTol);

    // a permutation permutes it
    Mat4c p = Mat4c::Zero();
    p(0, 2) = 1; p(1, 3) = 1; p(2, 0) = 1; p(3, 1) = 1;
    Basis bp = target_basis(ModeUnitary(p, DimTag::mode4));
    CHECK(std::abs(bp[0].amplitudes(2) - 1.0) < kAlgebraTol);
    CHECK(std::abs(bp[3].amplitudes(1) - 1.0) < kAlgebraTol);
}

TEST_CASE("decompose in the target basis reproduces the four-term tables") {
    const Basis bt = standard_target_basis();
    for (BellLabel label : kAllBellLabels) {
        Mat4c c = decompose(hyper_bell(label, 1), bt, bt);
        CHECK((c - expected_target_coefficients(label)).cwiseAbs().maxCoeff() <
              kAlgebraTol);
    }
}

TEST_CASE("each target decomposition has four +-1/2 entries, disjoint") {
    const Basis bt = standard_target_basis();
    std::set<std::pair<int, int>> seen;
    for (BellLabel label : kAllBellLabels) {
        Mat4c c = decompose(hyper_bell(label, 1), bt, bt);
        int nonzero = 0;
        for (int k = 0; k < 4; ++k) {
            for (int l = 0; l < 4; ++l) {
                double mag = std::abs(c(k, l));
                if (mag < kAlgebraTol)
                    continue;
                ++nonzero;
                CHECK(std::abs(mag - 0.5) < kAlgebraTol);
                CHECK(seen.insert({k, l}).second);
            }
        }
        CHECK(nonzero == 4);
    }
    CHECK(seen.size() == 16);
}

TEST_CASE("initial-basis decomposition leaves Psi and Phi pairs degenerate") {
    const Basis bi = initial_basis();
    Mat4c p = decompose(hyper_bell(BellLabel::PsiPlus, 1), bi, bi);
    // support is exactly {(0,1),(1,0),(2,3),(3,2)}
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            bool on = (k == 0 && l == 1) || (k == 1 && l == 0) ||
                      (k == 2 && l == 3) || (k == 3 && l == 2);
            CHECK(std::abs(p(k, l)) >= (on ? 0.5 - 1e-12 : 0.0));
            if (!on)
                CHECK(std::abs(p(k, l)) < kAlgebraTol);
        }
}

TEST_CASE("decompose rejects non-orthonormal bases and reconstructs states") {
    Basis bad = initial_basis();
    bad[1] = bad[0];
    CHECK_THROWS_AS(
        (void)decompose(hyper_bell(BellLabel::PsiPlus, 1), bad, initial_basis()),
        std::invalid_argument);

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        TwoPhotonState s = testutil::random_two_photon(rng);
        Basis ba = testutil::random_basis(rng);
        Basis bb = testutil::random_basis(rng);
        Mat4c c = decompose(s, ba, bb);

        CHECK(std::abs(c.squaredNorm() - 1.0) < kAlgebraTol); // completeness

        Mat4c rebuilt = Mat4c::Zero();
        for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
                rebuilt += c(k, l) *
                           (ba[static_cast<std::size_t>(k)].amplitudes *
                            bb[static_cast<std::size_t>(l)].amplitudes
                                .transpose());
        CHECK((rebuilt - s.amplitudes).cwiseAbs().maxCoeff() < kAlgebraTol);
    }
}
