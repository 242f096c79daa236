#include "oambsm/measurement.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace oambsm {

void CoincidenceTable::validate() const {
    if ((values.array() < 0.0).any())
        throw std::invalid_argument("coincidence table has negative cells");
    if (kind == Kind::Probability) {
        if (std::abs(total() - 1.0) > 1e-9)
            throw std::invalid_argument("probability table must sum to 1");
    } else {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (values(i, j) != std::floor(values(i, j)))
                    throw std::invalid_argument("counts table must be integer");
    }
}

NoiseModel::NoiseModel(Kind k, double s) : kind(k), strength(s) {
    if (s < 0.0 || s > 1.0)
        throw std::invalid_argument("noise strength must be in [0,1]");
}

CoincidenceTable coincidence_table(const TwoPhotonState& s,
                                   const Basis& basisA, const Basis& basisB) {
    Mat4c c = decompose(s, basisA, basisB);
    CoincidenceTable t;
    t.values = c.cwiseAbs2();
    t.kind = CoincidenceTable::Kind::Probability;
    return t;
}

SupportPattern support_pattern(const CoincidenceTable& t,
                               std::optional<double> fire) {
    double threshold;
    if (fire) {
        threshold = *fire;
    } else if (t.kind == CoincidenceTable::Kind::Counts) {
        threshold = 0.05 * t.values.maxCoeff();
    } else {
        threshold = kFireThreshold;
    }
    SupportPattern p;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            if (t.values(k, l) > threshold)
                p.combos.insert({k + 1, l + 1});
    return p;
}

double snr(const CoincidenceTable& t, const SupportPattern& expected) {
    if (expected.combos.size() != 4)
        throw std::invalid_argument("snr: expected pattern must have 4 combos");
    if (t.total() == 0.0)
        throw std::invalid_argument("snr: empty table");
    double on = 0.0;
    for (auto [k, l] : expected.combos)
        on += t.values(k - 1, l - 1);
    double off = t.total() - on;
    if (off <= 0.0)
        return std::numeric_limits<double>::infinity();
    return on / off;
}

CoincidenceTable apply_noise(const CoincidenceTable& t, const NoiseModel& n) {
    if (t.kind != CoincidenceTable::Kind::Probability)
        throw std::invalid_argument("apply_noise requires a probability table");
    CoincidenceTable out = t;
    out.values = (1.0 - n.strength) * t.values.array() + n.strength / 16.0;
    return out;
}

namespace {

// Uniform double in [0,1) from the standard-pinned mt19937_64 stream;
// distribution classes are avoided because their mapping is
// implementation-defined.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

CoincidenceTable simulate_counts(const CoincidenceTable& t, std::int64_t total,
                                 std::uint64_t seed) {
    if (t.kind != CoincidenceTable::Kind::Probability)
        throw std::invalid_argument("simulate_counts requires probabilities");
    if (total < 0)
        throw std::invalid_argument("simulate_counts: total must be >= 0");

    std::array<double, 16> cdf{};
    double acc = 0.0;
    for (int cell = 0; cell < 16; ++cell) {
        acc += t.values(cell / 4, cell % 4);
        cdf[static_cast<std::size_t>(cell)] = acc;
    }

    std::mt19937_64 rng(seed);
    CoincidenceTable out;
    out.kind = CoincidenceTable::Kind::Counts;
    out.duration_s = t.duration_s;
    out.values = Mat4d::Zero();
    for (std::int64_t n = 0; n < total; ++n) {
        double u = uniform01(rng) * acc;
        int cell = 0;
        while (cell < 15 && u >= cdf[static_cast<std::size_t>(cell)])
            ++cell;
        out.values(cell / 4, cell % 4) += 1.0;
    }
    return out;
}

} // namespace oambsm
