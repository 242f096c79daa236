#include "oambsm/channel.hpp"

#include <cmath>
#include <random>

namespace oambsm {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log2_safe(double x) { return std::log2(x); }

void check_partition(const PatternMap& patterns) {
    std::set<std::pair<int, int>> all;
    for (const auto& [label, pattern] : patterns)
        for (const auto& combo : pattern.combos)
            if (!all.insert(combo).second)
                throw std::invalid_argument("patterns overlap");
    if (patterns.size() != 4 || all.size() != 16)
        throw std::invalid_argument("patterns must partition the 16 combos");
}

double pattern_mass(const Mat4d& values, const SupportPattern& p) {
    double mass = 0.0;
    for (auto [k, l] : p.combos)
        mass += values(k - 1, l - 1);
    return mass;
}

} // namespace

void ConfusionMatrix::validate() const {
    for (int x = 0; x < 4; ++x) {
        double row = 0.0;
        for (int y = 0; y < 4; ++y) {
            if (w(x, y) < 0.0 || w(x, y) > 1.0)
                throw std::invalid_argument("confusion entries must be in [0,1]");
            row += w(x, y);
        }
        if (std::abs(row - 1.0) > 1e-9)
            throw std::invalid_argument("confusion rows must sum to 1");
    }
}

void InputDistribution::validate() const {
    double total = 0.0;
    for (int x = 0; x < 4; ++x) {
        if (p(x) < 0.0)
            throw std::invalid_argument("input distribution must be >= 0");
        total += p(x);
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("input distribution must sum to 1");
}

PatternMap standard_patterns() {
    static const PatternMap patterns = [] {
        CriterionResult r = criterion_check(standard_bsm_unitary());
        if (!r.pass)
            throw std::logic_error("standard unitary fails the criterion");
        return r.patterns;
    }();
    return patterns;
}

BellLabel decode(const CoincidenceTable& t, const PatternMap& patterns) {
    check_partition(patterns);
    if (t.total() <= 0.0)
        throw std::invalid_argument("decode: all-zero table");
    BellLabel best = BellLabel::PsiPlus;
    double best_mass = -1.0;
    for (BellLabel label : kAllBellLabels) {
        double mass = pattern_mass(t.values, patterns.at(label));
        if (mass > best_mass) { // strict: ties keep the earlier label
            best_mass = mass;
            best = label;
        }
    }
    return best;
}

ConfusionMatrix confusion_matrix(const NoiseModel& noise,
                                 const TrialsMode& mode,
                                 const PatternMap& patterns) {
    check_partition(patterns);
    const Basis targets = standard_target_basis();

    // label of the combo a single coincidence lands on
    std::array<BellLabel, 16> label_of_cell{};
    for (const auto& [label, pattern] : patterns)
        for (auto [k, l] : pattern.combos)
            label_of_cell[static_cast<std::size_t>((k - 1) * 4 + (l - 1))] =
                label;

    ConfusionMatrix cm;
    cm.w = Mat4d::Zero();
    std::mt19937_64 rng(mode.seed);
    for (BellLabel sent : kAllBellLabels) {
        CoincidenceTable noisy = apply_noise(
            coincidence_table(hyper_bell(sent, 1), targets, targets), noise);
        const int x = static_cast<int>(sent);
        if (mode.kind == TrialsMode::Kind::Analytic) {
            for (BellLabel decoded : kAllBellLabels)
                cm.w(x, static_cast<int>(decoded)) =
                    pattern_mass(noisy.values, patterns.at(decoded));
        } else {
            if (mode.n <= 0)
                throw std::invalid_argument("sampled mode needs n > 0");
            std::array<double, 16> cdf{};
            double acc = 0.0;
            for (int cell = 0; cell < 16; ++cell) {
                acc += noisy.values(cell / 4, cell % 4);
                cdf[static_cast<std::size_t>(cell)] = acc;
            }
            for (std::int64_t i = 0; i < mode.n; ++i) {
                double u = uniform01(rng) * acc;
                int cell = 0;
                while (cell < 15 && u >= cdf[static_cast<std::size_t>(cell)])
                    ++cell;
                int y = static_cast<int>(
                    label_of_cell[static_cast<std::size_t>(cell)]);
                cm.w(x, y) += 1.0;
            }
            cm.w.row(x) /= static_cast<double>(mode.n);
        }
    }
    return cm;
}

double mutual_information(const InputDistribution& p,
                          const ConfusionMatrix& w) {
    p.validate();
    w.validate();
    Eigen::Vector4d q = Eigen::Vector4d::Zero();
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            q(y) += p.p(x) * w.w(x, y);
    double mi = 0.0;
    for (int x = 0; x < 4; ++x) {
        if (p.p(x) == 0.0)
            continue;
        for (int y = 0; y < 4; ++y)
            if (w.w(x, y) > 0.0)
                mi += p.p(x) * w.w(x, y) * log2_safe(w.w(x, y) / q(y));
    }
    return mi;
}

CapacityResult capacity(const ConfusionMatrix& w, double tol,
                        std::vector<double>* lower_bounds) {
    w.validate();
    constexpr int kMaxIterations = 100000;

    Eigen::Vector4d p = Eigen::Vector4d::Constant(0.25);
    for (int it = 1; it <= kMaxIterations; ++it) {
        Eigen::Vector4d q = Eigen::Vector4d::Zero();
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                q(y) += p(x) * w.w(x, y);

        // per-symbol divergence D(W(.|x) || q)
        Eigen::Vector4d d = Eigen::Vector4d::Zero();
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y)
                if (w.w(x, y) > 0.0)
                    d(x) += w.w(x, y) * log2_safe(w.w(x, y) / q(y));

        // bracket: sum_x p_x d_x <= C <= max_x d_x
        double lower = p.dot(d);
        double upper = d.maxCoeff();
        if (lower_bounds)
            lower_bounds->push_back(lower);
        if (upper - lower < tol) {
            CapacityResult result;
            result.bits = lower;
            result.p_star.p = p;
            result.iterations = it;
            return result;
        }

        for (int x = 0; x < 4; ++x)
            p(x) *= std::exp2(d(x));
        p /= p.sum();
    }
    throw std::runtime_error("capacity: Blahut-Arimoto did not converge");
}

SuperdenseResult superdense_run(const std::vector<int>& messages,
                                const NoiseModel& noise, std::uint64_t seed,
                                const Codebook& codebook) {
    codebook.validate();
    const PatternMap patterns = standard_patterns();
    const Basis targets = standard_target_basis();

    std::array<BellLabel, 16> label_of_cell{};
    for (const auto& [label, pattern] : patterns)
        for (auto [k, l] : pattern.combos)
            label_of_cell[static_cast<std::size_t>((k - 1) * 4 + (l - 1))] =
                label;

    // the noisy table depends only on the message value; precompute all four
    std::array<std::array<double, 16>, 4> cdf_for_message{};
    const TwoPhotonState source = hyper_bell(BellLabel::PsiPlus, 1);
    for (int msg = 0; msg < 4; ++msg) {
        CoincidenceTable noisy = apply_noise(
            coincidence_table(encode(msg, source, codebook), targets, targets),
            noise);
        double acc = 0.0;
        for (int cell = 0; cell < 16; ++cell) {
            acc += noisy.values(cell / 4, cell % 4);
            cdf_for_message[static_cast<std::size_t>(msg)]
                           [static_cast<std::size_t>(cell)] = acc;
        }
    }

    std::mt19937_64 rng(seed);
    SuperdenseResult result;
    result.transcript.reserve(messages.size());
    std::int64_t correct = 0;
    for (int msg : messages) {
        if (msg < 0 || msg > 3)
            throw std::invalid_argument("messages must be 2-bit values");
        const auto& cdf = cdf_for_message[static_cast<std::size_t>(msg)];
        double u = uniform01(rng) * cdf[15];
        int cell = 0;
        while (cell < 15 && u >= cdf[static_cast<std::size_t>(cell)])
            ++cell;
        int decoded = codebook.message(
            label_of_cell[static_cast<std::size_t>(cell)]);
        result.transcript.push_back({msg, decoded});
        if (decoded == msg)
            ++correct;
    }
    result.success_rate =
        messages.empty()
            ? 0.0
            : static_cast<double>(correct) / static_cast<double>(messages.size());
    return result;
}

double calibrate_noise(double target_success) {
    if (target_success <= 0.25 || target_success > 1.0)
        throw std::invalid_argument(
            "target success must lie in (0.25, 1]");
    auto diagonal = [](double eps) { return (1.0 - eps) + eps / 4.0; };
    double lo = 0.0, hi = 1.0; // diagonal(lo) >= target >= diagonal(hi)
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (diagonal(mid) >= target_success)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace oambsm
