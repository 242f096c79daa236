#include "oambsm/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_set>

namespace oambsm {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat4c hadamard_block(bool low, bool high) {
    const double r = 1.0 / std::sqrt(2.0);
    Mat4c u = Mat4c::Identity();
    if (low) {
        u(0, 0) = r;  u(0, 1) = r;
        u(1, 0) = r;  u(1, 1) = -r;
    }
    if (high) {
        u(2, 2) = r;  u(2, 3) = r;
        u(3, 2) = r;  u(3, 3) = -r;
    }
    return u;
}

// SplitMix64; used to derive one independent stream per candidate index.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::vector<ToolboxGenerator> default_toolbox() {
    std::vector<ToolboxGenerator> t;
    t.push_back({"h_low", hadamard_block(true, false)});
    t.push_back({"h_high", hadamard_block(false, true)});
    t.push_back({"h_both", hadamard_block(true, true)});
    Mat4c swap = Mat4c::Zero();
    swap(2, 0) = 1.0;
    swap(3, 1) = 1.0;
    swap(0, 2) = 1.0;
    swap(1, 3) = 1.0;
    t.push_back({"block_swap", swap});
    for (int k = 0; k < 4; ++k) {
        Mat4c p = Mat4c::Identity();
        p(k, k) = kI;
        t.push_back({"s" + std::to_string(k), p});
    }
    return t;
}

void SolutionRecord::validate() const {
    std::set<std::pair<int, int>> all;
    for (const auto& [label, pattern] : patterns) {
        if (pattern.combos.size() != 4)
            throw std::invalid_argument("solution pattern must have 4 combos");
        for (const auto& c : pattern.combos)
            if (!all.insert(c).second)
                throw std::invalid_argument("solution patterns overlap");
    }
    if (all.size() != 16)
        throw std::invalid_argument("solution patterns must cover all combos");
}

CriterionResult criterion_check(const ModeUnitary& u, double fire) {
    const Basis targets = target_basis(u);
    CriterionResult result;
    std::set<std::pair<int, int>> seen;
    result.pass = true;
    for (BellLabel label : kAllBellLabels) {
        CoincidenceTable t =
            coincidence_table(hyper_bell(label, 1), targets, targets);
        SupportPattern p = support_pattern(t, fire);
        for (const auto& combo : p.combos)
            if (!seen.insert(combo).second)
                result.pass = false;
        result.patterns.emplace(label, std::move(p));
    }
    return result;
}

std::string canonicalize(const ModeUnitary& u) {
    constexpr double kRound = 1e8;
    auto snap = [](double v) {
        double r = std::round(v * kRound) / kRound;
        return r == 0.0 ? 0.0 : r; // normalize -0
    };

    std::array<std::array<Complex, 4>, 4> rows{};
    for (int k = 0; k < 4; ++k) {
        // rotate the row so its first significant entry is real positive
        Complex phase = 1.0;
        for (int j = 0; j < 4; ++j) {
            Complex e = u.matrix(k, j);
            if (std::abs(e) > 1e-8) {
                phase = std::conj(e) / std::abs(e);
                break;
            }
        }
        for (int j = 0; j < 4; ++j) {
            Complex e = u.matrix(k, j) * phase;
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = {
                snap(e.real()), snap(e.imag())};
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        for (int j = 0; j < 4; ++j) {
            const auto& x = a[static_cast<std::size_t>(j)];
            const auto& y = b[static_cast<std::size_t>(j)];
            if (x.real() != y.real())
                return x.real() < y.real();
            if (x.imag() != y.imag())
                return x.imag() < y.imag();
        }
        return false;
    });

    std::string key;
    key.reserve(16 * 26);
    char buf[32];
    for (const auto& row : rows) {
        for (const auto& e : row) {
            std::snprintf(buf, sizeof(buf), "%.8f%+.8fi;", e.real(), e.imag());
            key += buf;
        }
    }
    return key;
}

namespace {

struct CandidateDraw {
    Mat4c u;
    std::string provenance;
};

CandidateDraw draw_candidate(const std::vector<ToolboxGenerator>& toolbox,
                             std::uint64_t seed, std::int64_t index,
                             int max_len) {
    std::uint64_t stream = seed ^ (0xD1B54A32D192ED03ull +
                                   static_cast<std::uint64_t>(index));
    int len = 1 + static_cast<int>(splitmix64(stream) %
                                   static_cast<std::uint64_t>(max_len));
    CandidateDraw d;
    d.u = Mat4c::Identity();
    for (int s = 0; s < len; ++s) {
        std::size_t g = static_cast<std::size_t>(splitmix64(stream) %
                                                 toolbox.size());
        d.u = toolbox[g].matrix * d.u;
        d.provenance =
            toolbox[g].name + (d.provenance.empty() ? "" : "*" + d.provenance);
    }
    return d;
}

} // namespace

std::vector<SolutionRecord> search(const std::vector<ToolboxGenerator>& toolbox,
                                   const SearchOptions& options) {
    if (toolbox.empty())
        throw std::invalid_argument("search: toolbox is empty");
    if (options.max_sequence_length < 1)
        throw std::invalid_argument("search: max_sequence_length must be >= 1");
    for (const auto& g : toolbox)
        (void)ModeUnitary(g.matrix, DimTag::mode4); // reject bad generators here

    const int workers = std::max(1, options.workers);
    std::vector<std::vector<SolutionRecord>> partial(
        static_cast<std::size_t>(workers));

    auto run_worker = [&](int w) {
        auto& out = partial[static_cast<std::size_t>(w)];
        for (std::int64_t i = w; i < options.budget; i += workers) {
            CandidateDraw d = draw_candidate(toolbox, options.seed, i,
                                             options.max_sequence_length);
            ModeUnitary u(d.u, DimTag::mode4);
            CriterionResult r = criterion_check(u, options.fire);
            if (!r.pass)
                continue;
            SolutionRecord rec;
            rec.u = u;
            rec.patterns = std::move(r.patterns);
            rec.canonical_key = canonicalize(u);
            rec.provenance = std::move(d.provenance);
            rec.found_at = i;
            out.push_back(std::move(rec));
        }
    };

    if (workers == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            threads.emplace_back(run_worker, w);
        for (auto& t : threads)
            t.join();
    }

    // merge in candidate order so the result is worker-count independent
    std::vector<SolutionRecord> merged;
    for (auto& p : partial)
        for (auto& rec : p)
            merged.push_back(std::move(rec));
    std::sort(merged.begin(), merged.end(),
              [](const SolutionRecord& a, const SolutionRecord& b) {
                  return a.found_at < b.found_at;
              });

    std::vector<SolutionRecord> unique;
    std::unordered_set<std::string> keys;
    for (auto& rec : merged) {
        if (keys.insert(rec.canonical_key).second) {
            rec.validate();
            unique.push_back(std::move(rec));
        }
    }
    return unique;
}

} // namespace oambsm
