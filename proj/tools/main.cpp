// Command-line front end: verify, coincidence, search, superdense, capacity,
// calibrate. Exit codes: 0 success, 1 usage error, 2 verification failure,
// 3 numeric non-convergence.

#include "oambsm/channel.hpp"
#include "oambsm/config.hpp"
#include "oambsm/elements.hpp"
#include "oambsm/io.hpp"
#include "oambsm/measurement.hpp"
#include "oambsm/search.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>

using namespace oambsm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitNoConvergence = 3;

void emit(const io::json& j, const std::optional<std::string>& out_path) {
    if (out_path)
        io::write_file(*out_path, j.dump(2) + "\n");
    else
        std::cout << j.dump(2) << "\n";
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& flag_seed,
                           const RunConfig& cfg) {
    if (flag_seed)
        return *flag_seed;
    if (cfg.seed)
        return *cfg.seed;
    throw std::invalid_argument(
        "a randomized command needs --seed (or a seed in the config file)");
}

// ---------------------------------------------------------------- verify --

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
};

int cmd_verify(const RunConfig& cfg, const std::optional<std::string>& out) {
    std::vector<CheckResult> checks;
    auto add = [&checks](const std::string& name, bool pass, double residual) {
        checks.push_back({name, pass, residual});
    };

    Eigen::MatrixXcd raw = cfg.verify_unitary
                               ? *cfg.verify_unitary
                               : standard_bsm_unitary().matrix;
    Eigen::MatrixXcd defect = raw * raw.adjoint() - Mat4c::Identity();
    double unitarity = defect.cwiseAbs().maxCoeff();
    add("unitarity", unitarity < kUnitaryTol, unitarity);

    io::json report;
    if (unitarity < kUnitaryTol) {
        ModeUnitary u(Mat4c(raw), DimTag::mode4);

        // target basis against the fixed analyzer basis
        const double r = 1.0 / std::sqrt(2.0);
        Mat4c expected;
        expected << r, r, 0, 0,
                    r, -r, 0, 0,
                    0, 0, r, r,
                    0, 0, r, -r;
        Basis bt = target_basis(u);
        double tb_residual = 0.0;
        for (int k = 0; k < 4; ++k)
            tb_residual = std::max(
                tb_residual, (bt[static_cast<std::size_t>(k)].amplitudes -
                              expected.row(k).transpose())
                                 .cwiseAbs()
                                 .maxCoeff());
        add("target_basis", tb_residual < 1e-12, tb_residual);

        // the four 4-term decompositions, derived signs
        auto derived = [](BellLabel label) {
            Mat4c c = Mat4c::Zero();
            switch (label) {
            case BellLabel::PsiPlus:
                c(0, 0) = 0.5;  c(1, 1) = -0.5; c(2, 2) = 0.5;  c(3, 3) = -0.5;
                break;
            case BellLabel::PsiMinus:
                c(0, 1) = 0.5;  c(1, 0) = -0.5; c(2, 3) = 0.5;  c(3, 2) = -0.5;
                break;
            case BellLabel::PhiPlus:
                c(0, 2) = 0.5;  c(1, 3) = 0.5;  c(2, 0) = 0.5;  c(3, 1) = 0.5;
                break;
            case BellLabel::PhiMinus:
                c(0, 3) = -0.5; c(1, 2) = -0.5; c(2, 1) = -0.5; c(3, 0) = -0.5;
                break;
            }
            return c;
        };
        double bell_residual = 0.0;
        for (BellLabel label : kAllBellLabels)
            bell_residual = std::max(
                bell_residual,
                (decompose(hyper_bell(label, 1), bt, bt) - derived(label))
                    .cwiseAbs()
                    .maxCoeff());
        add("bell_decompositions", bell_residual < 1e-12, bell_residual);
    } else {
        add("target_basis", false, std::numeric_limits<double>::quiet_NaN());
        add("bell_decompositions", false,
            std::numeric_limits<double>::quiet_NaN());
    }

    {
        const Basis bi = initial_basis();
        auto table = [&](BellLabel l) {
            return coincidence_table(hyper_bell(l, 1), bi, bi).values;
        };
        double degeneracy = std::max(
            (table(BellLabel::PsiPlus) - table(BellLabel::PsiMinus))
                .cwiseAbs()
                .maxCoeff(),
            (table(BellLabel::PhiPlus) - table(BellLabel::PhiMinus))
                .cwiseAbs()
                .maxCoeff());
        add("initial_basis_degeneracy", degeneracy < 1e-12, degeneracy);
    }

    {
        const TwoPhotonState source = hyper_bell(BellLabel::PsiPlus, 1);
        double worst = 0.0;
        auto defect_of = [&](const TwoPhotonState& s, BellLabel target) {
            return 1.0 - std::abs(inner(s, hyper_bell(target, 1)));
        };
        worst = std::max(
            worst, defect_of(apply_local(dove_pair(1), Photon::A, source),
                             BellLabel::PsiMinus));
        worst = std::max(
            worst,
            defect_of(apply_local(dove_single(0.0, 1), Photon::A, source),
                      BellLabel::PhiPlus));
        worst = std::max(
            worst,
            defect_of(apply_local(dove_pair(1), Photon::A,
                                  apply_local(dove_single(0.0, 1), Photon::A,
                                              source)),
                      BellLabel::PhiMinus));
        add("encoders", worst < 1e-10, worst);
    }

    // analyzer chain: routing and equivalence with the abstract projection
    try {
        double phi = tune_analyzer(cfg.subspace_m);
        AnalyzerChain chain = analyzer_chain({phi, cfg.subspace_m});
        add("analyzer_routing",
            chain.map.valid && chain.min_routing_fidelity >= 1.0 - 1e-9,
            1.0 - chain.min_routing_fidelity);

        const Basis bt = standard_target_basis();
        double equivalence = 0.0;
        for (BellLabel label : kAllBellLabels) {
            TwoPhotonState s = hyper_bell(label, 1);
            equivalence = std::max(
                equivalence, (chain_coincidence_probs(chain, s) -
                              decompose(s, bt, bt).cwiseAbs2())
                                 .cwiseAbs()
                                 .maxCoeff());
        }
        add("analyzer_equivalence", equivalence < 1e-9, equivalence);

        report["mzi_phase"] = io::real(phi);
        report["composite_matrix"] =
            io::complex_matrix_to_json(chain.composite.matrix);
        io::json routing = io::json::object();
        for (int k = 0; k < 4; ++k)
            routing["Bt" + std::to_string(k + 1)] =
                chain.map.bin_for_target[static_cast<std::size_t>(k)];
        report["routing"] = std::move(routing);
        report["chain"] = io::chain_to_json(chain.map.chain);
    } catch (const std::exception&) {
        add("analyzer_routing", false,
            std::numeric_limits<double>::quiet_NaN());
        add("analyzer_equivalence", false,
            std::numeric_limits<double>::quiet_NaN());
    }

    bool all_pass = true;
    io::json check_list = io::json::array();
    for (const auto& c : checks) {
        io::json item;
        item["name"] = c.name;
        item["pass"] = c.pass;
        item["max_residual"] = io::real(c.residual);
        check_list.push_back(std::move(item));
        all_pass = all_pass && c.pass;
    }
    report["checks"] = std::move(check_list);
    report["pass"] = all_pass;
    emit(report, out);

    if (!all_pass) {
        for (const auto& c : checks)
            if (!c.pass)
                std::cerr << "failed check: " << c.name << "\n";
        return kExitVerifyFailed;
    }
    return kExitOk;
}

// ----------------------------------------------------------- coincidence --

int cmd_coincidence(const RunConfig& cfg, const std::string& state_name,
                    const std::string& basis_name, std::int64_t total,
                    const std::optional<std::uint64_t>& seed_flag,
                    const std::optional<double>& eps_flag,
                    const std::optional<std::string>& out,
                    const std::optional<std::string>& csv_out,
                    const std::optional<std::string>& state_out,
                    bool per_subspace) {
    BellLabel label = bell_label_from_string(state_name);
    Basis basis;
    if (basis_name == "target")
        basis = standard_target_basis();
    else if (basis_name == "initial")
        basis = initial_basis();
    else
        throw std::invalid_argument("basis must be 'target' or 'initial'");

    const double eps = eps_flag.value_or(cfg.noise_eps);
    const TwoPhotonState state = hyper_bell(label, cfg.subspace_m);
    CoincidenceTable ideal = coincidence_table(state, basis, basis);

    io::json result;
    result["state"] = to_string(label);
    result["basis"] = basis_name;
    result["subspace_m"] = cfg.subspace_m;
    result["ideal"] = io::table_to_json(ideal);
    result["support"] =
        io::pattern_to_json(support_pattern(ideal, cfg.fire_threshold));

    if (per_subspace) {
        io::json subspaces = io::json::array();
        for (const auto& component : hyper_source(cfg.source)) {
            io::json entry;
            entry["m"] = component.m;
            entry["weight"] = io::real(component.weight);
            CoincidenceTable t = coincidence_table(
                component.state, basis, basis);
            t.values *= component.weight;
            t.kind = CoincidenceTable::Kind::Probability;
            io::json tj = io::table_to_json(t);
            tj["kind"] = "weighted_probability";
            entry["table"] = std::move(tj);
            subspaces.push_back(std::move(entry));
        }
        result["subspaces"] = std::move(subspaces);
    }

    if (total > 0) {
        std::uint64_t seed = require_seed(seed_flag, cfg);
        CoincidenceTable noisy =
            eps > 0.0 ? apply_noise(ideal, NoiseModel::crosstalk(eps)) : ideal;
        CoincidenceTable counts = simulate_counts(noisy, total, seed);
        counts.duration_s = 10.0;
        result["eps"] = io::real(eps);
        result["seed"] = seed;
        result["counts"] = io::table_to_json(counts);
        double ratio = snr(counts, support_pattern(ideal, cfg.fire_threshold));
        result["snr"] = std::isinf(ratio) ? io::json("inf") : io::real(ratio);
        if (csv_out)
            io::write_file(*csv_out, io::matrix4_to_csv(counts.values));
    } else if (csv_out) {
        io::write_file(*csv_out, io::matrix4_to_csv(ideal.values));
    }

    if (state_out)
        io::write_file(*state_out, io::state_to_json(state).dump(2) + "\n");

    emit(result, out);
    return kExitOk;
}

// ---------------------------------------------------------------- search --

int cmd_search(const RunConfig& cfg, std::int64_t budget,
               const std::optional<std::uint64_t>& seed_flag,
               const std::string& out_path, int lmax, int workers) {
    SearchOptions options;
    options.budget = budget;
    options.seed = require_seed(seed_flag, cfg);
    options.max_sequence_length = lmax;
    options.workers = workers;
    options.fire = cfg.fire_threshold;

    const auto start = std::chrono::steady_clock::now();
    auto solutions = search(default_toolbox(), options);
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();

    io::write_solutions_jsonl(out_path, solutions);

    io::json summary;
    summary["budget"] = budget;
    summary["seed"] = options.seed;
    summary["solutions"] = solutions.size();
    summary["out"] = out_path;
    summary["seconds"] = io::real(seconds);
    emit(summary, std::nullopt);
    return kExitOk;
}

// ------------------------------------------------------------ superdense --

int cmd_superdense(const RunConfig& cfg, std::int64_t n,
                   const std::optional<double>& eps_flag,
                   const std::optional<std::uint64_t>& seed_flag,
                   const std::optional<std::string>& codebook_file,
                   const std::optional<std::string>& out) {
    const double eps = eps_flag.value_or(cfg.noise_eps);
    const std::uint64_t seed = require_seed(seed_flag, cfg);

    Codebook codebook = cfg.codebook;
    if (codebook_file) {
        RunConfig file_cfg = load_config(*codebook_file);
        codebook = file_cfg.codebook;
    }

    std::mt19937_64 message_rng(seed);
    std::vector<int> messages;
    messages.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        messages.push_back(static_cast<int>(message_rng() % 4));

    const NoiseModel noise = NoiseModel::crosstalk(eps);
    SuperdenseResult run =
        superdense_run(messages, noise, seed ^ 0xD6E8FEB86659FD93ull, codebook);

    ConfusionMatrix w = confusion_matrix(noise);
    InputDistribution uniform;
    CapacityResult cap = capacity(w);

    io::json result;
    result["n"] = n;
    result["eps"] = io::real(eps);
    result["seed"] = seed;
    result["success_rate"] = io::real(run.success_rate);
    result["mi_uniform_bits"] = io::real(mutual_information(uniform, w));
    result["capacity_bits"] = io::real(cap.bits);
    io::json pstar = io::json::array();
    for (int x = 0; x < 4; ++x)
        pstar.push_back(io::real(cap.p_star.p(x)));
    result["p_star"] = std::move(pstar);
    emit(result, out);
    return kExitOk;
}

// -------------------------------------------------------------- capacity --

int cmd_capacity(const std::string& confusion_csv, double tol,
                 const std::optional<std::string>& out) {
    if (!std::filesystem::exists(confusion_csv))
        throw std::invalid_argument("no such file: " + confusion_csv);
    ConfusionMatrix w;
    w.w = io::matrix4_from_csv(io::read_file(confusion_csv));
    w.validate();

    InputDistribution uniform;
    CapacityResult cap = capacity(w, tol);

    io::json result;
    result["confusion"] = confusion_csv;
    result["capacity_bits"] = io::real(cap.bits);
    io::json pstar = io::json::array();
    for (int x = 0; x < 4; ++x)
        pstar.push_back(io::real(cap.p_star.p(x)));
    result["p_star"] = std::move(pstar);
    result["mi_uniform_bits"] = io::real(mutual_information(uniform, w));
    result["iterations"] = cap.iterations;
    emit(result, out);
    return kExitOk;
}

// ------------------------------------------------------------- calibrate --

int cmd_calibrate(double target, const std::optional<std::string>& out) {
    double eps = calibrate_noise(target);
    io::json result;
    result["target_success"] = io::real(target);
    result["eps"] = io::real(eps);
    result["noise_model"] = "crosstalk";
    emit(result, out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-optical OAM Bell-state measurement simulator"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON or TOML config file")
        ->check(CLI::ExistingFile);

    // verify
    auto* verify = app.add_subcommand(
        "verify", "check the analyzer algebra and element conventions");
    std::optional<std::string> verify_out;
    verify->add_option("--out", verify_out, "write the JSON report here");

    // coincidence
    auto* coincidence =
        app.add_subcommand("coincidence", "ideal and simulated count tables");
    std::string state_name = "PsiPlus";
    std::string basis_name = "target";
    std::int64_t total = 0;
    std::optional<std::uint64_t> co_seed;
    std::optional<double> co_eps;
    std::optional<std::string> co_out, co_csv, co_state_out;
    bool per_subspace = false;
    coincidence->add_option("--state", state_name,
                            "PsiPlus|PsiMinus|PhiPlus|PhiMinus");
    coincidence->add_option("--basis", basis_name, "target|initial");
    coincidence->add_option("--total", total, "events to simulate");
    coincidence->add_option("--seed", co_seed, "RNG seed (needed if total>0)");
    coincidence->add_option("--eps", co_eps, "crosstalk strength");
    coincidence->add_option("--out", co_out, "JSON output file");
    coincidence->add_option("--csv-out", co_csv, "4x4 CSV output file");
    coincidence->add_option("--state-out", co_state_out,
                            "write the prepared state as JSON");
    coincidence->add_flag("--per-subspace", per_subspace,
                          "include weighted per-subspace tables");

    // search
    auto* search_cmd =
        app.add_subcommand("search", "random search for analyzer unitaries");
    std::int64_t budget = 0;
    std::optional<std::uint64_t> search_seed;
    std::string search_out;
    int lmax = 8;
    int workers = 1;
    search_cmd->add_option("--budget", budget, "candidates to draw")
        ->required();
    search_cmd->add_option("--seed", search_seed, "RNG seed");
    search_cmd->add_option("--out", search_out, "JSON-lines solution store")
        ->required();
    search_cmd->add_option("--lmax", lmax, "max generator sequence length");
    search_cmd->add_option("--workers", workers, "worker threads");

    // superdense
    auto* superdense =
        app.add_subcommand("superdense", "run the two-bit coding pipeline");
    std::int64_t n = 0;
    std::optional<double> sd_eps;
    std::optional<std::uint64_t> sd_seed;
    std::optional<std::string> sd_codebook, sd_out;
    superdense->add_option("--n", n, "number of messages")->required();
    superdense->add_option("--eps", sd_eps, "crosstalk strength");
    superdense->add_option("--seed", sd_seed, "RNG seed");
    superdense->add_option("--codebook", sd_codebook,
                           "config file supplying the codebook");
    superdense->add_option("--out", sd_out, "JSON output file");

    // capacity
    auto* capacity_cmd =
        app.add_subcommand("capacity", "channel capacity of a confusion CSV");
    std::string confusion_csv;
    double tol = 1e-9;
    std::optional<std::string> cap_out;
    capacity_cmd->add_option("--confusion", confusion_csv, "4x4 CSV file")
        ->required();
    capacity_cmd->add_option("--tol", tol, "convergence tolerance");
    capacity_cmd->add_option("--out", cap_out, "JSON output file");

    // calibrate
    auto* calibrate =
        app.add_subcommand("calibrate", "noise strength for a target success");
    double target = 0.82;
    std::optional<std::string> cal_out;
    calibrate->add_option("--target", target, "target success probability")
        ->required();
    calibrate->add_option("--out", cal_out, "JSON output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);

        if (*verify)
            return cmd_verify(cfg, verify_out);
        if (*coincidence)
            return cmd_coincidence(cfg, state_name, basis_name, total, co_seed,
                                   co_eps, co_out, co_csv, co_state_out,
                                   per_subspace);
        if (*search_cmd)
            return cmd_search(cfg, budget, search_seed, search_out, lmax,
                              workers);
        if (*superdense)
            return cmd_superdense(cfg, n, sd_eps, sd_seed, sd_codebook, sd_out);
        if (*capacity_cmd)
            return cmd_capacity(confusion_csv, tol, cap_out);
        if (*calibrate)
            return cmd_calibrate(target, cal_out);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
