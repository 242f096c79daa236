#pragma once

#include "oambsm/bell.hpp"
#include "oambsm/io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

// Run configuration: one JSON or TOML file (by extension), overridable by CLI
// flags. All ranges are validated before any computation runs.
namespace oambsm {

struct RunConfig {
    int subspace_m = 1;
    Codebook codebook = Codebook::standard();
    SourceSpectrum source = SourceSpectrum::single_subspace(1);
    double noise_eps = 0.0;
    std::optional<std::uint64_t> seed;
    double fire_threshold = kFireThreshold;
    std::optional<Eigen::MatrixXcd> verify_unitary; // overrides the built-in
    std::optional<std::filesystem::path> output_dir;

    void validate() const;
};

/// Parse a config file; the format follows the extension (.json or .toml).
RunConfig load_config(const std::filesystem::path& path);

/// Build a RunConfig from an already-parsed JSON document.
RunConfig config_from_json(const io::json& j);

/// Parse the TOML subset used by config files ([section] tables, bare/quoted
/// keys, strings, numbers, booleans, nested arrays) into a JSON document.
io::json toml_to_json(const std::string& text);

} // namespace oambsm
