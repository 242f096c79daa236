#pragma once

#include "oambsm/bell.hpp"
#include "oambsm/measurement.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Randomized search over products of linear-optics toolbox generators for
// U(4) transforms whose target basis fires a unique set of coincidence
// combinations for each OAM Bell state.
namespace oambsm {

using PatternMap = std::map<BellLabel, SupportPattern>;

/// One element of the generator toolbox the search composes.
struct ToolboxGenerator {
    std::string name;
    Mat4c matrix; // unitary, 4x4
};

/// Hadamards on the two mode blocks (separately and jointly), the block swap,
/// and single-mode pi/2 phase gates.
std::vector<ToolboxGenerator> default_toolbox();

/// A candidate U(4) with its provenance.
struct Candidate {
    ModeUnitary u;
    std::string provenance; // generator sequence, applied right to left
};

/// A stored solution of the search.
struct SolutionRecord {
    ModeUnitary u;
    PatternMap patterns;
    std::string canonical_key;
    std::string provenance;
    std::int64_t found_at = -1; // candidate index

    /// Patterns must be pairwise disjoint and of size 4 each.
    void validate() const;
};

struct CriterionResult {
    bool pass = false;
    PatternMap patterns;
};

/// The distinguishability criterion: the four Bell states' support patterns in
/// target_basis(u) are pairwise disjoint (each then necessarily has exactly
/// 4 combos, partitioning all 16).
CriterionResult criterion_check(const ModeUnitary& u,
                                double fire = kFireThreshold);

/// Quotient key modulo per-row phases and row permutations (detector
/// relabeling). Entries are rounded to 1e-8 before key construction.
std::string canonicalize(const ModeUnitary& u);

struct SearchOptions {
    std::int64_t budget = 0;
    std::uint64_t seed = 0;
    int max_sequence_length = 8;
    int workers = 1;
    double fire = kFireThreshold;
};

/// Draw `budget` random generator sequences, keep criterion passes,
/// deduplicate by canonical key. Deterministic given the seed and independent
/// of the worker count: every candidate index owns its own derived RNG
/// stream.
std::vector<SolutionRecord> search(const std::vector<ToolboxGenerator>& toolbox,
                                   const SearchOptions& options);

} // namespace oambsm
