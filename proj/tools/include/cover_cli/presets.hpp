#pragma once

// Reproduction pipelines and the reference data they check against.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "covering/model.hpp"
#include "covering/reduce.hpp"
#include "covering/solver.hpp"

namespace cover_cli {

using covering::Int;
using covering::Progression;

/// Fixed progressions for one candidate lcm of the LCM problem.
struct CandidateFixings {
  Int lcm;
  std::vector<Progression> fixed;
  /// Excluded from the default run of its preset.
  bool slow = false;
};

/// Survivor table for minimum modulus 5 (lcm < 1440) or 6 (lcm < 5040).
/// Throws std::invalid_argument for any other minimum modulus.
const std::vector<CandidateFixings>& candidate_fixings(Int min_modulus);

/// Every divisor of L that is at least m, multiplicity one.
covering::ModuliMultiset lcm_problem_moduli(Int L, Int m);

struct ExpectedCandidates {
  Int min_modulus;
  Int bound;
  std::vector<Int> density_pass;
  std::vector<Int> smallerp_eliminated;
  std::vector<Int> survivors;
};

const ExpectedCandidates& expected_candidates(Int min_modulus);

/// The minimum-modulus-5, largest-modulus-107 instance: discard, merge and
/// fixings.
struct MinModulusInstance {
  covering::ModuliMultiset potential;
  std::vector<covering::MergeSite> merge_sites;
  covering::ModuliMultiset merged;
  covering::CoverInstance instance;
};

MinModulusInstance build_min_modulus_5_108();

/// Fixings stored for the 5..107 instance.
const std::vector<Progression>& min_modulus_5_108_fixings();

struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& presets();

struct ReproduceOptions {
  bool include_slow = false;
  bool machine = false;
  /// Forwarded to every solve; the default runs without limits.
  covering::SolveOptions solve;
};

/// Runs a preset and returns its exit code (see cli.hpp). Throws
/// std::invalid_argument for an unknown name.
int reproduce(std::string_view name, const ReproduceOptions& options, std::ostream& out, std::ostream& err);

}  // namespace cover_cli
