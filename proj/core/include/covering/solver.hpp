#pragma once

// Exact depth-first search for integer covering instances.
//
// The search keeps a coverage bitmap over [0, L), per-modulus residual
// multiplicities, a per-(modulus, residue) count of still-uncovered integers
// and a per-integer count of admissible (modulus, residue) choices. Every
// change goes onto an undo trail. Nodes branch either on the residue of the
// smallest modulus that can still cover something, or on the uncovered
// integer with the fewest choices; once a choice has been refuted it is
// removed from the modulus's domain for the remaining siblings.
//
// Symmetry breaking: for a prime p, the residue classes mod p that hold no
// fixed progression with modulus divisible by p are interchangeable (swap two
// classes with p_shift). Walking the moduli divisible by p in ascending order,
// the k-th use may only open one new free class.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "covering/cover.hpp"
#include "covering/model.hpp"

namespace covering {

enum class Verdict { kFeasible, kInfeasible, kTimeout };
enum class SolveMode { kDeterministic, kParallel };
enum class BranchRule { kModulusOrder, kFewestChoices };

const char* to_string(Verdict v);

struct SolveBudget {
  std::optional<double> time_limit_seconds;
  std::optional<std::uint64_t> node_limit;
};

struct SolveOptions {
  SolveBudget budget;
  SolveMode mode = SolveMode::kDeterministic;
  unsigned workers = 2;
  BranchRule branching = BranchRule::kModulusOrder;
  /// Prune when sum(remaining_i * L / m_i) < #uncovered.
  bool capacity_prune = true;
  /// Apply single-choice integers without opening a node.
  bool unit_propagation = true;
  /// Per-modulus best-class bound, with residue filtering for moduli that
  /// have one use left.
  bool class_bound = true;
  /// Restrict free residue classes mod p at the root (see above).
  bool symmetry_breaking = true;
  /// Progress lines `progress nodes=.. depth=.. uncovered=..` go here.
  std::ostream* progress = nullptr;
  std::uint64_t progress_interval = 1'000'000;
};

struct SolveOutcome {
  Verdict verdict = Verdict::kTimeout;
  /// Fixed progressions plus the chosen ones; present iff Feasible.
  std::optional<CoveringSystem> witness;
  std::uint64_t nodes = 0;
  std::chrono::duration<double> elapsed{0};
  SolveBudget budget;
};

struct Choice {
  std::size_t modulus_index;
  Int modulus;
  Int residue;

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct BranchPoint {
  /// Uncovered integer with the fewest admissible choices (smallest on ties);
  /// -1 when nothing is left uncovered.
  Int point = -1;
  /// Ascending modulus order. Empty means the node is dead.
  std::vector<Choice> candidates;
};

/// Mutable search state with an undo trail. Exposed so the branching rule
/// and the prunes can be tested directly.
class SearchState {
 public:
  /// Applies the instance's fixed progressions. Throws std::invalid_argument
  /// when L * (#distinct moduli) is too large for the point tables.
  explicit SearchState(const CoverInstance& instance);

  Int lcm() const { return L_; }
  Int uncovered_count() const { return uncovered_; }
  std::size_t depth() const { return assignment_.size(); }
  bool is_covered(Int b) const { return covered_[static_cast<std::size_t>(b)] != 0; }
  Int remaining(std::size_t i) const { return rem_[i]; }
  bool allowed(std::size_t i, Int r) const { return allowed_[offset_[i] + static_cast<std::size_t>(r)] != 0; }
  /// Uncovered integers congruent to r modulo the i-th modulus.
  Int class_count(std::size_t i, Int r) const { return cnt_[offset_[i] + static_cast<std::size_t>(r)]; }
  /// Admissible choices still able to cover b.
  Int choice_count(Int b) const { return cand_[static_cast<std::size_t>(b)]; }

  BranchPoint next_branch() const;
  /// Allowed residues with at least one uncovered integer for the first
  /// modulus (in multiset order) that has any, largest class count first.
  /// Empty when no modulus with uses left can cover anything.
  std::vector<Choice> modulus_branch() const;
  std::vector<Choice> choices_for(Int b) const;

  /// Simple capacity bound: sum over moduli of remaining * L / m < #uncovered.
  bool capacity_prune() const;

  /// Tighter bound using the best still-allowed residue class per modulus.
  /// Returns true when the node is dead; otherwise removes residues that
  /// cannot be part of a cover from moduli with one use left.
  bool class_bound_filter();

  void assign(std::size_t i, Int r);
  void disallow(std::size_t i, Int r);

  std::size_t mark() const { return trail_.size(); }
  void undo_to(std::size_t mark);

  /// Fixed progressions plus every assignment on the stack.
  CoveringSystem current_system() const;

 private:
  enum class Op : std::uint8_t { kAssign, kDisallow };
  struct TrailEntry {
    Op op;
    std::uint32_t modulus_index;
    std::int32_t residue;
    /// Points newly covered by this assignment.
    std::uint32_t covered_points;
  };

  std::size_t slot(std::size_t x, std::size_t i) const { return slot_[x * n_ + i]; }
  void exhaust(std::size_t i, int delta);
  void undo_one();

  Int L_;
  std::size_t n_;
  std::vector<Int> mod_;
  std::vector<std::size_t> offset_;
  // slot_[x * n + i] = offset_[i] + x mod m_i
  std::vector<std::uint32_t> slot_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::int32_t> cand_;
  std::vector<std::int32_t> cnt_;
  std::vector<std::uint8_t> allowed_;
  std::vector<Int> rem_;
  Int uncovered_ = 0;
  std::vector<Progression> fixed_;
  std::vector<Choice> assignment_;
  std::vector<std::uint32_t> covered_stack_;
  std::vector<TrailEntry> trail_;
};

/// Residues removed at the root by symmetry breaking, as (modulus index,
/// residue) choices.
std::vector<Choice> symmetry_restrictions(const CoverInstance& instance);

SolveOutcome solve(const CoverInstance& instance, const SolveOptions& options = {});

}  // namespace covering
