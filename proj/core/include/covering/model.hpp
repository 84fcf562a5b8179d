#pragma once

// Solver-ready instances (multiset + fixed progressions) and the 0/1 model:
// one binary x_{i,j} per (modulus, residue), an at-most-f_i row per modulus
// and an at-least-one row per integer not already covered by the fixings.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "covering/cover.hpp"
#include "covering/reduce.hpp"

namespace covering {

struct CoverInstance {
  ModuliMultiset multiset;
  std::vector<Progression> fixed;
  Int lcm = 1;
  /// [0, L) minus the union of the fixed progressions, ascending.
  std::vector<Int> uncovered;
  /// Multiplicity left for each modulus after the fixings, aligned with
  /// multiset.entries().
  std::vector<Int> remaining;
};

/// Throws std::invalid_argument when a fixed modulus is absent from the
/// multiset or used more often than its multiplicity.
CoverInstance build_instance(const ModuliMultiset& ms, std::vector<Progression> fixed);

/// Canonical text of an instance (multiset-file format with fixings sorted).
std::string instance_text(const CoverInstance& instance);

/// FNV-1a 64 over instance_text, printed as 16 hex digits.
std::string instance_digest(const CoverInstance& instance);

struct Variable {
  /// Index into the sorted distinct modulus list of the multiset.
  std::size_t modulus_index;
  Int modulus;
  Int residue;
};

struct AtMostRow {
  std::size_t modulus_index;
  Int bound;
  /// Indices into EncodedModel::variables.
  std::vector<std::size_t> vars;
};

struct CoverRow {
  Int point;
  std::vector<std::size_t> vars;
};

struct EncodedModel {
  std::vector<Variable> variables;
  std::vector<AtMostRow> at_most;
  std::vector<CoverRow> cover;
  /// Fixed progressions, copied so decoded solutions are complete systems.
  std::vector<Progression> fixed;
  std::size_t distinct_moduli = 0;
  Int lcm = 1;
  std::string digest;

  std::size_t constraint_count() const { return at_most.size() + cover.size(); }
};

/// Raised by encode when some uncovered integer has no candidate variable.
class TriviallyInfeasible : public std::runtime_error {
 public:
  explicit TriviallyInfeasible(Int point)
      : std::runtime_error("integer " + std::to_string(point) + " cannot be covered by any free modulus"),
        point_(point) {}
  Int point() const { return point_; }

 private:
  Int point_;
};

EncodedModel encode(const CoverInstance& instance);

/// LP-format text: constant objective, at-most rows by modulus then cover
/// rows by integer, all variables binary. Variables are named x_<i>_<j>.
std::string export_lp(const EncodedModel& model);

struct LpSummary {
  std::size_t rows = 0;
  std::size_t at_most_rows = 0;
  std::size_t cover_rows = 0;
  std::size_t binaries = 0;
};

/// Reads back the LP text produced by export_lp far enough to count rows and
/// binaries. Throws ParseError on anything it does not recognise.
LpSummary parse_lp_summary(std::string_view text);

/// DIMACS CNF with its variable map. Model variable k is CNF variable k + 1;
/// auxiliary counter variables follow.
struct CnfEncoding {
  std::size_t num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::size_t model_vars = 0;
};

/// Cover rows as positive clauses; at-most-1 as pairwise binary clauses;
/// at-most-k (k >= 2) as a sequential counter.
CnfEncoding encode_cnf(const EncodedModel& model);
std::string export_cnf(const EncodedModel& model);

/// Maps a CNF assignment (index v holds the value of CNF variable v; index 0
/// unused) back to the fixed progressions plus every selected x_{i,j}.
CoveringSystem decode_assignment(const EncodedModel& model, const std::vector<bool>& assignment);

}  // namespace covering
