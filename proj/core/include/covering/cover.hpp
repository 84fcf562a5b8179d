#pragma once

// Arithmetic progressions, covering systems, coverage verification and the
// covering-system text format.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "covering/numth.hpp"

namespace covering {

/// The residue class `residue mod modulus`, stored normalized:
/// modulus >= 1 and 0 <= residue < modulus.
struct Progression {
  Int residue = 0;
  Int modulus = 1;

  /// Normalizes any integer residue. Throws std::invalid_argument if
  /// modulus < 1.
  static Progression make(Int residue, Int modulus);

  bool operator==(const Progression&) const = default;
  /// Canonical order: ascending modulus, then residue.
  auto operator<=>(const Progression& rhs) const {
    if (auto c = modulus <=> rhs.modulus; c != 0) return c;
    return residue <=> rhs.residue;
  }
};

/// True iff b = residue (mod modulus).
constexpr bool covers(const Progression& p, Int b) { return floor_mod(b, p.modulus) == p.residue; }

std::string to_string(const Progression& p);

/// Finite list of progressions kept in canonical order, together with the lcm
/// of its moduli.
class CoveringSystem {
 public:
  CoveringSystem() = default;
  explicit CoveringSystem(std::vector<Progression> progressions);

  const std::vector<Progression>& progressions() const { return progressions_; }
  /// lcm of all moduli; 1 for the empty system.
  Int lcm() const { return lcm_; }
  std::size_t size() const { return progressions_.size(); }
  bool empty() const { return progressions_.empty(); }

  bool operator==(const CoveringSystem& rhs) const { return progressions_ == rhs.progressions_; }

 private:
  std::vector<Progression> progressions_;
  Int lcm_ = 1;
};

struct VerificationReport {
  bool valid = false;
  /// Least uncovered b in [0, L); present iff !valid.
  std::optional<Int> witness;
  bool distinct = false;
  Int lcm = 1;
  Int min_modulus = 0;
  Int max_modulus = 0;
  /// Sum of 1/m over all progressions.
  Rational density;
};

/// Checks coverage of [0, L) with a bitmap. Throws std::invalid_argument for
/// an empty system.
VerificationReport verify(const CoveringSystem& system);

/// Shifts every residue by t.
CoveringSystem translate(const CoveringSystem& system, Int t);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `<residue> <modulus>` lines; `#` comments and blank lines skipped.
CoveringSystem parse_system(std::string_view text);

/// Canonical form: one `<residue> <modulus>\n` line per progression.
std::string serialize_system(const CoveringSystem& system);

}  // namespace covering
