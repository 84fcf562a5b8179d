#pragma once

// Multiset transformations (prime-power discard, p-fold merge), the p-shift
// symmetry on covering systems, divisor density, smaller-prime substitution
// and candidate-lcm enumeration with its elimination trace.

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "covering/cover.hpp"
#include "covering/numth.hpp"

namespace covering {

/// Moduli with multiplicities, kept sorted by modulus with unique keys.
class ModuliMultiset {
 public:
  struct Entry {
    Int modulus;
    Int multiplicity;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  ModuliMultiset() = default;
  /// Each listed modulus is added once; repeats accumulate multiplicity.
  explicit ModuliMultiset(std::span<const Int> moduli);
  ModuliMultiset(std::initializer_list<Int> moduli)
      : ModuliMultiset(std::span<const Int>(moduli.begin(), moduli.size())) {}

  /// Every integer in [lo, hi] with multiplicity one.
  static ModuliMultiset range(Int lo, Int hi);

  void add(Int modulus, Int multiplicity = 1);
  /// Drops the modulus entirely. Returns the multiplicity it had (0 if absent).
  Int erase(Int modulus);

  const std::vector<Entry>& entries() const { return entries_; }
  /// Number of distinct moduli.
  std::size_t distinct() const { return entries_.size(); }
  /// Number of moduli counted with multiplicity.
  Int total() const;
  Int multiplicity(Int modulus) const;
  bool empty() const { return entries_.empty(); }
  /// lcm of the moduli; 1 when empty.
  Int lcm() const;
  /// Distinct moduli, ascending.
  std::vector<Int> moduli() const;

  friend bool operator==(const ModuliMultiset&, const ModuliMultiset&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Multiset-format file content: `mod <m> [<f>]` and `fix <a> <m>` records.
struct MultisetFile {
  ModuliMultiset multiset;
  std::vector<Progression> fixed;
};

MultisetFile parse_multiset(std::string_view text);
std::string serialize_multiset(const MultisetFile& file);

// --- prime-power discard -----------------------------------------------

struct DiscardStep {
  ModuliMultiset::Entry removed;
  /// The prime power p^a that triggered the removal.
  Int prime_power;
};

struct DiscardResult {
  ModuliMultiset multiset;
  std::vector<DiscardStep> trace;
};

/// Smallest a >= 1 with p^a (p + 1) > bound.
int discard_exponent(Int p, Int bound);

/// Removes every entry divisible by some p^a with p^a (p + 1) > bound, using
/// the least such a for each prime. The rule does not depend on the multiset,
/// so one pass over the entries reaches the fixpoint.
DiscardResult lemma1_discard(const ModuliMultiset& ms, Int bound);

// --- p-fold merge --------------------------------------------------------

struct MergeSite {
  Int prime;
  int exponent;

  friend bool operator==(const MergeSite&, const MergeSite&) = default;
  auto operator<=>(const MergeSite&) const = default;
};

/// Replaces the exactly-p entries divisible by p^a (moduli p^a m_1..p^a m_p)
/// by one entry p^(a-1) lcm(m_1..m_p). Throws std::invalid_argument when the
/// count of such entries, with multiplicity, is not p.
ModuliMultiset lemma2_merge(const ModuliMultiset& ms, Int p, int a);

/// Every (p, a) accepted by lemma2_merge, sorted.
std::vector<MergeSite> lemma2_scan(const ModuliMultiset& ms);

// --- p-shift ---------------------------------------------------------------

/// Class bundle C_p(alpha): progressions with p | m and a = alpha (mod p).
std::vector<Progression> residue_bundle(const CoveringSystem& system, Int p, Int alpha);

/// Translation t in [0, L) with t = a2 - a1 (mod p^v_p(L)) and t = 0 modulo
/// every other prime power of L.
Int p_shift_offset(Int lcm, Int p, Int a1, Int a2);

/// Moves bundle C_p(a1) up by t and C_p(a2) down by t. Throws
/// std::invalid_argument when p does not divide L or 0 <= a1 < a2 <= p-1
/// fails.
CoveringSystem p_shift(const CoveringSystem& system, Int p, Int a1, Int a2);

// --- density and candidate enumeration -----------------------------------

/// Sum of 1/d over divisors d of L with d >= m.
Rational density(Int L, Int m);

/// p^v L / q^v with q the largest prime of L and v = v_q(L). Requires p prime,
/// p >= m, p not dividing L and q > p.
Int smaller_prime_substitute(Int L, Int m, Int p);

struct CandidateReport {
  Int min_modulus = 0;
  Int bound = 0;
  std::vector<Int> density_pass;
  /// (L, multiple of L in density_pass)
  std::vector<std::pair<Int, Int>> dominance_eliminated;
  /// (L, substituted value)
  std::vector<std::pair<Int, Int>> smallerp_eliminated;
  std::vector<Int> survivors;
};

struct EnumerateOptions {
  bool eliminations = true;
  /// Worker threads for the density filter; the report does not depend on it.
  unsigned threads = 1;
};

/// Lists L < bound with m | L and density(L, m) > 1, then removes candidates
/// dominated by a multiple, then candidates whose smaller-prime substitute
/// divides a remaining candidate (repeated until nothing changes).
CandidateReport enumerate_candidates(Int m, Int bound, const EnumerateOptions& options = {});

}  // namespace covering
