#include "covering/reduce.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>

#include "text_util.hpp"

namespace covering {

// --- ModuliMultiset ----------------------------------------------------------

ModuliMultiset::ModuliMultiset(std::span<const Int> moduli) {
  for (Int m : moduli) add(m);
}

ModuliMultiset ModuliMultiset::range(Int lo, Int hi) {
  ModuliMultiset ms;
  for (Int m = lo; m <= hi; ++m) ms.add(m);
  return ms;
}

void ModuliMultiset::add(Int modulus, Int multiplicity) {
  if (modulus < 1) throw std::invalid_argument("multiset modulus must be >= 1");
  if (multiplicity < 1) throw std::invalid_argument("multiset multiplicity must be >= 1");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), modulus,
                             [](const Entry& e, Int m) { return e.modulus < m; });
  if (it != entries_.end() && it->modulus == modulus) {
    it->multiplicity = checked_add(it->multiplicity, multiplicity);
  } else {
    entries_.insert(it, Entry{modulus, multiplicity});
  }
}

Int ModuliMultiset::erase(Int modulus) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), modulus,
                             [](const Entry& e, Int m) { return e.modulus < m; });
  if (it == entries_.end() || it->modulus != modulus) return 0;
  const Int f = it->multiplicity;
  entries_.erase(it);
  return f;
}

Int ModuliMultiset::total() const {
  Int n = 0;
  for (const auto& e : entries_) n = checked_add(n, e.multiplicity);
  return n;
}

Int ModuliMultiset::multiplicity(Int modulus) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), modulus,
                             [](const Entry& e, Int m) { return e.modulus < m; });
  return it != entries_.end() && it->modulus == modulus ? it->multiplicity : 0;
}

Int ModuliMultiset::lcm() const {
  Int L = 1;
  for (const auto& e : entries_) L = checked_lcm(L, e.modulus);
  return L;
}

std::vector<Int> ModuliMultiset::moduli() const {
  std::vector<Int> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.modulus);
  return out;
}

MultisetFile parse_multiset(std::string_view text) {
  MultisetFile file;
  detail::for_each_record(text, [&](std::size_t line_no, const auto& tokens) {
    if (tokens[0] == "mod") {
      if (tokens.size() != 2 && tokens.size() != 3) {
        throw ParseError(line_no, "expected 'mod <modulus> [<multiplicity>]'");
      }
      const Int m = detail::parse_int(tokens[1], line_no);
      const Int f = tokens.size() == 3 ? detail::parse_int(tokens[2], line_no) : 1;
      if (m <= 0) throw ParseError(line_no, "modulus must be positive");
      if (f <= 0) throw ParseError(line_no, "multiplicity must be positive");
      file.multiset.add(m, f);
    } else if (tokens[0] == "fix") {
      if (tokens.size() != 3) throw ParseError(line_no, "expected 'fix <residue> <modulus>'");
      const Int a = detail::parse_int(tokens[1], line_no);
      const Int m = detail::parse_int(tokens[2], line_no);
      if (m <= 0) throw ParseError(line_no, "modulus must be positive");
      file.fixed.push_back(Progression::make(a, m));
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tokens[0]) + "'");
    }
  });
  return file;
}

std::string serialize_multiset(const MultisetFile& file) {
  std::string out;
  for (const auto& e : file.multiset.entries()) {
    out += "mod " + std::to_string(e.modulus);
    if (e.multiplicity != 1) out += " " + std::to_string(e.multiplicity);
    out += '\n';
  }
  for (const auto& p : file.fixed) {
    out += "fix " + std::to_string(p.residue) + " " + std::to_string(p.modulus) + "\n";
  }
  return out;
}

// --- prime-power discard -------------------------------------------------

int discard_exponent(Int p, Int bound) {
  int a = 1;
  Int pa = p;
  while (checked_mul(pa, p + 1) <= bound) {
    pa = checked_mul(pa, p);
    ++a;
  }
  return a;
}

DiscardResult lemma1_discard(const ModuliMultiset& ms, Int bound) {
  if (bound < 1) throw std::invalid_argument("lemma1_discard: bound must be >= 1");
  DiscardResult result;
  for (const auto& entry : ms.entries()) {
    Int trigger = 0;
    for (const auto& [p, e] : factorize(entry.modulus)) {
      const int a = discard_exponent(p, bound);
      if (e >= a) {
        trigger = checked_pow(p, a);
        break;
      }
    }
    if (trigger != 0) {
      result.trace.push_back({entry, trigger});
    } else {
      result.multiset.add(entry.modulus, entry.multiplicity);
    }
  }
  return result;
}

// --- p-fold merge --------------------------------------------------------

namespace {

Int count_divisible(const ModuliMultiset& ms, Int d) {
  Int n = 0;
  for (const auto& e : ms.entries()) {
    if (e.modulus % d == 0) n += e.multiplicity;
  }
  return n;
}

}  // namespace

ModuliMultiset lemma2_merge(const ModuliMultiset& ms, Int p, int a) {
  if (!is_prime(p)) throw std::invalid_argument("lemma2_merge: p must be prime");
  if (a < 1) throw std::invalid_argument("lemma2_merge: exponent must be >= 1");
  const Int pa = checked_pow(p, a);
  const Int count = count_divisible(ms, pa);
  if (count != p) {
    throw std::invalid_argument("lemma2_merge: " + std::to_string(count) + " moduli divisible by " +
                                std::to_string(pa) + ", expected " + std::to_string(p));
  }
  ModuliMultiset out;
  Int quotient_lcm = 1;
  for (const auto& e : ms.entries()) {
    if (e.modulus % pa == 0) {
      quotient_lcm = checked_lcm(quotient_lcm, e.modulus / pa);
    } else {
      out.add(e.modulus, e.multiplicity);
    }
  }
  out.add(checked_mul(pa / p, quotient_lcm));
  return out;
}

std::vector<MergeSite> lemma2_scan(const ModuliMultiset& ms) {
  std::map<Int, int> max_exponent;
  for (const auto& e : ms.entries()) {
    for (const auto& [p, k] : factorize(e.modulus)) {
      max_exponent[p] = std::max(max_exponent[p], k);
    }
  }
  std::vector<MergeSite> sites;
  for (const auto& [p, top] : max_exponent) {
    Int pa = 1;
    for (int a = 1; a <= top; ++a) {
      pa *= p;
      if (count_divisible(ms, pa) == p) sites.push_back({p, a});
    }
  }
  return sites;
}

// --- p-shift -----------------------------------------------------------------

std::vector<Progression> residue_bundle(const CoveringSystem& system, Int p, Int alpha) {
  std::vector<Progression> out;
  for (const auto& prog : system.progressions()) {
    if (prog.modulus % p == 0 && prog.residue % p == alpha) out.push_back(prog);
  }
  return out;
}

Int p_shift_offset(Int lcm, Int p, Int a1, Int a2) {
  std::vector<Congruence> pairs;
  for (const auto& [q, e] : factorize(lcm)) {
    const Int qe = checked_pow(q, e);
    pairs.push_back({q == p ? a2 - a1 : 0, qe});
  }
  // Prime-power moduli are pairwise coprime, so the system is consistent.
  return crt_solve(pairs)->residue;
}

CoveringSystem p_shift(const CoveringSystem& system, Int p, Int a1, Int a2) {
  if (!is_prime(p)) throw std::invalid_argument("p_shift: p must be prime");
  const Int L = system.lcm();
  if (L % p != 0) throw std::invalid_argument("p_shift: p does not divide L");
  if (!(0 <= a1 && a1 < a2 && a2 <= p - 1)) {
    throw std::invalid_argument("p_shift: requires 0 <= a1 < a2 <= p-1");
  }
  const Int t = p_shift_offset(L, p, a1, a2);
  std::vector<Progression> out;
  out.reserve(system.size());
  for (const auto& prog : system.progressions()) {
    Int shift = 0;
    if (prog.modulus % p == 0) {
      const Int alpha = prog.residue % p;
      if (alpha == a1) shift = t;
      if (alpha == a2) shift = -t;
    }
    out.push_back(Progression::make(prog.residue + floor_mod(shift, prog.modulus), prog.modulus));
  }
  return CoveringSystem(std::move(out));
}

// --- density and candidates ----------------------------------------------

Rational density(Int L, Int m) {
  if (L < 1 || m < 1) throw std::invalid_argument("density: arguments must be positive");
  // Sum L/d over qualifying divisors, then divide once by L.
  Int scaled = 0;
  for (Int d : divisors_at_least(L, m)) scaled = checked_add(scaled, L / d);
  return Rational(scaled, L);
}

Int smaller_prime_substitute(Int L, Int m, Int p) {
  if (!is_prime(p)) throw std::invalid_argument("smaller_prime_substitute: p must be prime");
  if (p < m) throw std::invalid_argument("smaller_prime_substitute: p must be >= m");
  if (L < 2) throw std::invalid_argument("smaller_prime_substitute: L must be >= 2");
  if (L % p == 0) throw std::invalid_argument("smaller_prime_substitute: p divides L");
  const Int q = largest_prime_factor(L);
  if (q <= p) throw std::invalid_argument("smaller_prime_substitute: largest prime of L must exceed p");
  const int v = valuation(q, L);
  return checked_mul(checked_pow(p, v), L / checked_pow(q, v));
}

namespace {

std::vector<Int> density_filter(Int m, Int bound, unsigned threads) {
  std::vector<Int> multiples;
  for (Int L = m; L < bound; L += m) multiples.push_back(L);
  std::vector<std::uint8_t> pass(multiples.size(), 0);
  const Rational one(1);
  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t k = start; k < multiples.size(); k += stride) {
      pass[k] = density(multiples[k], m) > one;
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  std::vector<Int> out;
  for (std::size_t k = 0; k < multiples.size(); ++k) {
    if (pass[k]) out.push_back(multiples[k]);
  }
  return out;
}

}  // namespace

CandidateReport enumerate_candidates(Int m, Int bound, const EnumerateOptions& options) {
  if (m < 2) throw std::invalid_argument("enumerate_candidates: m must be >= 2");
  if (bound < m) throw std::invalid_argument("enumerate_candidates: bound must be >= m");
  CandidateReport report;
  report.min_modulus = m;
  report.bound = bound;
  report.density_pass = density_filter(m, bound, options.threads);
  if (!options.eliminations) {
    report.survivors = report.density_pass;
    return report;
  }

  const auto& pass = report.density_pass;
  std::set<Int> dominated;
  for (Int L : pass) {
    for (Int other : pass) {
      if (other != L && other % L == 0) {
        dominated.insert(L);
        break;
      }
    }
  }
  std::set<Int> remaining;
  for (Int L : pass) {
    if (!dominated.contains(L)) remaining.insert(L);
  }

  std::map<Int, Int> substituted;
  for (bool changed = true; changed;) {
    changed = false;
    for (Int L : std::vector<Int>(remaining.begin(), remaining.end())) {
      const Int q = largest_prime_factor(L);
      for (Int p = m; p < q; ++p) {
        if (!is_prime(p) || L % p == 0) continue;
        const Int image = smaller_prime_substitute(L, m, p);
        const bool hit = std::any_of(remaining.begin(), remaining.end(),
                                     [&](Int R) { return R != L && R % image == 0; });
        if (hit) {
          substituted[L] = image;
          remaining.erase(L);
          changed = true;
          break;
        }
      }
    }
  }

  report.survivors.assign(remaining.begin(), remaining.end());
  for (const auto& [L, image] : substituted) report.smallerp_eliminated.emplace_back(L, image);
  // Prefer a surviving multiple as the recorded dominator.
  for (Int L : dominated) {
    Int chosen = 0;
    for (Int other : pass) {
      if (other == L || other % L != 0) continue;
      if (remaining.contains(other)) {
        chosen = other;
        break;
      }
      if (chosen == 0) chosen = other;
    }
    report.dominance_eliminated.emplace_back(L, chosen);
  }
  return report;
}

}  // namespace covering
