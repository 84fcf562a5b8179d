#include "cover_cli/presets.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "cover_cli/cli.hpp"
#include "covering/catalog.hpp"
#include "format.hpp"

namespace cover_cli {

using namespace covering;

namespace {

std::vector<Progression> minus_one(std::initializer_list<Int> prime_powers) {
  std::vector<Progression> out;
  for (Int q : prime_powers) out.push_back({q - 1, q});
  return out;
}

}  // namespace

const std::vector<CandidateFixings>& candidate_fixings(Int min_modulus) {
  // -1 modulo the least power of each prime of L that is a modulus
  static const std::vector<CandidateFixings> five = {
      {720, minus_one({5, 8, 9})},   {840, minus_one({5, 7, 8})},   {900, minus_one({5, 9})},
      {960, minus_one({5, 8})},      {1050, minus_one({5, 7})},     {1080, minus_one({5, 8, 9})},
      {1200, minus_one({5, 8})},     {1260, minus_one({5, 7, 9})},
  };
  static const std::vector<CandidateFixings> six = {
      {2520, minus_one({7, 8, 9}), true}, {2772, minus_one({7, 9, 11})}, {2880, minus_one({8, 9})},
      {3024, minus_one({7, 8, 9})},       {3150, minus_one({7, 9, 25})}, {3240, minus_one({8, 9})},
      {3360, minus_one({7, 8})},          {3528, minus_one({7, 8, 9})},  {3600, minus_one({8, 9, 25})},
      {3696, minus_one({7, 8, 11})},      {3780, minus_one({7, 9})},     {4032, minus_one({7, 8, 9})},
      {4200, minus_one({7, 8, 25})},      {4320, minus_one({8, 9}), true}, {4536, minus_one({7, 8, 9})},
      {4620, minus_one({7, 11})},
  };
  if (min_modulus == 5) return five;
  if (min_modulus == 6) return six;
  throw std::invalid_argument("no candidate table for minimum modulus " + std::to_string(min_modulus));
}

ModuliMultiset lcm_problem_moduli(Int L, Int m) { return ModuliMultiset(divisors_at_least(L, m)); }

const ExpectedCandidates& expected_candidates(Int min_modulus) {
  static const ExpectedCandidates five{
      5,
      1440,
      {240, 360, 420, 480, 540, 600, 630, 720, 840, 900, 960, 990, 1050, 1080, 1200, 1260, 1320},
      {990, 1320},
      {720, 840, 900, 960, 1050, 1080, 1200, 1260},
  };
  static const ExpectedCandidates six{
      6,
      5040,
      {504,  720,  840,  1008, 1080, 1260, 1440, 1512, 1680, 1800, 1848, 1890, 1980, 2016,
       2100, 2160, 2520, 2640, 2772, 2880, 3024, 3120, 3150, 3168, 3240, 3276, 3360, 3528,
       3600, 3696, 3780, 3960, 4032, 4200, 4320, 4368, 4536, 4620, 4680, 4752},
      {2640, 3120, 3168, 3276, 3960, 4368, 4680, 4752},
      {2520, 2772, 2880, 3024, 3150, 3240, 3360, 3528, 3600, 3696, 3780, 4032, 4200, 4320, 4536, 4620},
  };
  if (min_modulus == 5) return five;
  if (min_modulus == 6) return six;
  throw std::invalid_argument("no reference candidates for minimum modulus " + std::to_string(min_modulus));
}

const std::vector<Progression>& min_modulus_5_108_fixings() {
  static const std::vector<Progression> fixed = {{4, 5}, {6, 7}, {7, 8}, {8, 9}, {33, 35}};
  return fixed;
}

MinModulusInstance build_min_modulus_5_108() {
  MinModulusInstance out;
  out.potential = lemma1_discard(ModuliMultiset::range(5, 107), 107).multiset;
  out.merge_sites = lemma2_scan(out.potential);
  out.merged = lemma2_merge(out.potential, 2, 5);
  out.instance = build_instance(out.merged, min_modulus_5_108_fixings());
  return out;
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"krukenberg-2-12", "distinct moduli in [2,12] cover; [2,11] does not"},
      {"krukenberg-3-35", "no distinct covering with moduli in [3,35]"},
      {"krukenberg-3-36", "distinct covering with moduli in [3,36]"},
      {"thm-5-1440", "minimum modulus 5: the 8 candidate lcms below 1440 are infeasible"},
      {"thm-6-5040", "minimum modulus 6: the 16 candidate lcms below 5040 are infeasible (2520, 4320 need --include-slow)"},
      {"thm-5-108", "minimum modulus 5, moduli up to 107: build and export the instance (solve needs --include-slow)"},
      {"construction-6-168", "verify the distinct covering with moduli 6..168"},
  };
  return list;
}

// --- pipelines ---------------------------------------------------------------

namespace {

enum class Expect { kFeasible, kInfeasible, kReport };

class Pipeline {
 public:
  Pipeline(std::string_view name, const ReproduceOptions& options, std::ostream& out, std::ostream& err)
      : name_(name), opt_(options), out_(out), err_(err) {}

  bool machine() const { return opt_.machine; }
  const ReproduceOptions& options() const { return opt_; }

  void check(std::string_view what, bool ok, const std::string& detail = {}) {
    if (machine()) {
      std::string key(what);
      std::replace(key.begin(), key.end(), ' ', '_');
      out_ << "check name=" << key << " status=" << (ok ? "ok" : "MISMATCH") << '\n';
    } else {
      out_ << "  check " << what << ": " << (ok ? "ok" : "MISMATCH");
      if (!detail.empty()) out_ << " (" << detail << ")";
      out_ << '\n';
    }
    if (!ok) {
      mismatch_ = true;
      err_ << name_ << ": self-check failed: " << what << '\n';
    }
  }

  void note(const std::string& human, const std::string& machine_record) {
    if (machine()) {
      out_ << machine_record << '\n';
    } else {
      out_ << "  " << human << '\n';
    }
  }

  /// Solves and reports one instance; records a mismatch when the verdict
  /// differs from `expect`.
  SolveOutcome solve_one(const std::string& label, const CoverInstance& instance, Expect expect, bool slow = false) {
    SolveOptions so = opt_.solve;
    if (slow && !so.progress) {
      so.progress = &err_;
      so.progress_interval = 50'000'000;
    }
    const auto outcome = solve(instance, so);
    const bool m = machine();
    if (m) {
      out_ << "solve label=" << label << " lcm=" << instance.lcm << " moduli=" << instance.multiset.total()
           << " fixed=" << detail::progressions_text(instance.fixed, true) << " uncovered=" << instance.uncovered.size()
           << " verdict=" << to_string(outcome.verdict) << " nodes=" << outcome.nodes << '\n';
    } else {
      out_ << "  " << label << ": L=" << instance.lcm << " moduli=" << instance.multiset.total();
      if (!instance.fixed.empty()) out_ << " fixed={" << detail::progressions_text(instance.fixed, false) << "}";
      out_ << " uncovered=" << instance.uncovered.size() << " -> " << to_string(outcome.verdict)
           << " nodes=" << outcome.nodes << " (" << detail::seconds(outcome.elapsed.count()) << " s)\n";
    }
    if (outcome.verdict == Verdict::kTimeout) {
      timeout_ = true;
      err_ << name_ << ": " << label << " hit the search budget\n";
    } else if (expect != Expect::kReport) {
      const bool ok = (outcome.verdict == Verdict::kFeasible) == (expect == Expect::kFeasible);
      if (!ok) {
        mismatch_ = true;
        err_ << name_ << ": self-check failed: " << label << " expected "
             << (expect == Expect::kFeasible ? "FEASIBLE" : "INFEASIBLE") << '\n';
      }
    }
    return outcome;
  }

  void witness(const CoveringSystem& system) {
    for (const auto& p : system.progressions()) {
      if (machine()) {
        out_ << "progression residue=" << p.residue << " modulus=" << p.modulus << '\n';
      } else {
        out_ << "    " << p.residue << ' ' << p.modulus << '\n';
      }
    }
  }

  int finish(Expect headline) {
    const char* status = mismatch_ ? "MISMATCH" : timeout_ ? "TIMEOUT" : "ok";
    const char* expected = headline == Expect::kFeasible     ? "FEASIBLE"
                           : headline == Expect::kInfeasible ? "INFEASIBLE"
                                                             : "REPORT";
    if (machine()) {
      out_ << "preset name=" << name_ << " expected=" << expected << " status=" << status << '\n';
    } else {
      out_ << name_ << ": " << (mismatch_ ? "SELF-CHECK FAILED" : timeout_ ? "incomplete (budget hit)" : "reproduced")
           << " [expected " << expected << "]\n";
    }
    if (mismatch_) return kExitSelfCheck;
    if (timeout_) return kExitTimeout;
    return headline == Expect::kInfeasible ? kExitNegative : kExitOk;
  }

  void header(const std::string& text) {
    if (!machine()) out_ << text << '\n';
  }

 private:
  std::string name_;
  const ReproduceOptions& opt_;
  std::ostream& out_;
  std::ostream& err_;
  bool mismatch_ = false;
  bool timeout_ = false;
};

bool witness_ok(const SolveOutcome& outcome, Int lo, Int hi) {
  if (!outcome.witness) return false;
  const auto report = verify(*outcome.witness);
  return report.valid && report.distinct && report.min_modulus >= lo && report.max_modulus <= hi;
}

void interval_preset(Pipeline& p, Int lo, Int hi, const std::vector<Int>& expected_moduli, Expect expect) {
  p.header("moduli in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  const auto reduced = lemma1_discard(ModuliMultiset::range(lo, hi), hi).multiset;
  p.check("discard", reduced == ModuliMultiset(expected_moduli), "left " + detail::join(reduced.moduli(), " "));
  const auto instance = build_instance(reduced, {});
  const auto outcome = p.solve_one("[" + std::to_string(lo) + "," + std::to_string(hi) + "]", instance, expect);
  if (expect == Expect::kFeasible && outcome.verdict == Verdict::kFeasible) {
    p.check("witness", witness_ok(outcome, lo, hi), "valid, distinct, moduli in range");
    p.witness(*outcome.witness);
  }
}

int run_krukenberg_2_12(Pipeline& p) {
  interval_preset(p, 2, 12, {2, 3, 4, 6, 12}, Expect::kFeasible);
  p.header("moduli in [2, 11]");
  const auto reduced = lemma1_discard(ModuliMultiset::range(2, 11), 11).multiset;
  p.check("discard", reduced == ModuliMultiset({2}), "left " + detail::join(reduced.moduli(), " "));
  const auto instance = build_instance(reduced, {});
  p.check("root density bound", SearchState(instance).capacity_prune());
  p.solve_one("[2,11]", instance, Expect::kInfeasible);
  return p.finish(Expect::kFeasible);
}

int run_candidates(Pipeline& p, Int m) {
  const auto& expected = expected_candidates(m);
  const auto& table = candidate_fixings(m);
  p.header("candidates with minimum modulus " + std::to_string(m) + " below " + std::to_string(expected.bound));
  const auto report = enumerate_candidates(m, expected.bound);
  std::vector<Int> smallerp;
  for (const auto& [L, sub] : report.smallerp_eliminated) smallerp.push_back(L);
  std::sort(smallerp.begin(), smallerp.end());
  p.check("density list", report.density_pass == expected.density_pass,
          std::to_string(report.density_pass.size()) + " entries");
  p.check("smaller-prime eliminations", smallerp == expected.smallerp_eliminated,
          std::to_string(smallerp.size()) + " entries");
  p.check("survivors", report.survivors == expected.survivors, std::to_string(report.survivors.size()) + " entries");
  std::vector<Int> tabled;
  for (const auto& c : table) tabled.push_back(c.lcm);
  p.check("fixings table", tabled == expected.survivors);

  for (const auto& c : table) {
    const auto label = std::to_string(c.lcm);
    if (c.slow && !p.options().include_slow) {
      p.note(label + ": skipped (slow; use --include-slow)", "skip label=" + label + " reason=slow");
      continue;
    }
    p.solve_one(label, build_instance(lcm_problem_moduli(c.lcm, m), c.fixed), Expect::kInfeasible, c.slow);
  }
  return p.finish(Expect::kInfeasible);
}

std::vector<Int> scan_uncovered(Int L, const std::vector<Progression>& fixed) {
  std::vector<Int> out;
  for (Int b = 0; b < L; ++b) {
    if (std::none_of(fixed.begin(), fixed.end(), [b](const Progression& f) { return b % f.modulus == f.residue; })) {
      out.push_back(b);
    }
  }
  return out;
}

int run_thm_5_108(Pipeline& p) {
  static const std::vector<Int> potential = {5,  6,  7,  8,  9,  10, 12, 14, 15, 16, 18, 20, 21, 24, 28, 30, 32,
                                             35, 36, 40, 42, 45, 48, 56, 60, 63, 70, 72, 80, 84, 90, 96, 105};
  p.header("moduli in [5, 107]");
  const auto built = build_min_modulus_5_108();
  p.check("discard", built.potential == ModuliMultiset(potential),
          std::to_string(built.potential.total()) + " moduli");
  const bool has_site = std::find(built.merge_sites.begin(), built.merge_sites.end(), MergeSite{2, 5}) !=
                        built.merge_sites.end();
  p.check("merge site (2,5)", has_site);
  auto merged_expected = ModuliMultiset(potential);
  merged_expected.erase(32);
  merged_expected.erase(96);
  merged_expected.add(48);
  p.check("merge", built.merged == merged_expected, "48 x" + std::to_string(built.merged.multiplicity(48)));
  const auto& inst = built.instance;
  // scan the pre-merge period 2^5 3^2 5 7; the merged lcm divides it
  const Int period = built.potential.lcm();
  std::vector<Int> repeated;
  for (Int base = 0; base < period; base += inst.lcm) {
    for (Int b : inst.uncovered) repeated.push_back(base + b);
  }
  p.check("uncovered count", period % inst.lcm == 0 && repeated == scan_uncovered(period, inst.fixed),
          std::to_string(inst.uncovered.size()) + " of L=" + std::to_string(inst.lcm) + ", scanned [0, " +
              std::to_string(period) + ")");

  const auto model = encode(inst);
  const auto lp = export_lp(model);
  const auto cnf = export_cnf(model);
  const auto again = encode(build_min_modulus_5_108().instance);
  p.check("lp deterministic", export_lp(again) == lp);
  p.check("cnf deterministic", export_cnf(again) == cnf);
  const auto summary = parse_lp_summary(lp);
  p.check("lp round trip", summary.binaries == model.variables.size() && summary.rows == model.constraint_count() &&
                               summary.cover_rows == model.cover.size());
  const auto cnf_vars = encode_cnf(model).num_vars;
  p.note("model: " + std::to_string(model.variables.size()) + " variables, " +
             std::to_string(model.at_most.size()) + " + " + std::to_string(model.cover.size()) +
             " constraints, cnf " + std::to_string(cnf_vars) + " variables, digest " + model.digest,
         "model variables=" + std::to_string(model.variables.size()) +
             " at_most_rows=" + std::to_string(model.at_most.size()) +
             " cover_rows=" + std::to_string(model.cover.size()) + " cnf_vars=" + std::to_string(cnf_vars) +
             " digest=" + model.digest);
  if (!p.options().include_slow) {
    p.note("solve: skipped (slow; use --include-slow)", "skip label=5-107 reason=slow");
    return p.finish(Expect::kReport);
  }
  p.solve_one("5-107", inst, Expect::kInfeasible, true);
  return p.finish(Expect::kInfeasible);
}

int run_construction(Pipeline& p) {
  const auto system = catalog::construction_6_168();
  const auto r = verify(system);
  p.note("VALID=" + std::string(r.valid ? "yes" : "no") + " L=" + std::to_string(r.lcm) +
             " count=" + std::to_string(system.size()) + " density=" + r.density.str(),
         "verify valid=" + std::string(detail::flag(r.valid, true)) + " lcm=" + std::to_string(r.lcm) +
             " count=" + std::to_string(system.size()) + " density=" + r.density.str());
  p.check("valid", r.valid);
  p.check("distinct", r.distinct);
  p.check("minimum modulus 6", r.min_modulus == 6);
  p.check("maximum modulus 168", r.max_modulus == 168);
  p.check("progression count", system.size() == 58, std::to_string(system.size()));
  return p.finish(Expect::kFeasible);
}

}  // namespace

int reproduce(std::string_view name, const ReproduceOptions& options, std::ostream& out, std::ostream& err) {
  const auto& list = presets();
  if (std::none_of(list.begin(), list.end(), [&](const PresetInfo& info) { return info.name == name; })) {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  Pipeline p(name, options, out, err);
  p.header("preset " + std::string(name));
  if (name == "krukenberg-2-12") return run_krukenberg_2_12(p);
  if (name == "krukenberg-3-35") {
    interval_preset(p, 3, 35, {3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30}, Expect::kInfeasible);
    return p.finish(Expect::kInfeasible);
  }
  if (name == "krukenberg-3-36") {
    interval_preset(p, 3, 36, {3, 4, 5, 6, 8, 9, 10, 12, 15, 18, 20, 24, 30, 36}, Expect::kFeasible);
    return p.finish(Expect::kFeasible);
  }
  if (name == "thm-5-1440") return run_candidates(p, 5);
  if (name == "thm-6-5040") return run_candidates(p, 6);
  if (name == "thm-5-108") return run_thm_5_108(p);
  return run_construction(p);
}

}  // namespace cover_cli
