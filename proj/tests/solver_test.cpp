#include "covering/solver.hpp"

#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"

namespace covering {
namespace {

SolveOutcome run(const ModuliMultiset& ms, const std::vector<Progression>& fixed = {}, SolveOptions opts = {}) {
  return solve(build_instance(ms, fixed), opts);
}

void expect_witness_ok(const SolveOutcome& out, const ModuliMultiset& ms, const std::vector<Progression>& fixed) {
  ASSERT_EQ(out.verdict, Verdict::kFeasible);
  ASSERT_TRUE(out.witness.has_value());
  EXPECT_TRUE(verify(*out.witness).valid);
  ModuliMultiset used;
  for (const auto& p : out.witness->progressions()) used.add(p.modulus);
  for (const auto& e : used.entries()) EXPECT_LE(e.multiplicity, ms.multiplicity(e.modulus)) << e.modulus;
  const auto& ps = out.witness->progressions();
  for (const auto& f : fixed) EXPECT_NE(std::find(ps.begin(), ps.end(), f), ps.end()) << to_string(f);
}

TEST(NextBranch, FreshTwoThreeSix) {
  SearchState s(build_instance(ModuliMultiset({2, 3, 6}), {}));
  const auto bp = s.next_branch();
  EXPECT_EQ(bp.point, 0);
  ASSERT_EQ(bp.candidates.size(), 3u);
  EXPECT_EQ(bp.candidates[0], (Choice{0, 2, 0}));
  EXPECT_EQ(bp.candidates[1], (Choice{1, 3, 0}));
  EXPECT_EQ(bp.candidates[2], (Choice{2, 6, 0}));
}

TEST(NextBranch, FewestChoicesAndTies) {
  SearchState s(build_instance(ModuliMultiset({2, 3, 6}), {}));
  s.disallow(1, 2);  // 2 and 5 lose their mod-3 choice
  const auto bp = s.next_branch();
  EXPECT_EQ(bp.point, 2);
  EXPECT_EQ(bp.candidates.size(), 2u);
}

TEST(NextBranch, DeadAndSingleton) {
  SearchState s(build_instance(ModuliMultiset({2, 3}), {}));
  s.assign(0, 0);
  // uncovered {1, 3, 5}; only the modulus 3 is left, one choice each
  auto bp = s.next_branch();
  EXPECT_EQ(bp.point, 1);
  ASSERT_EQ(bp.candidates.size(), 1u);
  EXPECT_EQ(bp.candidates[0], (Choice{1, 3, 1}));
  s.assign(1, 1);
  bp = s.next_branch();
  EXPECT_EQ(bp.point, 3);
  EXPECT_TRUE(bp.candidates.empty());
}

TEST(NextBranch, NothingUncovered) {
  SearchState s(build_instance(ModuliMultiset({2, 2}), {{0, 2}, {1, 2}}));
  EXPECT_EQ(s.next_branch().point, -1);
  EXPECT_FALSE(s.capacity_prune());
}

TEST(ModulusBranch, LargestClassFirst) {
  SearchState s(build_instance(ModuliMultiset({2, 3, 4, 6, 12}), {{0, 2}, {0, 3}, {1, 6}}));
  // uncovered {5, 11}: one each in classes 1 and 3 mod 4
  auto c = s.modulus_branch();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (Choice{2, 4, 1}));
  EXPECT_EQ(c[1], (Choice{2, 4, 3}));
  const auto m = s.mark();
  s.disallow(2, 1);
  s.disallow(2, 3);
  // modulus 12: 5 and 11 in separate classes
  c = s.modulus_branch();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (Choice{4, 12, 5}));
  s.undo_to(m);
  s.assign(2, 3);
  EXPECT_EQ(s.uncovered_count(), 1);
  c = s.modulus_branch();
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (Choice{4, 12, 5}));
}

TEST(CapacityPrune, Example) {
  SearchState s(build_instance(ModuliMultiset({2, 3, 6}), {{0, 2}, {1, 3}}));
  EXPECT_EQ(s.uncovered_count(), 2);
  EXPECT_TRUE(s.is_covered(1));
  EXPECT_FALSE(s.is_covered(3));
  EXPECT_FALSE(s.is_covered(5));
  EXPECT_TRUE(s.capacity_prune());
}

TEST(CapacityPrune, RootOfFeasibleInstance) {
  SearchState s(build_instance(ModuliMultiset({2, 3, 4, 6, 12}), {}));
  EXPECT_FALSE(s.capacity_prune());
}

TEST(SearchState, UndoRestoresEverything) {
  const auto inst = build_instance(ModuliMultiset({2, 3, 4, 6, 12}), {});
  SearchState s(inst);
  auto snapshot = [&] {
    std::vector<Int> v;
    for (Int b = 0; b < s.lcm(); ++b) v.push_back(s.choice_count(b) * 2 + (s.is_covered(b) ? 1 : 0));
    for (std::size_t i = 0; i < 5; ++i) {
      v.push_back(s.remaining(i));
      for (Int r = 0; r < inst.multiset.entries()[i].modulus; ++r) v.push_back(s.class_count(i, r) * 2 + s.allowed(i, r));
    }
    return v;
  };
  const auto before = snapshot();
  const auto m = s.mark();
  s.assign(0, 1);
  s.disallow(3, 4);
  s.assign(1, 0);
  s.disallow(4, 7);
  EXPECT_EQ(s.depth(), 2u);
  s.undo_to(m);
  EXPECT_EQ(snapshot(), before);
  EXPECT_EQ(s.depth(), 0u);
}

TEST(Symmetry, RestrictionsOnTwoThreeSix) {
  // p = 2: modulus 2 may only use class 0; p = 3: modulus 3 only class 0,
  // modulus 6 classes {0, 1} mod 3.
  const auto r = symmetry_restrictions(build_instance(ModuliMultiset({2, 3, 6}), {}));
  const std::vector<Choice> expected = {{0, 2, 1}, {1, 3, 1}, {1, 3, 2}, {2, 6, 2}, {2, 6, 5}};
  EXPECT_EQ(r, expected);
}

TEST(Symmetry, PinnedClassesAreLeftAlone) {
  // 4 mod 5 pins class 4, so modulus 10 keeps classes {0, 4} mod 5; mod 2
  // nothing is pinned and only class 0 stays
  const auto inst = build_instance(ModuliMultiset({5, 10}), {{4, 5}});
  std::vector<Int> allowed(10, 1);
  for (const auto& c : symmetry_restrictions(inst)) {
    EXPECT_EQ(c.modulus, 10);
    allowed[static_cast<std::size_t>(c.residue)] = 0;
  }
  EXPECT_EQ(allowed, (std::vector<Int>{1, 0, 0, 0, 1, 0, 0, 0, 0, 0}));
}

TEST(Solve, SmallExamples) {
  EXPECT_EQ(run(ModuliMultiset({2, 3, 6})).verdict, Verdict::kInfeasible);
  const ModuliMultiset intro({2, 3, 4, 6, 12});
  expect_witness_ok(run(intro), intro, {});
  const std::vector<Progression> fixed = {{0, 2}, {0, 3}, {1, 6}};
  expect_witness_ok(run(intro, fixed), intro, fixed);
  EXPECT_EQ(run(ModuliMultiset({2}), {{0, 2}}).verdict, Verdict::kInfeasible);
  expect_witness_ok(run(ModuliMultiset({2, 2})), ModuliMultiset({2, 2}), {});
}

TEST(Solve, CorpusMultisetsAreFeasible) {
  for (const auto& system : testing::small_valid_corpus()) {
    ModuliMultiset ms;
    for (const auto& p : system.progressions()) ms.add(p.modulus);
    const std::vector<Progression> fixed(system.progressions().begin(), system.progressions().begin() + 1);
    expect_witness_ok(run(ms), ms, {});
    expect_witness_ok(run(ms, fixed), ms, fixed);
  }
}

struct Case {
  ModuliMultiset multiset;
  std::vector<Progression> fixed;
};

// Random multisets of divisors of L <= 60, at most 8 moduli, sometimes with a
// fixed progression. The product of the moduli is kept small enough for the
// brute-force oracle.
std::vector<Case> oracle_family(std::size_t count, std::uint64_t seed) {
  static const std::vector<Int> kLcms = {6, 8, 10, 12, 18, 20, 24, 28, 30, 36, 40, 42, 45, 48, 60};
  std::mt19937_64 rng(seed);
  std::vector<Case> out;
  while (out.size() < count) {
    const Int L = kLcms[std::uniform_int_distribution<std::size_t>(0, kLcms.size() - 1)(rng)];
    const auto divs = divisors_at_least(L, 2);
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    ModuliMultiset ms;
    double product = 1;
    for (int k = 0; k < n; ++k) {
      const Int m = divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)];
      if (product * static_cast<double>(m) > 3e6) break;
      product *= static_cast<double>(m);
      ms.add(m);
    }
    if (ms.total() < 2) continue;
    Case c{ms, {}};
    if (rng() % 3 == 0) {
      const Int m = ms.entries().front().modulus;
      c.fixed.push_back(Progression::make(static_cast<Int>(rng() % static_cast<std::uint64_t>(m)), m));
    }
    out.push_back(std::move(c));
  }
  return out;
}

TEST(Solve, OracleEquivalence) {
  int feasible = 0, infeasible = 0;
  for (const auto& c : oracle_family(300, 77)) {
    const bool expected = oracle::brute_force_cover_exists(c.multiset, c.fixed);
    const auto inst = build_instance(c.multiset, c.fixed);
    const auto out = solve(inst);
    ASSERT_NE(out.verdict, Verdict::kTimeout);
    ASSERT_EQ(out.verdict == Verdict::kFeasible, expected) << instance_text(inst);
    if (expected) expect_witness_ok(out, c.multiset, c.fixed);
    (expected ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

TEST(Solve, VerdictIndependentOfOptions) {
  std::vector<SolveOptions> variants(7);
  variants[1].branching = BranchRule::kFewestChoices;
  variants[2].capacity_prune = false;
  variants[2].unit_propagation = false;
  variants[3].class_bound = false;
  variants[4].symmetry_breaking = false;
  variants[5].mode = SolveMode::kParallel;
  variants[5].workers = 3;
  variants[6].capacity_prune = variants[6].unit_propagation = variants[6].class_bound = false;
  variants[6].symmetry_breaking = false;
  variants[6].branching = BranchRule::kFewestChoices;
  for (const auto& c : oracle_family(120, 5)) {
    const auto inst = build_instance(c.multiset, c.fixed);
    const auto reference = solve(inst, variants[0]).verdict;
    for (std::size_t v = 1; v < variants.size(); ++v) {
      const auto out = solve(inst, variants[v]);
      ASSERT_EQ(out.verdict, reference) << "variant " << v << "\n" << instance_text(inst);
      if (out.witness) {
        EXPECT_TRUE(verify(*out.witness).valid);
      }
    }
  }
}

// -1 modulo the least power of each prime of L that is a modulus, as the
// presets do.
std::vector<Progression> translation_fixings(const ModuliMultiset& ms) {
  std::vector<Progression> out;
  for (const auto& pp : factorize(ms.lcm())) {
    Int q = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      q *= pp.prime;
      if (ms.multiplicity(q) > 0) {
        out.push_back({q - 1, q});
        break;
      }
    }
  }
  return out;
}

TEST(Symmetry, OracleEquivalenceWithTranslationFixings) {
  std::mt19937_64 rng(4242);
  int feasible = 0, checked = 0;
  for (const auto& c : oracle_family(400, 99)) {
    auto ms = c.multiset;
    // add a prime power so the rule has something to fix
    const auto pps = factorize(ms.lcm());
    const auto& pp = pps[rng() % pps.size()];
    if (ms.multiplicity(pp.prime) == 0) ms.add(pp.prime);
    const auto fixed = translation_fixings(ms);
    double product = 1;
    for (const auto& e : ms.entries()) {
      for (Int k = 0; k < e.multiplicity; ++k) product *= static_cast<double>(e.modulus);
    }
    if (product > 2e7) continue;
    const bool expected = oracle::brute_force_cover_exists(ms, fixed);
    const auto out = solve(build_instance(ms, fixed));
    ASSERT_EQ(out.verdict == Verdict::kFeasible, expected) << instance_text(build_instance(ms, fixed));
    if (expected) expect_witness_ok(out, ms, fixed);
    ++checked;
    feasible += expected ? 1 : 0;
  }
  EXPECT_GT(checked, 200);
  EXPECT_GT(feasible, 20);
}

TEST(Symmetry, LcmProblemsAgreeWithAndWithoutIt) {
  SolveOptions off;
  off.symmetry_breaking = false;
  for (Int L = 2; L <= 240; ++L) {
    for (Int m = 2; m <= 4; ++m) {
      const auto divs = divisors_at_least(L, m);
      if (divs.empty()) continue;
      const ModuliMultiset ms(divs);
      const auto fixed = translation_fixings(ms);
      const auto inst = build_instance(ms, fixed);
      const auto a = solve(inst);
      const auto b = solve(inst, off);
      ASSERT_EQ(a.verdict, b.verdict) << "L=" << L << " m=" << m;
      if (a.witness) EXPECT_TRUE(verify(*a.witness).valid);
    }
  }
}

TEST(Symmetry, KnownFeasibleLcmInstances) {
  // lcm 1440 with minimum modulus 5 and lcm 5040 with minimum modulus 6
  for (const auto& [L, m] : std::vector<std::pair<Int, Int>>{{1440, 5}, {5040, 6}}) {
    const ModuliMultiset ms(divisors_at_least(L, m));
    const auto fixed = translation_fixings(ms);
    const auto out = solve(build_instance(ms, fixed));
    expect_witness_ok(out, ms, fixed);
    EXPECT_EQ(verify(*out.witness).min_modulus, m);
  }
}

TEST(Solve, KrukenbergSmall) {
  const auto a = lemma1_discard(ModuliMultiset::range(3, 35), 35).multiset;
  const auto out = solve(build_instance(a, {}));
  EXPECT_EQ(out.verdict, Verdict::kInfeasible);
  const auto b = lemma1_discard(ModuliMultiset::range(2, 12), 12).multiset;
  expect_witness_ok(solve(build_instance(b, {})), b, {});
}

TEST(Solve, DeterministicNodeCounts) {
  const auto ms = lemma1_discard(ModuliMultiset::range(3, 35), 35).multiset;
  const auto inst = build_instance(ms, {});
  const auto a = solve(inst);
  const auto b = solve(inst);
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_GT(a.nodes, 1u);
}

TEST(Solve, ParallelMatchesOnHarderInstances) {
  SolveOptions par;
  par.mode = SolveMode::kParallel;
  par.workers = 4;
  const auto ms = lemma1_discard(ModuliMultiset::range(3, 35), 35).multiset;
  EXPECT_EQ(solve(build_instance(ms, {}), par).verdict, Verdict::kInfeasible);
  const auto ms36 = lemma1_discard(ModuliMultiset::range(3, 36), 36).multiset;
  const auto out = solve(build_instance(ms36, {}), par);
  expect_witness_ok(out, ms36, {});
}

TEST(Solve, NodeBudgetGivesTimeout) {
  const auto ms = ModuliMultiset(divisors_at_least(2520, 6));
  SolveOptions opts;
  opts.budget.node_limit = 300;
  const auto out = solve(build_instance(ms, {{6, 7}, {7, 8}, {8, 9}}), opts);
  EXPECT_EQ(out.verdict, Verdict::kTimeout);
  EXPECT_FALSE(out.witness.has_value());
  EXPECT_GE(out.nodes, 300u);
  ASSERT_TRUE(out.budget.node_limit.has_value());
}

TEST(Solve, TimeBudgetGivesTimeout) {
  const auto ms = ModuliMultiset(divisors_at_least(2520, 6));
  SolveOptions opts;
  opts.budget.time_limit_seconds = 0.05;
  opts.mode = SolveMode::kParallel;
  const auto out = solve(build_instance(ms, {{6, 7}, {7, 8}, {8, 9}}), opts);
  EXPECT_EQ(out.verdict, Verdict::kTimeout);
  EXPECT_LT(out.elapsed.count(), 5.0);
}

TEST(Solve, ProgressLines) {
  std::ostringstream progress;
  SolveOptions opts;
  opts.progress = &progress;
  opts.progress_interval = 256;
  opts.budget.node_limit = 2000;
  solve(build_instance(ModuliMultiset(divisors_at_least(2520, 6)), {{6, 7}, {7, 8}, {8, 9}}), opts);
  EXPECT_EQ(progress.str().rfind("progress nodes=", 0), 0u);
  EXPECT_NE(progress.str().find(" uncovered="), std::string::npos);
}

}  // namespace
}  // namespace covering
