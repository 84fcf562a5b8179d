#include "covering/reduce.hpp"

#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "expected_lists.hpp"

namespace covering {
namespace {

// Brute-force divisor-sum: test every d in [1, L].
Rational density_oracle(Int L, Int m) {
  Rational sum;
  for (Int d = 1; d <= L; ++d) {
    if (L % d == 0 && d >= m) sum += Rational(1, d);
  }
  return sum;
}

TEST(Multiset, KeepsSortedUniqueEntries) {
  ModuliMultiset ms({12, 2, 12, 5});
  EXPECT_EQ(ms.moduli(), (std::vector<Int>{2, 5, 12}));
  EXPECT_EQ(ms.multiplicity(12), 2);
  EXPECT_EQ(ms.total(), 4);
  EXPECT_EQ(ms.lcm(), 60);
  EXPECT_EQ(ms.erase(12), 2);
  EXPECT_EQ(ms.erase(7), 0);
  EXPECT_THROW(ms.add(0), std::invalid_argument);
}

TEST(MultisetFormat, ParsesModAndFixRecords) {
  const auto file = parse_multiset("# sample\nmod 4\nmod 48 2\nmod 4\nfix -1 4\n");
  EXPECT_EQ(file.multiset.multiplicity(4), 2);
  EXPECT_EQ(file.multiset.multiplicity(48), 2);
  ASSERT_EQ(file.fixed.size(), 1u);
  EXPECT_EQ(file.fixed[0], (Progression{3, 4}));
  EXPECT_EQ(serialize_multiset(file), "mod 4 2\nmod 48 2\nfix 3 4\n");
  EXPECT_EQ(serialize_multiset(parse_multiset(serialize_multiset(file))), serialize_multiset(file));
}

TEST(MultisetFormat, Errors) {
  EXPECT_THROW(parse_multiset("mod\n"), ParseError);
  EXPECT_THROW(parse_multiset("mod 0\n"), ParseError);
  EXPECT_THROW(parse_multiset("mod 4 0\n"), ParseError);
  EXPECT_THROW(parse_multiset("fix 1\n"), ParseError);
  EXPECT_THROW(parse_multiset("fix 1 0\n"), ParseError);
  EXPECT_THROW(parse_multiset("moduli 4\n"), ParseError);
}

TEST(Discard, SmallBoundLeavesOnlyTwoThreeSix) {
  for (Int L = 2; L <= 11; ++L) {
    const auto result = lemma1_discard(ModuliMultiset(divisors_at_least(L, 2)), 11);
    for (Int m : result.multiset.moduli()) EXPECT_TRUE(m == 2 || m == 3 || m == 6) << m;
  }
}

TEST(Discard, ReproducesPotentialModuliBelow108) {
  const auto result = lemma1_discard(ModuliMultiset::range(5, 107), 107);
  EXPECT_EQ(result.multiset.moduli(), expected::kPotentialModuli108);
  EXPECT_EQ(result.multiset.total(), 33);
  for (Int m : result.multiset.moduli()) EXPECT_EQ(10080 % m, 0);
  // every removed modulus is in the trace exactly once
  EXPECT_EQ(result.trace.size(), 103u - 33u);
}

TEST(Discard, DiscardsSixtyFourAtBound107) {
  // 2^6 * 3 = 192 > 107, while 2^5 * 3 = 96 <= 107
  EXPECT_EQ(discard_exponent(2, 107), 6);
  const auto result = lemma1_discard(ModuliMultiset({32, 64}), 107);
  EXPECT_EQ(result.multiset.moduli(), std::vector<Int>{32});
  ASSERT_EQ(result.trace.size(), 1u);
  EXPECT_EQ(result.trace[0].removed.modulus, 64);
  EXPECT_EQ(result.trace[0].prime_power, 64);
}

TEST(Discard, NeverIncreasesLcm) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    ModuliMultiset ms;
    for (int k = 0; k < 6; ++k) ms.add(std::uniform_int_distribution<Int>(2, 60)(rng));
    const Int bound = std::uniform_int_distribution<Int>(10, 80)(rng);
    const auto out = lemma1_discard(ms, bound).multiset;
    EXPECT_EQ(ms.lcm() % out.lcm(), 0);
  }
}

ModuliMultiset merged_108() {
  return lemma2_merge(ModuliMultiset(expected::kPotentialModuli108), 2, 5);
}

TEST(Merge, MergesThirtyTwoAndNinetySixIntoFortyEight) {
  const ModuliMultiset before(expected::kPotentialModuli108);
  const auto sites = lemma2_scan(before);
  EXPECT_NE(std::find(sites.begin(), sites.end(), MergeSite{2, 5}), sites.end());
  EXPECT_TRUE(std::is_sorted(sites.begin(), sites.end()));
  const auto after = merged_108();
  EXPECT_EQ(after.total(), 32);
  EXPECT_EQ(after.multiplicity(48), 2);
  EXPECT_EQ(after.multiplicity(32), 0);
  EXPECT_EQ(after.multiplicity(96), 0);
  std::vector<Int> listed;
  for (const auto& e : after.entries()) {
    for (Int k = 0; k < e.multiplicity; ++k) listed.push_back(e.modulus);
  }
  EXPECT_EQ(listed, expected::kMergedModuli108);
}

TEST(Merge, Examples) {
  // 3^2 * lcm(1, 2, 4)
  EXPECT_EQ(lemma2_merge(ModuliMultiset({27, 54, 108}), 3, 3), ModuliMultiset({36}));
  EXPECT_EQ(lemma2_merge(ModuliMultiset({32, 96}), 2, 4), ModuliMultiset({48}));
  // 16, 48, 48, 80 are divisible by 16: four entries, not two
  EXPECT_THROW(lemma2_merge(merged_108(), 2, 4), std::invalid_argument);
  EXPECT_THROW(lemma2_merge(ModuliMultiset({32, 96}), 4, 1), std::invalid_argument);
}

TEST(Merge, ScanEdgeCases) {
  // 2 and 6 are the two moduli divisible by 2; 3 and 6 are not three
  EXPECT_EQ(lemma2_scan(ModuliMultiset({2, 3, 6})), (std::vector<MergeSite>{{2, 1}}));
  EXPECT_EQ(lemma2_merge(ModuliMultiset({2, 3, 6}), 2, 1), ModuliMultiset({3, 3}));
  EXPECT_TRUE(lemma2_scan(ModuliMultiset({3, 5, 7})).empty());
  EXPECT_TRUE(lemma2_scan(ModuliMultiset{}).empty());
}

TEST(Merge, EveryScannedSiteMergesWithoutRaisingLcm) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    ModuliMultiset ms;
    for (int k = 0; k < 5; ++k) ms.add(std::uniform_int_distribution<Int>(2, 72)(rng));
    for (const auto& site : lemma2_scan(ms)) {
      const auto merged = lemma2_merge(ms, site.prime, site.exponent);
      EXPECT_EQ(ms.lcm() % merged.lcm(), 0);
      EXPECT_EQ(merged.total(), ms.total() - site.prime + 1);
    }
  }
}

TEST(PShift, IntroExample) {
  const auto intro = testing::intro_system();
  EXPECT_EQ(p_shift_offset(12, 3, 0, 1), 4);
  const auto shifted = p_shift(intro, 3, 0, 1);
  EXPECT_EQ(shifted, CoveringSystem({{0, 2}, {1, 3}, {1, 4}, {3, 6}, {11, 12}}));
  EXPECT_TRUE(verify(shifted).valid);
}

TEST(PShift, EmptyBundlesLeaveSystemUnchanged) {
  // no progression has modulus divisible by 3 with residue 1 or 2 mod 3
  const CoveringSystem system({{0, 2}, {1, 2}, {0, 3}});
  ASSERT_TRUE(residue_bundle(system, 3, 1).empty());
  ASSERT_TRUE(residue_bundle(system, 3, 2).empty());
  EXPECT_EQ(p_shift(system, 3, 1, 2), system);
}

TEST(PShift, Errors) {
  const auto intro = testing::intro_system();
  EXPECT_THROW(p_shift(intro, 5, 0, 1), std::invalid_argument);
  EXPECT_THROW(p_shift(intro, 3, 1, 1), std::invalid_argument);
  EXPECT_THROW(p_shift(intro, 3, 2, 1), std::invalid_argument);
  EXPECT_THROW(p_shift(intro, 3, 0, 3), std::invalid_argument);
  EXPECT_THROW(p_shift(intro, 4, 0, 1), std::invalid_argument);
}

TEST(PShift, OffsetSatisfiesCongruences) {
  for (Int L : {12, 360, 720, 1663200}) {
    for (const auto& [p, e] : factorize(L)) {
      for (Int a1 = 0; a1 < p; ++a1) {
        for (Int a2 = a1 + 1; a2 < p; ++a2) {
          const Int t = p_shift_offset(L, p, a1, a2);
          ASSERT_GE(t, 0);
          ASSERT_LT(t, L);
          for (const auto& [q, f] : factorize(L)) {
            const Int qf = checked_pow(q, f);
            ASSERT_EQ(floor_mod(t - (q == p ? a2 - a1 : 0), qf), 0);
          }
        }
      }
    }
  }
}

TEST(PShift, PreservesValidityOnCorpus) {
  for (const auto& system : testing::valid_corpus()) {
    for (const auto& [p, e] : factorize(system.lcm())) {
      for (Int a1 = 0; a1 < p; ++a1) {
        for (Int a2 = a1 + 1; a2 < p; ++a2) {
          const auto shifted = p_shift(system, p, a1, a2);
          ASSERT_EQ(shifted.size(), system.size());
          ASSERT_TRUE(verify(shifted).valid) << "p=" << p << " a1=" << a1 << " a2=" << a2;
        }
      }
    }
  }
}

TEST(Density, Examples) {
  EXPECT_EQ(density_oracle(240, 5), Rational(61, 60));
  EXPECT_EQ(density(240, 5), Rational(61, 60));
  EXPECT_EQ(density(120, 5), Rational(11, 12));
  EXPECT_EQ(density(120, 5), density_oracle(120, 5));
  EXPECT_EQ(density(12, 12), Rational(1, 12));
}

TEST(SmallerPrime, Examples) {
  EXPECT_EQ(smaller_prime_substitute(990, 5, 7), 630);
  EXPECT_EQ(smaller_prime_substitute(1320, 5, 7), 840);
  EXPECT_EQ(smaller_prime_substitute(4680, 6, 7), 2520);
  // q^2 replaced by p^2
  EXPECT_EQ(smaller_prime_substitute(2 * 121, 5, 7), 2 * 49);
}

TEST(SmallerPrime, Errors) {
  EXPECT_THROW(smaller_prime_substitute(990, 5, 11), std::invalid_argument);  // p | L
  EXPECT_THROW(smaller_prime_substitute(990, 8, 7), std::invalid_argument);   // p < m
  EXPECT_THROW(smaller_prime_substitute(840, 5, 11), std::invalid_argument);  // q <= p
  EXPECT_THROW(smaller_prime_substitute(990, 5, 9), std::invalid_argument);   // not prime
}

TEST(Candidates, MinModulusFiveBelow1440) {
  const auto report = enumerate_candidates(5, 1440);
  EXPECT_EQ(report.density_pass, expected::kDensityPass5);
  EXPECT_EQ(report.survivors, expected::kSurvivors5);
  const std::vector<std::pair<Int, Int>> smallerp = {{990, 630}, {1320, 840}};
  EXPECT_EQ(report.smallerp_eliminated, smallerp);
  std::vector<Int> dominated;
  for (const auto& [L, by] : report.dominance_eliminated) {
    dominated.push_back(L);
    EXPECT_EQ(by % L, 0);
    EXPECT_TRUE(std::binary_search(report.survivors.begin(), report.survivors.end(), by));
  }
  EXPECT_EQ(dominated, (std::vector<Int>{240, 360, 420, 480, 540, 600, 630}));
}

TEST(Candidates, MinModulusSixBelow5040) {
  const auto report = enumerate_candidates(6, 5040);
  EXPECT_EQ(report.density_pass, expected::kDensityPass6);
  std::vector<Int> smallerp;
  for (const auto& [L, image] : report.smallerp_eliminated) smallerp.push_back(L);
  EXPECT_EQ(smallerp, expected::kSmallerPrime6);
  EXPECT_EQ(report.survivors, expected::kSurvivors6);
  for (const auto& [L, by] : report.dominance_eliminated) EXPECT_LT(L, 2520);
  EXPECT_EQ(report.dominance_eliminated.size(), 16u);
}

// Every eliminated candidate leads to a survivor through a chain of
// "divides" and "substitutes to" steps.
bool reaches_survivor(const CandidateReport& report, Int L, int depth = 0) {
  if (depth > 64) return false;
  if (std::binary_search(report.survivors.begin(), report.survivors.end(), L)) return true;
  for (Int s : report.survivors) {
    if (s % L == 0) return true;
  }
  for (const auto& [from, to] : report.dominance_eliminated) {
    if (from == L) return reaches_survivor(report, to, depth + 1);
  }
  for (const auto& [from, to] : report.smallerp_eliminated) {
    if (from == L) return reaches_survivor(report, to, depth + 1);
  }
  for (Int other : report.density_pass) {
    if (other != L && other % L == 0 && reaches_survivor(report, other, depth + 1)) return true;
  }
  return false;
}

TEST(Candidates, ReportInvariants) {
  for (const auto& [m, bound] : std::vector<std::pair<Int, Int>>{{3, 200}, {4, 600}, {5, 1440}, {6, 5040}, {7, 8000}}) {
    const auto report = enumerate_candidates(m, bound);
    ASSERT_TRUE(std::is_sorted(report.survivors.begin(), report.survivors.end()));
    std::vector<Int> rebuilt = report.survivors;
    for (const auto& [L, by] : report.dominance_eliminated) {
      rebuilt.push_back(L);
      EXPECT_EQ(by % L, 0);
    }
    for (const auto& [L, image] : report.smallerp_eliminated) {
      rebuilt.push_back(L);
      bool divides = false;
      for (Int s : report.survivors) divides = divides || s % image == 0;
      EXPECT_TRUE(divides) << L;
    }
    std::sort(rebuilt.begin(), rebuilt.end());
    EXPECT_EQ(rebuilt, report.density_pass);
    for (Int L : report.density_pass) EXPECT_TRUE(reaches_survivor(report, L)) << L;
    EXPECT_EQ(report.survivors, enumerate_candidates(m, bound).survivors);
  }
}

TEST(Candidates, SingleCandidateBelow241) {
  const auto report = enumerate_candidates(5, 241);
  EXPECT_EQ(report.density_pass, std::vector<Int>{240});
  EXPECT_EQ(report.survivors, std::vector<Int>{240});
}

TEST(Candidates, FilterMatchesDoubleLoopOracle) {
  for (Int m : {2, 3, 4, 5, 6, 7}) {
    const Int bound = 5040;
    std::vector<Int> oracle;
    for (Int L = 1; L < bound; ++L) {
      if (L % m == 0 && density_oracle(L, m) > Rational(1)) oracle.push_back(L);
    }
    EXPECT_EQ(enumerate_candidates(m, bound, {.eliminations = false}).survivors, oracle) << m;
  }
}

TEST(Candidates, ThreadedFilterIsIdentical) {
  const auto one = enumerate_candidates(6, 5040);
  const auto four = enumerate_candidates(6, 5040, {.eliminations = true, .threads = 4});
  EXPECT_EQ(one.density_pass, four.density_pass);
  EXPECT_EQ(one.survivors, four.survivors);
  EXPECT_EQ(one.smallerp_eliminated, four.smallerp_eliminated);
  EXPECT_EQ(one.dominance_eliminated, four.dominance_eliminated);
}

}  // namespace
}  // namespace covering
