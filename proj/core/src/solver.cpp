#include "covering/solver.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <thread>

namespace covering {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kFeasible:
      return "FEASIBLE";
    case Verdict::kInfeasible:
      return "INFEASIBLE";
    case Verdict::kTimeout:
      return "TIMEOUT";
  }
  return "?";
}

// --- SearchState -------------------------------------------------------------

namespace {
constexpr std::size_t kMaxTableEntries = std::size_t{1} << 28;
}

SearchState::SearchState(const CoverInstance& instance)
    : L_(instance.lcm), n_(instance.multiset.distinct()), fixed_(instance.fixed) {
  if (static_cast<std::size_t>(L_) * std::max<std::size_t>(n_, 1) > kMaxTableEntries) {
    throw std::invalid_argument("instance too large for the search tables (L = " + std::to_string(L_) + ")");
  }
  std::size_t total = 0;
  for (const auto& e : instance.multiset.entries()) {
    mod_.push_back(e.modulus);
    offset_.push_back(total);
    total += static_cast<std::size_t>(e.modulus);
  }
  rem_ = instance.remaining;
  const auto Lz = static_cast<std::size_t>(L_);
  slot_.resize(Lz * n_);
  for (std::size_t x = 0; x < Lz; ++x) {
    for (std::size_t i = 0; i < n_; ++i) {
      slot_[x * n_ + i] = static_cast<std::uint32_t>(offset_[i] + x % static_cast<std::size_t>(mod_[i]));
    }
  }
  covered_.assign(Lz, 1);
  for (Int b : instance.uncovered) covered_[static_cast<std::size_t>(b)] = 0;
  uncovered_ = static_cast<Int>(instance.uncovered.size());
  cnt_.assign(total, 0);
  for (Int b : instance.uncovered) {
    for (std::size_t i = 0; i < n_; ++i) ++cnt_[slot(static_cast<std::size_t>(b), i)];
  }
  allowed_.assign(total, 1);
  std::int32_t live = 0;
  for (Int r : rem_) live += r > 0 ? 1 : 0;
  cand_.assign(Lz, live);
}

std::vector<Choice> SearchState::choices_for(Int b) const {
  std::vector<Choice> out;
  const auto x = static_cast<std::size_t>(b);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rem_[i] > 0 && allowed_[slot(x, i)]) out.push_back({i, mod_[i], b % mod_[i]});
  }
  return out;
}

BranchPoint SearchState::next_branch() const {
  BranchPoint bp;
  std::int32_t best = std::numeric_limits<std::int32_t>::max();
  for (std::size_t x = 0; x < covered_.size(); ++x) {
    if (covered_[x] || cand_[x] >= best) continue;
    best = cand_[x];
    bp.point = static_cast<Int>(x);
    if (best == 0) break;
  }
  if (bp.point >= 0 && best > 0) bp.candidates = choices_for(bp.point);
  return bp;
}

std::vector<Choice> SearchState::modulus_branch() const {
  std::vector<Choice> out;
  std::vector<std::pair<std::int32_t, Int>> order;
  for (std::size_t i = 0; i < n_; ++i) {
    if (rem_[i] <= 0) continue;
    const std::int32_t* c = &cnt_[offset_[i]];
    const std::uint8_t* a = &allowed_[offset_[i]];
    for (Int r = 0; r < mod_[i]; ++r) {
      if (a[r] && c[r] > 0) order.emplace_back(-c[r], r);
    }
    if (order.empty()) continue;
    std::sort(order.begin(), order.end());
    for (const auto& [negc, r] : order) out.push_back({i, mod_[i], r});
    break;
  }
  return out;
}

bool SearchState::capacity_prune() const {
  Int capacity = 0;
  for (std::size_t i = 0; i < n_; ++i) capacity += rem_[i] * (L_ / mod_[i]);
  return capacity < uncovered_;
}

bool SearchState::class_bound_filter() {
  // best[i] = sum of the rem_i largest allowed class counts
  std::vector<Int> best(n_, 0);
  Int total = 0;
  std::vector<std::int32_t> top;
  for (std::size_t i = 0; i < n_; ++i) {
    if (rem_[i] <= 0) continue;
    const std::int32_t* c = &cnt_[offset_[i]];
    const std::uint8_t* a = &allowed_[offset_[i]];
    const auto m = static_cast<std::size_t>(mod_[i]);
    if (rem_[i] == 1) {
      std::int32_t mx = 0;
      for (std::size_t r = 0; r < m; ++r) {
        if (a[r] && c[r] > mx) mx = c[r];
      }
      best[i] = mx;
    } else {
      top.clear();
      for (std::size_t r = 0; r < m; ++r) {
        if (a[r]) top.push_back(c[r]);
      }
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(rem_[i]), top.size());
      std::partial_sort(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k), top.end(), std::greater<>());
      for (std::size_t r = 0; r < k; ++r) best[i] += top[r];
    }
    total += best[i];
  }
  if (total < uncovered_) return true;
  const Int slack = total - uncovered_;
  for (std::size_t i = 0; i < n_; ++i) {
    if (rem_[i] != 1) continue;
    const Int threshold = best[i] - slack;
    if (threshold <= 0) continue;
    const auto m = static_cast<std::size_t>(mod_[i]);
    for (std::size_t r = 0; r < m; ++r) {
      if (allowed_[offset_[i] + r] && cnt_[offset_[i] + r] < threshold) disallow(i, static_cast<Int>(r));
    }
  }
  return false;
}

void SearchState::exhaust(std::size_t i, int delta) {
  const auto Lz = static_cast<std::size_t>(L_);
  const std::uint8_t* a = &allowed_[offset_[i]];
  const auto m = static_cast<std::size_t>(mod_[i]);
  for (std::size_t r = 0; r < m; ++r) {
    if (!a[r]) continue;
    for (std::size_t x = r; x < Lz; x += m) cand_[x] += delta;
  }
}

void SearchState::assign(std::size_t i, Int r) {
  assignment_.push_back({i, mod_[i], r});
  if (--rem_[i] == 0) exhaust(i, -1);
  const auto Lz = static_cast<std::size_t>(L_);
  const auto m = static_cast<std::size_t>(mod_[i]);
  std::uint32_t newly = 0;
  for (auto x = static_cast<std::size_t>(r); x < Lz; x += m) {
    if (covered_[x]) continue;
    covered_[x] = 1;
    const std::uint32_t* s = &slot_[x * n_];
    for (std::size_t j = 0; j < n_; ++j) --cnt_[s[j]];
    covered_stack_.push_back(static_cast<std::uint32_t>(x));
    ++newly;
  }
  uncovered_ -= newly;
  trail_.push_back({Op::kAssign, static_cast<std::uint32_t>(i), static_cast<std::int32_t>(r), newly});
}

void SearchState::disallow(std::size_t i, Int r) {
  auto& flag = allowed_[offset_[i] + static_cast<std::size_t>(r)];
  if (!flag) return;
  flag = 0;
  if (rem_[i] > 0) {
    const auto Lz = static_cast<std::size_t>(L_);
    const auto m = static_cast<std::size_t>(mod_[i]);
    for (auto x = static_cast<std::size_t>(r); x < Lz; x += m) --cand_[x];
  }
  trail_.push_back({Op::kDisallow, static_cast<std::uint32_t>(i), static_cast<std::int32_t>(r), 0});
}

void SearchState::undo_one() {
  const TrailEntry e = trail_.back();
  trail_.pop_back();
  const std::size_t i = e.modulus_index;
  if (e.op == Op::kDisallow) {
    allowed_[offset_[i] + static_cast<std::size_t>(e.residue)] = 1;
    if (rem_[i] > 0) {
      const auto Lz = static_cast<std::size_t>(L_);
      const auto m = static_cast<std::size_t>(mod_[i]);
      for (auto x = static_cast<std::size_t>(e.residue); x < Lz; x += m) ++cand_[x];
    }
    return;
  }
  for (std::uint32_t k = 0; k < e.covered_points; ++k) {
    const std::size_t x = covered_stack_.back();
    covered_stack_.pop_back();
    covered_[x] = 0;
    const std::uint32_t* s = &slot_[x * n_];
    for (std::size_t j = 0; j < n_; ++j) ++cnt_[s[j]];
  }
  uncovered_ += e.covered_points;
  if (rem_[i]++ == 0) exhaust(i, +1);
  assignment_.pop_back();
}

void SearchState::undo_to(std::size_t mark) {
  while (trail_.size() > mark) undo_one();
}

CoveringSystem SearchState::current_system() const {
  std::vector<Progression> progressions = fixed_;
  for (const auto& c : assignment_) progressions.push_back(Progression{c.residue, c.modulus});
  return CoveringSystem(std::move(progressions));
}

// --- symmetry breaking ---------------------------------------------------------

std::vector<Choice> symmetry_restrictions(const CoverInstance& instance) {
  std::vector<Choice> out;
  const auto& entries = instance.multiset.entries();
  for (const auto& pp : factorize(instance.lcm)) {
    const Int p = pp.prime;
    std::vector<std::uint8_t> pinned(static_cast<std::size_t>(p), 0);
    for (const auto& f : instance.fixed) {
      if (f.modulus % p == 0) pinned[static_cast<std::size_t>(f.residue % p)] = 1;
    }
    std::vector<Int> free_classes;
    for (Int a = 0; a < p; ++a) {
      if (!pinned[static_cast<std::size_t>(a)]) free_classes.push_back(a);
    }
    // uses so far may have opened at most `opened` free classes
    std::size_t opened = 0;
    for (std::size_t i = 0; i < entries.size() && opened + 1 < free_classes.size(); ++i) {
      const Int m = entries[i].modulus;
      const Int k = instance.remaining[i];
      if (m % p != 0 || k <= 0) continue;
      opened += static_cast<std::size_t>(k);
      if (opened >= free_classes.size()) break;
      for (std::size_t f = opened; f < free_classes.size(); ++f) {
        for (Int r = free_classes[f]; r < m; r += p) out.push_back({i, m, r});
      }
    }
  }
  return out;
}

// --- search driver -------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
  std::atomic<bool> stop{false};
  std::atomic<bool> budget_hit{false};
  std::atomic<std::uint64_t> nodes{0};
  Clock::time_point start;
  std::mutex mu;
  std::optional<CoveringSystem> witness;
};

class Searcher {
 public:
  Searcher(SearchState& state, const SolveOptions& options, Shared& shared)
      : state_(state), options_(options), shared_(shared) {}

  /// True when a cover was found; false on refutation or stop.
  bool dfs() {
    if (!count_node()) return false;
    BranchPoint bp;
    if (!propagate(bp)) return false;
    if (bp.point < 0) return found();
    for (const Choice& c : bp.candidates) {
      const auto m = state_.mark();
      state_.assign(c.modulus_index, c.residue);
      if (dfs()) return true;
      state_.undo_to(m);
      if (shared_.stop.load(std::memory_order_relaxed)) return false;
      state_.disallow(c.modulus_index, c.residue);
    }
    return false;
  }

  /// Runs propagation at the current node. Returns false for a dead node;
  /// otherwise bp.point < 0 means covered, else bp holds the branch.
  bool propagate(BranchPoint& bp) {
    for (;;) {
      if (state_.uncovered_count() == 0) {
        bp = {};
        return true;
      }
      if (options_.capacity_prune && state_.capacity_prune()) return false;
      if (options_.class_bound && state_.class_bound_filter()) return false;
      bp = state_.next_branch();
      if (bp.candidates.empty()) return false;
      if (options_.unit_propagation && bp.candidates.size() == 1) {
        state_.assign(bp.candidates[0].modulus_index, bp.candidates[0].residue);
        continue;
      }
      if (options_.branching == BranchRule::kModulusOrder) bp.candidates = state_.modulus_branch();
      return true;
    }
  }

  bool found() {
    std::lock_guard lock(shared_.mu);
    if (!shared_.witness) shared_.witness = state_.current_system();
    shared_.stop = true;
    return true;
  }

  std::uint64_t local_nodes() const { return local_nodes_ + pending_; }

 private:
  static constexpr std::uint64_t kBatch = 256;

  bool count_node() {
    ++pending_;
    if (pending_ < kBatch) return !shared_.stop.load(std::memory_order_relaxed);
    flush();
    return !shared_.stop.load(std::memory_order_relaxed);
  }

 public:
  void flush() {
    const std::uint64_t before = shared_.nodes.fetch_add(pending_);
    const std::uint64_t after = before + pending_;
    local_nodes_ += pending_;
    pending_ = 0;
    const auto& budget = options_.budget;
    if (budget.node_limit && after > *budget.node_limit) hit_budget();
    if (budget.time_limit_seconds &&
        std::chrono::duration<double>(Clock::now() - shared_.start).count() > *budget.time_limit_seconds) {
      hit_budget();
    }
    if (options_.progress && options_.progress_interval > 0 &&
        before / options_.progress_interval != after / options_.progress_interval) {
      std::lock_guard lock(shared_.mu);
      *options_.progress << "progress nodes=" << after << " depth=" << state_.depth()
                         << " uncovered=" << state_.uncovered_count() << '\n'
                         << std::flush;
    }
  }

 private:
  void hit_budget() {
    shared_.budget_hit = true;
    shared_.stop = true;
  }

  SearchState& state_;
  const SolveOptions& options_;
  Shared& shared_;
  std::uint64_t pending_ = 0;
  std::uint64_t local_nodes_ = 0;
};

SolveOutcome finish(Shared& shared, const SolveOptions& options) {
  SolveOutcome out;
  out.budget = options.budget;
  out.nodes = shared.nodes.load();
  out.elapsed = Clock::now() - shared.start;
  if (shared.witness) {
    out.verdict = Verdict::kFeasible;
    out.witness = std::move(shared.witness);
  } else if (shared.budget_hit) {
    out.verdict = Verdict::kTimeout;
  } else {
    out.verdict = Verdict::kInfeasible;
  }
  return out;
}

}  // namespace

SolveOutcome solve(const CoverInstance& instance, const SolveOptions& options) {
  Shared shared;
  shared.start = Clock::now();
  SearchState root(instance);
  if (options.symmetry_breaking) {
    for (const Choice& c : symmetry_restrictions(instance)) root.disallow(c.modulus_index, c.residue);
  }

  if (options.mode == SolveMode::kDeterministic || options.workers <= 1) {
    Searcher searcher(root, options, shared);
    searcher.dfs();
    searcher.flush();
    return finish(shared, options);
  }

  // Parallel: expand the root once, then hand root choices to workers
  // round-robin. Worker k's copy of the state has every earlier root choice
  // refuted, exactly as the sequential search would.
  Searcher root_searcher(root, options, shared);
  BranchPoint bp;
  const bool alive = root_searcher.propagate(bp);
  shared.nodes = 1;
  if (!alive) return finish(shared, options);
  if (bp.point < 0) {
    root_searcher.found();
    return finish(shared, options);
  }

  const unsigned workers = std::min<unsigned>(options.workers, static_cast<unsigned>(bp.candidates.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        SearchState state = root;
        Searcher searcher(state, options, shared);
        for (std::size_t k = 0; k < bp.candidates.size(); ++k) {
          const Choice& c = bp.candidates[k];
          if (k % workers == w) {
            const auto m = state.mark();
            state.assign(c.modulus_index, c.residue);
            const bool hit = searcher.dfs();
            state.undo_to(m);
            if (hit || shared.stop) break;
          }
          state.disallow(c.modulus_index, c.residue);
        }
        searcher.flush();
      });
    }
  }
  return finish(shared, options);
}

}  // namespace covering
