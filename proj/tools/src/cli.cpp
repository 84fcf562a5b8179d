#include "cover_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cover_cli/presets.hpp"
#include "covering/model.hpp"
#include "covering/reduce.hpp"
#include "covering/solver.hpp"
#include "format.hpp"

namespace cover_cli {

using namespace covering;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
  if (!f.flush()) throw InputError("write failed: " + path);
}

MultisetFile read_instance_file(const std::string& path) {
  try {
    return parse_multiset(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_verify(const std::string& path, bool machine, std::ostream& out) {
  CoveringSystem system;
  try {
    system = parse_system(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
  if (system.empty()) throw InputError(path + ": no progressions");
  const auto r = verify(system);
  if (machine) {
    out << "verdict=" << (r.valid ? "VALID" : "INVALID") << " lcm=" << r.lcm << " density=" << r.density.str()
        << " count=" << system.size() << " distinct=" << detail::flag(r.distinct, true)
        << " min_modulus=" << r.min_modulus << " max_modulus=" << r.max_modulus;
    if (r.witness) out << " uncovered=" << *r.witness;
    out << '\n';
  } else {
    out << (r.valid ? "VALID" : "INVALID") << " L=" << r.lcm << " density=" << r.density.str()
        << " count=" << system.size() << " distinct=" << detail::flag(r.distinct, false)
        << " moduli=" << r.min_modulus << ".." << r.max_modulus << '\n';
    if (r.witness) out << "uncovered: " << *r.witness << '\n';
  }
  return r.valid ? kExitOk : kExitNegative;
}

int cmd_density(Int L, Int m, bool machine, std::ostream& out) {
  if (L < 1 || m < 1) throw InputError("L and m must be positive");
  const auto d = density(L, m);
  const bool exceeds = d > Rational(1);
  if (machine) {
    out << "lcm=" << L << " min_modulus=" << m << " density=" << d.str() << " exceeds_one=" << detail::flag(exceeds, true)
        << '\n';
  } else {
    out << "density(L=" << L << ", m=" << m << ") = " << d.str() << " (" << d.to_double() << ") "
        << (exceeds ? "> 1" : "<= 1") << '\n';
  }
  return kExitOk;
}

int cmd_candidates(Int m, Int bound, bool machine, std::ostream& out) {
  if (m < 2 || bound < 1) throw InputError("--min-mod must be >= 2 and --lcm-bound >= 1");
  const auto r = enumerate_candidates(m, bound);
  auto pairs = [&](const std::vector<std::pair<Int, Int>>& v, const char* sep, const char* arrow) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) s += sep;
      s += std::to_string(v[k].first) + arrow + std::to_string(v[k].second);
    }
    return s;
  };
  if (machine) {
    out << "min_modulus=" << m << " lcm_bound=" << bound << '\n';
    out << "density_pass_count=" << r.density_pass.size() << " density_pass=" << detail::join(r.density_pass, ",")
        << '\n';
    out << "dominated_count=" << r.dominance_eliminated.size()
        << " dominated=" << pairs(r.dominance_eliminated, ",", ":") << '\n';
    out << "smallerp_count=" << r.smallerp_eliminated.size() << " smallerp=" << pairs(r.smallerp_eliminated, ",", ":")
        << '\n';
    out << "survivors_count=" << r.survivors.size() << " survivors=" << detail::join(r.survivors, ",") << '\n';
  } else {
    out << "candidate lcms L < " << bound << " with minimum modulus " << m << '\n';
    out << "density > 1 (" << r.density_pass.size() << "): " << detail::join(r.density_pass, " ") << '\n';
    out << "dominated by a multiple (" << r.dominance_eliminated.size()
        << "): " << pairs(r.dominance_eliminated, " ", " | ") << '\n';
    out << "smaller-prime substitution (" << r.smallerp_eliminated.size()
        << "): " << pairs(r.smallerp_eliminated, " ", " -> ") << '\n';
    out << "survivors (" << r.survivors.size() << "): " << detail::join(r.survivors, " ") << '\n';
  }
  return kExitOk;
}

int cmd_reduce(const std::string& path, Int bound, bool machine, std::ostream& out, std::ostream& err) {
  if (bound < 1) throw InputError("--bound must be positive");
  auto file = read_instance_file(path);
  const auto result = lemma1_discard(file.multiset, bound);
  std::vector<Progression> kept;
  for (const auto& f : file.fixed) {
    if (result.multiset.multiplicity(f.modulus) > 0) {
      kept.push_back(f);
    } else {
      err << "note: dropping fix " << to_string(f) << " (modulus discarded)\n";
    }
  }
  const auto sites = lemma2_scan(result.multiset);
  if (machine) {
    for (const auto& s : result.trace) {
      out << "discard modulus=" << s.removed.modulus << " multiplicity=" << s.removed.multiplicity
          << " prime_power=" << s.prime_power << '\n';
    }
    for (const auto& s : sites) out << "merge_site prime=" << s.prime << " exponent=" << s.exponent << '\n';
    out << "result distinct=" << result.multiset.distinct() << " total=" << result.multiset.total()
        << " lcm=" << result.multiset.lcm() << '\n';
  } else {
    for (const auto& s : result.trace) {
      out << "# discard " << s.removed.modulus;
      if (s.removed.multiplicity != 1) out << " (x" << s.removed.multiplicity << ")";
      out << " divisible by " << s.prime_power << '\n';
    }
    for (const auto& s : sites) out << "# merge site p=" << s.prime << " a=" << s.exponent << '\n';
    out << "# " << result.multiset.total() << " moduli left, lcm " << result.multiset.lcm() << '\n';
    out << serialize_multiset({result.multiset, kept});
  }
  return kExitOk;
}

CoverInstance load_instance(const std::string& path) {
  const auto file = read_instance_file(path);
  if (file.multiset.empty()) throw InputError(path + ": no moduli");
  try {
    return build_instance(file.multiset, file.fixed);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  } catch (const OverflowError& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_encode(const std::string& path, const std::string& format, const std::string& out_path, bool machine,
               std::ostream& out, std::ostream& err) {
  const auto instance = load_instance(path);
  EncodedModel model;
  try {
    model = encode(instance);
  } catch (const TriviallyInfeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    if (machine) out << "verdict=INFEASIBLE uncovered=" << e.point() << '\n';
    return kExitNegative;
  }
  const std::string text = format == "lp" ? export_lp(model) : export_cnf(model);
  write_file(out_path, text);
  if (machine) {
    out << "format=" << format << " variables=" << model.variables.size() << " at_most_rows=" << model.at_most.size()
        << " cover_rows=" << model.cover.size() << " digest=" << model.digest << " bytes=" << text.size() << '\n';
  } else {
    out << "wrote " << out_path << " (" << format << "): " << model.variables.size() << " variables, "
        << model.at_most.size() << " + " << model.cover.size() << " constraints, digest " << model.digest << '\n';
  }
  return kExitOk;
}

int cmd_solve(const std::string& path, const SolveOptions& options, bool machine, std::ostream& out) {
  const auto instance = load_instance(path);
  SolveOutcome r;
  try {
    r = solve(instance, options);
  } catch (const std::invalid_argument& e) {
    throw InputError(path + ": " + e.what());
  }
  if (machine) {
    out << "verdict=" << to_string(r.verdict) << " nodes=" << r.nodes << " lcm=" << instance.lcm
        << " uncovered=" << instance.uncovered.size() << '\n';
    if (r.witness) {
      for (const auto& p : r.witness->progressions()) {
        out << "progression residue=" << p.residue << " modulus=" << p.modulus << '\n';
      }
    }
  } else {
    out << to_string(r.verdict) << " nodes=" << r.nodes << " elapsed=" << detail::seconds(r.elapsed.count()) << "s\n";
    if (r.witness) out << serialize_system(*r.witness);
  }
  switch (r.verdict) {
    case Verdict::kFeasible:
      return kExitOk;
    case Verdict::kInfeasible:
      return kExitNegative;
    case Verdict::kTimeout:
      return kExitTimeout;
  }
  return kExitTimeout;
}

std::string preset_help() {
  std::string s = "Preset to run:";
  for (const auto& p : presets()) s += "\n  " + p.name + "  " + p.summary;
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Reserved for randomized modes; the current solver ignores it.
  if (const char* seed = std::getenv("COVER_WORKBENCH_SEED")) {
    char* end = nullptr;
    std::strtoull(seed, &end, 10);
    if (*seed == '\0' || *end != '\0') err << "warning: ignoring non-numeric COVER_WORKBENCH_SEED\n";
  }

  CLI::App app{"Covering-system workbench", "cover"};
  app.require_subcommand(1);
  app.fallthrough();
  bool machine = false;
  app.add_flag("--machine", machine, "Emit key=value records");

  std::string file, format, out_path, preset;
  Int L = 0, m = 0, min_mod = 0, lcm_bound = 0, bound = 0;
  double time_limit = 0;
  std::uint64_t node_limit = 0;
  unsigned parallel = 0;
  bool include_slow = false;

  auto* verify_cmd = app.add_subcommand("verify", "Check that a covering-system file covers the integers");
  verify_cmd->add_option("file", file, "Covering-system file")->required();

  auto* density_cmd = app.add_subcommand("density", "Sum of 1/d over divisors d >= m of L");
  density_cmd->add_option("L", L)->required();
  density_cmd->add_option("m", m)->required();

  auto* cand_cmd = app.add_subcommand("candidates", "Candidate lcms for a minimum modulus");
  cand_cmd->add_option("--min-mod", min_mod, "Minimum modulus")->required();
  cand_cmd->add_option("--lcm-bound", lcm_bound, "Exclusive bound on L")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Prime-power discard on a multiset file");
  reduce_cmd->add_option("file", file, "Multiset file")->required();
  reduce_cmd->add_option("--bound", bound, "Largest allowed modulus")->required();

  auto* encode_cmd = app.add_subcommand("encode", "Export the 0/1 model of an instance");
  encode_cmd->add_option("file", file, "Instance (multiset) file")->required();
  encode_cmd->add_option("--format", format)->required()->check(CLI::IsMember({"lp", "cnf"}));
  encode_cmd->add_option("--out", out_path)->required();

  auto* solve_cmd = app.add_subcommand("solve", "Decide an instance with the exact search");
  solve_cmd->add_option("file", file, "Instance (multiset) file")->required();
  solve_cmd->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--node-limit", node_limit, "Search nodes")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--parallel", parallel, "Worker threads")->check(CLI::Range(1u, 256u));

  auto* repro_cmd = app.add_subcommand("reproduce", "Run a reproduction pipeline");
  repro_cmd->add_option("preset", preset, preset_help())->required();
  repro_cmd->add_flag("--include-slow", include_slow, "Also run the slow instances");

  std::vector<const char*> argv{"cover"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify_cmd) return cmd_verify(file, machine, out);
    if (*density_cmd) return cmd_density(L, m, machine, out);
    if (*cand_cmd) return cmd_candidates(min_mod, lcm_bound, machine, out);
    if (*reduce_cmd) return cmd_reduce(file, bound, machine, out, err);
    if (*encode_cmd) return cmd_encode(file, format, out_path, machine, out, err);
    if (*solve_cmd) {
      SolveOptions options;
      if (solve_cmd->count("--time-limit")) options.budget.time_limit_seconds = time_limit;
      if (solve_cmd->count("--node-limit")) options.budget.node_limit = node_limit;
      if (parallel > 1) {
        options.mode = SolveMode::kParallel;
        options.workers = parallel;
      }
      return cmd_solve(file, options, machine, out);
    }
    ReproduceOptions options;
    options.include_slow = include_slow;
    options.machine = machine;
    return reproduce(preset, options, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const OverflowError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace cover_cli
