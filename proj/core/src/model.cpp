#include "covering/model.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "text_util.hpp"

namespace covering {

CoverInstance build_instance(const ModuliMultiset& ms, std::vector<Progression> fixed) {
  CoverInstance inst;
  inst.multiset = ms;
  inst.lcm = ms.lcm();
  std::sort(fixed.begin(), fixed.end());

  std::map<Int, Int> usage;
  for (const auto& p : fixed) ++usage[p.modulus];
  for (const auto& [m, used] : usage) {
    const Int f = ms.multiplicity(m);
    if (f == 0) {
      throw std::invalid_argument("fixed progression modulus " + std::to_string(m) + " is not in the multiset");
    }
    if (used > f) {
      throw std::invalid_argument("modulus " + std::to_string(m) + " fixed " + std::to_string(used) +
                                  " times but has multiplicity " + std::to_string(f));
    }
  }
  for (const auto& e : ms.entries()) inst.remaining.push_back(e.multiplicity - usage[e.modulus]);

  std::vector<std::uint8_t> hit(static_cast<std::size_t>(inst.lcm), 0);
  for (const auto& p : fixed) {
    for (Int b = p.residue; b < inst.lcm; b += p.modulus) hit[static_cast<std::size_t>(b)] = 1;
  }
  for (Int b = 0; b < inst.lcm; ++b) {
    if (!hit[static_cast<std::size_t>(b)]) inst.uncovered.push_back(b);
  }
  inst.fixed = std::move(fixed);
  return inst;
}

std::string instance_text(const CoverInstance& instance) {
  return serialize_multiset({instance.multiset, instance.fixed});
}

std::string instance_digest(const CoverInstance& instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : instance_text(instance)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

EncodedModel encode(const CoverInstance& instance) {
  EncodedModel model;
  model.fixed = instance.fixed;
  model.lcm = instance.lcm;
  model.distinct_moduli = instance.multiset.distinct();
  model.digest = instance_digest(instance);

  const auto& entries = instance.multiset.entries();
  // first variable index of each free modulus
  std::vector<std::size_t> base(entries.size(), SIZE_MAX);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (instance.remaining[i] < 1) continue;
    base[i] = model.variables.size();
    AtMostRow row{i, instance.remaining[i], {}};
    for (Int j = 0; j < entries[i].modulus; ++j) {
      row.vars.push_back(model.variables.size());
      model.variables.push_back({i, entries[i].modulus, j});
    }
    model.at_most.push_back(std::move(row));
  }
  for (Int b : instance.uncovered) {
    CoverRow row{b, {}};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (base[i] == SIZE_MAX) continue;
      row.vars.push_back(base[i] + static_cast<std::size_t>(b % entries[i].modulus));
    }
    if (row.vars.empty()) throw TriviallyInfeasible(b);
    model.cover.push_back(std::move(row));
  }
  return model;
}

// --- LP ----------------------------------------------------------------------

namespace {

constexpr std::size_t kTermsPerLine = 10;

std::string var_name(const Variable& v) {
  return "x_" + std::to_string(v.modulus_index) + "_" + std::to_string(v.residue);
}

void write_sum(std::string& out, const EncodedModel& model, const std::vector<std::size_t>& vars) {
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k > 0) out += (k % kTermsPerLine == 0) ? "\n   + " : " + ";
    out += var_name(model.variables[vars[k]]);
  }
}

std::string header_line(const EncodedModel& model, const char* prefix, const std::string& tag) {
  std::string out;
  out += prefix;
  out += " cover-workbench " + tag + " digest=" + model.digest + "\n";
  out += prefix;
  out += " x_<i>_<j> selects residue j (0-based, j in [0, m_i)) of the i-th distinct modulus\n";
  out += prefix;
  out += " distinct_moduli=" + std::to_string(model.distinct_moduli) + " lcm=" + std::to_string(model.lcm) +
         " fixed=" + std::to_string(model.fixed.size()) + " variables=" + std::to_string(model.variables.size()) +
         " at_most_rows=" + std::to_string(model.at_most.size()) +
         " cover_rows=" + std::to_string(model.cover.size()) + "\n";
  return out;
}

}  // namespace

std::string export_lp(const EncodedModel& model) {
  std::string out = header_line(model, "\\", "lp");
  out += "Minimize\n obj: ";
  out += model.variables.empty() ? "0" : "0 " + var_name(model.variables.front());
  out += "\nSubject To\n";
  for (const auto& row : model.at_most) {
    out += " amax_" + std::to_string(row.modulus_index) + ": ";
    write_sum(out, model, row.vars);
    out += " <= " + std::to_string(row.bound) + "\n";
  }
  for (const auto& row : model.cover) {
    out += " cov_" + std::to_string(row.point) + ": ";
    write_sum(out, model, row.vars);
    out += " >= 1\n";
  }
  out += "Binaries\n";
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    out += ' ';
    out += var_name(model.variables[k]);
    if (k % kTermsPerLine == kTermsPerLine - 1 || k + 1 == model.variables.size()) out += "\n";
  }
  out += "End\n";
  return out;
}

LpSummary parse_lp_summary(std::string_view text) {
  enum class Section { kPreamble, kObjective, kConstraints, kBinaries, kEnd };
  Section section = Section::kPreamble;
  LpSummary summary;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '\\') continue;
    if (line == "Minimize") {
      section = Section::kObjective;
    } else if (line == "Subject To") {
      section = Section::kConstraints;
    } else if (line == "Binaries") {
      section = Section::kBinaries;
    } else if (line == "End") {
      section = Section::kEnd;
    } else if (section == Section::kConstraints) {
      const auto tokens = detail::split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.front().ends_with(':')) {
        ++summary.rows;
        if (tokens.front().starts_with("amax_")) ++summary.at_most_rows;
        else if (tokens.front().starts_with("cov_")) ++summary.cover_rows;
        else throw ParseError(line_no, "unknown row name");
      } else if (tokens.front() != "+") {
        throw ParseError(line_no, "unexpected constraint continuation");
      }
    } else if (section == Section::kBinaries) {
      for (auto tok : detail::split_ws(line)) {
        if (!tok.starts_with("x_")) throw ParseError(line_no, "unexpected binary name");
        ++summary.binaries;
      }
    } else if (section != Section::kObjective) {
      throw ParseError(line_no, "text outside of a section");
    }
  }
  if (section != Section::kEnd) throw ParseError(line_no, "missing End");
  return summary;
}

// --- CNF -----------------------------------------------------------------------

namespace {

int lit(std::size_t var_index) { return static_cast<int>(var_index) + 1; }

// Sinz sequential counter for sum(xs) <= k, 2 <= k < |xs|.
void sequential_counter(CnfEncoding& cnf, const std::vector<int>& xs, int k) {
  const std::size_t n = xs.size();
  // s(i, j) for i in [0, n-1), j in [0, k)
  const int first = static_cast<int>(cnf.num_vars) + 1;
  cnf.num_vars += (n - 1) * static_cast<std::size_t>(k);
  auto s = [&](std::size_t i, int j) { return first + static_cast<int>(i) * k + j; };

  cnf.clauses.push_back({-xs[0], s(0, 0)});
  for (int j = 1; j < k; ++j) cnf.clauses.push_back({-s(0, j)});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    cnf.clauses.push_back({-xs[i], s(i, 0)});
    cnf.clauses.push_back({-s(i - 1, 0), s(i, 0)});
    for (int j = 1; j < k; ++j) {
      cnf.clauses.push_back({-xs[i], -s(i - 1, j - 1), s(i, j)});
      cnf.clauses.push_back({-s(i - 1, j), s(i, j)});
    }
    cnf.clauses.push_back({-xs[i], -s(i - 1, k - 1)});
  }
  cnf.clauses.push_back({-xs[n - 1], -s(n - 2, k - 1)});
}

}  // namespace

CnfEncoding encode_cnf(const EncodedModel& model) {
  CnfEncoding cnf;
  cnf.model_vars = model.variables.size();
  cnf.num_vars = model.variables.size();
  for (const auto& row : model.cover) {
    std::vector<int> clause;
    for (auto v : row.vars) clause.push_back(lit(v));
    cnf.clauses.push_back(std::move(clause));
  }
  for (const auto& row : model.at_most) {
    std::vector<int> xs;
    for (auto v : row.vars) xs.push_back(lit(v));
    if (row.bound >= static_cast<Int>(xs.size())) continue;
    if (row.bound == 0) {
      for (int x : xs) cnf.clauses.push_back({-x});
    } else if (row.bound == 1) {
      for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = a + 1; b < xs.size(); ++b) cnf.clauses.push_back({-xs[a], -xs[b]});
      }
    } else {
      sequential_counter(cnf, xs, static_cast<int>(row.bound));
    }
  }
  return cnf;
}

std::string export_cnf(const EncodedModel& model) {
  const auto cnf = encode_cnf(model);
  std::string out = header_line(model, "c", "cnf");
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    out += "c var " + std::to_string(k + 1) + " " + var_name(model.variables[k]) + "\n";
  }
  out += "p cnf " + std::to_string(cnf.num_vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& clause : cnf.clauses) {
    for (int l : clause) out += std::to_string(l) + " ";
    out += "0\n";
  }
  return out;
}

CoveringSystem decode_assignment(const EncodedModel& model, const std::vector<bool>& assignment) {
  std::vector<Progression> progressions = model.fixed;
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    if (k + 1 < assignment.size() && assignment[k + 1]) {
      const auto& v = model.variables[k];
      progressions.push_back(Progression::make(v.residue, v.modulus));
    }
  }
  return CoveringSystem(std::move(progressions));
}

}  // namespace covering
