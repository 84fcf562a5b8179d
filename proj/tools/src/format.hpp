#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "covering/cover.hpp"
#include "covering/solver.hpp"

namespace cover_cli::detail {

inline std::string join(const std::vector<covering::Int>& values, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += sep;
    out += std::to_string(values[k]);
  }
  return out;
}

/// "4 mod 5, 7 mod 8" or, for machine output, "4:5,7:8".
inline std::string progressions_text(const std::vector<covering::Progression>& ps, bool machine) {
  std::string out;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (k) out += machine ? "," : ", ";
    out += machine ? std::to_string(ps[k].residue) + ":" + std::to_string(ps[k].modulus) : covering::to_string(ps[k]);
  }
  return machine && out.empty() ? "-" : out;
}

inline std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

inline const char* flag(bool b, bool machine) {
  if (machine) return b ? "1" : "0";
  return b ? "yes" : "no";
}

}  // namespace cover_cli::detail
