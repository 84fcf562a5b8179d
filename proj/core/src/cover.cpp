#include "covering/cover.hpp"

#include <algorithm>
#include <set>

#include "text_util.hpp"

namespace covering {

Progression Progression::make(Int residue, Int modulus) {
  if (modulus < 1) throw std::invalid_argument("progression modulus must be >= 1");
  return Progression{floor_mod(residue, modulus), modulus};
}

std::string to_string(const Progression& p) {
  return std::to_string(p.residue) + " mod " + std::to_string(p.modulus);
}

CoveringSystem::CoveringSystem(std::vector<Progression> progressions)
    : progressions_(std::move(progressions)) {
  for (auto& p : progressions_) {
    p = Progression::make(p.residue, p.modulus);
    lcm_ = checked_lcm(lcm_, p.modulus);
  }
  std::sort(progressions_.begin(), progressions_.end());
}

VerificationReport verify(const CoveringSystem& system) {
  if (system.empty()) throw std::invalid_argument("verify: empty covering system");
  const Int L = system.lcm();
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(L), 0);
  VerificationReport report;
  report.lcm = L;
  report.min_modulus = system.progressions().front().modulus;
  report.max_modulus = system.progressions().back().modulus;
  std::set<Int> moduli;
  for (const auto& p : system.progressions()) {
    for (Int b = p.residue; b < L; b += p.modulus) hit[static_cast<std::size_t>(b)] = 1;
    report.density += Rational(1, p.modulus);
    moduli.insert(p.modulus);
  }
  report.distinct = moduli.size() == system.size();
  const auto gap = std::find(hit.begin(), hit.end(), 0);
  report.valid = gap == hit.end();
  if (!report.valid) report.witness = static_cast<Int>(gap - hit.begin());
  return report;
}

CoveringSystem translate(const CoveringSystem& system, Int t) {
  std::vector<Progression> shifted;
  shifted.reserve(system.size());
  for (const auto& p : system.progressions()) {
    shifted.push_back(Progression::make(floor_mod(p.residue, p.modulus) + floor_mod(t, p.modulus), p.modulus));
  }
  return CoveringSystem(std::move(shifted));
}

CoveringSystem parse_system(std::string_view text) {
  std::vector<Progression> progressions;
  detail::for_each_record(text, [&](std::size_t line_no, const auto& tokens) {
    if (tokens.size() != 2) throw ParseError(line_no, "expected '<residue> <modulus>'");
    const Int residue = detail::parse_int(tokens[0], line_no);
    const Int modulus = detail::parse_int(tokens[1], line_no);
    if (modulus <= 0) throw ParseError(line_no, "modulus must be positive");
    progressions.push_back(Progression::make(residue, modulus));
  });
  return CoveringSystem(std::move(progressions));
}

std::string serialize_system(const CoveringSystem& system) {
  std::string out;
  for (const auto& p : system.progressions()) {
    out += std::to_string(p.residue);
    out += ' ';
    out += std::to_string(p.modulus);
    out += '\n';
  }
  return out;
}

}  // namespace covering
