#pragma once

// Known covering systems shipped with the library.

#include "covering/cover.hpp"

namespace covering::catalog {

/// {0 mod 2, 0 mod 3, 1 mod 4, 1 mod 6, 11 mod 12}.
CoveringSystem intro_system();

/// Distinct covering system with moduli from 6 to 168 (58 progressions,
/// L = 1663200).
CoveringSystem construction_6_168();

}  // namespace covering::catalog
