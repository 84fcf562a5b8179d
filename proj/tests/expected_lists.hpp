#pragma once

// Published lists, transcribed for exact comparison.

#include <vector>

#include "covering/numth.hpp"

namespace covering::expected {

// Divisors of 2^5 3^2 5 7 in [5, 107].
inline const std::vector<Int> kPotentialModuli108 = {5,  6,  7,  8,  9,  10, 12, 14, 15, 16, 18,
                                                     20, 21, 24, 28, 30, 32, 35, 36, 40, 42, 45,
                                                     48, 56, 60, 63, 70, 72, 80, 84, 90, 96, 105};

// After merging {32, 96} into 48 (listed with multiplicity).
inline const std::vector<Int> kMergedModuli108 = {5,  6,  7,  8,  9,  10, 12, 14, 15, 16, 18,
                                                  20, 21, 24, 28, 30, 35, 36, 40, 42, 45, 48,
                                                  48, 56, 60, 63, 70, 72, 80, 84, 90, 105};

inline const std::vector<Int> kDensityPass5 = {240, 360, 420, 480, 540,  600,  630,  720,  840,
                                               900, 960, 990, 1050, 1080, 1200, 1260, 1320};

inline const std::vector<Int> kSurvivors5 = {720, 840, 900, 960, 1050, 1080, 1200, 1260};

inline const std::vector<Int> kDensityPass6 = {
    504,  720,  840,  1008, 1080, 1260, 1440, 1512, 1680, 1800, 1848, 1890, 1980, 2016,
    2100, 2160, 2520, 2640, 2772, 2880, 3024, 3120, 3150, 3168, 3240, 3276, 3360, 3528,
    3600, 3696, 3780, 3960, 4032, 4200, 4320, 4368, 4536, 4620, 4680, 4752};

inline const std::vector<Int> kSmallerPrime6 = {2640, 3120, 3168, 3276, 3960, 4368, 4680, 4752};

inline const std::vector<Int> kSurvivors6 = {2520, 2772, 2880, 3024, 3150, 3240, 3360, 3528,
                                             3600, 3696, 3780, 4032, 4200, 4320, 4536, 4620};

}  // namespace covering::expected
