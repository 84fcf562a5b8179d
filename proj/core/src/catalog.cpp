#include "covering/catalog.hpp"

namespace covering::catalog {

CoveringSystem intro_system() { return CoveringSystem({{0, 2}, {0, 3}, {1, 4}, {1, 6}, {11, 12}}); }

CoveringSystem construction_6_168() {
  return CoveringSystem({
      {2, 6}, {6, 7}, {7, 8}, {6, 9}, {4, 10}, {10, 11}, {5, 12}, {5, 14}, {10, 15}, {11, 16},
      {12, 18}, {8, 20}, {10, 21}, {9, 22}, {22, 24}, {23, 25}, {18, 27}, {25, 28}, {16, 30},
      {19, 32}, {6, 33}, {29, 35}, {21, 36}, {18, 40}, {37, 42}, {41, 44}, {0, 45}, {19, 48},
      {18, 50}, {36, 54}, {47, 55}, {21, 56}, {52, 60}, {45, 63}, {27, 66}, {43, 70}, {3, 72},
      {63, 75}, {0, 77}, {49, 80}, {1, 84}, {73, 88}, {72, 90}, {35, 96}, {58, 100}, {57, 105},
      {9, 108}, {57, 110}, {105, 112}, {82, 120}, {9, 126}, {81, 132}, {81, 135}, {133, 140},
      {99, 144}, {78, 150}, {133, 154}, {49, 168}
  });
}

}  // namespace covering::catalog
