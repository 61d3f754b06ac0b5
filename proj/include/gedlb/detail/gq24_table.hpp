#pragma once

// Edge table of the generalized quadrangle GQ(2,4) collinearity graph,
// srg(27,10,1,5). Vertices 0-5 and 6-11 are the two sixes of lines on a
// cubic surface, 12-26 the remaining lines indexed by pairs.

#include <array>
#include <utility>

namespace gedlb::detail {

inline constexpr std::array<std::pair<int, int>, 135> kGq24Edges{{
    {0, 7}, {0, 8}, {0, 9}, {0, 10}, {0, 11}, {0, 12}, {0, 13}, {0, 14},
    {0, 15}, {0, 16}, {1, 6}, {1, 8}, {1, 9}, {1, 10}, {1, 11}, {1, 12},
    {1, 17}, {1, 18}, {1, 19}, {1, 20}, {2, 6}, {2, 7}, {2, 9}, {2, 10},
    {2, 11}, {2, 13}, {2, 17}, {2, 21}, {2, 22}, {2, 23}, {3, 6}, {3, 7},
    {3, 8}, {3, 10}, {3, 11}, {3, 14}, {3, 18}, {3, 21}, {3, 24}, {3, 25},
    {4, 6}, {4, 7}, {4, 8}, {4, 9}, {4, 11}, {4, 15}, {4, 19}, {4, 22},
    {4, 24}, {4, 26}, {5, 6}, {5, 7}, {5, 8}, {5, 9}, {5, 10}, {5, 16},
    {5, 20}, {5, 23}, {5, 25}, {5, 26}, {6, 12}, {6, 13}, {6, 14}, {6, 15},
    {6, 16}, {7, 12}, {7, 17}, {7, 18}, {7, 19}, {7, 20}, {8, 13}, {8, 17},
    {8, 21}, {8, 22}, {8, 23}, {9, 14}, {9, 18}, {9, 21}, {9, 24}, {9, 25},
    {10, 15}, {10, 19}, {10, 22}, {10, 24}, {10, 26}, {11, 16}, {11, 20}, {11, 23},
    {11, 25}, {11, 26}, {12, 21}, {12, 22}, {12, 23}, {12, 24}, {12, 25}, {12, 26},
    {13, 18}, {13, 19}, {13, 20}, {13, 24}, {13, 25}, {13, 26}, {14, 17}, {14, 19},
    {14, 20}, {14, 22}, {14, 23}, {14, 26}, {15, 17}, {15, 18}, {15, 20}, {15, 21},
    {15, 23}, {15, 25}, {16, 17}, {16, 18}, {16, 19}, {16, 21}, {16, 22}, {16, 24},
    {17, 24}, {17, 25}, {17, 26}, {18, 22}, {18, 23}, {18, 26}, {19, 21}, {19, 23},
    {19, 25}, {20, 21}, {20, 22}, {20, 24}, {21, 26}, {22, 25}, {23, 24},
}};

}  // namespace gedlb::detail
