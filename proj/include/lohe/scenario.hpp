#pragma once

#include <string_view>

#include "lohe/digraph.hpp"
#include "lohe/types.hpp"

namespace lohe::scenario {

inline constexpr std::string_view kPaperFig1 = "paper-fig1";

/// Twelve-node digraph with three strongly connected components
/// {1..5} -> {6,7,8} -> {9..12}, integer weights up to 5.
Digraph paper_fig1_graph();

/// [[0, 1, -2], [-1, 0, -1], [2, 1, 0]].
Matrix paper_fig1_omega();

inline constexpr int kPaperFig1Dimension = 3;
inline constexpr double kPaperFig1Gain = 1.0;

}  // namespace lohe::scenario
