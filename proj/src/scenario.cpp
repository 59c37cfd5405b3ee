#include "lohe/scenario.hpp"

namespace lohe::scenario {

Digraph paper_fig1_graph() {
    Matrix a(12, 12);
    // clang-format off
    a << 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,
         2, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0,
         0, 1, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0,
         0, 1, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 5,
         0, 0, 0, 0, 0, 0, 0, 3, 2, 0, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0,
         0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0;
    // clang-format on
    return Digraph(std::move(a));
}

Matrix paper_fig1_omega() {
    Matrix w(3, 3);
    w << 0, 1, -2,
        -1, 0, -1,
         2, 1, 0;
    return w;
}

}  // namespace lohe::scenario
