#include <catch_amalgamated.hpp>

#include <set>

#include "lohe/digraph.hpp"
#include "lohe/scenario.hpp"
#include "support.hpp"

using namespace lohe;
using Catch::Approx;

namespace {

Digraph two_node(double a12, double a21) {
    Matrix a(2, 2);
    a << 0, a12, a21, 0;
    return Digraph(a);
}

Matrix fig1_block_laplacian(const std::vector<Index>& nodes) {
    return laplacian(scenario::paper_fig1_graph().subgraph(nodes));
}

}  // namespace

TEST_CASE("laplacian of small graphs", "[digraph][laplacian]") {
    CHECK(laplacian(Digraph::empty(1)) == Matrix::Zero(1, 1));

    Matrix expected(2, 2);
    expected << 1, -1, -2, 2;
    CHECK(laplacian(two_node(1, 2)) == expected);
}

TEST_CASE("laplacian of the first fig-1 block matches the reference L1", "[digraph][laplacian]") {
    Matrix l1(5, 5);
    l1 << 1, 0, 0, 0, -1,
         -2, 3, 0, 0, -1,
          0, -1, 4, 0, -3,
          0, 0, -2, 2, 0,
          0, 0, 0, -2, 2;
    CHECK(fig1_block_laplacian({0, 1, 2, 3, 4}) == l1);

    Matrix l2(3, 3);
    l2 << 1, 0, -1, -2, 2, 0, 0, -1, 1;
    CHECK(fig1_block_laplacian({5, 6, 7}) == l2);

    Matrix l3(4, 4);
    l3 << 5, 0, 0, -5, -2, 2, 0, 0, 0, -4, 4, 0, 0, 0, -3, 3;
    CHECK(fig1_block_laplacian({8, 9, 10, 11}) == l3);
}

TEST_CASE("laplacian rows sum to zero", "[digraph][laplacian][property]") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 1 + trial % 9;
        const Digraph g(testing::random_weights(m, 0.5, rng));
        const Matrix l = laplacian(g);
        CHECK((l * Vector::Ones(m)).cwiseAbs().maxCoeff() <= 1e-12);
        for (Index i = 0; i < m; ++i) {
            CHECK(l(i, i) >= 0.0);
            for (Index j = 0; j < m; ++j) {
                if (i != j) CHECK(l(i, j) <= 0.0);
            }
        }
    }
}

TEST_CASE("digraph rejects invalid weights and drops self-loops", "[digraph]") {
    Matrix a(2, 2);
    a << 3, 1, 0, 0;
    CHECK(Digraph(a).weight(0, 0) == 0.0);

    a(0, 1) = -1;
    CHECK_THROWS_AS(Digraph(a), ValidationError);
    CHECK_THROWS_AS(Digraph(Matrix(2, 3)), ValidationError);
}

TEST_CASE("condensation of the fig-1 graph", "[digraph][condensation]") {
    const Condensation c = condensation(scenario::paper_fig1_graph());
    REQUIRE(c.block_count() == 3);
    CHECK(c.blocks[0] == std::vector<Index>{0, 1, 2, 3, 4});
    CHECK(c.blocks[1] == std::vector<Index>{5, 6, 7});
    CHECK(c.blocks[2] == std::vector<Index>{8, 9, 10, 11});
    CHECK(c.block_sizes == std::vector<Index>{5, 3, 4});
    CHECK(c.cumulative_sizes == std::vector<Index>{5, 8, 12});
    CHECK(c.source_count == 1);
    CHECK(has_spanning_tree(c));
}

TEST_CASE("condensation of trivial graphs", "[digraph][condensation]") {
    const Condensation single = condensation(Digraph::empty(1));
    CHECK(single.blocks == std::vector<std::vector<Index>>{{0}});
    CHECK(has_spanning_tree(single));

    const Condensation cycle = condensation(two_node(1, 1));
    CHECK(cycle.blocks == std::vector<std::vector<Index>>{{0, 1}});
    CHECK(has_spanning_tree(cycle));

    const Condensation isolated = condensation(Digraph::empty(2));
    CHECK(isolated.source_count == 2);
    CHECK_FALSE(has_spanning_tree(isolated));
}

TEST_CASE("incomparable components are ordered by smallest label", "[digraph][condensation]") {
    // 0 -> 3, 2 -> 3, node 1 isolated: sources {0}, {1}, {2}; sink {3}.
    Matrix a = Matrix::Zero(4, 4);
    a(3, 0) = 1;
    a(3, 2) = 1;
    const Condensation c = condensation(Digraph(a));
    CHECK(c.blocks == std::vector<std::vector<Index>>{{0}, {1}, {2}, {3}});
    CHECK(c.source_count == 3);
}

TEST_CASE("permuted laplacian is block lower triangular", "[digraph][condensation][property]") {
    testing::Rng rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const Index m = 1 + trial % 10;
        const Digraph g(testing::random_weights(m, 0.25, rng));
        const Condensation c = condensation(g);

        Index total = 0;
        for (const auto& b : c.blocks) total += static_cast<Index>(b.size());
        REQUIRE(total == m);
        REQUIRE(c.cumulative_sizes.back() == m);
        CHECK(c.source_count >= 1);

        const Matrix l = laplacian(g);
        const auto order = c.order();
        for (Index p = 0; p < m; ++p) {
            for (Index q = 0; q < m; ++q) {
                if (c.component_of[order[q]] > c.component_of[order[p]]) {
                    CHECK(l(order[p], order[q]) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("condensation is consistent under relabeling", "[digraph][condensation][property]") {
    testing::Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 2 + trial % 8;
        const Digraph g(testing::random_weights(m, 0.3, rng));
        const auto perm = testing::random_permutation(m, rng);
        const Condensation c = condensation(g);
        const Condensation cp = condensation(g.permuted(perm));

        std::set<std::set<Index>> mapped, direct;
        for (const auto& b : c.blocks) {
            std::set<Index> s;
            for (Index v : b) s.insert(perm[v]);
            mapped.insert(s);
        }
        for (const auto& b : cp.blocks) direct.insert(std::set<Index>(b.begin(), b.end()));
        CHECK(mapped == direct);
        CHECK(c.source_count == cp.source_count);
    }
}

TEST_CASE("spanning-tree detection agrees with brute-force reachability", "[digraph][property]") {
    // Every 0/1 digraph with up to five nodes.
    for (Index m = 1; m <= 5; ++m) {
        const int pairs = static_cast<int>(m * (m - 1));
        std::vector<std::pair<Index, Index>> slots;
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < m; ++j) {
                if (i != j) slots.emplace_back(i, j);
            }
        }
        std::size_t mismatches = 0;
        for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
            Matrix a = Matrix::Zero(m, m);
            for (int b = 0; b < pairs; ++b) {
                if (mask & (1u << b)) a(slots[b].first, slots[b].second) = 1.0;
            }
            const Digraph g(std::move(a));
            if (has_spanning_tree(condensation(g)) != testing::has_root_brute_force(g)) ++mismatches;
        }
        INFO("m = " << m);
        CHECK(mismatches == 0);
    }
}

TEST_CASE("left Perron vectors of the fig-1 blocks", "[digraph][perron]") {
    const Vector b1 = left_perron(fig1_block_laplacian({0, 1, 2, 3, 4}));
    const Vector b2 = left_perron(fig1_block_laplacian({5, 6, 7}));
    const Vector b3 = left_perron(fig1_block_laplacian({8, 9, 10, 11}));

    // Reference values, four decimals.
    const double reference1[] = {0.1111, 0.0556, 0.1667, 0.3333, 0.3333};
    const double reference2[] = {0.4, 0.2, 0.4};
    const double reference3[] = {0.1558, 0.3896, 0.1948, 0.2597};
    for (int i = 0; i < 5; ++i) CHECK(b1(i) == Approx(reference1[i]).margin(5e-5));
    for (int i = 0; i < 3; ++i) CHECK(b2(i) == Approx(reference2[i]).margin(5e-5));
    for (int i = 0; i < 4; ++i) CHECK(b3(i) == Approx(reference3[i]).margin(5e-5));

    // Exact fractions solved by hand from the column equations.
    const double exact1[] = {1.0 / 9, 1.0 / 18, 1.0 / 6, 1.0 / 3, 1.0 / 3};
    const double exact3[] = {12.0 / 77, 30.0 / 77, 15.0 / 77, 20.0 / 77};
    for (int i = 0; i < 5; ++i) CHECK(b1(i) == Approx(exact1[i]).margin(1e-12));
    for (int i = 0; i < 4; ++i) CHECK(b3(i) == Approx(exact3[i]).margin(1e-12));
}

TEST_CASE("left Perron vector of a two-node graph", "[digraph][perron]") {
    const Vector b = left_perron(laplacian(two_node(1, 2)));
    CHECK(b(0) == Approx(2.0 / 3.0).margin(1e-14));
    CHECK(b(1) == Approx(1.0 / 3.0).margin(1e-14));
    CHECK(left_perron(Matrix::Zero(1, 1)) == Vector::Ones(1));
}

TEST_CASE("left Perron rejects blocks that are not strongly connected", "[digraph][perron]") {
    CHECK_THROWS_AS(left_perron(laplacian(two_node(0, 1))), NotStronglyConnected);
    CHECK_THROWS_AS(left_perron(laplacian(Digraph::empty(3))), NotStronglyConnected);
    CHECK_THROWS_AS(left_perron(laplacian(scenario::paper_fig1_graph())), NotStronglyConnected);
}

TEST_CASE("left Perron vectors of random strongly connected graphs", "[digraph][perron][property]") {
    testing::Rng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const Index m = 2 + trial % 9;
        const Matrix l = laplacian(testing::random_strongly_connected(m, rng));
        const Vector b = left_perron(l);
        CHECK(b.minCoeff() > 0.0);
        CHECK(std::abs(b.sum() - 1.0) <= 1e-12);
        CHECK((b.transpose() * l).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("beta weights stack per-block vectors with powers of epsilon", "[digraph][beta]") {
    const Digraph g = scenario::paper_fig1_graph();
    const BetaWeights beta = beta_weights(condensation(g), g, 0.1);
    REQUIRE(beta.block_count() == 3);
    CHECK(beta.epsilon == 0.1);

    const double b3[] = {0.1558, 0.3896, 0.1948, 0.2597};
    for (int i = 0; i < 4; ++i) CHECK(beta.per_block[2](i) == Approx(b3[i]).margin(5e-5));
    for (int i = 0; i < 5; ++i) CHECK(beta.stacked(i) == beta.per_block[0](i));
    for (int i = 0; i < 3; ++i) CHECK(beta.stacked(5 + i) == Approx(0.1 * beta.per_block[1](i)).epsilon(1e-15));
    for (int i = 0; i < 4; ++i) CHECK(beta.stacked(8 + i) == Approx(0.01 * beta.per_block[2](i)).epsilon(1e-15));
    // Blocks are already in label order here.
    CHECK(beta.node_order == beta.stacked);
    CHECK(beta.beta_min == beta.stacked.minCoeff());
    CHECK(beta.beta_max == beta.stacked.maxCoeff());
    CHECK(beta.beta_min > 0.0);
}

TEST_CASE("beta weights for single-block and chain graphs", "[digraph][beta]") {
    const Digraph cycle = two_node(1, 2);
    for (double eps : {0.1, 0.7, 3.0}) {
        const BetaWeights beta = beta_weights(condensation(cycle), cycle, eps);
        CHECK(beta.stacked(0) == Approx(2.0 / 3.0));
        CHECK(beta.stacked(1) == Approx(1.0 / 3.0));
    }

    const Digraph chain = two_node(0, 1);  // 1 -> 2
    const BetaWeights beta = beta_weights(condensation(chain), chain, 0.5);
    CHECK(beta.node_order(0) == 1.0);
    CHECK(beta.node_order(1) == 0.5);
}

TEST_CASE("beta weights map back to original labels", "[digraph][beta]") {
    // 2 -> 1 chain: block order is {2}, {1}.
    const Digraph chain = two_node(1, 0);
    const BetaWeights beta = beta_weights(condensation(chain), chain, 0.25);
    CHECK(beta.stacked(0) == 1.0);
    CHECK(beta.node_order(1) == 1.0);
    CHECK(beta.node_order(0) == 0.25);
}

TEST_CASE("beta weights require a spanning tree and positive epsilon", "[digraph][beta]") {
    const Digraph g = Digraph::empty(2);
    CHECK_THROWS_AS(beta_weights(condensation(g), g, 0.1), NoSpanningTree);
    const Digraph cycle = two_node(1, 1);
    CHECK_THROWS_AS(beta_weights(condensation(cycle), cycle, 0.0), ValidationError);
}
