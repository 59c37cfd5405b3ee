#include <catch_amalgamated.hpp>

#include <sstream>

#include "lohe/io.hpp"
#include "lohe/scenario.hpp"
#include "support.hpp"

using namespace lohe;

namespace {

Digraph graph_from(const std::string& text) {
    std::istringstream in(text);
    return io::parse_graph(in, "test.graph");
}

int parse_error_line(const std::string& text) {
    try {
        graph_from(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("graph files", "[io][graph]") {
    const Digraph g = graph_from("# comment\nnodes 3\n1 2 0.5   # 1 -> 2\n\n2 3 2\n3 3 7\n");
    CHECK(g.size() == 3);
    CHECK(g.weight(1, 0) == 0.5);
    CHECK(g.weight(2, 1) == 2.0);
    CHECK(g.weight(2, 2) == 0.0);
    CHECK(g.weights().sum() == 2.5);
}

TEST_CASE("malformed graph files report the offending line", "[io][graph]") {
    CHECK(parse_error_line("") == 0);
    CHECK(parse_error_line("1 2 1\n") == 1);
    CHECK(parse_error_line("nodes 0\n") == 1);
    CHECK(parse_error_line("nodes 2\n1 3 1\n") == 2);
    CHECK(parse_error_line("nodes 2\n1 2 -1\n") == 2);
    CHECK(parse_error_line("nodes 2\n1 2 0\n") == 2);
    CHECK(parse_error_line("nodes 2\n1 2 abc\n") == 2);
    CHECK(parse_error_line("nodes 2\n1 2\n") == 2);
    CHECK(parse_error_line("nodes 2\n1 2 1\n# x\n1 2 3\n") == 4);
}

TEST_CASE("graph write and read round trip", "[io][graph]") {
    std::ostringstream out;
    io::write_graph(out, scenario::paper_fig1_graph());
    CHECK(graph_from(out.str()).weights() == scenario::paper_fig1_graph().weights());

    testing::Rng rng(1);
    const Digraph g(testing::random_weights(6, 0.5, rng));
    std::ostringstream out2;
    io::write_graph(out2, g);
    CHECK(graph_from(out2.str()).weights() == g.weights());
}

TEST_CASE("state files", "[io][state]") {
    std::istringstream in("state 2 3\n3 0 4\n0 2 0\n");
    const StateMatrix s = io::parse_state(in);
    CHECK(s.m() == 2);
    CHECK(s.row(0)(2) == Catch::Approx(0.8));
    CHECK(s.row(1)(1) == 1.0);

    std::istringstream zero("state 1 2\n0 0\n");
    CHECK_THROWS_AS(io::parse_state(zero), ParseError);
    std::istringstream short_rows("state 2 2\n1 0\n");
    CHECK_THROWS_AS(io::parse_state(short_rows), ParseError);
    std::istringstream trailing("state 1 2\n1 0\n0 1\n");
    CHECK_THROWS_AS(io::parse_state(trailing), ParseError);
}

TEST_CASE("omega files", "[io][omega]") {
    std::istringstream in("omega 3\n0 1 -2\n-1 0 -1\n2 1 0\n");
    CHECK(io::parse_omega(in) == scenario::paper_fig1_omega());
    std::istringstream bad("omega 2\n0 1\n1 0\n");
    CHECK_THROWS_AS(io::parse_omega(bad), ParseError);
}

TEST_CASE("states CSV round trip is bit exact", "[io][csv]") {
    testing::Rng rng(2);
    const Digraph g = testing::random_spanning_tree_graph(4, rng);
    const Trajectory traj =
        integrate(sample_hemisphere_states(4, 3, 5), g, ModelParams{}, SimConfig{1e-3, 0.5, 7});
    std::stringstream buf;
    io::write_states_csv(buf, traj);
    const Trajectory back = io::read_states_csv(buf);
    REQUIRE(back.size() == traj.size());
    for (std::size_t p = 0; p < traj.size(); ++p) {
        CHECK(back.times[p] == traj.times[p]);
        CHECK(back.states[p].matrix() == traj.states[p].matrix());
    }
}

TEST_CASE("CSV headers", "[io][csv]") {
    Matrix r(2, 2);
    r << 1, 0, 0, 1;
    Trajectory traj{{0.0}, {StateMatrix(r)}};
    std::ostringstream states;
    io::write_states_csv(states, traj);
    CHECK(states.str().rfind("t,r_1_1,r_1_2,r_2_1,r_2_2\n", 0) == 0);

    std::ostringstream errors;
    const ErrorMatrix e = error_from_states(StateMatrix(Matrix::Identity(3, 3)));
    io::write_errors_csv(errors, {0.25}, {e});
    CHECK(errors.str() == "t,e_1_2,e_1_3,e_2_3\n0.25,1,1,1\n");

    std::ostringstream series;
    io::write_series_csv(series, "t", "V", {0.0, 0.1}, {1.0 / 3.0, 0.0});
    CHECK(series.str() == "t,V\n0,0.33333333333333331\n0.10000000000000001,0\n");

    CHECK_THROWS_AS(io::write_series_csv(series, "t", "V", {0.0}, {}), DimensionMismatch);
    std::istringstream bad("t,x\n0,1\n");
    CHECK_THROWS_AS(io::read_states_csv(bad), ParseError);
}
