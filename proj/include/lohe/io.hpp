#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lohe/digraph.hpp"
#include "lohe/dynamics.hpp"
#include "lohe/error_dynamics.hpp"

namespace lohe::io {

/// Graph text format:
///   nodes m
///   j i w      # a_ij = w, information flows j -> i, 1-based labels
/// '#' starts a comment. Self-loops are ignored.
Digraph parse_graph(std::istream& in, const std::string& source = "<graph>");
Digraph read_graph(const std::string& path);
void write_graph(std::ostream& out, const Digraph& g);

/// State text format: `state m n`, then m rows of n coordinates. Rows are
/// normalised on load.
StateMatrix parse_state(std::istream& in, const std::string& source = "<state>");
StateMatrix read_state(const std::string& path);

/// Omega text format: `omega n`, then n rows of n entries; must be skew-symmetric.
Matrix parse_omega(std::istream& in, const std::string& source = "<omega>");
Matrix read_omega(const std::string& path);

/// Header `t,r_1_1,...,r_1_n,r_2_1,...`, 17 significant digits.
void write_states_csv(std::ostream& out, const Trajectory& traj);
/// Inverse of write_states_csv (m is recovered from the header).
Trajectory read_states_csv(std::istream& in, const std::string& source = "<states.csv>");

/// Header `t,e_1_2,e_1_3,...`: strict upper triangle, row-major.
void write_errors_csv(std::ostream& out, const std::vector<double>& times, const std::vector<ErrorMatrix>& errors);

/// Two-column CSV with the given header names.
void write_series_csv(std::ostream& out, const std::string& t_name, const std::string& v_name,
                      const std::vector<double>& times, const std::vector<double>& values);

}  // namespace lohe::io
