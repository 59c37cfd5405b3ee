#pragma once

#include <Eigen/Dense>

namespace lohe {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace lohe
