#pragma once

#include <Eigen/Core>

namespace spa {

// Points are rows: an n x D matrix holds n samples of dimension D.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

} // namespace spa
