#pragma once

#include <Eigen/Core>

namespace safexp {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <class Scalar>
using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

}  // namespace safexp
