#pragma once

#include <complex>

#include <Eigen/Core>

namespace chiral {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using MatrixXc = Matrix<Complex>;
using VectorXd = Vector<double>;
using VectorXc = Vector<Complex>;

}  // namespace chiral
