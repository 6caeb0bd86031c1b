#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sparsegrid {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

/// Points are stored column-wise: an N x P matrix holds P points in R^N.
using PointSet = MatrixXd;

// Error hierarchy. Everything derives from std::runtime_error or
// std::logic_error so callers that only care about "failed" can catch those.

/// Invalid parameters supplied by the caller (bad distribution, a >= b, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested configuration exists in principle but is not provided.
struct UnsupportedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on a structured input was violated
/// (non-downward-closed set, unsorted rows, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Numerical breakdown: singular systems, non-positive coefficients, ...
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sparsegrid
