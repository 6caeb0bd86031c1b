#pragma once

#include "sparsegrid/grid.hpp"

#include <functional>
#include <optional>
#include <stdexcept>

namespace sparsegrid {

/// Vector-valued target function; every call must return the same length.
using VectorFunction = std::function<VectorXd(const VectorXd&)>;

/// Wrap a scalar function as a one-output VectorFunction.
VectorFunction scalar_function(std::function<double(const VectorXd&)> f);

/// Failure of the target function, carrying the point it was called at.
struct EvaluationError : std::runtime_error {
    EvaluationError(const std::string& what, VectorXd at) : std::runtime_error(what), point(std::move(at)) {}
    VectorXd point;
};

/// Thread count from SGK_THREADS, defaulting to 1.
int default_thread_count();

/// Evaluate f at every column of `points` (V x Q result). With threads > 1 the
/// columns are split into contiguous chunks, so f must tolerate concurrent calls.
MatrixXd evaluate_points(const VectorFunction& f, const MatrixXd& points, int threads = 0);

/// Values of an earlier evaluation that may be recycled.
struct PreviousEvaluation {
    const ReducedGrid& reduced;
    const MatrixXd& values;
};

struct EvaluationReport {
    Index evaluated = 0;
    Index recycled = 0;
};

/// Values of f at the reduced knots (V x P). Knots already present in
/// `previous` (same dedup tolerance) are copied instead of re-evaluated.
MatrixXd evaluate_on_grid(const VectorFunction& f, const ReducedGrid& reduced,
                          const PreviousEvaluation* previous = nullptr, EvaluationReport* report = nullptr,
                          int threads = 0);

/// Sparse quadrature of tabulated values: values * weights.
VectorXd quadrature(const MatrixXd& values, const ReducedGrid& reduced);

/// Evaluates f on the grid, then integrates; the table is optionally returned.
VectorXd quadrature(const VectorFunction& f, const ReducedGrid& reduced, MatrixXd* values_out = nullptr,
                    int threads = 0);

/// Tensor Lagrange interpolant of one tensor grid (coefficient not applied);
/// `tensor_values` is V x t.size() in the tensor's knot order.
MatrixXd interpolate_tensor(const TensorGrid& t, const MatrixXd& tensor_values, const MatrixXd& points);

/// Sparse interpolant at the columns of `points` (V x Q result).
MatrixXd interpolate(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                     const MatrixXd& points);

/// Bounding box: row 0 lower, row 1 upper; unbounded ends are infinite.
using Domain = Eigen::Matrix<double, 2, Eigen::Dynamic>;

Domain domain_of(const KnotFamilies& families);

/// Per-dimension finite-difference steps: (b - a) / 1e5 on bounded sides,
/// 1e-5 * max(1, |y|) otherwise.
VectorXd default_steps(const Domain& domain, const VectorXd& point);

/// Finite-difference gradient of a single-output interpolant (N x Q result).
/// Centred differences, switching to one-sided second-order stencils within h
/// of a finite boundary.
MatrixXd gradient(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                  const Domain& domain, const MatrixXd& points, std::optional<VectorXd> h = std::nullopt);

/// Finite-difference Hessian of a single-output interpolant at one point.
MatrixXd hessian(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                 const Domain& domain, const VectorXd& point, std::optional<VectorXd> h = std::nullopt);

}  // namespace sparsegrid
