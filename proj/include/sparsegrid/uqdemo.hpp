#pragma once

#include "sparsegrid/evalkit.hpp"
#include "sparsegrid/pce.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace sparsegrid {

/// -(a u')' = rhs on (0, 1), u(0) = u(1) = 0, with
/// a(x, y) = mu + sum_n sigma_n y_n 1[(n-1)/N, n/N](x) and y in [-sqrt3, sqrt3]^N.
struct DiffusionModel {
    double mu = 1.0;
    VectorXd sigmas = VectorXd::Constant(2, 0.5);
    std::function<double(double)> rhs = [](double) { return 1.0; };
    int mesh = 200;

    int dim() const { return static_cast<int>(sigmas.size()); }

    /// Throws ParameterError unless a stays positive on the whole parameter box.
    void validate() const;

    double coefficient(double x, const VectorXd& y) const;

    /// Nodal P1 solution on the uniform mesh (mesh + 1 values).
    VectorXd nodal_solution(const VectorXd& y) const;
};

/// Parameter box of the demo, [-sqrt3, sqrt3]^N.
Domain demo_domain(int dim);

/// FEM solution at arbitrary points in [0, 1] (linear interpolation of the nodes).
VectorXd fem_solve(const DiffusionModel& model, const VectorXd& y, const VectorXd& query_points);

/// Trapezoid integral of the FEM solution over [0, 1].
double qoi_integral(const DiffusionModel& model, const VectorXd& y);

enum class DemoKnots { cc, leja };

struct ForwardConfig {
    int w = 4;
    DemoKnots knots = DemoKnots::cc;
    Index samples = 5000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct ForwardReport {
    double mean = 0;
    double variance = 0;
    SobolIndices sobol;
    Index grid_points = 0;
    MatrixXd sample_points;  // N x M, uniform on the parameter box
    VectorXd sample_values;  // surrogate at the samples
};

ForwardReport forward_uq(const DiffusionModel& model, const ForwardConfig& config);

/// Vector-valued surrogate of the solution at fixed points.
struct Surrogate {
    SparseGrid grid;
    ReducedGrid reduced;
    MatrixXd values;
    Domain domain;

    VectorXd operator()(const VectorXd& y) const;
};

/// Smolyak Clenshaw-Curtis surrogate of y -> u(points, y) over the parameter box.
Surrogate build_solution_surrogate(const DiffusionModel& model, const VectorXd& points, int w, int threads = 0);

struct InverseProblem {
    VectorXd x;     // measurement locations
    VectorXd data;  // noisy observations
};

/// Data at the K interior nodes of a (K + 1)-element mesh: u(x_k, y_star) + noise.
InverseProblem make_synthetic_problem(const DiffusionModel& model, const VectorXd& y_star, double noise,
                                      std::uint64_t seed);

using Objective = std::function<double(const VectorXd&)>;

/// y -> sum_k (data_k - U_k(y))^2.
Objective least_squares_objective(const InverseProblem& problem, const Surrogate& surrogate);

/// Constant term of the negative log-likelihood. The likelihood itself gives
/// K/2 log(2 pi sigma^2); the two other forms are kept for comparison with
/// other implementations.
enum class NllConstant { exact, k_log_sigma2, k_minus_2 };

Objective negative_log_likelihood(const InverseProblem& problem, const Surrogate& surrogate, double sigma_eps,
                                  NllConstant constant = NllConstant::exact);

struct MinimizeOptions {
    double diameter_tol = 1e-8;
    int max_iterations = 2000;
    double initial_step = 0.25;
    std::optional<Domain> box;
};

/// Nelder-Mead simplex search; iterates leaving the box are reflected back in.
VectorXd minimize(const Objective& objective, const VectorXd& start, const MinimizeOptions& options = {});

struct PosteriorCovariance {
    double sigma_eps = 0;
    MatrixXd cov;
    MatrixXd jacobian;  // K x N Jacobian of the misfits
};

/// Laplace approximation sigma^2 (J^T J)^-1 with sigma^2 the mean squared misfit.
PosteriorCovariance posterior_covariance(const InverseProblem& problem, const Surrogate& surrogate,
                                         const VectorXd& y_map);

struct Calibration {
    Surrogate surrogate;
    VectorXd y_map;
    PosteriorCovariance posterior;
};

/// MAP estimate (least squares over the parameter box, simplex search from
/// the box centre) and Laplace posterior, with a level-w surrogate of the
/// solution at the measurement points.
Calibration calibrate(const DiffusionModel& model, const InverseProblem& problem, int w = 5, int threads = 0);

struct PosteriorConfig {
    int w = 4;
    Index samples = 5000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct PosteriorReport {
    double mean = 0;
    double variance = 0;
    MatrixXd mapped_knots;  // y = y_map + L z at the grid knots
    VectorXd sample_values;
};

/// Forward propagation under N(y_map, cov): Gauss-Hermite total-degree grid in
/// z, mapped through the Cholesky factor before calling the model.
PosteriorReport posterior_forward_uq(const DiffusionModel& model, const VectorXd& y_map, const MatrixXd& cov,
                                     const PosteriorConfig& config);

}  // namespace sparsegrid
