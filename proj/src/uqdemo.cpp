#include "sparsegrid/uqdemo.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sparsegrid {

namespace {

const double kSqrt3 = std::sqrt(3.0);

// Solves a symmetric tridiagonal system (Thomas algorithm) in place.
VectorXd solve_tridiagonal(VectorXd diag, VectorXd off, VectorXd rhs)
{
    const Index n = diag.size();
    for (Index i = 1; i < n; ++i) {
        const double f = off[i - 1] / diag[i - 1];
        diag[i] -= f * off[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (Index i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    return rhs;
}

double reflect_into(double x, double lo, double hi)
{
    if (x < lo) x = lo + (lo - x);
    if (x > hi) x = hi - (x - hi);
    return std::clamp(x, lo, hi);
}

}  // namespace

void DiffusionModel::validate() const
{
    if (sigmas.size() < 1) throw ParameterError("the diffusion model needs at least one random coefficient");
    if (mesh < 2) throw ParameterError("the mesh needs at least two elements");
    if (!rhs) throw ParameterError("missing forcing term");
    if (!(mu - kSqrt3 * sigmas.cwiseAbs().maxCoeff() > 0))
        throw ParameterError("diffusion coefficient is not positive on the whole parameter box");
}

double DiffusionModel::coefficient(double x, const VectorXd& y) const
{
    const int n = dim();
    int piece = static_cast<int>(std::floor(x * n));
    piece = std::clamp(piece, 0, n - 1);
    return mu + sigmas[piece] * y[piece];
}

VectorXd DiffusionModel::nodal_solution(const VectorXd& y) const
{
    if (y.size() != dim()) throw ParameterError("parameter vector has the wrong length");
    const int n = dim();
    const double h = 1.0 / mesh;
    // Element-averaged coefficient: exact integral of the piecewise-constant a.
    VectorXd a(mesh);
    for (int e = 0; e < mesh; ++e) {
        const double x0 = e * h, x1 = (e + 1) * h;
        double integral = 0.0;
        for (int p = 0; p < n; ++p) {
            const double lo = std::max(x0, double(p) / n), hi = std::min(x1, double(p + 1) / n);
            if (hi > lo) integral += (hi - lo) * (mu + sigmas[p] * y[p]);
        }
        a[e] = integral / h;
        if (!(a[e] > 0)) throw NumericalError("diffusion coefficient is not positive on element " + std::to_string(e));
    }
    const Index interior = mesh - 1;
    VectorXd diag(interior), off(std::max<Index>(interior - 1, 0)), load(interior);
    for (Index i = 0; i < interior; ++i) {
        diag[i] = (a[i] + a[i + 1]) / h;
        if (i + 1 < interior) off[i] = -a[i + 1] / h;
        load[i] = h * rhs((i + 1) * h);
    }
    VectorXd u = VectorXd::Zero(mesh + 1);
    u.segment(1, interior) = solve_tridiagonal(diag, off, load);
    return u;
}

Domain demo_domain(int dim)
{
    Domain d(2, dim);
    d.row(0).setConstant(-kSqrt3);
    d.row(1).setConstant(kSqrt3);
    return d;
}

VectorXd fem_solve(const DiffusionModel& model, const VectorXd& y, const VectorXd& query_points)
{
    const VectorXd u = model.nodal_solution(y);
    VectorXd out(query_points.size());
    for (Index q = 0; q < query_points.size(); ++q) {
        const double x = query_points[q];
        if (x < 0 || x > 1) throw ParameterError("query points must lie in [0, 1]");
        const double s = x * model.mesh;
        const Index e = std::min<Index>(static_cast<Index>(std::floor(s)), model.mesh - 1);
        const double t = s - e;
        out[q] = (1 - t) * u[e] + t * u[e + 1];
    }
    return out;
}

double qoi_integral(const DiffusionModel& model, const VectorXd& y)
{
    const VectorXd u = model.nodal_solution(y);
    const double h = 1.0 / model.mesh;
    return h * (u.sum() - 0.5 * (u[0] + u[model.mesh]));
}

ForwardReport forward_uq(const DiffusionModel& model, const ForwardConfig& config)
{
    model.validate();
    const int dim = model.dim();
    const KnotFamily family =
        config.knots == DemoKnots::cc ? KnotFamily::cc(-kSqrt3, kSqrt3) : KnotFamily::leja(-kSqrt3, kSqrt3);
    const LevelMap map = config.knots == DemoKnots::cc ? LevelMap::doubling() : LevelMap::linear();
    const SparseGrid grid = build_sparse_grid(fast_td_set(dim, config.w), repeat(family, dim), map);
    const ReducedGrid reduced = reduce(grid);
    const MatrixXd values = evaluate_on_grid(
        scalar_function([&model](const VectorXd& y) { return qoi_integral(model, y); }), reduced, nullptr, nullptr,
        config.threads);

    ForwardReport r;
    r.grid_points = reduced.size();
    r.mean = quadrature(values, reduced)[0];
    r.variance = quadrature(MatrixXd(values.array().square()), reduced)[0] - r.mean * r.mean;
    r.sobol = sobol_indices(grid, reduced, values, bases_for(grid.families));

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(-kSqrt3, kSqrt3);
    r.sample_points.resize(dim, config.samples);
    for (Index q = 0; q < config.samples; ++q)
        for (int n = 0; n < dim; ++n) r.sample_points(n, q) = unif(rng);
    r.sample_values = interpolate(grid, reduced, values, r.sample_points).row(0).transpose();
    return r;
}

VectorXd Surrogate::operator()(const VectorXd& y) const { return interpolate(grid, reduced, values, y); }

Surrogate build_solution_surrogate(const DiffusionModel& model, const VectorXd& points, int w, int threads)
{
    model.validate();
    const int dim = model.dim();
    Surrogate s;
    s.grid = build_sparse_grid(fast_td_set(dim, w), repeat(KnotFamily::cc(-kSqrt3, kSqrt3), dim),
                               LevelMap::doubling());
    s.reduced = reduce(s.grid);
    s.values = evaluate_on_grid([&](const VectorXd& y) { return fem_solve(model, y, points); }, s.reduced, nullptr,
                                nullptr, threads);
    s.domain = demo_domain(dim);
    return s;
}

InverseProblem make_synthetic_problem(const DiffusionModel& model, const VectorXd& y_star, double noise,
                                      std::uint64_t seed)
{
    if (!(noise >= 0)) throw ParameterError("noise level must be >= 0");
    const Index K = model.mesh - 1;
    InverseProblem p;
    p.x = VectorXd::LinSpaced(model.mesh + 1, 0.0, 1.0).segment(1, K);
    p.data = model.nodal_solution(y_star).segment(1, K);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index k = 0; k < K; ++k) p.data[k] += noise * gauss(rng);
    return p;
}

Objective least_squares_objective(const InverseProblem& problem, const Surrogate& surrogate)
{
    if (surrogate.values.rows() != problem.data.size())
        throw ParameterError("surrogate outputs do not match the number of observations");
    return [&problem, &surrogate](const VectorXd& y) { return (problem.data - surrogate(y)).squaredNorm(); };
}

Objective negative_log_likelihood(const InverseProblem& problem, const Surrogate& surrogate, double sigma_eps,
                                  NllConstant constant)
{
    if (!(sigma_eps > 0)) throw ParameterError("noise level must be positive");
    const double K = static_cast<double>(problem.data.size());
    const double s2 = sigma_eps * sigma_eps;
    double c = 0;
    switch (constant) {
    case NllConstant::exact: c = 0.5 * K * std::log(2 * M_PI * s2); break;
    case NllConstant::k_log_sigma2: c = K * std::log(s2) + K * std::log(std::sqrt(2 * M_PI)); break;
    case NllConstant::k_minus_2: c = (K - 2) * std::log(s2) + (K - 2) * 0.5 * std::log(2 * M_PI); break;
    }
    auto ls = least_squares_objective(problem, surrogate);
    return [ls, s2, c](const VectorXd& y) { return ls(y) / (2 * s2) + c; };
}

VectorXd minimize(const Objective& objective, const VectorXd& start, const MinimizeOptions& options)
{
    const Index n = start.size();
    if (n < 1) throw ParameterError("cannot minimize over zero variables");
    auto project = [&](VectorXd x) {
        if (options.box)
            for (Index i = 0; i < n; ++i) x[i] = reflect_into(x[i], (*options.box)(0, i), (*options.box)(1, i));
        return x;
    };
    auto eval = [&](const VectorXd& x) {
        const double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<VectorXd> simplex{project(start)};
    std::vector<double> fv{objective(simplex[0])};
    if (!std::isfinite(fv[0])) throw ParameterError("objective is not finite at the starting point");
    for (Index i = 0; i < n; ++i) {
        VectorXd v = simplex[0];
        double step = options.initial_step;
        if (options.box) step *= ((*options.box)(1, i) - (*options.box)(0, i)) / 2;
        v[i] += (options.box && v[i] + step > (*options.box)(1, i)) ? -step : step;
        simplex.push_back(project(v));
        fv.push_back(eval(simplex.back()));
    }

    std::vector<Index> order(n + 1);
    for (int it = 0; it < options.max_iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return fv[a] < fv[b]; });
        std::vector<VectorXd> s2;
        std::vector<double> f2;
        for (Index k : order) {
            s2.push_back(simplex[k]);
            f2.push_back(fv[k]);
        }
        simplex.swap(s2);
        fv.swap(f2);

        double diameter = 0;
        for (Index k = 1; k <= n; ++k) diameter = std::max(diameter, (simplex[k] - simplex[0]).lpNorm<Eigen::Infinity>());
        if (diameter < options.diameter_tol) break;

        VectorXd centroid = VectorXd::Zero(n);
        for (Index k = 0; k < n; ++k) centroid += simplex[k];
        centroid /= static_cast<double>(n);
        const VectorXd& worst = simplex[n];

        const VectorXd xr = project(centroid + (centroid - worst));
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const VectorXd xe = project(centroid + 2.0 * (centroid - worst));
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
            continue;
        }
        if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
            continue;
        }
        const bool outside = fr < fv[n];
        const VectorXd xc = outside ? VectorXd(centroid + 0.5 * (xr - centroid)) : VectorXd(centroid + 0.5 * (worst - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[n])) {
            simplex[n] = xc;
            fv[n] = fc;
            continue;
        }
        for (Index k = 1; k <= n; ++k) {
            simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
            fv[k] = eval(simplex[k]);
        }
    }
    const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
    return simplex[best];
}

PosteriorCovariance posterior_covariance(const InverseProblem& problem, const Surrogate& surrogate,
                                         const VectorXd& y_map)
{
    const Index K = problem.data.size();
    const int dim = surrogate.grid.dim;
    if (surrogate.values.rows() != K) throw ParameterError("surrogate outputs do not match the observations");
    PosteriorCovariance out;
    const VectorXd misfit = problem.data - surrogate(y_map);
    out.sigma_eps = std::sqrt(misfit.squaredNorm() / static_cast<double>(K));

    out.jacobian.resize(K, dim);
    for (Index k = 0; k < K; ++k) {
        const MatrixXd row = surrogate.values.row(k);
        // The misfit is data - U, so its gradient is minus the surrogate gradient.
        out.jacobian.row(k) = -gradient(surrogate.grid, surrogate.reduced, row, surrogate.domain, y_map).transpose();
    }
    const MatrixXd jtj = out.jacobian.transpose() * out.jacobian;
    Eigen::LDLT<MatrixXd> ldlt(jtj);
    const double scale = jtj.diagonal().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(scale > 0) ||
        ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-12 * scale)
        throw NumericalError("misfit Jacobian is rank deficient; posterior covariance is singular");
    out.cov = out.sigma_eps * out.sigma_eps * ldlt.solve(MatrixXd::Identity(dim, dim));
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
}

Calibration calibrate(const DiffusionModel& model, const InverseProblem& problem, int w, int threads)
{
    Calibration out{build_solution_surrogate(model, problem.x, w, threads), {}, {}};
    MinimizeOptions options;
    options.box = demo_domain(model.dim());
    out.y_map = minimize(least_squares_objective(problem, out.surrogate), VectorXd::Zero(model.dim()), options);
    out.posterior = posterior_covariance(problem, out.surrogate, out.y_map);
    return out;
}

PosteriorReport posterior_forward_uq(const DiffusionModel& model, const VectorXd& y_map, const MatrixXd& cov,
                                     const PosteriorConfig& config)
{
    const int dim = model.dim();
    if (y_map.size() != dim || cov.rows() != dim || cov.cols() != dim)
        throw ParameterError("posterior mean and covariance do not match the model dimension");
    Eigen::LLT<MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericalError("posterior covariance is not positive definite");
    const MatrixXd L = llt.matrixL();

    const SparseGrid grid = build_sparse_grid(fast_td_set(dim, config.w),
                                              repeat(KnotFamily::gauss(DistributionSpec::normal(0, 1)), dim),
                                              LevelMap::linear());
    const ReducedGrid reduced = reduce(grid);
    PosteriorReport r;
    r.mapped_knots = (L * reduced.knots).colwise() + y_map;
    const MatrixXd values = evaluate_on_grid(
        scalar_function([&](const VectorXd& z) { return qoi_integral(model, y_map + L * z); }), reduced, nullptr,
        nullptr, config.threads);
    r.mean = quadrature(values, reduced)[0];
    r.variance = quadrature(MatrixXd(values.array().square()), reduced)[0] - r.mean * r.mean;

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd z(dim, config.samples);
    for (Index q = 0; q < config.samples; ++q)
        for (int n = 0; n < dim; ++n) z(n, q) = gauss(rng);
    r.sample_values = interpolate(grid, reduced, values, z).row(0).transpose();
    return r;
}

}  // namespace sparsegrid
