#include "sparsegrid/evalkit.hpp"

#include "sparsegrid/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>
#include <tuple>

namespace sparsegrid {

namespace {

std::string format_point(const VectorXd& y)
{
    std::ostringstream os;
    os.precision(17);
    os << "(";
    for (Index k = 0; k < y.size(); ++k) os << (k ? ", " : "") << y[k];
    os << ")";
    return os.str();
}

VectorXd call_checked(const VectorFunction& f, const VectorXd& y)
{
    VectorXd v;
    try {
        v = f(y);
    } catch (const EvaluationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EvaluationError("function evaluation failed at " + format_point(y) + ": " + e.what(), y);
    }
    if (!v.allFinite()) throw EvaluationError("function returned a non-finite value at " + format_point(y), y);
    return v;
}

void check_values(const MatrixXd& values, const ReducedGrid& reduced)
{
    if (values.cols() != reduced.size())
        throw ParameterError("value table has " + std::to_string(values.cols()) + " columns but the grid has " +
                             std::to_string(reduced.size()) + " knots");
}

struct Stencil {
    std::vector<double> offsets;
    std::vector<double> coeffs;
};

enum class Side { centred, forward, backward };

Side pick_side(double x, double h, double lo, double hi, int reach)
{
    if (x - h >= lo && x + h <= hi) return Side::centred;
    if (x + reach * h <= hi) return Side::forward;
    return Side::backward;
}

Stencil first_derivative(double x, double h, double lo, double hi)
{
    switch (pick_side(x, h, lo, hi, 2)) {
    case Side::centred: return {{-h, h}, {-0.5 / h, 0.5 / h}};
    case Side::forward: return {{0, h, 2 * h}, {-1.5 / h, 2.0 / h, -0.5 / h}};
    case Side::backward: return {{0, -h, -2 * h}, {1.5 / h, -2.0 / h, 0.5 / h}};
    }
    return {};
}

Stencil second_derivative(double x, double h, double lo, double hi)
{
    const double h2 = h * h;
    switch (pick_side(x, h, lo, hi, 3)) {
    case Side::centred: return {{-h, 0, h}, {1 / h2, -2 / h2, 1 / h2}};
    case Side::forward: return {{0, h, 2 * h, 3 * h}, {2 / h2, -5 / h2, 4 / h2, -1 / h2}};
    case Side::backward: return {{0, -h, -2 * h, -3 * h}, {2 / h2, -5 / h2, 4 / h2, -1 / h2}};
    }
    return {};
}

VectorXd resolve_steps(const Domain& domain, const VectorXd& point, const std::optional<VectorXd>& h)
{
    const Index dim = domain.cols();
    if (!h) return default_steps(domain, point);
    VectorXd steps = h->size() == 1 ? VectorXd::Constant(dim, (*h)[0]) : *h;
    if (steps.size() != dim) throw ParameterError("step vector must have one entry per dimension");
    if (!(steps.array() > 0).all()) throw ParameterError("finite-difference steps must be positive");
    return steps;
}

void check_single_output(const MatrixXd& values)
{
    if (values.rows() != 1) throw ParameterError("derivatives need a single-output value table");
}

void check_domain(const Domain& domain, const SparseGrid& grid)
{
    if (domain.cols() != grid.dim) throw ParameterError("domain dimension does not match the grid");
}

}  // namespace

VectorFunction scalar_function(std::function<double(const VectorXd&)> f)
{
    return [f = std::move(f)](const VectorXd& y) { return VectorXd::Constant(1, f(y)); };
}

int default_thread_count()
{
    if (const char* env = std::getenv("SGK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

MatrixXd evaluate_points(const VectorFunction& f, const MatrixXd& points, int threads)
{
    const Index count = points.cols();
    if (count == 0) return MatrixXd(0, 0);
    const VectorXd first = call_checked(f, points.col(0));
    MatrixXd out(first.size(), count);
    out.col(0) = first;

    auto run = [&](Index begin, Index end) {
        for (Index c = begin; c < end; ++c) {
            VectorXd v = call_checked(f, points.col(c));
            if (v.size() != out.rows())
                throw EvaluationError("function output length changed at " + format_point(points.col(c)),
                                      points.col(c));
            out.col(c) = v;
        }
    };

    const int workers = static_cast<int>(std::min<Index>(threads > 0 ? threads : default_thread_count(), count - 1));
    if (workers <= 1) {
        run(1, count);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const Index chunk = (count - 1 + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const Index begin = 1 + w * chunk, end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                run(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

MatrixXd evaluate_on_grid(const VectorFunction& f, const ReducedGrid& reduced, const PreviousEvaluation* previous,
                          EvaluationReport* report, int threads)
{
    const Index count = reduced.size();
    std::vector<Index> source(count, -1);
    if (previous && previous->reduced.size() > 0) {
        if (previous->reduced.dim() != reduced.dim())
            throw ParameterError("previous evaluation has a different dimension");
        check_values(previous->values, previous->reduced);
        VectorXd abs_tol(reduced.dim());
        for (int d = 0; d < reduced.dim(); ++d) {
            const double lo = std::min(reduced.knots.row(d).minCoeff(), previous->reduced.knots.row(d).minCoeff());
            const double hi = std::max(reduced.knots.row(d).maxCoeff(), previous->reduced.knots.row(d).maxCoeff());
            abs_tol[d] = reduced.tol * std::max(1.0, hi - lo);
        }
        KnotRegistry registry(abs_tol);
        for (Index p = 0; p < previous->reduced.size(); ++p) registry.insert(previous->reduced.knots.col(p));
        for (Index p = 0; p < count; ++p)
            if (auto hit = registry.find(reduced.knots.col(p))) source[p] = *hit;
    }

    std::vector<Index> fresh;
    for (Index p = 0; p < count; ++p)
        if (source[p] < 0) fresh.push_back(p);
    MatrixXd fresh_points(reduced.dim(), static_cast<Index>(fresh.size()));
    for (std::size_t k = 0; k < fresh.size(); ++k) fresh_points.col(static_cast<Index>(k)) = reduced.knots.col(fresh[k]);
    const MatrixXd fresh_values = evaluate_points(f, fresh_points, threads);

    const Index outputs = fresh.empty() ? previous->values.rows() : fresh_values.rows();
    if (!fresh.empty() && previous && previous->values.rows() != outputs && count > static_cast<Index>(fresh.size()))
        throw ParameterError("previous evaluation has a different number of outputs");
    MatrixXd values(outputs, count);
    for (Index p = 0; p < count; ++p)
        if (source[p] >= 0) values.col(p) = previous->values.col(source[p]);
    for (std::size_t k = 0; k < fresh.size(); ++k) values.col(fresh[k]) = fresh_values.col(static_cast<Index>(k));
    if (report) {
        report->evaluated = static_cast<Index>(fresh.size());
        report->recycled = count - report->evaluated;
    }
    return values;
}

VectorXd quadrature(const MatrixXd& values, const ReducedGrid& reduced)
{
    check_values(values, reduced);
    return values * reduced.weights;
}

VectorXd quadrature(const VectorFunction& f, const ReducedGrid& reduced, MatrixXd* values_out, int threads)
{
    MatrixXd values = evaluate_on_grid(f, reduced, nullptr, nullptr, threads);
    VectorXd q = quadrature(values, reduced);
    if (values_out) *values_out = std::move(values);
    return q;
}

MatrixXd interpolate(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                     const MatrixXd& points)
{
    check_values(values, reduced);
    if (points.rows() != grid.dim)
        throw ParameterError("query points have dimension " + std::to_string(points.rows()) + ", grid has " +
                             std::to_string(grid.dim));
    if (static_cast<Index>(reduced.n.size()) != grid.extended_size())
        throw ParameterError("reduced grid does not belong to this sparse grid");

    const auto offsets = grid.offsets();
    MatrixXd out = MatrixXd::Zero(values.rows(), points.cols());
    MatrixXd local;
    for (std::size_t k = 0; k < grid.tensors.size(); ++k) {
        const TensorGrid& t = grid.tensors[k];
        local.resize(values.rows(), t.size());
        for (Index j = 0; j < t.size(); ++j) local.col(j) = values.col(reduced.n[offsets[k] + j]);
        out += t.coeff * interpolate_tensor(t, local, points);
    }
    return out;
}

MatrixXd interpolate_tensor(const TensorGrid& t, const MatrixXd& tensor_values, const MatrixXd& points)
{
    constexpr Index kChunk = 128;
    const int dim = t.dim();
    if (points.rows() != dim) throw ParameterError("query points do not match the tensor grid dimension");
    if (tensor_values.cols() != t.size()) throw ParameterError("tensor value table has the wrong size");
    const Index queries = points.cols();
    MatrixXd out(tensor_values.rows(), queries);

    std::vector<VectorXd> bary(dim);
    for (int d = 0; d < dim; ++d) bary[d] = barycentric_weights(t.knots_per_dim[d]);

    MatrixXd basis(t.size(), kChunk);
    VectorXd row, next, l;
    for (Index q0 = 0; q0 < queries; q0 += kChunk) {
        const Index block = std::min(kChunk, queries - q0);
        for (Index q = 0; q < block; ++q) {
            row = VectorXd::Ones(1);
            for (int d = 0; d < dim; ++d) {
                const VectorXd& nodes = t.knots_per_dim[d];
                l.resize(nodes.size());
                lagrange_basis(nodes, bary[d], points(d, q0 + q), l);
                next.resize(row.size() * l.size());
                for (Index j = 0; j < l.size(); ++j) next.segment(j * row.size(), row.size()) = l[j] * row;
                row.swap(next);
            }
            basis.col(q) = row;
        }
        out.middleCols(q0, block).noalias() = tensor_values * basis.leftCols(block);
    }
    return out;
}

Domain domain_of(const KnotFamilies& families)
{
    Domain d(2, static_cast<Index>(families.size()));
    for (std::size_t n = 0; n < families.size(); ++n) {
        auto [lo, hi] = families[n].distribution().support();
        d(0, static_cast<Index>(n)) = lo;
        d(1, static_cast<Index>(n)) = hi;
    }
    return d;
}

VectorXd default_steps(const Domain& domain, const VectorXd& point)
{
    VectorXd h(domain.cols());
    for (Index n = 0; n < domain.cols(); ++n) {
        const double lo = domain(0, n), hi = domain(1, n);
        h[n] = (std::isfinite(lo) && std::isfinite(hi)) ? (hi - lo) / 1e5 : 1e-5 * std::max(1.0, std::abs(point[n]));
    }
    return h;
}

MatrixXd gradient(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values, const Domain& domain,
                  const MatrixXd& points, std::optional<VectorXd> h)
{
    check_single_output(values);
    check_domain(domain, grid);
    const int dim = grid.dim;
    if (points.rows() != dim) throw ParameterError("query points do not match the grid dimension");

    std::vector<std::vector<Stencil>> stencils(points.cols(), std::vector<Stencil>(dim));
    Index total = 0;
    for (Index q = 0; q < points.cols(); ++q) {
        const VectorXd steps = resolve_steps(domain, points.col(q), h);
        for (int n = 0; n < dim; ++n) {
            stencils[q][n] = first_derivative(points(n, q), steps[n], domain(0, n), domain(1, n));
            total += static_cast<Index>(stencils[q][n].offsets.size());
        }
    }
    MatrixXd probes(dim, total);
    Index c = 0;
    for (Index q = 0; q < points.cols(); ++q)
        for (int n = 0; n < dim; ++n)
            for (double off : stencils[q][n].offsets) {
                probes.col(c) = points.col(q);
                probes(n, c++) += off;
            }
    const MatrixXd f = interpolate(grid, reduced, values, probes);

    MatrixXd grad = MatrixXd::Zero(dim, points.cols());
    c = 0;
    for (Index q = 0; q < points.cols(); ++q)
        for (int n = 0; n < dim; ++n)
            for (double coef : stencils[q][n].coeffs) grad(n, q) += coef * f(0, c++);
    return grad;
}

MatrixXd hessian(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values, const Domain& domain,
                 const VectorXd& point, std::optional<VectorXd> h)
{
    check_single_output(values);
    check_domain(domain, grid);
    const int dim = grid.dim;
    if (point.size() != dim) throw ParameterError("point does not match the grid dimension");
    const VectorXd steps = resolve_steps(domain, point, h);

    std::vector<Stencil> first(dim), second(dim);
    for (int n = 0; n < dim; ++n) {
        first[n] = first_derivative(point[n], steps[n], domain(0, n), domain(1, n));
        second[n] = second_derivative(point[n], steps[n], domain(0, n), domain(1, n));
    }

    std::vector<VectorXd> probes;
    std::vector<std::tuple<int, int, double>> terms;  // (i, j, coefficient) per probe
    for (int i = 0; i < dim; ++i) {
        for (std::size_t a = 0; a < second[i].offsets.size(); ++a) {
            VectorXd y = point;
            y[i] += second[i].offsets[a];
            probes.push_back(y);
            terms.emplace_back(i, i, second[i].coeffs[a]);
        }
        for (int j = i + 1; j < dim; ++j)
            for (std::size_t a = 0; a < first[i].offsets.size(); ++a)
                for (std::size_t b = 0; b < first[j].offsets.size(); ++b) {
                    VectorXd y = point;
                    y[i] += first[i].offsets[a];
                    y[j] += first[j].offsets[b];
                    probes.push_back(y);
                    terms.emplace_back(i, j, first[i].coeffs[a] * first[j].coeffs[b]);
                }
    }
    MatrixXd at(dim, static_cast<Index>(probes.size()));
    for (std::size_t k = 0; k < probes.size(); ++k) at.col(static_cast<Index>(k)) = probes[k];
    const MatrixXd f = interpolate(grid, reduced, values, at);

    MatrixXd hess = MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        auto [i, j, coef] = terms[k];
        hess(i, j) += coef * f(0, static_cast<Index>(k));
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) hess(j, i) = hess(i, j);
    return hess;
}

}  // namespace sparsegrid
