#include "sparsegrid/pce.hpp"

#include "sparsegrid/recurrence.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <map>
#include <numeric>

namespace sparsegrid {

namespace {

DistributionKind expected_kind(PolyFamily family)
{
    switch (family) {
    case PolyFamily::legendre:
    case PolyFamily::chebyshev: return DistributionKind::uniform;
    case PolyFamily::hermite: return DistributionKind::normal;
    case PolyFamily::laguerre: return DistributionKind::exponential;
    case PolyFamily::generalized_laguerre: return DistributionKind::gamma;
    case PolyFamily::jacobi_prob: return DistributionKind::beta;
    }
    return DistributionKind::uniform;
}

std::string format(const MultiIndex& idx)
{
    std::string s = "[";
    for (std::size_t n = 0; n < idx.size(); ++n) s += (n ? "," : "") + std::to_string(idx[n]);
    return s + "]";
}

}  // namespace

std::string to_string(PolyFamily family)
{
    switch (family) {
    case PolyFamily::legendre: return "legendre";
    case PolyFamily::hermite: return "hermite";
    case PolyFamily::laguerre: return "laguerre";
    case PolyFamily::generalized_laguerre: return "generalized_laguerre";
    case PolyFamily::jacobi_prob: return "jacobi_prob";
    case PolyFamily::chebyshev: return "chebyshev";
    }
    return "?";
}

PolyFamily poly_family_from_string(const std::string& name)
{
    for (auto f : {PolyFamily::legendre, PolyFamily::hermite, PolyFamily::laguerre, PolyFamily::generalized_laguerre,
                   PolyFamily::jacobi_prob, PolyFamily::chebyshev})
        if (to_string(f) == name) return f;
    throw ParameterError("unknown polynomial family '" + name + "'");
}

PolyBasis PolyBasis::for_distribution(const DistributionSpec& dist)
{
    dist.validate();
    switch (dist.kind) {
    case DistributionKind::uniform: return {PolyFamily::legendre, dist};
    case DistributionKind::normal: return {PolyFamily::hermite, dist};
    case DistributionKind::exponential: return {PolyFamily::laguerre, dist};
    case DistributionKind::gamma: return {PolyFamily::generalized_laguerre, dist};
    case DistributionKind::beta: return {PolyFamily::jacobi_prob, dist};
    }
    throw ParameterError("unknown distribution");
}

PolyBasis PolyBasis::chebyshev(double a, double b) { return {PolyFamily::chebyshev, DistributionSpec::uniform(a, b)}; }

VectorXd PolyBasis::values(int max_degree, double y) const
{
    if (max_degree < 0) throw ParameterError("polynomial degree must be >= 0");
    if (dist.kind != expected_kind(family))
        throw ParameterError(to_string(family) + " polynomials do not match a " + to_string(dist.kind) + " law");
    const Recurrence rec = family == PolyFamily::chebyshev
                               ? chebyshev_recurrence(dist.params[0], dist.params[1], max_degree + 1)
                               : recurrence_coefficients(dist, max_degree + 1);
    VectorXd p(max_degree + 1);
    p[0] = 1.0;
    if (max_degree >= 1) p[1] = (y - rec.alpha[0]) / std::sqrt(rec.beta[1]);
    for (int k = 1; k < max_degree; ++k)
        p[k + 1] = ((y - rec.alpha[k]) * p[k] - std::sqrt(rec.beta[k]) * p[k - 1]) / std::sqrt(rec.beta[k + 1]);
    return p;
}

std::vector<PolyBasis> bases_for(const KnotFamilies& families)
{
    std::vector<PolyBasis> out;
    for (const auto& f : families) out.push_back(PolyBasis::for_distribution(f.distribution()));
    return out;
}

VectorXd eval_orthonormal(const std::vector<PolyBasis>& bases, const MultiIndex& degree, const MatrixXd& points)
{
    if (degree.size() != bases.size() || points.rows() != static_cast<Index>(bases.size()))
        throw ParameterError("degree, bases and points must share the dimension");
    VectorXd out = VectorXd::Ones(points.cols());
    for (std::size_t n = 0; n < bases.size(); ++n) {
        if (degree[n] < 0) throw ParameterError("polynomial degree must be >= 0");
        for (Index q = 0; q < points.cols(); ++q)
            out[q] *= bases[n].values(degree[n], points(static_cast<Index>(n), q))[degree[n]];
    }
    return out;
}

PCExpansion convert_to_modal(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                             const std::vector<PolyBasis>& bases)
{
    const int dim = grid.dim;
    if (static_cast<int>(bases.size()) != dim) throw ParameterError("need one polynomial basis per dimension");
    if (values.cols() != reduced.size()) throw ParameterError("value table does not match the reduced grid");
    const Index outputs = values.rows();

    std::map<MultiIndex, VectorXd> acc;
    const auto offsets = grid.offsets();
    for (std::size_t k = 0; k < grid.tensors.size(); ++k) {
        const TensorGrid& t = grid.tensors[k];
        // coef holds one row per output; its columns follow the tensor knot order.
        MatrixXd coef(outputs, t.size());
        for (Index j = 0; j < t.size(); ++j) coef.col(j) = values.col(reduced.n[offsets[k] + j]);

        Index stride = 1;
        for (int n = 0; n < dim; ++n) {
            const VectorXd& nodes = t.knots_per_dim[n];
            const Index m = nodes.size();
            MatrixXd vander(m, m);
            for (Index j = 0; j < m; ++j) vander.row(j) = bases[n].values(static_cast<int>(m - 1), nodes[j]).transpose();
            Eigen::PartialPivLU<MatrixXd> lu(vander);
            if (!(lu.rcond() > 1e-14))
                throw NumericalError("singular Vandermonde system for tensor " + format(t.idx) + " in dimension " +
                                     std::to_string(n + 1));
            // Solve along dimension n for every fibre of every output.
            MatrixXd fibres(m, coef.size() / m);
            Index f = 0;
            for (Index v = 0; v < outputs; ++v)
                for (Index base = 0; base < t.size(); ++base) {
                    if ((base / stride) % m != 0) continue;
                    for (Index j = 0; j < m; ++j) fibres(j, f) = coef(v, base + j * stride);
                    ++f;
                }
            const MatrixXd solved = lu.solve(fibres);
            f = 0;
            for (Index v = 0; v < outputs; ++v)
                for (Index base = 0; base < t.size(); ++base) {
                    if ((base / stride) % m != 0) continue;
                    for (Index j = 0; j < m; ++j) coef(v, base + j * stride) = solved(j, f);
                    ++f;
                }
            stride *= m;
        }

        std::vector<int> deg(dim, 0);
        for (Index j = 0; j < t.size(); ++j) {
            auto [it, inserted] = acc.try_emplace(deg, VectorXd::Zero(outputs));
            it->second += t.coeff * coef.col(j);
            for (int n = 0; n < dim && ++deg[n] == t.m[n]; ++n) deg[n] = 0;
        }
    }

    PCExpansion pce;
    pce.bases = bases;
    std::vector<MultiIndex> rows;
    for (const auto& [deg, c] : acc) rows.push_back(deg);
    pce.lambda = MultiIndexSet::from_sorted_rows(dim, std::move(rows), 0);
    pce.coeffs.resize(outputs, static_cast<Index>(acc.size()));
    Index col = 0;
    for (const auto& [deg, c] : acc) pce.coeffs.col(col++) = c;
    return pce;
}

MatrixXd evaluate_pce(const PCExpansion& pce, const MatrixXd& points)
{
    const int dim = pce.dim();
    if (points.rows() != dim) throw ParameterError("query points do not match the expansion dimension");
    std::vector<int> max_deg(dim, 0);
    for (const auto& p : pce.lambda)
        for (int n = 0; n < dim; ++n) max_deg[n] = std::max(max_deg[n], p[n]);

    MatrixXd out = MatrixXd::Zero(pce.coeffs.rows(), points.cols());
    std::vector<VectorXd> uni(dim);
    VectorXd basis(static_cast<Index>(pce.lambda.size()));
    for (Index q = 0; q < points.cols(); ++q) {
        for (int n = 0; n < dim; ++n) uni[n] = pce.bases[n].values(max_deg[n], points(n, q));
        for (std::size_t k = 0; k < pce.lambda.size(); ++k) {
            double b = 1.0;
            for (int n = 0; n < dim; ++n) b *= uni[n][pce.lambda[k][n]];
            basis[static_cast<Index>(k)] = b;
        }
        out.col(q) = pce.coeffs * basis;
    }
    return out;
}

SobolIndices sobol_indices(const PCExpansion& pce)
{
    if (pce.coeffs.rows() != 1) throw ParameterError("Sobol indices need a single-output expansion");
    const int dim = pce.dim();
    SobolIndices s{VectorXd::Zero(dim), VectorXd::Zero(dim)};
    double variance = 0.0;
    for (std::size_t k = 0; k < pce.lambda.size(); ++k) {
        const auto& p = pce.lambda[k];
        const double c2 = std::pow(pce.coeffs(0, static_cast<Index>(k)), 2);
        int active = 0, last = -1;
        for (int n = 0; n < dim; ++n)
            if (p[n] > 0) {
                ++active;
                last = n;
                s.total[n] += c2;
            }
        if (active == 0) continue;
        variance += c2;
        if (active == 1) s.principal[last] += c2;
    }
    if (!(variance > 0)) throw NumericalError("Sobol indices are undefined for a constant function");
    s.principal /= variance;
    s.total /= variance;
    return s;
}

SobolIndices sobol_indices(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                           const std::vector<PolyBasis>& bases)
{
    return sobol_indices(convert_to_modal(grid, reduced, values, bases));
}

std::vector<std::size_t> degree_order(const MultiIndexSet& lambda)
{
    std::vector<std::size_t> order(lambda.size());
    std::iota(order.begin(), order.end(), 0);
    auto total = [&](std::size_t k) { return std::accumulate(lambda[k].begin(), lambda[k].end(), 0); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total(a) < total(b); });
    return order;
}

}  // namespace sparsegrid
