#pragma once

#include "sparsegrid/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sparsegrid {

enum class PolyFamily { legendre, hermite, laguerre, generalized_laguerre, jacobi_prob, chebyshev };

std::string to_string(PolyFamily family);
PolyFamily poly_family_from_string(const std::string& name);

/// Univariate orthonormal family together with the law it is orthonormal
/// against. Chebyshev uses a uniform law only to carry its interval [a, b].
struct PolyBasis {
    PolyFamily family = PolyFamily::legendre;
    DistributionSpec dist;

    /// Orthonormal family of a catalogue law (uniform -> Legendre, ...).
    static PolyBasis for_distribution(const DistributionSpec& dist);
    static PolyBasis chebyshev(double a, double b);

    /// Values of P_0 .. P_max_degree at y.
    VectorXd values(int max_degree, double y) const;

    friend bool operator==(const PolyBasis&, const PolyBasis&) = default;
};

std::vector<PolyBasis> bases_for(const KnotFamilies& families);

/// prod_n P_{p_n}(y_n) at every column of points.
VectorXd eval_orthonormal(const std::vector<PolyBasis>& bases, const MultiIndex& degree, const MatrixXd& points);

/// Expansion sum_p c_p P_p over a base-0 degree set.
struct PCExpansion {
    std::vector<PolyBasis> bases;
    MultiIndexSet lambda;
    MatrixXd coeffs;  // V x |lambda|

    int dim() const { return static_cast<int>(bases.size()); }
};

/// Modal form of the sparse interpolant, obtained tensor by tensor from the
/// univariate Vandermonde systems and summed with the combination coefficients.
PCExpansion convert_to_modal(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                             const std::vector<PolyBasis>& bases);

MatrixXd evaluate_pce(const PCExpansion& pce, const MatrixXd& points);

struct SobolIndices {
    VectorXd principal;
    VectorXd total;
};

/// Variance-based indices of a single-output expansion.
SobolIndices sobol_indices(const PCExpansion& pce);
SobolIndices sobol_indices(const SparseGrid& grid, const ReducedGrid& reduced, const MatrixXd& values,
                           const std::vector<PolyBasis>& bases);

/// Order of rows for export: by total degree, then lexicographically.
std::vector<std::size_t> degree_order(const MultiIndexSet& lambda);

}  // namespace sparsegrid
