#pragma once

#include "sparsegrid/types.hpp"

#include <cmath>

namespace sparsegrid {

/// Barycentric weights (second kind) for a set of distinct nodes. The weights
/// are rescaled by the node spread so long products neither overflow nor
/// underflow; the scaling cancels in the interpolation formula.
template <typename Derived>
Vector<typename Derived::Scalar> barycentric_weights(const Eigen::MatrixBase<Derived>& nodes)
{
    using Scalar = typename Derived::Scalar;
    const Index m = nodes.size();
    Vector<Scalar> w = Vector<Scalar>::Ones(m);
    if (m < 2) return w;
    const Scalar spread = nodes.maxCoeff() - nodes.minCoeff();
    const Scalar scale = Scalar(4) / spread;
    for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k)
            if (k != j) w[j] /= scale * (nodes[j] - nodes[k]);
    return w;
}

/// Values of every Lagrange basis polynomial l_j at y, written into `basis`.
/// Exact (Kronecker delta) when y coincides with a node.
template <typename DerivedNodes, typename DerivedBasis>
void lagrange_basis(const Eigen::MatrixBase<DerivedNodes>& nodes,
                    const Vector<typename DerivedNodes::Scalar>& bary, typename DerivedNodes::Scalar y,
                    Eigen::MatrixBase<DerivedBasis>& basis)
{
    using Scalar = typename DerivedNodes::Scalar;
    const Index m = nodes.size();
    if (m == 1) {
        basis(0) = Scalar(1);
        return;
    }
    for (Index j = 0; j < m; ++j) {
        if (y == nodes[j]) {
            basis.setZero();
            basis(j) = Scalar(1);
            return;
        }
    }
    Scalar denom = 0;
    for (Index j = 0; j < m; ++j) {
        basis(j) = bary[j] / (y - nodes[j]);
        denom += basis(j);
    }
    basis /= denom;
}

}  // namespace sparsegrid
