#pragma once

#include "sparsegrid/distribution.hpp"

namespace sparsegrid {

/// Recurrence of the monic polynomials orthogonal against a probability law:
///   p_{k+1}(y) = (y - alpha_k) p_k(y) - beta_k p_{k-1}(y),   beta_0 = 1.
/// Coefficients are expressed directly in the variable y (affine maps folded in).
struct Recurrence {
    VectorXd alpha;
    VectorXd beta;

    Index size() const { return alpha.size(); }
};

/// First n coefficient pairs for a catalogue distribution
/// (Legendre, Hermite, Laguerre, generalized Laguerre, Jacobi).
Recurrence recurrence_coefficients(const DistributionSpec& dist, int n);

/// Chebyshev (first kind) density 1/(pi sqrt((y-a)(b-y))) on [a, b].
Recurrence chebyshev_recurrence(double a, double b, int n);

}  // namespace sparsegrid
