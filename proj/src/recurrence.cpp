#include "sparsegrid/recurrence.hpp"

#include <cmath>

namespace sparsegrid {

namespace {

// y = shift + scale * x
Recurrence affine(Recurrence rec, double shift, double scale)
{
    rec.alpha = (shift + scale * rec.alpha.array()).matrix();
    rec.beta.tail(rec.beta.size() - 1) *= scale * scale;
    return rec;
}

// Jacobi weight (1-x)^a (1+x)^b on [-1, 1], normalized to unit mass.
Recurrence jacobi(int n, double a, double b)
{
    Recurrence rec{VectorXd(n), VectorXd(n)};
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        rec.alpha[k] = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (k == 0)
            rec.beta[k] = 1.0;
        else if (k == 1)
            rec.beta[k] = 4.0 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
        else
            rec.beta[k] = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1));
    }
    return rec;
}

}  // namespace

Recurrence recurrence_coefficients(const DistributionSpec& dist, int n)
{
    dist.validate();
    if (n < 0) throw ParameterError("recurrence length must be non-negative");
    Recurrence rec{VectorXd::Zero(n), VectorXd::Zero(n)};
    const auto& p = dist.params;
    switch (dist.kind) {
    case DistributionKind::uniform:
        rec = jacobi(n, 0.0, 0.0);
        return affine(rec, 0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
    case DistributionKind::beta:
        // (y-a)^alpha maps to (1+x)^alpha, so the Jacobi exponents swap roles.
        rec = jacobi(n, p[3], p[2]);
        return affine(rec, 0.5 * (p[0] + p[1]), 0.5 * (p[1] - p[0]));
    case DistributionKind::normal:
        for (int k = 0; k < n; ++k) rec.beta[k] = k == 0 ? 1.0 : k;
        return affine(rec, p[0], p[1]);
    case DistributionKind::exponential:
        for (int k = 0; k < n; ++k) {
            rec.alpha[k] = 2.0 * k + 1.0;
            rec.beta[k] = k == 0 ? 1.0 : double(k) * k;
        }
        return affine(rec, 0.0, 1.0 / p[0]);
    case DistributionKind::gamma:
        for (int k = 0; k < n; ++k) {
            rec.alpha[k] = 2.0 * k + p[0] + 1.0;
            rec.beta[k] = k == 0 ? 1.0 : k * (k + p[0]);
        }
        return affine(rec, 0.0, 1.0 / p[1]);
    }
    return rec;
}

Recurrence chebyshev_recurrence(double a, double b, int n)
{
    if (!(a < b)) throw ParameterError("chebyshev recurrence requires a < b");
    Recurrence rec{VectorXd::Zero(n), VectorXd::Zero(n)};
    for (int k = 0; k < n; ++k) rec.beta[k] = k == 0 ? 1.0 : (k == 1 ? 0.5 : 0.25);
    return affine(rec, 0.5 * (a + b), 0.5 * (b - a));
}

}  // namespace sparsegrid
