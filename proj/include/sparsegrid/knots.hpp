#pragma once

#include "sparsegrid/distribution.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace sparsegrid {

/// Univariate quadrature rule. Weights are normalized against the pdf, so they
/// sum to one.
struct Rule1D {
    VectorXd nodes;
    VectorXd weights;

    Index size() const { return nodes.size(); }
};

enum class LejaVariant { standard, symmetric, p_disk };

/// Gauss rule (Golub-Welsch) for any catalogue distribution; exact up to
/// degree 2*count-1.
Rule1D gauss_knots(const DistributionSpec& dist, int count);

/// Clenshaw-Curtis rule on [a, b]; nodes run from b down to a.
Rule1D cc_knots(int count, double a, double b);

/// Leja sequence on [a, b]; the first nodes are b, a, (a+b)/2.
Rule1D leja_knots(int count, double a, double b, LejaVariant variant = LejaVariant::standard);

/// pdf-weighted Leja sequence. The symmetric variant needs a normal law or a
/// beta law with alpha == beta.
Rule1D weighted_leja_knots(int count, const DistributionSpec& dist,
                           LejaVariant variant = LejaVariant::standard);

/// Composite trapezoid rule on [a, b]; count == 1 degenerates to the midpoint.
Rule1D trap_knots(int count, double a, double b);

/// Composite midpoint rule on [a, b].
Rule1D midpoint_knots(int count, double a, double b);

/// Tabulated nested Genz-Keister rule for normal(mu, sigma);
/// count must be one of 1, 3, 9, 19, 35.
Rule1D gk_knots(int count, double mu = 0.0, double sigma = 1.0);

enum class KnotKind { gauss, cc, leja, weighted_leja, trap, midpoint, gk };

std::string to_string(KnotKind kind);
KnotKind knot_kind_from_string(const std::string& name);
std::string to_string(LejaVariant v);
LejaVariant leja_variant_from_string(const std::string& name);

/// A knot generator bound to a distribution: count -> Rule1D.
///
/// Families over an interval (cc, leja, trap, midpoint) carry a uniform law on
/// that interval. Results are memoized per count; copies share the cache.
class KnotFamily {
public:
    KnotFamily() = default;
    KnotFamily(KnotKind kind, DistributionSpec dist, LejaVariant variant = LejaVariant::standard);

    static KnotFamily gauss(const DistributionSpec& dist) { return {KnotKind::gauss, dist}; }
    static KnotFamily cc(double a, double b) { return {KnotKind::cc, DistributionSpec::uniform(a, b)}; }
    static KnotFamily leja(double a, double b, LejaVariant v = LejaVariant::standard)
    {
        return {KnotKind::leja, DistributionSpec::uniform(a, b), v};
    }
    static KnotFamily weighted_leja(const DistributionSpec& dist, LejaVariant v = LejaVariant::standard)
    {
        return {KnotKind::weighted_leja, dist, v};
    }
    static KnotFamily trap(double a, double b) { return {KnotKind::trap, DistributionSpec::uniform(a, b)}; }
    static KnotFamily midpoint(double a, double b)
    {
        return {KnotKind::midpoint, DistributionSpec::uniform(a, b)};
    }
    static KnotFamily gk(double mu = 0.0, double sigma = 1.0)
    {
        return {KnotKind::gk, DistributionSpec::normal(mu, sigma)};
    }

    Rule1D operator()(int count) const;

    KnotKind kind() const { return kind_; }
    const DistributionSpec& distribution() const { return dist_; }
    LejaVariant variant() const { return variant_; }

    /// Whether the family produces nested node sets under a compatible level map.
    bool nested() const { return kind_ != KnotKind::gauss; }

    friend bool operator==(const KnotFamily& a, const KnotFamily& b)
    {
        return a.kind_ == b.kind_ && a.dist_ == b.dist_ && a.variant_ == b.variant_;
    }

private:
    Rule1D compute(int count) const;

    struct Cache {
        std::mutex mutex;
        std::map<int, Rule1D> rules;
    };

    KnotKind kind_ = KnotKind::cc;
    DistributionSpec dist_ = DistributionSpec{DistributionKind::uniform, {-1.0, 1.0}};
    LejaVariant variant_ = LejaVariant::standard;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

namespace detail {
/// Genz-Keister tables, ascending nodes, for the standard normal.
const Rule1D& gk_table(int count);
}  // namespace detail

}  // namespace sparsegrid
