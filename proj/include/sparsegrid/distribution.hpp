#pragma once

#include "sparsegrid/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sparsegrid {

enum class DistributionKind { uniform, normal, exponential, gamma, beta };

/// A univariate probability law from the supported catalogue.
///
/// Parameter layout:
///   uniform     {a, b}
///   normal      {mu, sigma}
///   exponential {lambda}
///   gamma       {alpha, beta}        pdf ~ y^alpha exp(-beta y) on [0, inf)
///   beta        {a, b, alpha, beta}  pdf ~ (y-a)^alpha (b-y)^beta on [a, b]
struct DistributionSpec {
    DistributionKind kind = DistributionKind::uniform;
    std::vector<double> params{0.0, 1.0};

    static DistributionSpec uniform(double a, double b);
    static DistributionSpec normal(double mu, double sigma);
    static DistributionSpec exponential(double lambda);
    static DistributionSpec gamma(double alpha, double beta);
    static DistributionSpec beta(double a, double b, double alpha, double beta);

    /// Throws ParameterError when the parameters violate the family's constraints.
    void validate() const;

    double pdf(double y) const;
    double log_pdf(double y) const;

    /// Support as (lower, upper); unbounded ends are +-infinity.
    std::pair<double, double> support() const;
    bool bounded() const;

    /// Mean of the law; used as centre for symmetric constructions.
    double mean() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

std::string to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(const std::string& name);

}  // namespace sparsegrid
