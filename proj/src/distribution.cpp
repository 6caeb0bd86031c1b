#include "sparsegrid/distribution.hpp"

#include <cmath>
#include <limits>

namespace sparsegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void expect_count(const DistributionSpec& d, std::size_t n)
{
    if (d.params.size() != n)
        throw ParameterError(to_string(d.kind) + " distribution expects " + std::to_string(n) +
                             " parameters, got " + std::to_string(d.params.size()));
}

}  // namespace

DistributionSpec DistributionSpec::uniform(double a, double b)
{
    DistributionSpec d{DistributionKind::uniform, {a, b}};
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::normal(double mu, double sigma)
{
    DistributionSpec d{DistributionKind::normal, {mu, sigma}};
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::exponential(double lambda)
{
    DistributionSpec d{DistributionKind::exponential, {lambda}};
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::gamma(double alpha, double beta)
{
    DistributionSpec d{DistributionKind::gamma, {alpha, beta}};
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::beta(double a, double b, double alpha, double beta)
{
    DistributionSpec d{DistributionKind::beta, {a, b, alpha, beta}};
    d.validate();
    return d;
}

void DistributionSpec::validate() const
{
    for (double p : params)
        if (!std::isfinite(p)) throw ParameterError("distribution parameters must be finite");
    switch (kind) {
    case DistributionKind::uniform:
        expect_count(*this, 2);
        if (!(params[0] < params[1])) throw ParameterError("uniform distribution requires a < b");
        break;
    case DistributionKind::normal:
        expect_count(*this, 2);
        if (!(params[1] > 0)) throw ParameterError("normal distribution requires sigma > 0");
        break;
    case DistributionKind::exponential:
        expect_count(*this, 1);
        if (!(params[0] > 0)) throw ParameterError("exponential distribution requires lambda > 0");
        break;
    case DistributionKind::gamma:
        expect_count(*this, 2);
        if (!(params[0] > -1)) throw ParameterError("gamma distribution requires alpha > -1");
        if (!(params[1] > 0)) throw ParameterError("gamma distribution requires beta > 0");
        break;
    case DistributionKind::beta:
        expect_count(*this, 4);
        if (!(params[0] < params[1])) throw ParameterError("beta distribution requires a < b");
        if (!(params[2] > -1 && params[3] > -1))
            throw ParameterError("beta distribution requires alpha, beta > -1");
        break;
    }
}

double DistributionSpec::log_pdf(double y) const
{
    const auto [lo, hi] = support();
    if (y < lo || y > hi) return -kInf;
    switch (kind) {
    case DistributionKind::uniform:
        return -std::log(params[1] - params[0]);
    case DistributionKind::normal: {
        const double z = (y - params[0]) / params[1];
        return -0.5 * z * z - std::log(params[1]) - 0.5 * std::log(2.0 * M_PI);
    }
    case DistributionKind::exponential:
        return std::log(params[0]) - params[0] * y;
    case DistributionKind::gamma: {
        const double alpha = params[0], beta = params[1];
        if (y == 0.0) return alpha == 0.0 ? std::log(beta) : (alpha > 0 ? -kInf : kInf);
        return (alpha + 1) * std::log(beta) - std::lgamma(alpha + 1) + alpha * std::log(y) - beta * y;
    }
    case DistributionKind::beta: {
        const double a = params[0], b = params[1], alpha = params[2], beta = params[3];
        const double log_norm = std::lgamma(alpha + beta + 2) - std::lgamma(alpha + 1) -
                                std::lgamma(beta + 1) - (alpha + beta + 1) * std::log(b - a);
        auto term = [](double power, double dist) {
            if (dist == 0.0) return power == 0.0 ? 0.0 : (power > 0 ? -kInf : kInf);
            return power * std::log(dist);
        };
        return log_norm + term(alpha, y - a) + term(beta, b - y);
    }
    }
    return -kInf;
}

double DistributionSpec::pdf(double y) const { return std::exp(log_pdf(y)); }

std::pair<double, double> DistributionSpec::support() const
{
    switch (kind) {
    case DistributionKind::uniform:
    case DistributionKind::beta:
        return {params[0], params[1]};
    case DistributionKind::normal:
        return {-kInf, kInf};
    case DistributionKind::exponential:
    case DistributionKind::gamma:
        return {0.0, kInf};
    }
    return {-kInf, kInf};
}

bool DistributionSpec::bounded() const
{
    return kind == DistributionKind::uniform || kind == DistributionKind::beta;
}

double DistributionSpec::mean() const
{
    switch (kind) {
    case DistributionKind::uniform:
        return 0.5 * (params[0] + params[1]);
    case DistributionKind::normal:
        return params[0];
    case DistributionKind::exponential:
        return 1.0 / params[0];
    case DistributionKind::gamma:
        return (params[0] + 1) / params[1];
    case DistributionKind::beta:
        return params[0] + (params[1] - params[0]) * (params[2] + 1) / (params[2] + params[3] + 2);
    }
    return 0.0;
}

std::string to_string(DistributionKind kind)
{
    switch (kind) {
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::normal: return "normal";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::gamma: return "gamma";
    case DistributionKind::beta: return "beta";
    }
    return "?";
}

DistributionKind distribution_kind_from_string(const std::string& name)
{
    if (name == "uniform") return DistributionKind::uniform;
    if (name == "normal") return DistributionKind::normal;
    if (name == "exponential") return DistributionKind::exponential;
    if (name == "gamma") return DistributionKind::gamma;
    if (name == "beta") return DistributionKind::beta;
    throw ParameterError("unknown distribution '" + name + "'");
}

}  // namespace sparsegrid
