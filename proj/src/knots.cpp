#include "sparsegrid/knots.hpp"

#include "sparsegrid/lagrange.hpp"
#include "sparsegrid/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace sparsegrid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Index kLejaCandidates = 100001;
constexpr int kGoldenIterations = 40;

void require_count(int count, int minimum)
{
    if (count < minimum)
        throw ParameterError("knot count must be >= " + std::to_string(minimum) + ", got " +
                             std::to_string(count));
}

void require_interval(double a, double b)
{
    if (!(a < b)) throw ParameterError("interval requires a < b");
}

Rule1D single_point(double y) { return {VectorXd::Constant(1, y), VectorXd::Ones(1)}; }

// Greedy maximizer of  log w(t) + sum_k log|t - t_k|  on a candidate lattice,
// refined by golden-section search around the best lattice point.
class LejaSearch {
public:
    LejaSearch(double lo, double hi, std::function<double(double)> log_weight, bool grow_lo, bool grow_hi)
        : lo_(lo), hi_(hi), log_weight_(std::move(log_weight)), grow_lo_(grow_lo), grow_hi_(grow_hi)
    {
        rebuild();
    }

    const std::vector<double>& nodes() const { return nodes_; }

    void push(double t)
    {
        nodes_.push_back(t);
        for (Index c = 0; c < candidates_.size(); ++c) objective_[c] += std::log(std::abs(candidates_[c] - t));
    }

    double objective(double t) const
    {
        double lw = log_weight_(t);
        if (lw == kInf) return -kInf;
        for (double s : nodes_) lw += std::log(std::abs(t - s));
        return lw;
    }

    // Rightmost maximizer (ties within a relative 1e-12 in the log domain).
    double argmax()
    {
        for (;;) {
            Index best = 0;
            for (Index c = 1; c < candidates_.size(); ++c)
                if (objective_[c] > objective_[best]) best = c;
            const double top = objective_[best];
            const double tol = 1e-12 * std::max(1.0, std::abs(top));
            for (Index c = candidates_.size() - 1; c > best; --c) {
                if (objective_[c] >= top - tol) {
                    best = c;
                    break;
                }
            }
            const double left = candidates_[std::max<Index>(best - 1, 0)];
            const double right = candidates_[std::min<Index>(best + 1, candidates_.size() - 1)];
            const double t = golden(left, right, candidates_[best]);

            const double margin = 0.01 * (hi_ - lo_);
            const bool near_hi = grow_hi_ && t > hi_ - margin;
            const bool near_lo = grow_lo_ && t < lo_ + margin;
            if (!near_hi && !near_lo) return t;
            const double width = hi_ - lo_;
            if (grow_lo_ && grow_hi_) {
                const double mid = 0.5 * (lo_ + hi_);
                lo_ = mid - width;
                hi_ = mid + width;
            } else if (grow_hi_) {
                hi_ = lo_ + 2.0 * width;
            } else {
                lo_ = hi_ - 2.0 * width;
            }
            rebuild();
        }
    }

private:
    void rebuild()
    {
        candidates_ = VectorXd::LinSpaced(kLejaCandidates, lo_, hi_);
        objective_.resize(kLejaCandidates);
        for (Index c = 0; c < kLejaCandidates; ++c) objective_[c] = objective(candidates_[c]);
    }

    double golden(double a, double b, double seed) const
    {
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        double best_t = seed, best_v = objective(seed);
        double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
        double f1 = objective(x1), f2 = objective(x2);
        for (int it = 0; it < kGoldenIterations; ++it) {
            if (f1 > f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = objective(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = objective(x2);
            }
        }
        for (double t : {x1, x2, a, b}) {
            const double v = objective(t);
            if (v > best_v) {
                best_v = v;
                best_t = t;
            }
        }
        return best_t;
    }

    double lo_, hi_;
    std::function<double(double)> log_weight_;
    bool grow_lo_, grow_hi_;
    VectorXd candidates_, objective_;
    std::vector<double> nodes_;
};

// Quadrature weights of the Lagrange basis on `nodes`, integrated with a Gauss
// rule of the same law that is exact well beyond degree count - 1.
VectorXd interpolatory_weights(const VectorXd& nodes, const DistributionSpec& dist)
{
    const int count = static_cast<int>(nodes.size());
    const Rule1D aux = gauss_knots(dist, (count + 2) / 2 + 10);
    const VectorXd bary = barycentric_weights(nodes);
    VectorXd weights = VectorXd::Zero(count);
    VectorXd basis(count);
    for (Index g = 0; g < aux.size(); ++g) {
        lagrange_basis(nodes, bary, aux.nodes[g], basis);
        weights += aux.weights[g] * basis;
    }
    return weights;
}

Rule1D finish_leja(const std::vector<double>& seq, const DistributionSpec& dist)
{
    VectorXd nodes = Eigen::Map<const VectorXd>(seq.data(), static_cast<Index>(seq.size()));
    return {nodes, interpolatory_weights(nodes, dist)};
}

}  // namespace

Rule1D gauss_knots(const DistributionSpec& dist, int count)
{
    require_count(count, 1);
    const Recurrence rec = recurrence_coefficients(dist, count);
    if (count == 1) return single_point(rec.alpha[0]);
    VectorXd sub = rec.beta.tail(count - 1).cwiseSqrt();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.computeFromTridiagonal(rec.alpha, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("Golub-Welsch eigensolver failed");
    Rule1D rule{es.eigenvalues(), es.eigenvectors().row(0).transpose().cwiseAbs2()};
    rule.weights /= rule.weights.sum();
    return rule;
}

Rule1D cc_knots(int count, double a, double b)
{
    require_count(count, 1);
    require_interval(a, b);
    if (count == 1) return single_point(0.5 * (a + b));
    const int n = count - 1;
    Rule1D rule{VectorXd(count), VectorXd(count)};
    for (int k = 0; k <= n; ++k) {
        const double x = std::sin(M_PI * (n - 2.0 * k) / (2.0 * n));
        rule.nodes[k] = a + 0.5 * (b - a) * (x + 1.0);
        const double theta = k * M_PI / n;
        double s = 0.0;
        for (int j = 1; j <= n / 2; ++j) {
            const double bj = (2 * j == n) ? 1.0 : 2.0;
            s += bj / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
        }
        const double ck = (k == 0 || k == n) ? 1.0 : 2.0;
        rule.weights[k] = 0.5 * ck / n * (1.0 - s);
    }
    return rule;
}

Rule1D leja_knots(int count, double a, double b, LejaVariant variant)
{
    require_count(count, 1);
    require_interval(a, b);
    const auto uniform = DistributionSpec::uniform(a, b);
    const double mid = 0.5 * (a + b);

    if (variant == LejaVariant::p_disk) {
        std::vector<double> phi{0.0, M_PI, M_PI / 2};
        while (static_cast<int>(phi.size()) < count) {
            // phi_{2j+2} = phi_{j+2} / 2,  phi_{2j+3} = phi_{2j+2} + pi  (1-based)
            const std::size_t j = (phi.size() - 1) / 2;
            const double even = phi[j + 1] / 2;
            phi.push_back(even);
            phi.push_back(even + M_PI);
        }
        std::vector<double> seq;
        for (int j = 0; j < count; ++j) {
            const double c = std::cos(phi[j]);
            seq.push_back(j == 2 ? mid : mid + 0.5 * (b - a) * c);
        }
        return finish_leja(seq, uniform);
    }

    LejaSearch search(a, b, [](double) { return 0.0; }, false, false);
    for (double t : {b, a, mid}) {
        if (static_cast<int>(search.nodes().size()) == count) break;
        search.push(t);
    }
    while (static_cast<int>(search.nodes().size()) < count) {
        const double t = search.argmax();
        search.push(t);
        if (variant == LejaVariant::symmetric && static_cast<int>(search.nodes().size()) < count)
            search.push(mid - (t - mid));
    }
    return finish_leja(search.nodes(), uniform);
}

Rule1D weighted_leja_knots(int count, const DistributionSpec& dist, LejaVariant variant)
{
    require_count(count, 1);
    dist.validate();
    if (variant == LejaVariant::p_disk) throw UnsupportedError("p-disk variant is only defined for uniform laws");
    const auto& p = dist.params;
    double lo = 0, hi = 0;
    bool grow_lo = false, grow_hi = false;
    switch (dist.kind) {
    case DistributionKind::uniform:
        lo = p[0], hi = p[1];
        break;
    case DistributionKind::beta:
        if (p[2] < 0 || p[3] < 0)
            throw UnsupportedError("weighted Leja for beta laws requires alpha, beta >= 0");
        lo = p[0], hi = p[1];
        break;
    case DistributionKind::normal:
        lo = p[0] - 10 * p[1], hi = p[0] + 10 * p[1];
        grow_lo = grow_hi = true;
        break;
    case DistributionKind::exponential:
        lo = 0, hi = 40 / p[0];
        grow_hi = true;
        break;
    case DistributionKind::gamma:
        if (p[0] < 0) throw UnsupportedError("weighted Leja for gamma laws requires alpha >= 0");
        lo = 0, hi = 40 * (p[0] + 1) / p[1];
        grow_hi = true;
        break;
    }

    double centre = 0;
    if (variant == LejaVariant::symmetric) {
        if (dist.kind == DistributionKind::normal)
            centre = p[0];
        else if (dist.kind == DistributionKind::beta && p[2] == p[3])
            centre = 0.5 * (p[0] + p[1]);
        else
            throw UnsupportedError("symmetric weighted Leja requires a normal or symmetric beta law");
    }

    LejaSearch search(lo, hi, [&dist](double t) { return 0.5 * dist.log_pdf(t); }, grow_lo, grow_hi);
    if (variant == LejaVariant::symmetric) search.push(centre);
    while (static_cast<int>(search.nodes().size()) < count) {
        const double t = search.argmax();
        search.push(t);
        if (variant == LejaVariant::symmetric && static_cast<int>(search.nodes().size()) < count)
            search.push(centre - (t - centre));
    }
    return finish_leja(search.nodes(), dist);
}

Rule1D trap_knots(int count, double a, double b)
{
    require_count(count, 1);
    require_interval(a, b);
    if (count == 1) return single_point(0.5 * (a + b));
    Rule1D rule{VectorXd(count), VectorXd::Constant(count, 1.0 / (count - 1))};
    for (int j = 0; j < count; ++j) rule.nodes[j] = a + (b - a) * (double(j) / double(count - 1));
    rule.weights[0] *= 0.5;
    rule.weights[count - 1] *= 0.5;
    return rule;
}

Rule1D midpoint_knots(int count, double a, double b)
{
    require_count(count, 1);
    require_interval(a, b);
    Rule1D rule{VectorXd(count), VectorXd::Constant(count, 1.0 / count)};
    for (int j = 0; j < count; ++j) rule.nodes[j] = a + (b - a) * (double(2 * j + 1) / double(2 * count));
    return rule;
}

Rule1D gk_knots(int count, double mu, double sigma)
{
    if (!(sigma > 0)) throw ParameterError("normal distribution requires sigma > 0");
    Rule1D rule = detail::gk_table(count);
    rule.nodes = (mu + sigma * rule.nodes.array()).matrix();
    return rule;
}

KnotFamily::KnotFamily(KnotKind kind, DistributionSpec dist, LejaVariant variant)
    : kind_(kind), dist_(std::move(dist)), variant_(variant)
{
    dist_.validate();
    switch (kind_) {
    case KnotKind::cc:
    case KnotKind::leja:
    case KnotKind::trap:
    case KnotKind::midpoint:
        if (dist_.kind != DistributionKind::uniform)
            throw ParameterError(to_string(kind_) + " knots require a uniform law");
        break;
    case KnotKind::gk:
        if (dist_.kind != DistributionKind::normal) throw ParameterError("gk knots require a normal law");
        break;
    default:
        break;
    }
}

Rule1D KnotFamily::operator()(int count) const
{
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->rules.find(count); it != cache_->rules.end()) return it->second;
    }
    Rule1D rule = compute(count);
    std::lock_guard lock(cache_->mutex);
    return cache_->rules.emplace(count, std::move(rule)).first->second;
}

Rule1D KnotFamily::compute(int count) const
{
    const auto& p = dist_.params;
    switch (kind_) {
    case KnotKind::gauss: return gauss_knots(dist_, count);
    case KnotKind::cc: return cc_knots(count, p[0], p[1]);
    case KnotKind::leja: return leja_knots(count, p[0], p[1], variant_);
    case KnotKind::weighted_leja: return weighted_leja_knots(count, dist_, variant_);
    case KnotKind::trap: return trap_knots(count, p[0], p[1]);
    case KnotKind::midpoint: return midpoint_knots(count, p[0], p[1]);
    case KnotKind::gk: return gk_knots(count, p[0], p[1]);
    }
    throw ParameterError("unknown knot family");
}

std::string to_string(KnotKind kind)
{
    switch (kind) {
    case KnotKind::gauss: return "gauss";
    case KnotKind::cc: return "cc";
    case KnotKind::leja: return "leja";
    case KnotKind::weighted_leja: return "weighted_leja";
    case KnotKind::trap: return "trap";
    case KnotKind::midpoint: return "midpoint";
    case KnotKind::gk: return "gk";
    }
    return "?";
}

KnotKind knot_kind_from_string(const std::string& name)
{
    for (auto k : {KnotKind::gauss, KnotKind::cc, KnotKind::leja, KnotKind::weighted_leja, KnotKind::trap,
                   KnotKind::midpoint, KnotKind::gk})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown knot family '" + name + "'");
}

std::string to_string(LejaVariant v)
{
    switch (v) {
    case LejaVariant::standard: return "standard";
    case LejaVariant::symmetric: return "symmetric";
    case LejaVariant::p_disk: return "p_disk";
    }
    return "?";
}

LejaVariant leja_variant_from_string(const std::string& name)
{
    if (name == "standard") return LejaVariant::standard;
    if (name == "symmetric") return LejaVariant::symmetric;
    if (name == "p_disk") return LejaVariant::p_disk;
    throw ParameterError("unknown Leja variant '" + name + "'");
}

}  // namespace sparsegrid
