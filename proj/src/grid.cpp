#include "sparsegrid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparsegrid {

namespace {

MatrixXd tensor_knots(const std::vector<VectorXd>& per_dim)
{
    const int dim = static_cast<int>(per_dim.size());
    Index total = 1;
    for (const auto& v : per_dim) total *= v.size();
    MatrixXd knots(dim, total);
    std::vector<Index> j(dim, 0);
    for (Index c = 0; c < total; ++c) {
        for (int n = 0; n < dim; ++n) knots(n, c) = per_dim[n][j[n]];
        for (int n = 0; n < dim && ++j[n] == per_dim[n].size(); ++n) j[n] = 0;
    }
    return knots;
}

VectorXd tensor_weights(const std::vector<VectorXd>& per_dim, int coeff)
{
    const int dim = static_cast<int>(per_dim.size());
    Index total = 1;
    for (const auto& v : per_dim) total *= v.size();
    VectorXd weights(total);
    std::vector<Index> j(dim, 0);
    for (Index c = 0; c < total; ++c) {
        double w = 1.0;
        for (int n = 0; n < dim; ++n) w *= per_dim[n][j[n]];
        weights[c] = w * coeff;
        for (int n = 0; n < dim && ++j[n] == per_dim[n].size(); ++n) j[n] = 0;
    }
    return weights;
}

void check_families(const KnotFamilies& families, int dim)
{
    if (static_cast<int>(families.size()) != dim)
        throw ParameterError("expected " + std::to_string(dim) + " knot families, got " +
                             std::to_string(families.size()));
}

bool same_construction(const SparseGrid& g, const KnotFamilies& families, LevelMap level_map)
{
    return g.families == families && g.level_map == level_map;
}

const TensorGrid* find_tensor(const std::vector<TensorGrid>& tensors, const MultiIndex& idx)
{
    auto it = std::lower_bound(tensors.begin(), tensors.end(), idx,
                               [](const TensorGrid& t, const MultiIndex& i) { return t.idx < i; });
    return (it != tensors.end() && it->idx == idx) ? &*it : nullptr;
}

TensorGrid with_coeff(const TensorGrid& src, int coeff)
{
    TensorGrid t = src;
    t.coeff = coeff;
    t.weights = tensor_weights(t.weights_per_dim, coeff);
    return t;
}

std::vector<TensorGrid> assemble(const MultiIndexSet& set, const std::vector<int>& coeffs,
                                 const KnotFamilies& families, LevelMap level_map,
                                 const std::vector<TensorGrid>* reusable)
{
    std::vector<TensorGrid> tensors;
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (coeffs[k] == 0) continue;
        const TensorGrid* old = reusable ? find_tensor(*reusable, set[k]) : nullptr;
        if (old && old->coeff == coeffs[k])
            tensors.push_back(*old);
        else if (old)
            tensors.push_back(with_coeff(*old, coeffs[k]));
        else
            tensors.push_back(with_coeff(build_tensor_grid(set[k], families, level_map), coeffs[k]));
    }
    return tensors;
}

}  // namespace

KnotFamilies repeat(const KnotFamily& family, int dim) { return KnotFamilies(dim, family); }

Index SparseGrid::extended_size() const
{
    Index total = 0;
    for (const auto& t : tensors) total += t.size();
    return total;
}

std::vector<Index> SparseGrid::offsets() const
{
    std::vector<Index> out{0};
    for (const auto& t : tensors) out.push_back(out.back() + t.size());
    return out;
}

MatrixXd SparseGrid::extended_knots() const
{
    MatrixXd out(dim, extended_size());
    Index c = 0;
    for (const auto& t : tensors) {
        out.middleCols(c, t.size()) = t.knots;
        c += t.size();
    }
    return out;
}

VectorXd SparseGrid::extended_weights() const
{
    VectorXd out(extended_size());
    Index c = 0;
    for (const auto& t : tensors) {
        out.segment(c, t.size()) = t.weights;
        c += t.size();
    }
    return out;
}

KnotRegistry::KnotRegistry(VectorXd abs_tol) : tol_(std::move(abs_tol)), coords_(tol_.size()) {}

std::size_t KnotRegistry::KeyHash::operator()(const std::vector<int>& k) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ull;
    for (int v : k) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ull;
    return h;
}

int KnotRegistry::lookup(int d, double value) const
{
    const auto& map = coords_[d];
    const double tol = tol_[d];
    auto it = map.lower_bound(value - tol);
    int best = -1;
    double best_gap = tol;
    for (; it != map.end() && it->first <= value + tol; ++it) {
        const double gap = std::abs(it->first - value);
        if (gap <= best_gap) {
            best_gap = gap;
            best = it->second;
        }
    }
    return best;
}

int KnotRegistry::coordinate_id(int d, double value, bool insert)
{
    const int id = lookup(d, value);
    if (id >= 0 || !insert) return id;
    const int fresh = static_cast<int>(coords_[d].size());
    coords_[d].emplace(value, fresh);
    return fresh;
}

std::optional<Index> KnotRegistry::find(const std::vector<int>& key) const
{
    auto it = points_.find(key);
    if (it == points_.end()) return std::nullopt;
    return it->second;
}

std::optional<Index> KnotRegistry::find(const Eigen::Ref<const VectorXd>& y) const
{
    std::vector<int> key(dim());
    for (int d = 0; d < dim(); ++d) {
        key[d] = lookup(d, y[d]);
        if (key[d] < 0) return std::nullopt;
    }
    return find(key);
}

std::pair<Index, bool> KnotRegistry::insert(const std::vector<int>& key)
{
    auto [it, inserted] = points_.emplace(key, static_cast<Index>(points_.size()));
    return {it->second, inserted};
}

std::pair<Index, bool> KnotRegistry::insert(const Eigen::Ref<const VectorXd>& y)
{
    std::vector<int> key(dim());
    for (int d = 0; d < dim(); ++d) key[d] = coordinate_id(d, y[d], true);
    return insert(key);
}

double coordinate_scale(const KnotFamily& family)
{
    const auto& dist = family.distribution();
    const auto& p = dist.params;
    double scale = 1.0;
    switch (dist.kind) {
    case DistributionKind::uniform:
    case DistributionKind::beta: scale = p[1] - p[0]; break;
    case DistributionKind::normal: scale = std::abs(p[0]) + 20 * p[1]; break;
    case DistributionKind::exponential: scale = 40 / p[0]; break;
    case DistributionKind::gamma: scale = 40 * (p[0] + 1) / p[1]; break;
    }
    return std::max(1.0, scale);
}

TensorGrid assemble_tensor_grid(MultiIndex idx, std::vector<int> m, int coeff, std::vector<VectorXd> knots_per_dim,
                                std::vector<VectorXd> weights_per_dim)
{
    const std::size_t dim = idx.size();
    if (m.size() != dim || knots_per_dim.size() != dim || weights_per_dim.size() != dim)
        throw ParameterError("tensor grid fields disagree in dimension");
    for (std::size_t n = 0; n < dim; ++n)
        if (knots_per_dim[n].size() != m[n] || weights_per_dim[n].size() != m[n])
            throw ParameterError("tensor grid rule length does not match m");
    TensorGrid t;
    t.idx = std::move(idx);
    t.m = std::move(m);
    t.coeff = coeff;
    t.knots_per_dim = std::move(knots_per_dim);
    t.weights_per_dim = std::move(weights_per_dim);
    t.knots = tensor_knots(t.knots_per_dim);
    t.weights = tensor_weights(t.weights_per_dim, coeff);
    return t;
}

TensorGrid build_tensor_grid(const MultiIndex& idx, const KnotFamilies& families, LevelMap level_map)
{
    const int dim = static_cast<int>(idx.size());
    check_families(families, dim);
    TensorGrid t;
    t.idx = idx;
    t.m.resize(dim);
    t.knots_per_dim.resize(dim);
    t.weights_per_dim.resize(dim);
    for (int n = 0; n < dim; ++n) {
        if (idx[n] < 1) throw ParameterError("tensor grid levels must be >= 1");
        t.m[n] = level_map(idx[n]);
        Rule1D rule = families[n](t.m[n]);
        t.knots_per_dim[n] = std::move(rule.nodes);
        t.weights_per_dim[n] = std::move(rule.weights);
    }
    t.knots = tensor_knots(t.knots_per_dim);
    t.weights = tensor_weights(t.weights_per_dim, 1);
    return t;
}

SparseGrid build_sparse_grid(const MultiIndexSet& set, const KnotFamilies& families, LevelMap level_map,
                             const SparseGrid* previous)
{
    if (set.empty()) throw ParameterError("cannot build a sparse grid over an empty set");
    if (set.base() != 1) throw ParameterError("sparse grids need a base-1 multi-index set");
    check_families(families, set.dim());
    SparseGrid g;
    g.dim = set.dim();
    g.families = families;
    g.level_map = level_map;
    g.set = set;
    g.set_coeffs = combination_coefficients(set);
    const bool reuse = previous && same_construction(*previous, families, level_map);
    g.tensors = assemble(set, g.set_coeffs, families, level_map, reuse ? &previous->tensors : nullptr);
    return g;
}

SparseGrid build_sparse_grid_from_rule(int dim, double w, const KnotFamilies& families, LevelMap level_map,
                                       const IndexRule& rule, const SparseGrid* previous)
{
    return build_sparse_grid(generate_rule_set(dim, rule, w), families, level_map, previous);
}

std::pair<SparseGrid, ReducedGrid> quick_preset(int dim, int w)
{
    if (dim < 1) throw ParameterError("dimension must be >= 1");
    if (w < 0) throw ParameterError("level must be >= 0");
    auto sm = preset(PresetName::SM);
    SparseGrid g = build_sparse_grid(fast_td_set(dim, w), repeat(KnotFamily::cc(-1, 1), dim), sm.level_map);
    ReducedGrid r = reduce(g);
    return {std::move(g), std::move(r)};
}

SparseGrid add_one_index(const SparseGrid& grid, const MultiIndex& new_idx)
{
    if (grid.set.contains(new_idx)) throw ContractError("index is already part of the set");
    MultiIndexSet set = grid.set.with(new_idx);
    for (int n = 0; n < grid.dim; ++n) {
        if (new_idx[n] <= 1) continue;
        MultiIndex back = new_idx;
        --back[n];
        if (!grid.set.contains(back)) throw ContractError("adding the index breaks downward closedness");
    }

    // Only indices i with new_idx - i in {0,1}^N see their coefficient change,
    // by (-1)^|new_idx - i|.
    std::vector<int> coeffs(set.size(), 0);
    for (std::size_t k = 0; k < grid.set.size(); ++k) coeffs[*set.find(grid.set[k])] = grid.set_coeffs[k];
    coeffs[*set.find(new_idx)] = 1;
    std::vector<int> lowered;
    for (int n = 0; n < grid.dim; ++n)
        if (new_idx[n] > 1) lowered.push_back(n);
    for (unsigned long mask = 1; mask < (1ul << lowered.size()); ++mask) {
        MultiIndex i = new_idx;
        int parity = 0;
        for (std::size_t b = 0; b < lowered.size(); ++b)
            if (mask >> b & 1ul) {
                --i[lowered[b]];
                ++parity;
            }
        coeffs[*set.find(i)] += (parity % 2) ? -1 : 1;
    }

    SparseGrid g;
    g.dim = grid.dim;
    g.families = grid.families;
    g.level_map = grid.level_map;
    g.set = std::move(set);
    g.set_coeffs = std::move(coeffs);
    g.tensors = assemble(g.set, g.set_coeffs, g.families, g.level_map, &grid.tensors);
    return g;
}

ReducedGrid reduce(const SparseGrid& grid, double tol)
{
    if (grid.tensors.empty()) throw ParameterError("cannot reduce an empty grid");
    const int dim = grid.dim;
    VectorXd abs_tol(dim);
    for (int d = 0; d < dim; ++d) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& t : grid.tensors) {
            lo = std::min(lo, t.knots_per_dim[d].minCoeff());
            hi = std::max(hi, t.knots_per_dim[d].maxCoeff());
        }
        abs_tol[d] = tol * std::max(1.0, hi - lo);
    }
    KnotRegistry registry(abs_tol);

    ReducedGrid r;
    r.tol = tol;
    const Index extended = grid.extended_size();
    r.n.resize(extended);
    std::vector<double> weights;
    Index c = 0;
    std::vector<std::vector<int>> ids(dim);
    std::vector<int> key(dim);
    for (const auto& t : grid.tensors) {
        for (int d = 0; d < dim; ++d) {
            ids[d].resize(t.knots_per_dim[d].size());
            for (Index j = 0; j < t.knots_per_dim[d].size(); ++j)
                ids[d][j] = registry.coordinate_id(d, t.knots_per_dim[d][j], true);
        }
        std::vector<Index> j(dim, 0);
        for (Index k = 0; k < t.size(); ++k, ++c) {
            for (int d = 0; d < dim; ++d) key[d] = ids[d][j[d]];
            auto [p, inserted] = registry.insert(key);
            if (inserted) {
                r.m.push_back(c);
                weights.push_back(0.0);
            }
            weights[p] += t.weights[k];
            r.n[c] = p;
            for (int d = 0; d < dim && ++j[d] == t.knots_per_dim[d].size(); ++d) j[d] = 0;
        }
    }
    const MatrixXd ext = grid.extended_knots();
    r.knots.resize(dim, static_cast<Index>(r.m.size()));
    for (Index p = 0; p < r.knots.cols(); ++p) r.knots.col(p) = ext.col(r.m[p]);
    r.weights = Eigen::Map<VectorXd>(weights.data(), static_cast<Index>(weights.size()));
    return r;
}

}  // namespace sparsegrid
