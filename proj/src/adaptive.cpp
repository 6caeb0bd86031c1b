#include "sparsegrid/adaptive.hpp"

#include <algorithm>
#include <cmath>

namespace sparsegrid {

namespace {

bool weighted(ProfitKind k)
{
    return k == ProfitKind::weighted_Linf || k == ProfitKind::weighted_Linf_per_new_points;
}

bool per_new_points(ProfitKind k)
{
    return k == ProfitKind::deltaint_per_new_points || k == ProfitKind::Linf_per_new_points ||
           k == ProfitKind::weighted_Linf_per_new_points;
}

bool quadrature_based(ProfitKind k) { return k == ProfitKind::deltaint || k == ProfitKind::deltaint_per_new_points; }

// Calls visit(j, sign) for every j = idx - k, k in {0,1}^N, j >= 1.
template <typename Visit>
void for_each_detail_term(const MultiIndex& idx, Visit&& visit)
{
    std::vector<int> lowered;
    for (std::size_t n = 0; n < idx.size(); ++n)
        if (idx[n] > 1) lowered.push_back(static_cast<int>(n));
    for (unsigned long mask = 0; mask < (1ul << lowered.size()); ++mask) {
        MultiIndex j = idx;
        int parity = 0;
        for (std::size_t b = 0; b < lowered.size(); ++b)
            if (mask >> b & 1ul) {
                --j[lowered[b]];
                ++parity;
            }
        visit(j, parity % 2 ? -1.0 : 1.0);
    }
}

VectorXd absolute_tolerances(const KnotFamilies& families, double tol)
{
    VectorXd abs_tol(static_cast<Index>(families.size()));
    for (std::size_t n = 0; n < families.size(); ++n) abs_tol[static_cast<Index>(n)] = tol * coordinate_scale(families[n]);
    return abs_tol;
}

int visible_dims(const MultiIndexSet& set, int buffer)
{
    if (buffer <= 0) return set.dim();
    int highest = 0;
    for (const auto& i : set)
        for (int n = 0; n < set.dim(); ++n)
            if (i[n] > 1) highest = std::max(highest, n + 1);
    return std::min(set.dim(), highest + buffer);
}

MultiIndexSet restrict_to(const MultiIndexSet& margin, int visible)
{
    std::vector<MultiIndex> rows;
    for (const auto& r : margin) {
        bool ok = true;
        for (int n = visible; n < margin.dim() && ok; ++n) ok = r[n] == 1;
        if (ok) rows.push_back(r);
    }
    return MultiIndexSet::from_sorted_rows(margin.dim(), std::move(rows));
}

MultiIndexSet merge(const MultiIndexSet& a, const MultiIndexSet& b)
{
    std::vector<MultiIndex> rows(a.rows());
    rows.insert(rows.end(), b.rows().begin(), b.rows().end());
    return MultiIndexSet::from_rows(a.dim(), std::move(rows));
}

}  // namespace

std::string to_string(ProfitKind kind)
{
    switch (kind) {
    case ProfitKind::deltaint: return "deltaint";
    case ProfitKind::deltaint_per_new_points: return "deltaint_per_new_points";
    case ProfitKind::Linf: return "Linf";
    case ProfitKind::Linf_per_new_points: return "Linf_per_new_points";
    case ProfitKind::weighted_Linf: return "weighted_Linf";
    case ProfitKind::weighted_Linf_per_new_points: return "weighted_Linf_per_new_points";
    }
    return "?";
}

ProfitKind profit_kind_from_string(const std::string& name)
{
    for (auto k : {ProfitKind::deltaint, ProfitKind::deltaint_per_new_points, ProfitKind::Linf,
                   ProfitKind::Linf_per_new_points, ProfitKind::weighted_Linf,
                   ProfitKind::weighted_Linf_per_new_points})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown profit '" + name + "'");
}

void AdaptControls::validate() const
{
    if (max_pts < 1) throw ParameterError("max_pts must be >= 1");
    if (!(prof_tol >= 0)) throw ParameterError("prof_tol must be >= 0");
    if (var_buffer_size < 0) throw ParameterError("var_buffer_size must be >= 0");
    if (weighted(profit) && !pdf_weight) throw ParameterError(to_string(profit) + " profit needs a pdf weight");
}

KnotStore::KnotStore(const KnotFamilies& families, double tol)
    : tol_(absolute_tolerances(families, tol)), registry_(tol_)
{
}

MatrixXd KnotStore::fetch(const VectorFunction& f, const MatrixXd& points, int threads)
{
    const Index count = points.cols();
    std::vector<Index> slot(count, -1);
    std::vector<Index> pending;  // columns of `points` to evaluate
    std::vector<Index> pending_of(count, -1);
    KnotRegistry batch_registry(tol_);
    for (Index c = 0; c < count; ++c) {
        if (auto hit = registry_.find(points.col(c))) {
            slot[c] = *hit;
            continue;
        }
        auto [match, inserted] = batch_registry.insert(points.col(c));
        if (inserted) pending.push_back(c);
        pending_of[c] = match;
    }

    if (!pending.empty()) {
        MatrixXd batch(points.rows(), static_cast<Index>(pending.size()));
        for (std::size_t k = 0; k < pending.size(); ++k) batch.col(static_cast<Index>(k)) = points.col(pending[k]);
        const MatrixXd fresh = evaluate_points(f, batch, threads);
        if (!values_.empty() && fresh.rows() != values_.front().size())
            throw EvaluationError("function output length changed", batch.col(0));
        std::vector<Index> fresh_slot(pending.size());
        for (std::size_t k = 0; k < pending.size(); ++k) {
            auto [id, inserted] = registry_.insert(batch.col(static_cast<Index>(k)));
            if (inserted) {
                knots_.push_back(batch.col(static_cast<Index>(k)));
                values_.push_back(fresh.col(static_cast<Index>(k)));
            }
            fresh_slot[k] = id;
        }
        evaluations_ += static_cast<Index>(pending.size());
        for (Index c = 0; c < count; ++c)
            if (slot[c] < 0) slot[c] = fresh_slot[pending_of[c]];
    }

    MatrixXd out(values_.front().size(), count);
    for (Index c = 0; c < count; ++c) out.col(c) = values_[slot[c]];
    return out;
}

MatrixXd KnotStore::knots() const
{
    MatrixXd out(registry_.dim(), size());
    for (Index c = 0; c < size(); ++c) out.col(c) = knots_[c];
    return out;
}

MatrixXd KnotStore::values() const
{
    if (values_.empty()) return MatrixXd(0, 0);
    MatrixXd out(values_.front().size(), size());
    for (Index c = 0; c < size(); ++c) out.col(c) = values_[c];
    return out;
}

void KnotStore::restore(const MatrixXd& knots, const MatrixXd& values, Index evaluations)
{
    if (knots.cols() != values.cols()) throw ParameterError("stored knots and values disagree in count");
    if (knots.cols() > 0 && knots.rows() != registry_.dim()) throw ParameterError("stored knots have the wrong dimension");
    for (Index c = 0; c < knots.cols(); ++c) {
        auto [id, inserted] = registry_.insert(knots.col(c));
        if (inserted) {
            knots_.push_back(knots.col(c));
            values_.push_back(values.col(c));
        }
    }
    evaluations_ = evaluations;
}

VectorXd KnotStore::at(const Eigen::Ref<const VectorXd>& y) const
{
    auto hit = registry_.find(y);
    if (!hit) throw ContractError("point was never evaluated");
    return values_[*hit];
}

AdaptWorkspace::AdaptWorkspace(VectorFunction f, KnotFamilies families, LevelMap level_map, double tol, int threads)
    : f_(std::move(f)), families_(std::move(families)), level_map_(level_map), threads_(threads),
      store_(families_, tol)
{
}

AdaptWorkspace::Entry& AdaptWorkspace::entry(const MultiIndex& idx)
{
    auto it = cache_.find(idx);
    if (it == cache_.end()) {
        Entry e;
        e.grid = build_tensor_grid(idx, families_, level_map_);
        it = cache_.emplace(idx, std::move(e)).first;
    }
    return it->second;
}

const TensorGrid& AdaptWorkspace::tensor(const MultiIndex& idx) { return entry(idx).grid; }

const MatrixXd& AdaptWorkspace::tensor_values(const MultiIndex& idx)
{
    Entry& e = entry(idx);
    if (!e.has_values) {
        e.values = store_.fetch(f_, e.grid.knots, threads_);
        e.has_values = true;
    }
    return e.values;
}

const VectorXd& AdaptWorkspace::tensor_quadrature(const MultiIndex& idx)
{
    Entry& e = entry(idx);
    if (!e.has_quadrature) {
        e.quadrature = tensor_values(idx) * e.grid.weights;
        e.has_quadrature = true;
    }
    return e.quadrature;
}

MatrixXd AdaptWorkspace::new_knots(const MultiIndex& idx)
{
    const TensorGrid& t = tensor(idx);
    const int dim = t.dim();
    std::vector<VectorXd> fresh(dim);
    for (int n = 0; n < dim; ++n) {
        const VectorXd& nodes = t.knots_per_dim[n];
        const double tol = kDefaultDedupTol * coordinate_scale(families_[n]);
        VectorXd previous;
        if (idx[n] > 1) previous = families_[n](level_map_(idx[n] - 1)).nodes;
        std::vector<double> keep;
        for (Index j = 0; j < nodes.size(); ++j) {
            bool seen = false;
            for (Index k = 0; k < previous.size() && !seen; ++k) seen = std::abs(previous[k] - nodes[j]) <= tol;
            if (!seen) keep.push_back(nodes[j]);
        }
        fresh[n] = Eigen::Map<VectorXd>(keep.data(), static_cast<Index>(keep.size()));
    }
    Index total = 1;
    for (const auto& v : fresh) total *= v.size();
    MatrixXd out(dim, total);
    std::vector<Index> j(dim, 0);
    for (Index c = 0; c < total; ++c) {
        for (int n = 0; n < dim; ++n) out(n, c) = fresh[n][j[n]];
        for (int n = 0; n < dim && ++j[n] == fresh[n].size(); ++n) j[n] = 0;
    }
    return out;
}

double error_indicator_quad(const MultiIndex& idx, AdaptWorkspace& ws)
{
    VectorXd detail;
    for_each_detail_term(idx, [&](const MultiIndex& j, double sign) {
        const VectorXd& q = ws.tensor_quadrature(j);
        if (detail.size() == 0) detail = VectorXd::Zero(q.size());
        detail += sign * q;
    });
    return detail.cwiseAbs().maxCoeff();
}

double error_indicator_point(const MultiIndex& idx, AdaptWorkspace& ws, bool nested,
                             const std::function<double(const VectorXd&)>& weight)
{
    const MatrixXd test = nested ? ws.new_knots(idx) : ws.tensor(idx).knots;
    if (test.cols() == 0) return 0.0;
    MatrixXd detail;
    for_each_detail_term(idx, [&](const MultiIndex& j, double sign) {
        MatrixXd u = interpolate_tensor(ws.tensor(j), ws.tensor_values(j), test);
        if (detail.size() == 0) detail = MatrixXd::Zero(u.rows(), u.cols());
        detail += sign * u;
    });
    double best = 0.0;
    for (Index c = 0; c < test.cols(); ++c) {
        const double xi = weight ? weight(test.col(c)) : 1.0;
        best = std::max(best, detail.col(c).cwiseAbs().maxCoeff() * xi);
    }
    return best;
}

double work_indicator(const MultiIndex& idx, bool nested, LevelMap level_map)
{
    double w = 1.0;
    for (int i : idx) {
        if (i < 1) throw ParameterError("work indicator needs levels >= 1");
        w *= nested ? level_map(i) - level_map(i - 1) : level_map(i);
    }
    return w;
}

AdaptResult adapt(const VectorFunction& f, int dim, const KnotFamilies& families, LevelMap level_map,
                  const AdaptControls& controls, const AdaptResult* previous)
{
    controls.validate();
    if (dim < 1) throw ParameterError("dimension must be >= 1");
    if (static_cast<int>(families.size()) != dim)
        throw ParameterError("expected one knot family per dimension");
    if (controls.nested)
        for (const auto& fam : families)
            if (!fam.nested()) throw ParameterError(to_string(fam.kind()) + " knots are not nested");

    AdaptWorkspace ws(f, families, level_map, controls.dedup_tol, controls.threads);
    AdaptState state;
    if (previous) {
        if (previous->dim != dim) throw ParameterError("previous adaptive result has a different dimension");
        state = previous->internal;
        ws.store().restore(state.store_knots, state.store_values, state.num_evals);
    } else {
        state.set = MultiIndexSet::from_rows(dim, {MultiIndex(dim, 1)});
        ws.tensor_values(state.set[0]);
    }

    std::map<MultiIndex, double> profits;
    auto profit_of = [&](const MultiIndex& r) {
        auto it = profits.find(r);
        if (it != profits.end()) return it->second;
        double e = quadrature_based(controls.profit)
                       ? error_indicator_quad(r, ws)
                       : error_indicator_point(r, ws, controls.nested,
                                               weighted(controls.profit) ? controls.pdf_weight : nullptr);
        if (per_new_points(controls.profit)) e /= work_indicator(r, controls.nested, level_map);
        profits.emplace(r, e);
        return e;
    };

    for (;;) {
        state.margin = restrict_to(reduced_margin(state.set), visible_dims(state.set, controls.var_buffer_size));
        state.margin_profits.clear();
        for (const auto& r : state.margin) state.margin_profits.push_back(profit_of(r));
        if (state.margin.empty()) break;

        std::size_t best = 0;
        for (std::size_t k = 1; k < state.margin.size(); ++k) {
            const double p = state.margin_profits[k], q = state.margin_profits[best];
            if (p > q && p - q > 1e-12 * std::max(std::abs(p), std::abs(q))) best = k;
        }
        if (state.margin_profits[best] <= controls.prof_tol) break;
        if (ws.store().size() > controls.max_pts) break;

        state.history.push_back(state.margin[best]);
        state.history_profits.push_back(state.margin_profits[best]);
        state.set = state.set.with(state.margin[best]);
    }

    AdaptResult out;
    out.dim = dim;
    out.nested = controls.nested;
    const bool reuse = previous && previous->extended.families == families && previous->extended.level_map == level_map;
    out.extended = build_sparse_grid(merge(state.set, state.margin), families, level_map,
                                     reuse ? &previous->extended : nullptr);
    out.reduced = reduce(out.extended, controls.dedup_tol);
    out.values.resize(ws.store().values().rows(), out.reduced.size());
    for (Index p = 0; p < out.reduced.size(); ++p) out.values.col(p) = ws.store().at(out.reduced.knots.col(p));
    out.intf = quadrature(out.values, out.reduced);
    out.nb_pts = out.reduced.size();
    out.nb_pts_visited = ws.store().size();
    out.num_evals = ws.store().evaluations();
    state.store_knots = ws.store().knots();
    state.store_values = ws.store().values();
    state.num_evals = out.num_evals;
    out.internal = std::move(state);
    return out;
}

}  // namespace sparsegrid
