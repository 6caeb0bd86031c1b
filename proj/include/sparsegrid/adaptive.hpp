#pragma once

#include "sparsegrid/evalkit.hpp"

#include <functional>
#include <map>
#include <string>

namespace sparsegrid {

enum class ProfitKind {
    deltaint,
    deltaint_per_new_points,
    Linf,
    Linf_per_new_points,
    weighted_Linf,
    weighted_Linf_per_new_points
};

std::string to_string(ProfitKind kind);
ProfitKind profit_kind_from_string(const std::string& name);

struct AdaptControls {
    bool nested = true;
    ProfitKind profit = ProfitKind::Linf_per_new_points;
    std::function<double(const VectorXd&)> pdf_weight;
    Index max_pts = 1000;
    double prof_tol = 1e-14;
    int var_buffer_size = 0;
    int threads = 0;
    double dedup_tol = kDefaultDedupTol;

    void validate() const;
};

/// Every point at which f has been evaluated, keyed up to tolerance.
class KnotStore {
public:
    KnotStore() = default;
    KnotStore(const KnotFamilies& families, double tol);

    /// Values at the columns of `points`; unseen points are evaluated (in one
    /// batch) and recorded.
    MatrixXd fetch(const VectorFunction& f, const MatrixXd& points, int threads);

    Index size() const { return static_cast<Index>(knots_.size()); }
    Index evaluations() const { return evaluations_; }
    MatrixXd knots() const;
    MatrixXd values() const;

    /// Re-populate from saved arrays.
    void restore(const MatrixXd& knots, const MatrixXd& values, Index evaluations);

    /// Value at an already stored point; throws when absent.
    VectorXd at(const Eigen::Ref<const VectorXd>& y) const;

private:
    VectorXd tol_;
    KnotRegistry registry_;
    std::vector<VectorXd> knots_;
    std::vector<VectorXd> values_;
    Index evaluations_ = 0;
};

/// Shared context for indicator evaluation: the target, the grid
/// construction, the store and per-index tensor caches.
class AdaptWorkspace {
public:
    AdaptWorkspace(VectorFunction f, KnotFamilies families, LevelMap level_map, double tol, int threads);

    const TensorGrid& tensor(const MultiIndex& idx);
    const MatrixXd& tensor_values(const MultiIndex& idx);
    const VectorXd& tensor_quadrature(const MultiIndex& idx);

    /// Knots of the tensor grid of idx whose every coordinate is new at its level.
    MatrixXd new_knots(const MultiIndex& idx);

    KnotStore& store() { return store_; }
    const KnotFamilies& families() const { return families_; }
    LevelMap level_map() const { return level_map_; }
    const VectorFunction& function() const { return f_; }
    int threads() const { return threads_; }

private:
    struct Entry {
        TensorGrid grid;
        MatrixXd values;
        VectorXd quadrature;
        bool has_values = false;
        bool has_quadrature = false;
    };
    Entry& entry(const MultiIndex& idx);

    VectorFunction f_;
    KnotFamilies families_;
    LevelMap level_map_;
    int threads_;
    KnotStore store_;
    std::map<MultiIndex, Entry> cache_;
};

/// |Q_{I+i} - Q_I| for any downward-closed I admitting i, computed from the
/// detail operator of i; vector outputs reduce by the max norm.
double error_indicator_quad(const MultiIndex& idx, AdaptWorkspace& ws);

/// max over test points of |U_{I+i} - U_I| * xi. Test points are the new
/// knots of i (nested) or the whole tensor grid of i (non-nested).
double error_indicator_point(const MultiIndex& idx, AdaptWorkspace& ws, bool nested,
                             const std::function<double(const VectorXd&)>& weight = {});

/// Product of m(i_n) - m(i_n - 1) (nested) or of m(i_n) (non-nested).
double work_indicator(const MultiIndex& idx, bool nested, LevelMap level_map);

struct AdaptState {
    MultiIndexSet set;
    MultiIndexSet margin;
    std::vector<double> margin_profits;
    std::vector<MultiIndex> history;
    std::vector<double> history_profits;
    MatrixXd store_knots;
    MatrixXd store_values;
    Index num_evals = 0;
};

struct AdaptResult {
    int dim = 0;
    SparseGrid extended;
    ReducedGrid reduced;
    MatrixXd values;
    Index nb_pts = 0;
    bool nested = true;
    Index nb_pts_visited = 0;
    Index num_evals = 0;
    VectorXd intf;
    AdaptState internal;
};

/// Dimension-adaptive sparse grid. Starts from {[1,...,1]} (or continues
/// `previous`) and repeatedly moves the most profitable margin index into the
/// set until the profits fall to prof_tol or more than max_pts points have
/// been visited. The returned grid spans the set and its reduced margin.
AdaptResult adapt(const VectorFunction& f, int dim, const KnotFamilies& families, LevelMap level_map,
                  const AdaptControls& controls, const AdaptResult* previous = nullptr);

}  // namespace sparsegrid
