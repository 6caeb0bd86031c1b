#pragma once

#include "sparsegrid/knots.hpp"
#include "sparsegrid/levels.hpp"
#include "sparsegrid/midx.hpp"

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sparsegrid {

using KnotFamilies = std::vector<KnotFamily>;

/// The same family repeated over `dim` dimensions.
KnotFamilies repeat(const KnotFamily& family, int dim);

/// Tensor grid of a single multi-index. Knot columns unroll the per-dimension
/// lists with the first dimension varying fastest. Weights already carry the
/// combination coefficient.
struct TensorGrid {
    MultiIndex idx;
    std::vector<int> m;
    int coeff = 1;
    std::vector<VectorXd> knots_per_dim;
    std::vector<VectorXd> weights_per_dim;
    MatrixXd knots;
    VectorXd weights;

    Index size() const { return knots.cols(); }
    int dim() const { return static_cast<int>(idx.size()); }
};

/// Sparse grid in extended format: one tensor grid per index with nonzero
/// combination coefficient, sorted by index.
struct SparseGrid {
    int dim = 0;
    KnotFamilies families;
    LevelMap level_map;
    MultiIndexSet set;
    std::vector<int> set_coeffs;
    std::vector<TensorGrid> tensors;

    Index extended_size() const;
    /// First extended column of every tensor, plus the total at the end.
    std::vector<Index> offsets() const;
    MatrixXd extended_knots() const;
    VectorXd extended_weights() const;
};

/// Deduplicated knots. m maps each reduced knot to its first occurrence in the
/// extended ordering; n maps every extended knot to its reduced representative.
struct ReducedGrid {
    MatrixXd knots;
    VectorXd weights;
    std::vector<Index> m;
    std::vector<Index> n;
    double tol = 1e-14;

    Index size() const { return knots.cols(); }
    int dim() const { return static_cast<int>(knots.rows()); }
};

constexpr double kDefaultDedupTol = 1e-14;

/// Registry of points identified up to a per-dimension absolute tolerance.
/// Coordinates snap to the nearest registered value within tolerance; points
/// are keyed by their tuple of snapped coordinate ids.
class KnotRegistry {
public:
    KnotRegistry() = default;
    explicit KnotRegistry(VectorXd abs_tol);

    int dim() const { return static_cast<int>(tol_.size()); }
    Index size() const { return static_cast<Index>(points_.size()); }

    /// Coordinate id in dimension d, or -1 when `insert` is false and the value is new.
    int coordinate_id(int d, double value, bool insert);

    std::optional<Index> find(const std::vector<int>& key) const;
    std::optional<Index> find(const Eigen::Ref<const VectorXd>& y) const;
    /// Existing id or the next fresh one; the bool reports whether it was inserted.
    std::pair<Index, bool> insert(const std::vector<int>& key);
    std::pair<Index, bool> insert(const Eigen::Ref<const VectorXd>& y);

private:
    struct KeyHash {
        std::size_t operator()(const std::vector<int>& k) const noexcept;
    };
    int lookup(int d, double value) const;

    VectorXd tol_;
    std::vector<std::map<double, int>> coords_;
    std::unordered_map<std::vector<int>, Index, KeyHash> points_;
};

/// Scale used to turn the relative dedup tolerance into an absolute one for a
/// family whose knots are not known in advance (support width, or a 20-sigma
/// style spread for unbounded laws), at least 1.
double coordinate_scale(const KnotFamily& family);

/// Tensor grid from stored per-dimension rules; knots and coefficient-scaled
/// weights are rebuilt exactly as build_tensor_grid would.
TensorGrid assemble_tensor_grid(MultiIndex idx, std::vector<int> m, int coeff, std::vector<VectorXd> knots_per_dim,
                                std::vector<VectorXd> weights_per_dim);

TensorGrid build_tensor_grid(const MultiIndex& idx, const KnotFamilies& families, LevelMap level_map);

/// Extended sparse grid over a downward-closed set. Tensor grids of `previous`
/// with matching index are reused when families and level map agree.
SparseGrid build_sparse_grid(const MultiIndexSet& set, const KnotFamilies& families, LevelMap level_map,
                             const SparseGrid* previous = nullptr);

SparseGrid build_sparse_grid_from_rule(int dim, double w, const KnotFamilies& families, LevelMap level_map,
                                       const IndexRule& rule, const SparseGrid* previous = nullptr);

/// Smolyak grid of level w with Clenshaw-Curtis knots on [-1, 1]^dim.
std::pair<SparseGrid, ReducedGrid> quick_preset(int dim, int w);

/// Grid over grid.set plus one index, updating only the affected coefficients.
SparseGrid add_one_index(const SparseGrid& grid, const MultiIndex& new_idx);

ReducedGrid reduce(const SparseGrid& grid, double tol = kDefaultDedupTol);

}  // namespace sparsegrid
