#pragma once

#include "sparsegrid/levels.hpp"
#include "sparsegrid/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sparsegrid {

using MultiIndex = std::vector<int>;

/// Lexicographically sorted set of multi-indices without duplicates.
/// Entries are >= base, with base 1 for level sets and 0 for degree sets.
class MultiIndexSet {
public:
    MultiIndexSet() = default;
    explicit MultiIndexSet(int dim, int base = 1) : dim_(dim), base_(base) {}

    /// Sorts and deduplicates `rows`.
    static MultiIndexSet from_rows(int dim, std::vector<MultiIndex> rows, int base = 1);

    /// Accepts `rows` only if already strictly increasing; throws ContractError otherwise.
    static MultiIndexSet from_sorted_rows(int dim, std::vector<MultiIndex> rows, int base = 1);

    int dim() const { return dim_; }
    int base() const { return base_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const MultiIndex& operator[](std::size_t k) const { return rows_[k]; }
    const std::vector<MultiIndex>& rows() const { return rows_; }
    auto begin() const { return rows_.begin(); }
    auto end() const { return rows_.end(); }

    /// Position of `idx` in the sorted rows.
    std::optional<std::size_t> find(const MultiIndex& idx) const;
    bool contains(const MultiIndex& idx) const { return find(idx).has_value(); }

    /// Copy of this set with `idx` inserted in sorted position.
    MultiIndexSet with(const MultiIndex& idx) const;

    /// Rows as an integer matrix, one index per row.
    Eigen::MatrixXi matrix() const;

    friend bool operator==(const MultiIndexSet&, const MultiIndexSet&) = default;

private:
    void check_row(const MultiIndex& row) const;

    int dim_ = 0;
    int base_ = 1;
    std::vector<MultiIndex> rows_;
};

/// Admissibility rule r(i); a set of level w collects all i with r(i) <= w.
/// Rules are evaluated on prefixes during recursive generation, so they must
/// accept indices shorter than the full dimension.
using IndexRule = std::function<double(const MultiIndex&)>;

/// All i >= base with rule(i) <= w. The rule must be non-decreasing in every
/// entry and satisfy r(j) > w  =>  r([j, base]) > w.
MultiIndexSet generate_rule_set(int dim, const IndexRule& rule, double w, int base = 1);

/// Box {i : base <= i <= jj}.
MultiIndexSet box_set(const MultiIndex& jj, int base = 1);

/// Total-degree set {i >= 1 : sum(i - 1) <= w}, enumerated directly.
MultiIndexSet fast_td_set(int dim, int w);

/// Anisotropic rules; g may be empty (all ones) and only its first
/// prefix-length entries are consulted.
IndexRule rule_sum(std::vector<double> g = {});
IndexRule rule_max(std::vector<double> g = {});
IndexRule rule_prod(std::vector<double> g = {});

enum class PresetName { TP, TD, HC, SM };

struct Preset {
    IndexRule rule;
    LevelMap level_map;
};

Preset preset(PresetName name, std::vector<double> g = {});
PresetName preset_name_from_string(const std::string& name);
std::string to_string(PresetName name);

bool is_downward_closed(const MultiIndexSet& set);

/// Indices outside the set whose backward neighbours all belong to it.
MultiIndexSet reduced_margin(const MultiIndexSet& set);

/// Combination-technique coefficient of every row of a downward-closed set,
/// aligned with set.rows(); zero coefficients are kept.
std::vector<int> combination_coefficients(const MultiIndexSet& set);

}  // namespace sparsegrid
