#include "sparsegrid/midx.hpp"

#include <algorithm>
#include <cmath>

namespace sparsegrid {

namespace {

constexpr int kRuleSearchLimit = 1 << 20;

std::string format(const MultiIndex& idx)
{
    std::string s = "[";
    for (std::size_t n = 0; n < idx.size(); ++n) s += (n ? "," : "") + std::to_string(idx[n]);
    return s + "]";
}

void require_downward_closed(const MultiIndexSet& set, const char* what)
{
    if (!is_downward_closed(set)) throw ContractError(std::string(what) + " requires a downward-closed set");
}

double g_at(const std::vector<double>& g, std::size_t n) { return n < g.size() ? g[n] : 1.0; }

}  // namespace

void MultiIndexSet::check_row(const MultiIndex& row) const
{
    if (static_cast<int>(row.size()) != dim_)
        throw ParameterError("multi-index " + format(row) + " does not have dimension " + std::to_string(dim_));
    for (int v : row)
        if (v < base_) throw ParameterError("multi-index " + format(row) + " has entries below the base");
}

MultiIndexSet MultiIndexSet::from_rows(int dim, std::vector<MultiIndex> rows, int base)
{
    MultiIndexSet set(dim, base);
    for (const auto& r : rows) set.check_row(r);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    set.rows_ = std::move(rows);
    return set;
}

MultiIndexSet MultiIndexSet::from_sorted_rows(int dim, std::vector<MultiIndex> rows, int base)
{
    MultiIndexSet set(dim, base);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        set.check_row(rows[k]);
        if (k > 0 && !(rows[k - 1] < rows[k]))
            throw ContractError("multi-index set rows must be sorted lexicographically without duplicates "
                                "(first offending row " +
                                format(rows[k]) + "); sort the rows first");
    }
    set.rows_ = std::move(rows);
    return set;
}

std::optional<std::size_t> MultiIndexSet::find(const MultiIndex& idx) const
{
    auto it = std::lower_bound(rows_.begin(), rows_.end(), idx);
    if (it == rows_.end() || *it != idx) return std::nullopt;
    return static_cast<std::size_t>(it - rows_.begin());
}

MultiIndexSet MultiIndexSet::with(const MultiIndex& idx) const
{
    check_row(idx);
    MultiIndexSet out = *this;
    auto it = std::lower_bound(out.rows_.begin(), out.rows_.end(), idx);
    if (it == out.rows_.end() || *it != idx) out.rows_.insert(it, idx);
    return out;
}

Eigen::MatrixXi MultiIndexSet::matrix() const
{
    Eigen::MatrixXi m(static_cast<Index>(rows_.size()), dim_);
    for (std::size_t k = 0; k < rows_.size(); ++k)
        for (int n = 0; n < dim_; ++n) m(static_cast<Index>(k), n) = rows_[k][n];
    return m;
}

MultiIndexSet generate_rule_set(int dim, const IndexRule& rule, double w, int base)
{
    if (dim < 1) throw ParameterError("dimension must be >= 1");
    if (base != 0 && base != 1) throw ParameterError("base must be 0 or 1");
    std::vector<MultiIndex> rows;
    MultiIndex prefix;
    prefix.reserve(dim);
    std::function<void()> recurse = [&]() {
        const auto n = static_cast<int>(prefix.size());
        for (int k = base;; ++k) {
            if (k - base > kRuleSearchLimit)
                throw ContractError("index rule does not grow along dimension " + std::to_string(n + 1));
            prefix.push_back(k);
            const bool admissible = rule(prefix) <= w;
            if (admissible) {
                if (n + 1 == dim)
                    rows.push_back(prefix);
                else
                    recurse();
            }
            prefix.pop_back();
            if (!admissible) break;
        }
    };
    recurse();
    return MultiIndexSet::from_sorted_rows(dim, std::move(rows), base);
}

MultiIndexSet box_set(const MultiIndex& jj, int base)
{
    const int dim = static_cast<int>(jj.size());
    if (dim < 1) throw ParameterError("box corner must have at least one entry");
    for (int v : jj)
        if (v < base) throw ParameterError("box corner " + format(jj) + " has entries below the base");
    std::vector<MultiIndex> rows;
    MultiIndex idx(dim, base);
    for (;;) {
        rows.push_back(idx);
        int p = dim - 1;
        while (p >= 0 && idx[p] == jj[p]) idx[p--] = base;
        if (p < 0) break;
        ++idx[p];
    }
    return MultiIndexSet::from_sorted_rows(dim, std::move(rows), base);
}

MultiIndexSet fast_td_set(int dim, int w)
{
    if (dim < 1) throw ParameterError("dimension must be >= 1");
    if (w < 0) throw ParameterError("level must be >= 0");
    std::vector<MultiIndex> rows;
    MultiIndex idx(dim, 1);
    int used = 0;
    for (;;) {
        rows.push_back(idx);
        int p = dim - 1;
        for (;;) {
            if (used < w) {
                ++idx[p];
                ++used;
                break;
            }
            used -= idx[p] - 1;
            idx[p] = 1;
            if (--p < 0) return MultiIndexSet::from_sorted_rows(dim, std::move(rows));
        }
    }
}

IndexRule rule_sum(std::vector<double> g)
{
    return [g = std::move(g)](const MultiIndex& i) {
        double r = 0;
        for (std::size_t n = 0; n < i.size(); ++n) r += g_at(g, n) * (i[n] - 1);
        return r;
    };
}

IndexRule rule_max(std::vector<double> g)
{
    return [g = std::move(g)](const MultiIndex& i) {
        double r = 0;
        for (std::size_t n = 0; n < i.size(); ++n) r = std::max(r, g_at(g, n) * (i[n] - 1));
        return r;
    };
}

IndexRule rule_prod(std::vector<double> g)
{
    return [g = std::move(g)](const MultiIndex& i) {
        double r = 1;
        for (std::size_t n = 0; n < i.size(); ++n) r *= std::pow(static_cast<double>(i[n]), g_at(g, n));
        return r;
    };
}

Preset preset(PresetName name, std::vector<double> g)
{
    switch (name) {
    case PresetName::TP: return {rule_max(std::move(g)), LevelMap::linear()};
    case PresetName::TD: return {rule_sum(std::move(g)), LevelMap::linear()};
    case PresetName::HC: return {rule_prod(std::move(g)), LevelMap::linear()};
    case PresetName::SM: return {rule_sum(std::move(g)), LevelMap::doubling()};
    }
    throw ParameterError("unknown preset");
}

std::string to_string(PresetName name)
{
    switch (name) {
    case PresetName::TP: return "TP";
    case PresetName::TD: return "TD";
    case PresetName::HC: return "HC";
    case PresetName::SM: return "SM";
    }
    return "?";
}

PresetName preset_name_from_string(const std::string& name)
{
    for (auto p : {PresetName::TP, PresetName::TD, PresetName::HC, PresetName::SM})
        if (to_string(p) == name) return p;
    throw ParameterError("unknown preset '" + name + "' (expected TP, TD, HC or SM)");
}

bool is_downward_closed(const MultiIndexSet& set)
{
    for (const auto& k : set) {
        MultiIndex back = k;
        for (int n = 0; n < set.dim(); ++n) {
            if (k[n] <= set.base()) continue;
            --back[n];
            const bool ok = set.contains(back);
            ++back[n];
            if (!ok) return false;
        }
    }
    return true;
}

MultiIndexSet reduced_margin(const MultiIndexSet& set)
{
    require_downward_closed(set, "reduced_margin");
    std::vector<MultiIndex> out;
    for (const auto& i : set) {
        for (int n = 0; n < set.dim(); ++n) {
            MultiIndex cand = i;
            ++cand[n];
            if (set.contains(cand)) continue;
            bool admissible = true;
            for (int d = 0; d < set.dim() && admissible; ++d) {
                if (cand[d] <= set.base()) continue;
                --cand[d];
                admissible = set.contains(cand);
                ++cand[d];
            }
            if (admissible) out.push_back(std::move(cand));
        }
    }
    return MultiIndexSet::from_rows(set.dim(), std::move(out), set.base());
}

std::vector<int> combination_coefficients(const MultiIndexSet& set)
{
    require_downward_closed(set, "combination_coefficients");
    std::vector<int> coeffs(set.size(), 0);
    std::vector<int> forward;
    for (std::size_t k = 0; k < set.size(); ++k) {
        const MultiIndex& i = set[k];
        // In a downward-closed set i + j can only be present if every i + e_n
        // with j_n = 1 is present, so only those directions are enumerated.
        forward.clear();
        MultiIndex probe = i;
        for (int n = 0; n < set.dim(); ++n) {
            ++probe[n];
            if (set.contains(probe)) forward.push_back(n);
            --probe[n];
        }
        if (forward.size() > 30) throw UnsupportedError("too many forward neighbours for coefficient enumeration");
        int c = 0;
        const unsigned long subsets = 1ul << forward.size();
        for (unsigned long mask = 0; mask < subsets; ++mask) {
            int parity = 0;
            for (std::size_t b = 0; b < forward.size(); ++b) {
                if (mask >> b & 1ul) {
                    ++probe[forward[b]];
                    ++parity;
                }
            }
            if (set.contains(probe)) c += (parity % 2) ? -1 : 1;
            probe = i;
        }
        coeffs[k] = c;
    }
    return coeffs;
}

}  // namespace sparsegrid
