#include "sparsegrid/io.hpp"

#include "sparsegrid/evalkit.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace sparsegrid {

using nlohmann::json;

namespace {

// JSON has no inf/nan literals; they travel as strings.
json number(double x)
{
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double to_double(const json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw FormatError("expected a number, got " + j.dump());
}

json vector_json(const VectorXd& v)
{
    json a = json::array();
    for (Index k = 0; k < v.size(); ++k) a.push_back(number(v[k]));
    return a;
}

VectorXd vector_from(const json& a)
{
    VectorXd v(static_cast<Index>(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) v[static_cast<Index>(k)] = to_double(a[k]);
    return v;
}

json doubles_json(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::vector<double> doubles_from(const json& a)
{
    std::vector<double> v;
    v.reserve(a.size());
    for (const auto& x : a) v.push_back(to_double(x));
    return v;
}

// Matrices are written one column (point) per entry.
json columns_json(const MatrixXd& m)
{
    json a = json::array();
    for (Index j = 0; j < m.cols(); ++j) a.push_back(vector_json(m.col(j)));
    return a;
}

MatrixXd columns_from(const json& a, Index rows)
{
    MatrixXd m(rows, static_cast<Index>(a.size()));
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].size() != static_cast<std::size_t>(rows))
            throw FormatError("column " + std::to_string(j) + " has " + std::to_string(a[j].size()) +
                              " entries, expected " + std::to_string(rows));
        m.col(static_cast<Index>(j)) = vector_from(a[j]);
    }
    return m;
}

json set_json(const MultiIndexSet& set)
{
    json a = json::array();
    for (const auto& row : set) a.push_back(row);
    return a;
}

MultiIndexSet set_from(const json& a, int dim, int base)
{
    std::vector<MultiIndex> rows;
    rows.reserve(a.size());
    for (const auto& r : a) {
        rows.push_back(r.get<MultiIndex>());
        if (static_cast<int>(rows.back().size()) != dim) throw FormatError("multi-index of wrong length");
    }
    try {
        return MultiIndexSet::from_sorted_rows(dim, std::move(rows), base);
    } catch (const std::logic_error& e) {
        throw FormatError(std::string("invalid multi-index set: ") + e.what());
    }
}

json dist_json(const DistributionSpec& d)
{
    return {{"distribution", to_string(d.kind)}, {"params", doubles_json(d.params)}};
}

DistributionSpec dist_from(const json& j)
{
    DistributionSpec d;
    d.kind = distribution_kind_from_string(j.at("distribution").get<std::string>());
    d.params = doubles_from(j.at("params"));
    d.validate();
    return d;
}

json family_json(const KnotFamily& f)
{
    json j = dist_json(f.distribution());
    j["kind"] = to_string(f.kind());
    j["variant"] = to_string(f.variant());
    return j;
}

KnotFamily family_from(const json& j)
{
    return KnotFamily(knot_kind_from_string(j.at("kind").get<std::string>()), dist_from(j),
                      leja_variant_from_string(j.value("variant", std::string("standard"))));
}

json adapt_json(const AdaptState& s)
{
    return {{"set", set_json(s.set)},
            {"margin", set_json(s.margin)},
            {"margin_profits", doubles_json(s.margin_profits)},
            {"history", s.history},
            {"history_profits", doubles_json(s.history_profits)},
            {"store_knots", columns_json(s.store_knots)},
            {"store_values", columns_json(s.store_values)},
            {"num_evals", s.num_evals}};
}

AdaptState adapt_from(const json& j, int dim)
{
    AdaptState s;
    s.set = set_from(j.at("set"), dim, 1);
    s.margin = set_from(j.at("margin"), dim, 1);
    s.margin_profits = doubles_from(j.at("margin_profits"));
    s.history = j.at("history").get<std::vector<MultiIndex>>();
    s.history_profits = doubles_from(j.at("history_profits"));
    s.store_knots = columns_from(j.at("store_knots"), dim);
    const auto& sv = j.at("store_values");
    s.store_values = columns_from(sv, sv.empty() ? 0 : static_cast<Index>(sv[0].size()));
    s.num_evals = j.at("num_evals").get<Index>();
    if (s.margin_profits.size() != s.margin.size()) throw FormatError("adapt state: one profit per margin index");
    if (s.history_profits.size() != s.history.size()) throw FormatError("adapt state: one profit per history entry");
    if (s.store_values.cols() != s.store_knots.cols()) throw FormatError("adapt state: store arrays disagree");
    return s;
}

json pce_json(const PCExpansion& p)
{
    json bases = json::array();
    for (const auto& b : p.bases) {
        json j = dist_json(b.dist);
        j["family"] = to_string(b.family);
        bases.push_back(j);
    }
    return {{"bases", bases}, {"lambda", set_json(p.lambda)}, {"coeffs", columns_json(p.coeffs)}};
}

PCExpansion pce_from(const json& j)
{
    PCExpansion p;
    for (const auto& b : j.at("bases"))
        p.bases.push_back({poly_family_from_string(b.at("family").get<std::string>()), dist_from(b)});
    p.lambda = set_from(j.at("lambda"), p.dim(), 0);
    const auto& c = j.at("coeffs");
    p.coeffs = columns_from(c, c.empty() ? 0 : static_cast<Index>(c[0].size()));
    if (static_cast<std::size_t>(p.coeffs.cols()) != p.lambda.size())
        throw FormatError("pce: one coefficient column per degree");
    return p;
}

std::vector<Index> indices_from(const json& a, Index bound, const char* what)
{
    std::vector<Index> v = a.get<std::vector<Index>>();
    for (Index k : v)
        if (k < 0 || k >= bound) throw FormatError(std::string(what) + " entry out of range");
    return v;
}

GridBundle parse_bundle(const json& j)
{
    const int version = j.at("format_version").get<int>();
    if (version != kGridFormatVersion)
        throw FormatError("unsupported grid file version " + std::to_string(version) + " (expected " +
                          std::to_string(kGridFormatVersion) + ")");
    GridBundle b;
    SparseGrid& g = b.grid;
    g.dim = j.at("dim").get<int>();
    if (g.dim < 1) throw FormatError("dim must be positive");
    for (const auto& f : j.at("knot_families")) g.families.push_back(family_from(f));
    if (static_cast<int>(g.families.size()) != g.dim) throw FormatError("one knot family per dimension");
    g.level_map = LevelMap{level_map_kind_from_string(j.at("level_map").get<std::string>())};
    g.set = set_from(j.at("multi_index_set"), g.dim, 1);
    g.set_coeffs = j.at("set_coefficients").get<std::vector<int>>();
    if (g.set_coeffs.size() != g.set.size()) throw FormatError("one coefficient per multi-index");

    for (const auto& t : j.at("tensors")) {
        std::vector<VectorXd> knots, weights;
        for (const auto& k : t.at("knots_per_dim")) knots.push_back(vector_from(k));
        for (const auto& w : t.at("weights_per_dim")) weights.push_back(vector_from(w));
        auto idx = t.at("idx").get<MultiIndex>();
        if (static_cast<int>(idx.size()) != g.dim) throw FormatError("tensor index of wrong length");
        try {
            g.tensors.push_back(assemble_tensor_grid(std::move(idx), t.at("m").get<std::vector<int>>(),
                                                     t.at("coeff").get<int>(), std::move(knots), std::move(weights)));
        } catch (const ParameterError& e) {
            throw FormatError(e.what());
        }
    }

    const auto& r = j.at("reduced");
    ReducedGrid& red = b.reduced;
    red.knots = columns_from(r.at("knots"), g.dim);
    red.weights = vector_from(r.at("weights"));
    red.tol = r.at("tol").get<double>();
    if (red.weights.size() != red.knots.cols()) throw FormatError("reduced: one weight per knot");
    red.m = indices_from(r.at("m"), g.extended_size(), "reduced.m");
    red.n = indices_from(r.at("n"), red.size(), "reduced.n");
    if (static_cast<Index>(red.m.size()) != red.size() || static_cast<Index>(red.n.size()) != g.extended_size())
        throw FormatError("reduced: index maps have the wrong length");

    if (j.contains("values")) {
        const auto& v = j.at("values");
        b.values = columns_from(v, v.empty() ? 0 : static_cast<Index>(v[0].size()));
        if (b.values->cols() != red.size()) throw FormatError("values: one column per reduced knot");
    }
    if (j.contains("adapt_state")) b.adapt_state = adapt_from(j.at("adapt_state"), g.dim);
    if (j.contains("pce")) b.pce = pce_from(j.at("pce"));
    return b;
}

}  // namespace

std::string format_double(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, end);
}

std::string grid_to_json(const GridBundle& bundle)
{
    const SparseGrid& g = bundle.grid;
    json families = json::array();
    for (const auto& f : g.families) families.push_back(family_json(f));
    json tensors = json::array();
    for (const auto& t : g.tensors) {
        json kpd = json::array(), wpd = json::array();
        for (const auto& k : t.knots_per_dim) kpd.push_back(vector_json(k));
        for (const auto& w : t.weights_per_dim) wpd.push_back(vector_json(w));
        tensors.push_back({{"idx", t.idx}, {"m", t.m}, {"coeff", t.coeff}, {"knots_per_dim", kpd}, {"weights_per_dim", wpd}});
    }
    const ReducedGrid& r = bundle.reduced;
    json j = {{"format_version", kGridFormatVersion},
              {"dim", g.dim},
              {"knot_families", families},
              {"level_map", to_string(g.level_map.kind)},
              {"multi_index_set", set_json(g.set)},
              {"set_coefficients", g.set_coeffs},
              {"tensors", tensors},
              {"reduced",
               {{"knots", columns_json(r.knots)},
                {"weights", vector_json(r.weights)},
                {"m", r.m},
                {"n", r.n},
                {"tol", r.tol}}}};
    if (bundle.values) j["values"] = columns_json(*bundle.values);
    if (bundle.adapt_state) j["adapt_state"] = adapt_json(*bundle.adapt_state);
    if (bundle.pce) j["pce"] = pce_json(*bundle.pce);
    return j.dump(1);
}

GridBundle grid_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("malformed grid file at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        return parse_bundle(j);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed grid file: ") + e.what());
    }
}

void save_grid(const std::string& path, const GridBundle& bundle)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path);
    out << grid_to_json(bundle) << '\n';
    if (!out) throw ParameterError("failed writing " + path);
}

GridBundle load_grid(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return grid_from_json(ss.str());
}

std::string to_string(ExportKind kind)
{
    switch (kind) {
    case ExportKind::knots: return "knots";
    case ExportKind::knots3d_projection: return "knots3d_projection";
    case ExportKind::interp_samples: return "interp_samples";
    case ExportKind::midx_set: return "midx_set";
    case ExportKind::pce_coefficients: return "pce_coefficients";
    }
    return "?";
}

ExportKind export_kind_from_string(const std::string& name)
{
    for (auto k : {ExportKind::knots, ExportKind::knots3d_projection, ExportKind::interp_samples,
                   ExportKind::midx_set, ExportKind::pce_coefficients})
        if (to_string(k) == name) return k;
    throw ParameterError("unknown export kind: " + name);
}

namespace {

void header(std::ostream& out, const std::string& prefix, int count, bool leading_comma)
{
    for (int k = 1; k <= count; ++k) {
        if (leading_comma || k > 1) out << ',';
        out << prefix << k;
    }
}

void write_knots(const GridBundle& b, std::ostream& out)
{
    header(out, "y", b.reduced.dim(), false);
    out << ",weight\n";
    for (Index j = 0; j < b.reduced.size(); ++j) {
        for (Index d = 0; d < b.reduced.knots.rows(); ++d) out << format_double(b.reduced.knots(d, j)) << ',';
        out << format_double(b.reduced.weights[j]) << '\n';
    }
}

void write_projection(const GridBundle& b, const ExportOptions& o, std::ostream& out)
{
    const int dim = b.grid.dim;
    if (o.projection.size() != 3) throw ParameterError("knots3d_projection needs exactly three dimensions");
    for (int d : o.projection)
        if (d < 1 || d > dim) throw ParameterError("projection dimension " + std::to_string(d) + " out of range");
    out << 'y' << o.projection[0] << ",y" << o.projection[1] << ",y" << o.projection[2] << '\n';
    std::set<std::array<double, 3>> seen;
    for (Index j = 0; j < b.reduced.size(); ++j) {
        std::array<double, 3> p;
        for (int k = 0; k < 3; ++k) p[k] = b.reduced.knots(o.projection[k] - 1, j);
        if (!seen.insert(p).second) continue;
        out << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << '\n';
    }
}

Domain sampling_domain(const GridBundle& b, const ExportOptions& o)
{
    const int dim = b.grid.dim;
    if (o.domain) {
        if (o.domain->cols() != dim) throw ParameterError("sampling domain has the wrong dimension");
        return *o.domain;
    }
    Domain dom = domain_of(b.grid.families);
    for (int d = 0; d < dim; ++d) {
        if (!std::isfinite(dom(0, d))) dom(0, d) = b.reduced.knots.row(d).minCoeff();
        if (!std::isfinite(dom(1, d))) dom(1, d) = b.reduced.knots.row(d).maxCoeff();
    }
    return dom;
}

std::vector<std::pair<int, int>> default_cuts(int dim)
{
    std::vector<std::pair<int, int>> cuts;
    for (int d = 1; d + 1 <= dim; d += 2) cuts.emplace_back(d, d + 1);
    if (dim > 2 && dim % 2 == 1) cuts.emplace_back(dim - 1, dim);
    if (dim == 1) cuts.emplace_back(1, 1);
    return cuts;
}

void write_samples(const GridBundle& b, const ExportOptions& o, std::ostream& out)
{
    if (!b.values) throw ParameterError("interp_samples needs an evaluation table in the grid file");
    const int dim = b.grid.dim;
    if (o.resolution < 2) throw ParameterError("resolution must be at least 2");
    const auto cuts = o.two_dim_cuts.empty() ? default_cuts(dim) : o.two_dim_cuts;
    for (auto [p, q] : cuts)
        if (p < 1 || p > dim || q < 1 || q > dim)
            throw ParameterError("cut (" + std::to_string(p) + ", " + std::to_string(q) + ") out of range for N = " +
                                 std::to_string(dim));
    const Domain dom = sampling_domain(b, o);
    const VectorXd mid = (dom.row(0) + dom.row(1)).transpose() / 2;
    const int r = o.resolution;

    out << "cut,";
    header(out, "y", dim, false);
    header(out, "f", static_cast<int>(b.values->rows()), true);
    out << '\n';
    for (auto [p, q] : cuts) {
        const bool line = p == q;
        const Index count = line ? r : static_cast<Index>(r) * r;
        MatrixXd pts = mid.replicate(1, count);
        for (Index k = 0; k < count; ++k) {
            const Index a = k % r, c = k / r;
            pts(p - 1, k) = dom(0, p - 1) + (dom(1, p - 1) - dom(0, p - 1)) * static_cast<double>(a) / (r - 1);
            if (!line)
                pts(q - 1, k) = dom(0, q - 1) + (dom(1, q - 1) - dom(0, q - 1)) * static_cast<double>(c) / (r - 1);
        }
        const MatrixXd f = interpolate(b.grid, b.reduced, *b.values, pts);
        for (Index k = 0; k < count; ++k) {
            out << p << '-' << q;
            for (Index d = 0; d < dim; ++d) out << ',' << format_double(pts(d, k));
            for (Index v = 0; v < f.rows(); ++v) out << ',' << format_double(f(v, k));
            out << '\n';
        }
    }
}

void write_midx(const GridBundle& b, std::ostream& out)
{
    header(out, "i", b.grid.dim, false);
    out << ",coeff\n";
    for (std::size_t k = 0; k < b.grid.set.size(); ++k) {
        for (int v : b.grid.set[k]) out << v << ',';
        out << b.grid.set_coeffs[k] << '\n';
    }
}

void write_pce(const GridBundle& b, std::ostream& out)
{
    if (!b.pce) throw ParameterError("pce_coefficients needs an expansion in the grid file");
    const PCExpansion& p = *b.pce;
    header(out, "p", p.dim(), false);
    header(out, "c", static_cast<int>(p.coeffs.rows()), true);
    out << '\n';
    for (std::size_t k : degree_order(p.lambda)) {
        for (int v : p.lambda[k]) out << v << ',';
        for (Index v = 0; v < p.coeffs.rows(); ++v)
            out << (v ? "," : "") << format_double(p.coeffs(v, static_cast<Index>(k)));
        out << '\n';
    }
}

}  // namespace

void export_points(const GridBundle& bundle, ExportKind kind, const ExportOptions& options, std::ostream& out)
{
    switch (kind) {
    case ExportKind::knots: write_knots(bundle, out); break;
    case ExportKind::knots3d_projection: write_projection(bundle, options, out); break;
    case ExportKind::interp_samples: write_samples(bundle, options, out); break;
    case ExportKind::midx_set: write_midx(bundle, out); break;
    case ExportKind::pce_coefficients: write_pce(bundle, out); break;
    }
}

}  // namespace sparsegrid
