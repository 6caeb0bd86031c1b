#include "sparsegrid/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace sparsegrid;

namespace {

const VectorFunction expsum = scalar_function([](const VectorXd& y) { return std::exp(y.sum()); });

GridBundle level3_bundle(bool with_values)
{
    GridBundle b;
    b.grid = build_sparse_grid_from_rule(2, 3, repeat(KnotFamily::cc(0, 1), 2), LevelMap::doubling(), rule_sum());
    b.reduced = reduce(b.grid);
    if (with_values) b.values = evaluate_on_grid(expsum, b.reduced);
    return b;
}

void check_bitwise(const SparseGrid& a, const SparseGrid& b)
{
    CHECK(a.dim == b.dim);
    CHECK(a.families == b.families);
    CHECK(a.level_map == b.level_map);
    CHECK(a.set == b.set);
    CHECK(a.set_coeffs == b.set_coeffs);
    REQUIRE(a.tensors.size() == b.tensors.size());
    for (std::size_t k = 0; k < a.tensors.size(); ++k) {
        CHECK(a.tensors[k].idx == b.tensors[k].idx);
        CHECK(a.tensors[k].m == b.tensors[k].m);
        CHECK(a.tensors[k].coeff == b.tensors[k].coeff);
        CHECK(a.tensors[k].knots == b.tensors[k].knots);
        CHECK(a.tensors[k].weights == b.tensors[k].weights);
    }
}

void check_bitwise(const ReducedGrid& a, const ReducedGrid& b)
{
    CHECK(a.knots == b.knots);
    CHECK(a.weights == b.weights);
    CHECK(a.m == b.m);
    CHECK(a.n == b.n);
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string export_text(const GridBundle& b, ExportKind kind, const ExportOptions& opt = {})
{
    std::ostringstream out;
    export_points(b, kind, opt, out);
    return out.str();
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("sgk_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("Shortest round-trip doubles")
{
    for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 0.0, 5e-324})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("Grid files round-trip bitwise")
{
    const GridBundle b = level3_bundle(true);
    const GridBundle back = grid_from_json(grid_to_json(b));
    check_bitwise(b.grid, back.grid);
    check_bitwise(b.reduced, back.reduced);
    REQUIRE(back.values);
    CHECK(*back.values == *b.values);
    CHECK_FALSE(back.adapt_state);
    CHECK_FALSE(back.pce);

    // Text is a fixed point.
    CHECK(grid_to_json(back) == grid_to_json(b));

    const GridBundle bare = grid_from_json(grid_to_json(level3_bundle(false)));
    CHECK_FALSE(bare.values);
    CHECK(grid_to_json(level3_bundle(false)).find("\"values\"") == std::string::npos);
}

TEST_CASE("Non-uniform families, adapt state and expansions round-trip")
{
    const KnotFamilies fams{KnotFamily::leja(-1, 2, LejaVariant::symmetric),
                            KnotFamily::gauss(DistributionSpec::beta(0, 1, 2, 3))};
    AdaptControls c;
    c.nested = false;
    c.max_pts = 60;
    const AdaptResult r = adapt(expsum, 2, fams, LevelMap::linear(), c);
    GridBundle b{r.extended, r.reduced, r.values, r.internal, {}};
    b.pce = convert_to_modal(r.extended, r.reduced, r.values, bases_for(fams));

    const std::filesystem::path path = temp_file("adapt.json");
    save_grid(path.string(), b);
    const GridBundle back = load_grid(path.string());
    std::filesystem::remove(path);

    check_bitwise(b.grid, back.grid);
    check_bitwise(b.reduced, back.reduced);
    REQUIRE(back.adapt_state);
    CHECK(back.adapt_state->set == r.internal.set);
    CHECK(back.adapt_state->margin == r.internal.margin);
    CHECK(back.adapt_state->margin_profits == r.internal.margin_profits);
    CHECK(back.adapt_state->history == r.internal.history);
    CHECK(back.adapt_state->store_knots == r.internal.store_knots);
    CHECK(back.adapt_state->store_values == r.internal.store_values);
    CHECK(back.adapt_state->num_evals == r.internal.num_evals);
    REQUIRE(back.pce);
    CHECK(back.pce->bases == b.pce->bases);
    CHECK(back.pce->lambda == b.pce->lambda);
    CHECK(back.pce->coeffs == b.pce->coeffs);
}

TEST_CASE("Infinite profits survive the round trip")
{
    GridBundle b = level3_bundle(false);
    AdaptState s;
    s.set = MultiIndexSet::from_rows(2, {{1, 1}});
    s.margin = MultiIndexSet::from_rows(2, {{1, 2}, {2, 1}});
    s.margin_profits = {std::numeric_limits<double>::infinity(), 0.25};
    s.store_knots = MatrixXd::Zero(2, 1);
    s.store_values = MatrixXd::Ones(1, 1);
    s.num_evals = 1;
    b.adapt_state = s;
    const GridBundle back = grid_from_json(grid_to_json(b));
    CHECK(std::isinf(back.adapt_state->margin_profits[0]));
    CHECK(back.adapt_state->margin_profits[1] == 0.25);
}

TEST_CASE("Malformed files")
{
    const std::string good = grid_to_json(level3_bundle(true));
    CHECK_THROWS_WITH_AS(grid_from_json(good.substr(0, good.size() / 2)), doctest::Contains("byte"), FormatError);
    CHECK_THROWS_AS(grid_from_json("[]"), FormatError);
    std::string old = good;
    const auto pos = old.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    old.replace(pos, 19, "\"format_version\": 9");
    CHECK_THROWS_WITH_AS(grid_from_json(old), doctest::Contains("version"), FormatError);
    CHECK_THROWS_AS(load_grid("/nonexistent/dir/grid.json"), ParameterError);
}

TEST_CASE("CSV exports")
{
    const GridBundle b = level3_bundle(true);
    const auto knots = lines_of(export_text(b, ExportKind::knots));
    REQUIRE(knots.size() == 30);
    CHECK(knots[0] == "y1,y2,weight");

    const auto midx = lines_of(export_text(b, ExportKind::midx_set));
    CHECK(midx[0] == "i1,i2,coeff");
    CHECK(midx.size() == b.grid.set.size() + 1);

    GridBundle lshape = b;
    lshape.grid = build_sparse_grid(MultiIndexSet::from_rows(2, {{1, 1}, {1, 2}, {2, 1}, {3, 1}}), b.grid.families,
                                 LevelMap::doubling());
    const auto lshape_rows = lines_of(export_text(lshape, ExportKind::midx_set));
    REQUIRE(lshape_rows.size() == 5);
    CHECK(lshape_rows[1] == "1,1,-1");
    CHECK(lshape_rows[2] == "1,2,1");
    CHECK(lshape_rows[3] == "2,1,0");
    CHECK(lshape_rows[4] == "3,1,1");

    ExportOptions opt;
    opt.resolution = 5;
    const auto samples = lines_of(export_text(b, ExportKind::interp_samples, opt));
    CHECK(samples.size() == 26);
    CHECK(samples[0] == "cut,y1,y2,f1");

    for (const auto& k : {ExportKind::knots, ExportKind::knots3d_projection, ExportKind::interp_samples,
                          ExportKind::midx_set, ExportKind::pce_coefficients})
        CHECK(export_kind_from_string(to_string(k)) == k);
}

TEST_CASE("Two-dimensional cuts of a four-dimensional surrogate")
{
    GridBundle b;
    b.grid = build_sparse_grid_from_rule(4, 3, repeat(KnotFamily::cc(-1, 1), 4), LevelMap::doubling(), rule_sum());
    b.reduced = reduce(b.grid);
    b.values = evaluate_on_grid(expsum, b.reduced);
    ExportOptions opt;
    opt.resolution = 10;
    opt.two_dim_cuts = {{1, 2}, {3, 4}, {1, 4}};
    const auto rows = lines_of(export_text(b, ExportKind::interp_samples, opt));
    REQUIRE(rows.size() == 301);
    CHECK(rows[0] == "cut,y1,y2,y3,y4,f1");
    CHECK(rows[1].rfind("1-2,", 0) == 0);
    CHECK(rows[300].rfind("1-4,", 0) == 0);
    // Inside a 3-4 cut the first two coordinates sit at the centre.
    CHECK(rows[150].rfind("3-4,0,0,", 0) == 0);

    const auto proj = lines_of(export_text(b, ExportKind::knots3d_projection));
    CHECK(proj[0] == "y1,y2,y3");
    CHECK(proj.size() > 1);

    opt.two_dim_cuts = {{1, 5}};
    CHECK_THROWS_WITH_AS(export_text(b, ExportKind::interp_samples, opt), doctest::Contains("out of range"),
                         ParameterError);
    GridBundle no_values = b;
    no_values.values.reset();
    CHECK_THROWS_AS(export_text(no_values, ExportKind::interp_samples), ParameterError);
    CHECK_THROWS_AS(export_text(b, ExportKind::pce_coefficients), ParameterError);
}

TEST_CASE("Command-line tool agrees with the library")
{
    const std::filesystem::path grid = temp_file("cli.json");
    const std::filesystem::path out = temp_file("cli.txt");
    const std::string cmd = std::string(SGK_CLI) + " build --dim 2 -w 3 --domain 0,1 --evaluate -o " + grid.string() +
                            " > " + out.string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    const GridBundle cli = load_grid(grid.string());
    const GridBundle lib = level3_bundle(true);
    check_bitwise(lib.grid, cli.grid);
    check_bitwise(lib.reduced, cli.reduced);
    REQUIRE(cli.values);
    CHECK(*cli.values == *lib.values);

    const std::string quad = std::string(SGK_CLI) + " quad --grid " + grid.string() + " > " + out.string();
    REQUIRE(std::system(quad.c_str()) == 0);
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find(format_double(quadrature(*lib.values, lib.reduced)[0])) != std::string::npos);

    // User errors exit with status 1.
    const std::string bad = std::string(SGK_CLI) + " export --grid " + grid.string() +
                            " --what interp_samples --cuts 1,7 > /dev/null 2>&1";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 1);

    std::filesystem::remove(grid);
    std::filesystem::remove(out);
}
