// Command-line front end. Every subcommand only wires flags to library calls.

#include "sparsegrid/io.hpp"
#include "sparsegrid/uqdemo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace sparsegrid;

namespace {

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw ParameterError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// "a,b" for every dimension, joined by 'x'; a single interval is broadcast.
Domain parse_domain(const std::string& text, int dim)
{
    const auto parts = split(text, 'x');
    if (parts.size() != 1 && static_cast<int>(parts.size()) != dim)
        throw ParameterError("--domain lists " + std::to_string(parts.size()) + " intervals for N = " +
                             std::to_string(dim));
    Domain d(2, dim);
    for (int n = 0; n < dim; ++n) {
        const auto ab = parse_list(parts[parts.size() == 1 ? 0 : n]);
        if (ab.size() != 2 || !(ab[0] < ab[1])) throw ParameterError("bad interval in --domain: " + text);
        d(0, n) = ab[0];
        d(1, n) = ab[1];
    }
    return d;
}

// "name:p1,p2,..."
DistributionSpec parse_dist(const std::string& text)
{
    const auto colon = text.find(':');
    DistributionSpec d;
    d.kind = distribution_kind_from_string(text.substr(0, colon));
    d.params = colon == std::string::npos ? std::vector<double>{} : parse_list(text.substr(colon + 1));
    d.validate();
    return d;
}

struct Functions {
    std::string name = "expsum";
    std::string sigmas;
    int mesh = 200;

    DiffusionModel demo_model(int dim) const
    {
        DiffusionModel model;
        if (sigmas.empty()) {
            model.sigmas = VectorXd::Constant(dim, 0.1);
            model.sigmas[0] = 0.5;
        } else {
            const auto s = parse_list(sigmas);
            model.sigmas = Eigen::Map<const VectorXd>(s.data(), static_cast<Index>(s.size()));
        }
        if (model.dim() != dim)
            throw ParameterError("--sigmas has " + std::to_string(model.dim()) + " entries for N = " +
                                 std::to_string(dim));
        model.mesh = mesh;
        model.validate();
        return model;
    }

    VectorFunction make(int dim) const
    {
        if (name == "expsum") return scalar_function([](const VectorXd& y) { return std::exp(y.sum()); });
        if (name == "linear") return scalar_function([](const VectorXd& y) { return 1.0 + y.sum(); });
        if (name == "runge")
            return scalar_function([](const VectorXd& y) { return 1.0 / (1.0 + 25.0 * y.squaredNorm()); });
        if (name == "demo") {
            auto model = demo_model(dim);
            return scalar_function([model](const VectorXd& y) { return qoi_integral(model, y); });
        }
        throw ParameterError("unknown function '" + name + "' (expsum, linear, runge, demo)");
    }

    void add(CLI::App* app)
    {
        app->add_option("--fn", name, "Target function: expsum, linear, runge, demo")->capture_default_str();
        app->add_option("--sigmas", sigmas, "demo: comma-separated sigma_n (default 0.5 then 0.1)");
        app->add_option("--mesh", mesh, "demo: number of finite elements")->capture_default_str();
    }
};

// Either a saved grid or the flags describing a fresh one.
struct GridSource {
    std::string path;
    int dim = 2;
    std::string preset_name = "SM";
    double w = 3;
    std::string knots = "cc";
    std::string variant = "standard";
    std::string domain;
    std::vector<std::string> dists;
    std::string lev2knots;
    std::string g;
    double tol = kDefaultDedupTol;

    void add_build_flags(CLI::App* app)
    {
        app->add_option("--dim", dim, "Number of parameters N")->capture_default_str();
        app->add_option("--preset", preset_name, "Index set preset: TP, TD, HC, SM")->capture_default_str();
        app->add_option("-w,--w", w, "Level of the index set")->capture_default_str();
        app->add_option("--knots", knots, "cc, leja, weighted_leja, gauss, trap, midpoint, gk")->capture_default_str();
        app->add_option("--leja-variant", variant, "standard, symmetric, p_disk")->capture_default_str();
        app->add_option("--domain", domain, "Intervals a,b joined by 'x' (default -1,1; demo box for --fn demo)");
        app->add_option("--dist", dists, "Law per dimension, e.g. normal:0,1 (repeat or give one for all)");
        app->add_option("--lev2knots", lev2knots, "linear, two_step, doubling, tripling, gk (default from preset)");
        app->add_option("--g", g, "Comma-separated anisotropy weights");
        app->add_option("--tol", tol, "Deduplication tolerance")->capture_default_str();
    }

    void add(CLI::App* app)
    {
        app->add_option("--grid", path, "Grid file; when absent the grid is built from the flags below");
        add_build_flags(app);
    }

    KnotFamilies families(const std::string& fn) const
    {
        if (dim < 1) throw ParameterError("--dim must be positive");
        const KnotKind kind = knot_kind_from_string(knots);
        const LejaVariant v = leja_variant_from_string(variant);
        KnotFamilies out;
        if (!dists.empty()) {
            if (dists.size() != 1 && static_cast<int>(dists.size()) != dim)
                throw ParameterError("give --dist once or once per dimension");
            if (!domain.empty()) throw ParameterError("--domain and --dist are exclusive");
            for (int n = 0; n < dim; ++n)
                out.emplace_back(kind, parse_dist(dists[dists.size() == 1 ? 0 : n]), v);
            return out;
        }
        const Domain d = !domain.empty() ? parse_domain(domain, dim)
                         : fn == "demo"  ? demo_domain(dim)
                                         : parse_domain("-1,1", dim);
        for (int n = 0; n < dim; ++n) {
            const auto law = DistributionSpec::uniform(d(0, n), d(1, n));
            out.push_back(kind == KnotKind::gk ? KnotFamily::gk() : KnotFamily(kind, law, v));
        }
        return out;
    }

    LevelMap level_map(LevelMap preset_map) const
    {
        if (!lev2knots.empty()) return LevelMap{level_map_kind_from_string(lev2knots)};
        if (knot_kind_from_string(knots) == KnotKind::gk) return LevelMap::gk();
        return preset_map;
    }

    GridBundle load(const std::string& fn) const
    {
        if (!path.empty()) return load_grid(path);
        const std::vector<double> weights = g.empty() ? std::vector<double>{} : parse_list(g);
        const Preset p = sparsegrid::preset(preset_name_from_string(preset_name), weights);
        GridBundle b;
        b.grid = build_sparse_grid_from_rule(dim, w, families(fn), level_map(p.level_map), p.rule);
        b.reduced = reduce(b.grid, tol);
        return b;
    }
};

int threads_flag = 0;

std::vector<double> std_vector(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

VectorXd demo_sigmas(const std::string& text, int n)
{
    const auto s = parse_list(text);
    if (n > 0 && s.size() == 1) return VectorXd::Constant(n, s[0]);
    if (n > 0 && static_cast<int>(s.size()) != n) throw ParameterError("--sigmas does not match --N");
    return Eigen::Map<const VectorXd>(s.data(), static_cast<Index>(s.size()));
}

void write_samples(const std::string& path, const MatrixXd& points, const VectorXd& values);

void ensure_values(GridBundle& b, const Functions& fns, bool force)
{
    if (b.values && !force) return;
    b.values = evaluate_on_grid(fns.make(b.grid.dim), b.reduced, nullptr, nullptr, threads_flag);
}

void print_vector(std::ostream& out, const std::string& label, const VectorXd& v)
{
    out << label << ':';
    for (Index k = 0; k < v.size(); ++k) out << ' ' << format_double(v[k]);
    out << '\n';
}

void write_samples(const std::string& path, const MatrixXd& points, const VectorXd& values)
{
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParameterError("cannot write " + path);
    for (Index d = 0; d < points.rows(); ++d) file << 'y' << d + 1 << ',';
    file << "qoi\n";
    for (Index j = 0; j < points.cols(); ++j) {
        for (Index d = 0; d < points.rows(); ++d) file << format_double(points(d, j)) << ',';
        file << format_double(values[j]) << '\n';
    }
}

MatrixXd read_points_csv(const std::string& path, int dim)
{
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_list(line));
        if (static_cast<int>(rows.back().size()) != dim)
            throw ParameterError(path + ": expected " + std::to_string(dim) + " columns");
    }
    MatrixXd pts(dim, static_cast<Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (int d = 0; d < dim; ++d) pts(d, static_cast<Index>(j)) = rows[j][d];
    return pts;
}

std::ostream& open_output(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw ParameterError("cannot write " + path);
    return file;
}

std::vector<std::pair<int, int>> parse_cuts(const std::string& text)
{
    std::vector<std::pair<int, int>> cuts;
    if (text.empty()) return cuts;
    const auto v = parse_list(text);
    if (v.size() % 2) throw ParameterError("--cuts needs pairs of dimensions");
    for (std::size_t k = 0; k < v.size(); k += 2) cuts.emplace_back(static_cast<int>(v[k]), static_cast<int>(v[k + 1]));
    return cuts;
}

int run(int argc, char** argv)
{
    CLI::App app{"Sparse grid quadrature, interpolation and UQ toolkit"};
    app.require_subcommand(1);
    app.add_option("--threads", threads_flag, "Worker threads for function evaluations (default: SGK_THREADS or 1)");

    // build
    GridSource build_src;
    Functions build_fn;
    std::string build_out;
    bool build_eval = false;
    auto* build = app.add_subcommand("build", "Build a sparse grid and save it");
    build_src.add_build_flags(build);
    build_fn.add(build);
    build->add_flag("--evaluate", build_eval, "Also store the values of --fn");
    build->add_option("-o,--output", build_out, "Grid file")->required();

    // reduce
    std::string reduce_path, reduce_out;
    double reduce_tol = kDefaultDedupTol;
    auto* reduce_cmd = app.add_subcommand("reduce", "Deduplicate the knots of a grid file");
    reduce_cmd->add_option("--grid", reduce_path, "Grid file")->required();
    reduce_cmd->add_option("--tol", reduce_tol, "Deduplication tolerance")->capture_default_str();
    reduce_cmd->add_option("-o,--output", reduce_out, "Write the re-reduced grid here");

    // quad
    GridSource quad_src;
    Functions quad_fn;
    std::string quad_out;
    auto* quad = app.add_subcommand("quad", "Sparse grid quadrature of a function");
    quad_src.add(quad);
    quad_fn.add(quad);
    quad->add_option("-o,--output", quad_out, "Save grid and values");

    // interp
    GridSource interp_src;
    Functions interp_fn;
    std::string interp_points, interp_out;
    Index interp_random = 0;
    std::uint64_t interp_seed = 1;
    auto* interp = app.add_subcommand("interp", "Evaluate the sparse interpolant");
    interp_src.add(interp);
    interp_fn.add(interp);
    interp->add_option("--points", interp_points, "CSV of query points (header, N columns)");
    interp->add_option("--random", interp_random, "Number of uniform random query points");
    interp->add_option("--seed", interp_seed, "Seed for --random")->capture_default_str();
    interp->add_option("-o,--output", interp_out, "CSV output (default stdout)");

    // adapt
    GridSource adapt_src;
    Functions adapt_fn;
    AdaptControls controls;
    std::string adapt_profit = "Linf_per_new_points", adapt_resume, adapt_out;
    auto* adapt_cmd = app.add_subcommand("adapt", "Dimension-adaptive sparse grid");
    adapt_cmd->add_option("--dim", adapt_src.dim, "Number of parameters N")->capture_default_str();
    adapt_cmd->add_option("--knots", adapt_src.knots, "Knot family")->capture_default_str();
    adapt_cmd->add_option("--leja-variant", adapt_src.variant, "standard, symmetric, p_disk")->capture_default_str();
    adapt_cmd->add_option("--domain", adapt_src.domain, "Intervals a,b joined by 'x'");
    adapt_cmd->add_option("--dist", adapt_src.dists, "Law per dimension");
    adapt_cmd->add_option("--lev2knots", adapt_src.lev2knots, "Level-to-knots map (default doubling)");
    adapt_fn.add(adapt_cmd);
    adapt_cmd->add_option("--prof", adapt_profit,
                          "deltaint, deltaint_per_new_points, Linf, Linf_per_new_points, weighted_Linf, "
                          "weighted_Linf_per_new_points")
        ->capture_default_str();
    adapt_cmd->add_option("--prof-tol", controls.prof_tol, "Stop when every profit is below this")->capture_default_str();
    adapt_cmd->add_option("--max-pts", controls.max_pts, "Stop after this many points")->capture_default_str();
    adapt_cmd->add_option("--buffer", controls.var_buffer_size, "Dimension buffer size (0: all active)");
    adapt_cmd->add_option("--nested", controls.nested, "Whether the knots are nested (true/false)")->capture_default_str();
    adapt_cmd->add_option("--resume", adapt_resume, "Continue from a saved adaptive grid");
    adapt_cmd->add_option("-o,--output", adapt_out, "Save grid, values and adapt state");

    // pce
    GridSource pce_src;
    Functions pce_fn;
    std::string pce_out, pce_save;
    auto* pce = app.add_subcommand("pce", "Convert the interpolant to orthonormal polynomials");
    pce_src.add(pce);
    pce_fn.add(pce);
    pce->add_option("-o,--output", pce_out, "CSV of coefficients (default stdout)");
    pce->add_option("--save", pce_save, "Save grid, values and expansion");

    // sobol
    GridSource sobol_src;
    Functions sobol_fn;
    auto* sobol = app.add_subcommand("sobol", "Sobol indices from the polynomial expansion");
    sobol_src.add(sobol);
    sobol_fn.add(sobol);

    // export
    std::string export_path, export_what = "knots", export_cuts, export_dims, export_out;
    Functions export_fn;
    bool export_eval = false;
    ExportOptions export_opts;
    auto* export_cmd = app.add_subcommand("export", "Write plot data as CSV");
    export_cmd->add_option("--grid", export_path, "Grid file")->required();
    export_cmd->add_option("--what", export_what,
                           "knots, knots3d_projection, interp_samples, midx_set, pce_coefficients")
        ->capture_default_str();
    export_cmd->add_option("--cuts", export_cuts, "interp_samples: dimension pairs, e.g. 1,2,3,4,1,4");
    export_cmd->add_option("--resolution", export_opts.resolution, "interp_samples: samples per axis")
        ->capture_default_str();
    export_cmd->add_option("--dims", export_dims, "knots3d_projection: three dimensions, e.g. 1,2,3");
    export_fn.add(export_cmd);
    export_cmd->add_flag("--evaluate", export_eval, "Evaluate --fn when the file carries no values");
    export_cmd->add_option("-o,--output", export_out, "CSV output (default stdout)");

    // demo
    auto* demo = app.add_subcommand("demo", "Diffusion model uncertainty quantification");
    demo->require_subcommand(1);
    int demo_n = 0, fwd_mesh = 200;
    demo->add_option("--N", demo_n, "Number of random coefficients (broadcasts a single sigma)");
    std::string fwd_sigmas = "0.5,0.1", fwd_knots = "cc", fwd_samples_out;
    ForwardConfig fwd;
    auto* forward = demo->add_subcommand("forward", "Mean, variance and Sobol indices of the solution integral");
    forward->add_option("--sigmas", fwd_sigmas, "Comma-separated sigma_n")->capture_default_str();
    forward->add_option("--mesh", fwd_mesh, "Number of finite elements")->capture_default_str();
    forward->add_option("-w,--w", fwd.w, "Total-degree level")->capture_default_str();
    forward->add_option("--knots", fwd_knots, "cc or leja")->capture_default_str();
    forward->add_option("--samples", fwd.samples, "Surrogate samples")->capture_default_str();
    forward->add_option("--seed", fwd.seed, "Sampling seed")->capture_default_str();
    forward->add_option("--samples-out", fwd_samples_out, "CSV of surrogate samples");

    std::string inv_sigmas = "0.5,0.5", inv_ystar = "0.9,-1.1", inv_samples_out;
    double inv_noise = 0.01;
    int inv_k = 80, inv_w = 5;
    Index inv_samples = 0;
    std::uint64_t inv_seed = 1;
    auto* inverse = demo->add_subcommand("inverse", "MAP estimate and Laplace posterior from synthetic data");
    inverse->add_option("--sigmas", inv_sigmas, "Comma-separated sigma_n")->capture_default_str();
    inverse->add_option("--y-star", inv_ystar, "True parameter")->capture_default_str();
    inverse->add_option("--noise", inv_noise, "Noise standard deviation")->capture_default_str();
    inverse->add_option("--K", inv_k, "Number of measurements")->capture_default_str();
    inverse->add_option("-w,--w", inv_w, "Surrogate level")->capture_default_str();
    inverse->add_option("--seed", inv_seed, "Noise seed")->capture_default_str();
    inverse->add_option("--samples", inv_samples, "Posterior samples of the integral (0: skip propagation)");
    inverse->add_option("--mesh", fwd_mesh, "Elements for the posterior propagation")->capture_default_str();
    inverse->add_option("--samples-out", inv_samples_out, "CSV of posterior samples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (threads_flag < 0) throw ParameterError("--threads must be non-negative");

    if (*build) {
        GridBundle b = build_src.load(build_fn.name);
        if (build_eval) ensure_values(b, build_fn, true);
        save_grid(build_out, b);
        std::cout << "tensor grids: " << b.grid.tensors.size() << "\nreduced knots: " << b.reduced.size() << '\n';
    } else if (*reduce_cmd) {
        GridBundle b = load_grid(reduce_path);
        const ReducedGrid fresh = reduce(b.grid, reduce_tol);
        if (fresh.size() != b.reduced.size() || fresh.knots != b.reduced.knots) b.values.reset();
        b.reduced = fresh;
        std::cout << "tensor grids: " << b.grid.tensors.size() << "\nextended knots: " << b.grid.extended_size()
                  << "\nreduced knots: " << b.reduced.size() << '\n';
        if (!reduce_out.empty()) save_grid(reduce_out, b);
    } else if (*quad) {
        GridBundle b = quad_src.load(quad_fn.name);
        ensure_values(b, quad_fn, quad_src.path.empty());
        const VectorXd q = quadrature(*b.values, b.reduced);
        for (Index v = 0; v < q.size(); ++v) std::cout << format_double(q[v]) << '\n';
        if (!quad_out.empty()) save_grid(quad_out, b);
    } else if (*interp) {
        GridBundle b = interp_src.load(interp_fn.name);
        ensure_values(b, interp_fn, interp_src.path.empty());
        MatrixXd pts;
        if (!interp_points.empty()) {
            pts = read_points_csv(interp_points, b.grid.dim);
        } else if (interp_random > 0) {
            const Domain dom = domain_of(b.grid.families);
            if (!dom.allFinite()) throw ParameterError("--random needs bounded families; use --points");
            std::mt19937_64 rng(interp_seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            pts.resize(b.grid.dim, interp_random);
            for (Index j = 0; j < pts.cols(); ++j)
                for (Index d = 0; d < pts.rows(); ++d) pts(d, j) = dom(0, d) + (dom(1, d) - dom(0, d)) * u(rng);
        } else {
            throw ParameterError("give --points or --random");
        }
        const MatrixXd f = interpolate(b.grid, b.reduced, *b.values, pts);
        std::ofstream file;
        std::ostream& out = open_output(interp_out, file);
        for (Index d = 0; d < pts.rows(); ++d) out << (d ? "," : "") << 'y' << d + 1;
        for (Index v = 0; v < f.rows(); ++v) out << ",f" << v + 1;
        out << '\n';
        for (Index j = 0; j < pts.cols(); ++j) {
            for (Index d = 0; d < pts.rows(); ++d) out << (d ? "," : "") << format_double(pts(d, j));
            for (Index v = 0; v < f.rows(); ++v) out << ',' << format_double(f(v, j));
            out << '\n';
        }
    } else if (*adapt_cmd) {
        controls.profit = profit_kind_from_string(adapt_profit);
        controls.threads = threads_flag;
        const VectorFunction f = adapt_fn.make(adapt_src.dim);
        std::optional<AdaptResult> previous;
        KnotFamilies families;
        LevelMap map;
        if (!adapt_resume.empty()) {
            GridBundle saved = load_grid(adapt_resume);
            if (!saved.adapt_state) throw ParameterError(adapt_resume + " carries no adapt state");
            previous.emplace();
            previous->dim = saved.grid.dim;
            previous->extended = saved.grid;
            previous->internal = *saved.adapt_state;
            families = saved.grid.families;
            map = saved.grid.level_map;
            adapt_src.dim = saved.grid.dim;
        } else {
            families = adapt_src.families(adapt_fn.name);
            map = adapt_src.level_map(LevelMap::doubling());
        }
        if (controls.profit == ProfitKind::weighted_Linf || controls.profit == ProfitKind::weighted_Linf_per_new_points) {
            controls.pdf_weight = [families](const VectorXd& y) {
                double p = 1;
                for (std::size_t n = 0; n < families.size(); ++n)
                    p *= families[n].distribution().pdf(y[static_cast<Index>(n)]);
                return p;
            };
        }
        const AdaptResult r =
            adapt(f, adapt_src.dim, families, map, controls, previous ? &*previous : nullptr);
        std::cout << "nb_pts: " << r.nb_pts << "\nnb_pts_visited: " << r.nb_pts_visited
                  << "\nnum_evals: " << r.num_evals << '\n';
        print_vector(std::cout, "intf", r.intf);
        if (!adapt_out.empty()) save_grid(adapt_out, GridBundle{r.extended, r.reduced, r.values, r.internal, {}});
    } else if (*pce) {
        GridBundle b = pce_src.load(pce_fn.name);
        ensure_values(b, pce_fn, pce_src.path.empty());
        b.pce = convert_to_modal(b.grid, b.reduced, *b.values, bases_for(b.grid.families));
        std::ofstream file;
        export_points(b, ExportKind::pce_coefficients, {}, open_output(pce_out, file));
        if (!pce_save.empty()) save_grid(pce_save, b);
    } else if (*sobol) {
        GridBundle b = sobol_src.load(sobol_fn.name);
        ensure_values(b, sobol_fn, sobol_src.path.empty());
        if (b.values->rows() != 1) throw ParameterError("Sobol indices need a single-output function");
        const SobolIndices s = sobol_indices(b.grid, b.reduced, *b.values, bases_for(b.grid.families));
        print_vector(std::cout, "principal", s.principal);
        print_vector(std::cout, "total", s.total);
    } else if (*export_cmd) {
        GridBundle b = load_grid(export_path);
        if (export_eval) ensure_values(b, export_fn, false);
        export_opts.two_dim_cuts = parse_cuts(export_cuts);
        if (!export_dims.empty()) {
            export_opts.projection.clear();
            for (double d : parse_list(export_dims)) export_opts.projection.push_back(static_cast<int>(d));
        }
        std::ofstream file;
        export_points(b, export_kind_from_string(export_what), export_opts, open_output(export_out, file));
    } else if (*forward) {
        DiffusionModel model;
        model.sigmas = demo_sigmas(fwd_sigmas, demo_n);
        model.mesh = fwd_mesh;
        if (fwd_knots == "cc")
            fwd.knots = DemoKnots::cc;
        else if (fwd_knots == "leja")
            fwd.knots = DemoKnots::leja;
        else
            throw ParameterError("--knots must be cc or leja");
        fwd.threads = threads_flag;
        const ForwardReport r = forward_uq(model, fwd);
        nlohmann::ordered_json j = {{"grid_points", r.grid_points},
                                    {"mean", r.mean},
                                    {"variance", r.variance},
                                    {"sobol_principal", std_vector(r.sobol.principal)},
                                    {"sobol_total", std_vector(r.sobol.total)}};
        std::cout << j.dump(2) << '\n';
        if (!fwd_samples_out.empty()) write_samples(fwd_samples_out, r.sample_points, r.sample_values);
    } else if (*inverse) {
        DiffusionModel model;
        model.sigmas = demo_sigmas(inv_sigmas, demo_n);
        model.mesh = inv_k + 1;
        const auto ys = parse_list(inv_ystar);
        const VectorXd y_star = Eigen::Map<const VectorXd>(ys.data(), static_cast<Index>(ys.size()));
        if (y_star.size() != model.dim()) throw ParameterError("--y-star and --sigmas differ in length");
        const InverseProblem problem = make_synthetic_problem(model, y_star, inv_noise, inv_seed);
        const Calibration cal = calibrate(model, problem, inv_w, threads_flag);
        nlohmann::ordered_json cov = nlohmann::ordered_json::array();
        for (Index r = 0; r < cal.posterior.cov.rows(); ++r) cov.push_back(std_vector(cal.posterior.cov.row(r).transpose()));
        nlohmann::ordered_json j = {{"y_map", std_vector(cal.y_map)},
                                    {"sigma_eps", cal.posterior.sigma_eps},
                                    {"posterior_cov", cov},
                                    {"surrogate_points", cal.surrogate.reduced.size()}};
        if (inv_samples > 0) {
            PosteriorConfig pc;
            pc.samples = inv_samples;
            pc.seed = inv_seed;
            pc.threads = threads_flag;
            DiffusionModel qoi_model = model;
            qoi_model.mesh = fwd_mesh;
            const PosteriorReport post = posterior_forward_uq(qoi_model, cal.y_map, cal.posterior.cov, pc);
            j["posterior_mean"] = post.mean;
            j["posterior_variance"] = post.variance;
            if (!inv_samples_out.empty()) {
                std::ofstream file;
                std::ostream& out = open_output(inv_samples_out, file);
                out << "qoi\n";
                for (Index k = 0; k < post.sample_values.size(); ++k) out << format_double(post.sample_values[k]) << '\n';
            }
        }
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const EvaluationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
