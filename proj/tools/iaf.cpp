// iaf: command-line front end for the implicit Active Flux library.
//
// Every command writes CSV (to --out, or stdout) and, when --out is given, a JSON
// manifest next to it (<out>.manifest.json). `iaf replay MANIFEST` re-runs the
// recorded command line.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "iaf/appendix.hpp"
#include "iaf/errors.hpp"
#include "iaf/network.hpp"
#include "iaf/semidiscrete.hpp"
#include "iaf/solver1d.hpp"
#include "iaf/stability.hpp"

using json = nlohmann::json;
using namespace iaf;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Collects CSV text and writes it to a file or stdout.
class Csv {
public:
    explicit Csv(std::vector<std::string> header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
        out_ << '\n';
    }

    void write(const std::string& path) const {
        if (path.empty()) {
            std::cout << out_.str();
            return;
        }
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write '" + path + "'");
        f << out_.str();
    }

private:
    std::ostringstream out_;
};

struct Context {
    std::vector<std::string> argv;
    std::string out;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

void write_manifest(const Context& ctx, const std::string& command, json fields) {
    if (ctx.out.empty()) return;
    fields["command"] = command;
    fields["argv"] = ctx.argv;
    fields["outputs"] = json::array({ctx.out});
    fields["library_version"] = IAF_VERSION;
    fields["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
    std::ofstream f(ctx.out + ".manifest.json");
    if (!f) throw ConfigError("cannot write manifest for '" + ctx.out + "'");
    f << fields.dump(2) << '\n';
}

void warn_if_unstable(const StencilMask& mask, double cfl) {
    const Verdict v = classify(mask, cfl).verdict;
    if (v != Verdict::Stable)
        std::cerr << "warning: scheme " << mask.to_string() << " is " << to_string(v) << " at c = " << cfl << '\n';
}

void state_rows(Csv& csv, const Grid1D& g, const StateAF& s) {
    for (std::size_t j = 0; j < s.points.size(); ++j)
        csv.row({"point", std::to_string(j), num(g.interface(static_cast<int>(j))), num(s.points[j])});
    for (std::size_t i = 0; i < s.averages.size(); ++i)
        csv.row({"average", std::to_string(i), num(g.center(static_cast<int>(i))), num(s.averages[i])});
}

struct GridFlags {
    int cells = 100;
    double x_left = 0.0;
    double x_right = 2.0;
    double speed = 1.0;
    double cfl = 3.0;
    double tfinal = 8.0;
    std::string profile = "jiang-shu";
};

void add_grid_flags(CLI::App* app, GridFlags& f) {
    app->add_option("--cells", f.cells, "Number of cells")->check(CLI::PositiveNumber);
    app->add_option("--xleft", f.x_left, "Left end of the domain");
    app->add_option("--xright", f.x_right, "Right end of the domain");
    app->add_option("--speed", f.speed, "Advection speed u > 0");
    app->add_option("--cfl", f.cfl, "Target CFL number");
    app->add_option("--tfinal", f.tfinal, "Final time");
    app->add_option("--profile", f.profile, "zero | constant:K | sine[:K] | gaussian:C,W | jiang-shu");
}

json run_fields(const RunResult& r, const Grid1D& g) {
    return {{"scheme", r.scheme.label},
            {"mask", r.scheme.mask.to_string()},
            {"cells", g.n_cells()},
            {"x_left", g.x_left()},
            {"x_right", g.x_right()},
            {"cfl", r.cfl},
            {"dt", r.dt},
            {"t_final", r.final_time},
            {"n_steps", r.n_steps}};
}

int cmd_run(const Context& ctx, const GridFlags& f, const std::string& scheme, const std::string& bc,
            const std::string& inflow) {
    const SchemeId id = resolve_scheme(scheme);
    const Grid1D g(f.cells, f.x_left, f.x_right);
    AdvectionProblem p{f.speed, parse_profile(f.profile), PeriodicBoundary{}};
    if (bc == "dirichlet") p.boundary = DirichletBoundary{parse_signal(inflow)};
    else if (bc != "periodic") throw ConfigError("--bc must be periodic or dirichlet");
    if (f.tfinal > 0) warn_if_unstable(id.mask, f.cfl);
    const RunResult r = run(p, g, id, f.cfl, f.tfinal);
    Csv csv({"kind", "index", "x", "value"});
    state_rows(csv, g, r.final_state);
    csv.write(ctx.out);
    json m = run_fields(r, g);
    m["profile"] = f.profile;
    m["bc"] = bc;
    if (r.mass_change) m["mass_change"] = *r.mass_change;
    write_manifest(ctx, "run", m);
    return 0;
}

int cmd_convergence(const Context& ctx, GridFlags f, const std::string& scheme, int min_cells, int max_cells) {
    const SchemeId id = resolve_scheme(scheme);
    const AdvectionProblem p{f.speed, parse_profile(f.profile), PeriodicBoundary{}};
    warn_if_unstable(id.mask, f.cfl);
    Csv csv({"cells", "dt", "cfl", "L1_avg", "l1_pts", "linf_pts", "order_L1", "order_l1"});
    json grids = json::array();
    double prev_avg = std::numeric_limits<double>::quiet_NaN(), prev_pts = prev_avg;
    auto order = [](double coarse, double fine) {
        if (!(coarse > 0) || !(fine > 0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log2(coarse / fine);
    };
    for (int n = min_cells; n <= max_cells; n *= 2) {
        const Grid1D g(n, f.x_left, f.x_right);
        const RunResult r = run(p, g, id, f.cfl, f.tfinal);
        const ErrorNorms e = error_norms(r.final_state, exact_advection(p.initial, f.speed, r.final_time, g), g.dx());
        csv.row({std::to_string(n), num(r.dt), num(r.cfl), num(e.l1_avg), num(e.l1_pts), num(e.linf_pts),
                 num(order(prev_avg, e.l1_avg)), num(order(prev_pts, e.l1_pts))});
        grids.push_back(run_fields(r, g));
        prev_avg = e.l1_avg;
        prev_pts = e.l1_pts;
    }
    csv.write(ctx.out);
    write_manifest(ctx, "convergence", {{"scheme", id.label}, {"profile", f.profile}, {"grids", grids}});
    return 0;
}

std::string windows_text(const StabilityReport& r) {
    std::string s;
    for (const auto& w : r.windows) s += (s.empty() ? "" : ";") + num(w.lo) + ":" + num(w.hi);
    return s;
}

int cmd_stability(const Context& ctx, const std::string& scheme, bool verdicts) {
    std::vector<StabilityReport> reports;
    if (scheme.empty()) reports = scan_all();
    else reports.push_back(scan_cmin(resolve_scheme(scheme).mask));
    if (verdicts) {
        Csv csv({"mask", "name", "c", "verdict"});
        for (const auto& r : reports)
            for (std::size_t k = 0; k < r.cfls.size(); ++k)
                csv.row({r.mask.to_string(), r.name, num(r.cfls[k]), to_string(r.verdicts[k])});
        csv.write(ctx.out);
    } else {
        Csv csv({"mask", "name", "order", "c_min", "marginal", "windows"});
        for (const auto& r : reports)
            csv.row({r.mask.to_string(), r.name, std::to_string(r.mask.order()),
                     r.c_min ? num(*r.c_min) : "none", r.marginal ? "1" : "0", "\"" + windows_text(r) + "\""});
        csv.write(ctx.out);
    }
    write_manifest(ctx, "stability", {{"scheme", scheme.empty() ? "all" : scheme}, {"cfl_step", 0.05}, {"n_cfl", 200}});
    return 0;
}

int cmd_curves(const Context& ctx, const std::string& scheme, double cfl, int n_beta, double level) {
    const SchemeId id = resolve_scheme(scheme);
    const DiffusionDispersionCurve c = curves(id.mask, cfl, n_beta, level);
    Csv csv({"scheme", "c", "beta", "abs_z1", "abs_z2", "diffusion", "dispersion"});
    for (const auto& s : c.samples)
        csv.row({id.label, num(cfl), num(s.beta), num(std::abs(s.z1)), num(std::abs(s.z2)), num(s.diffusion),
                 num(s.dispersion)});
    csv.write(ctx.out);
    if (c.ambiguous_branch) std::cerr << "warning: eigenvalue branches collide; physical branch taken as max |z|\n";
    write_manifest(ctx, "curves", {{"scheme", id.label},
                                   {"cfl", cfl},
                                   {"n_beta", n_beta},
                                   {"level", level},
                                   {"beta_half", c.beta_half},
                                   {"ambiguous_branch", c.ambiguous_branch}});
    return 0;
}

int cmd_network(const Context& ctx, const std::string& config_path, int cells_per_unit, const std::string& scheme,
                double cfl, int reference_edge, double tfinal) {
    const NetworkConfig cfg = config_path.empty() ? six_edge_network(cells_per_unit) : load_network_config(config_path);
    const SchemeId id = resolve_scheme(scheme);
    const NetworkRun r = run_network(cfg, id.mask, cfl, reference_edge, tfinal);
    Csv csv({"edge", "kind", "index", "x", "value", "exact"});
    for (std::size_t e = 0; e < cfg.edges.size(); ++e) {
        const NetworkEdge& edge = cfg.edges[e];
        const StateAF& s = r.states[e];
        for (std::size_t j = 0; j < s.points.size(); ++j) {
            const double x = j * edge.dx();
            csv.row({edge.id, "point", std::to_string(j), num(x), num(s.points[j]),
                     num(exact_network_solution(cfg, r.final_time, static_cast<int>(e), x))});
        }
        for (std::size_t i = 0; i < s.averages.size(); ++i)
            csv.row({edge.id, "average", std::to_string(i), num((i + 0.5) * edge.dx()), num(s.averages[i]), ""});
    }
    csv.write(ctx.out);
    const NetworkErrors err = network_errors(cfg, r.states, r.final_time);
    json edges = json::array();
    for (std::size_t e = 0; e < cfg.edges.size(); ++e)
        edges.push_back({{"id", cfg.edges[e].id},
                         {"cfl", r.edge_cfls[e]},
                         {"l1_pts", err.per_edge[e].l1_pts},
                         {"linf_pts", err.per_edge[e].linf_pts}});
    write_manifest(ctx, "network", {{"scheme", id.label},
                                    {"config", config_path.empty() ? "six-edge" : config_path},
                                    {"dt", r.dt},
                                    {"n_steps", r.n_steps},
                                    {"t_final", r.final_time},
                                    {"total_cells", err.total_cells},
                                    {"l1_pts_all", err.l1_pts_all},
                                    {"linf_pts_all", err.linf_pts_all},
                                    {"edges", edges}});
    return 0;
}

int cmd_enumerate(const Context& ctx, int order) {
    Csv csv({"mask", "order", "name"});
    for (int o = 3; o <= 6; ++o) {
        if (order != 0 && o != order) continue;
        for (const auto& m : enumerate_masks(o)) csv.row({m.to_string(), std::to_string(o), match_appendix(m).value_or("")});
    }
    csv.write(ctx.out);
    write_manifest(ctx, "enumerate", {{"order", order}});
    return 0;
}

int cmd_semidiscrete(const Context& ctx, const GridFlags& f, const std::string& integrator) {
    const Grid1D g(f.cells, f.x_left, f.x_right);
    const AdvectionProblem p{f.speed, parse_profile(f.profile), PeriodicBoundary{}};
    const SemidiscreteRun r = run_semidiscrete(p, g, tableau(integrator), f.cfl, f.tfinal);
    Csv csv({"kind", "index", "x", "value"});
    state_rows(csv, g, r.final_state);
    csv.write(ctx.out);
    write_manifest(ctx, "semidiscrete", {{"integrator", integrator},
                                         {"cells", f.cells},
                                         {"x_left", f.x_left},
                                         {"x_right", f.x_right},
                                         {"cfl", r.cfl},
                                         {"dt", r.dt},
                                         {"t_final", r.final_time},
                                         {"n_steps", r.n_steps},
                                         {"mass_change", r.mass_change}});
    return 0;
}

int dispatch(std::vector<std::string> args);

int cmd_replay(const std::string& manifest) {
    std::ifstream in(manifest);
    if (!in) throw ConfigError("cannot open manifest '" + manifest + "'");
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    if (!m.contains("argv")) throw ConfigError("manifest has no argv");
    return dispatch(m.at("argv").get<std::vector<std::string>>());
}

int dispatch(std::vector<std::string> args) {
    CLI::App app{"Implicit Active Flux schemes for linear advection"};
    app.require_subcommand(1);
    Context ctx;
    ctx.argv = args;

    GridFlags run_f, conv_f, semi_f;
    conv_f.x_right = 1.0;
    conv_f.profile = "sine";
    conv_f.tfinal = 10.0;
    std::string scheme = "3C", bc = "periodic", inflow = "sine:6.283185307179586", integrator = "radau-iia";
    std::string config, manifest;
    int min_cells = 20, max_cells = 640, order = 0, n_beta = 1025, cells_per_unit = 8, reference_edge = 0;
    double cfl = 3.0, level = 0.995, tfinal = 70.0, net_cfl = 5.0;
    bool verdicts = false;

    auto out_flag = [&](CLI::App* s) { s->add_option("--out", ctx.out, "Output CSV path (default stdout)"); };

    auto* run_c = app.add_subcommand("run", "Single-stage implicit run");
    add_grid_flags(run_c, run_f);
    run_c->add_option("--scheme", scheme, "Name (3C) or mask (010|011)");
    run_c->add_option("--bc", bc, "periodic | dirichlet");
    run_c->add_option("--inflow", inflow, "Dirichlet signal: zero | constant:K | sine:OMEGA[,AMP]");
    out_flag(run_c);

    auto* conv_c = app.add_subcommand("convergence", "Errors and orders over doubling grids");
    add_grid_flags(conv_c, conv_f);
    conv_c->add_option("--scheme", scheme, "Name or mask");
    conv_c->add_option("--min-cells", min_cells)->check(CLI::PositiveNumber);
    conv_c->add_option("--max-cells", max_cells)->check(CLI::PositiveNumber);
    out_flag(conv_c);

    auto* stab_c = app.add_subcommand("stability", "Von Neumann scan over c in (0, 10]");
    stab_c->add_option("--scheme", scheme, "Name or mask (default: all 42 masks)");
    stab_c->add_flag("--verdicts", verdicts, "One row per sampled c");
    out_flag(stab_c);

    auto* curves_c = app.add_subcommand("curves", "Diffusion and dispersion of the physical eigenvalue");
    curves_c->add_option("--scheme", scheme, "Name or mask");
    curves_c->add_option("--cfl", cfl);
    curves_c->add_option("--nbeta", n_beta)->check(CLI::Range(2, 1 << 20));
    curves_c->add_option("--level", level, "Half-width level");
    out_flag(curves_c);

    auto* net_c = app.add_subcommand("network", "Transport on a network of edges");
    net_c->add_option("--config", config, "JSON network description (default: six-edge test network)");
    net_c->add_option("--cells-per-unit", cells_per_unit, "Resolution of the built-in network")->check(CLI::PositiveNumber);
    net_c->add_option("--scheme", scheme, "Name or mask");
    net_c->add_option("--cfl", net_cfl);
    net_c->add_option("--reference-edge", reference_edge, "Edge index the CFL refers to");
    net_c->add_option("--tfinal", tfinal);
    out_flag(net_c);

    auto* enum_c = app.add_subcommand("enumerate", "List stencil masks with tabulated names");
    enum_c->add_option("--order", order, "3..6, 0 for all")->check(CLI::Range(0, 6));
    out_flag(enum_c);

    auto* semi_c = app.add_subcommand("semidiscrete", "Method of lines with an implicit Runge-Kutta method");
    add_grid_flags(semi_c, semi_f);
    semi_c->add_option("--integrator", integrator,
                       "backward-euler | crank-nicolson | radau-ia | radau-iia | dirk-crouzeix");
    out_flag(semi_c);

    auto* replay_c = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay_c->add_option("manifest", manifest)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (run_c->parsed()) return cmd_run(ctx, run_f, scheme, bc, inflow);
    if (conv_c->parsed()) return cmd_convergence(ctx, conv_f, scheme, min_cells, max_cells);
    if (stab_c->parsed()) return cmd_stability(ctx, stab_c->count("--scheme") ? scheme : "", verdicts);
    if (curves_c->parsed()) return cmd_curves(ctx, scheme, cfl, n_beta, level);
    if (net_c->parsed()) return cmd_network(ctx, config, cells_per_unit, scheme, net_cfl, reference_edge, tfinal);
    if (enum_c->parsed()) return cmd_enumerate(ctx, order);
    if (semi_c->parsed()) return cmd_semidiscrete(ctx, semi_f, integrator);
    if (replay_c->parsed()) return cmd_replay(manifest);
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(std::vector<std::string>(argv, argv + argc));
    } catch (const SingularCfl& e) {
        std::cerr << "error: " << e.what() << " (singular at c = " << e.cfl() << ")\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
