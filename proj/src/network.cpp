#include "iaf/network.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include "json.hpp"

#include "iaf/errors.hpp"

namespace iaf {

using nlohmann::json;

int NetworkConfig::edge_index(const std::string& id) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].id == id) return static_cast<int>(e);
    throw ConfigError("unknown edge '" + id + "'");
}

NetworkConfig parse_network_config(const std::string& json_text) {
    NetworkConfig cfg;
    try {
        const json j = json::parse(json_text);
        for (const auto& n : j.at("nodes")) cfg.nodes.push_back(n.get<std::string>());
        for (const auto& e : j.at("edges")) {
            NetworkEdge edge;
            edge.id = e.at("id").get<std::string>();
            edge.from = e.at("from").get<std::string>();
            edge.to = e.at("to").get<std::string>();
            edge.length = e.at("length").get<double>();
            edge.speed = e.at("speed").get<double>();
            edge.n_cells = e.at("n_cells").get<int>();
            edge.alpha = e.value("alpha", 1.0);
            cfg.edges.push_back(edge);
        }
        if (j.contains("boundary")) {
            const auto& b = j.at("boundary");
            const std::string type = b.value("type", "zero");
            if (type == "sine")
                cfg.boundary = signal::Sine{b.at("omega").get<double>(), b.value("amplitude", 1.0)};
            else if (type == "constant")
                cfg.boundary = signal::Constant{b.at("value").get<double>()};
            else if (type == "zero")
                cfg.boundary = signal::Zero{};
            else
                throw ConfigError("unknown boundary type '" + type + "'");
        }
        if (j.contains("initial"))
            for (const auto& i : j.at("initial"))
                cfg.initial[i.at("edge").get<std::string>()] = parse_profile(i.at("profile").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("network config: ") + e.what());
    }
    return cfg;
}

NetworkConfig load_network_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_network_config(ss.str());
}

NetworkConfig six_edge_network(int cells_per_unit_length) {
    NetworkConfig cfg;
    cfg.nodes = {"N0", "N1", "N2", "N3", "N4", "N5"};
    const int k = cells_per_unit_length;
    cfg.edges = {
        {"1", "N0", "N1", 5.0, 1.0, 5 * k, 1.0},
        {"2", "N1", "N2", 20.0, 2.0, 20 * k, 0.75},
        {"3", "N1", "N3", 20.0, 1.0, 20 * k, 0.25},
        {"4", "N2", "N4", 30.0, 1.0, 30 * k, 2.0 / 3.0},
        {"5", "N2", "N3", 20.0, 40.0 / 23.0, 20 * k, 1.0 / 3.0},
        {"6", "N3", "N5", 30.0, 1.0, 30 * k, 1.0},
    };
    cfg.boundary = signal::Sine{2.0 * M_PI / 3.0, 1.0};
    cfg.initial["1"] = profile::Gaussian{2.5, 0.5};
    return cfg;
}

std::vector<std::string> validate(const NetworkConfig& cfg, double dt) {
    std::vector<std::string> errs;
    const std::set<std::string> nodes(cfg.nodes.begin(), cfg.nodes.end());
    if (nodes.size() != cfg.nodes.size()) errs.push_back("duplicate node names");
    std::set<std::string> ids;
    std::map<std::string, double> alpha_sum;
    for (const auto& e : cfg.edges) {
        const std::string at = "edge " + e.id + ": ";
        if (!ids.insert(e.id).second) errs.push_back(at + "duplicate id");
        if (!nodes.count(e.from)) errs.push_back(at + "unknown tail node " + e.from);
        if (!nodes.count(e.to)) errs.push_back(at + "unknown head node " + e.to);
        if (!(e.length > 0)) errs.push_back(at + "length must be positive");
        if (!(e.speed > 0)) errs.push_back(at + "speed must be positive");
        if (e.n_cells < 2) errs.push_back(at + "needs at least 2 cells");
        if (!(e.alpha >= 0 && e.alpha <= 1)) errs.push_back(at + "coupling weight must lie in [0, 1]");
        alpha_sum[e.from] += e.alpha;
        if (dt > 0 && e.length > 0 && e.n_cells > 0 && e.speed * dt / e.dx() < 1.0 - 1e-12) {
            std::ostringstream os;
            os << at << "CFL " << e.speed * dt / e.dx() << " < 1 is not supported at inflow boundaries";
            errs.push_back(os.str());
        }
    }
    for (const auto& [node, sum] : alpha_sum)
        if (std::abs(sum - 1.0) > 1e-12) {
            std::ostringstream os;
            os << "node " << node << ": outgoing coupling weights sum to " << sum << ", not 1";
            errs.push_back(os.str());
        }
    for (const auto& id : cfg.initial)
        if (!ids.count(id.first)) errs.push_back("initial profile for unknown edge " + id.first);
    try {
        topological_order(cfg);
    } catch (const ConfigError& e) {
        errs.push_back(e.what());
    }
    return errs;
}

std::vector<int> topological_order(const NetworkConfig& cfg) {
    const int n = static_cast<int>(cfg.edges.size());
    std::vector<int> order, state(n, 0);
    // Depth-first: an edge is placed after every edge ending at its tail node.
    std::function<void(int)> visit = [&](int e) {
        if (state[e] == 2) return;
        if (state[e] == 1) throw ConfigError("network contains a cycle through edge " + cfg.edges[e].id);
        state[e] = 1;
        for (int f = 0; f < n; ++f)
            if (cfg.edges[f].to == cfg.edges[e].from) visit(f);
        state[e] = 2;
        order.push_back(e);
    };
    for (int e = 0; e < n; ++e) visit(e);
    return order;
}

std::vector<double> junction_reconstruction(int order, double cfl, double point_last_old,
                                            double point_last_new, double point_prev_old,
                                            double average_last_old) {
    if (order != 3 && order != 4) throw ConfigError("junction reconstruction order must be 3 or 4");
    if (std::abs(cfl - 1.0) < 1e-8)
        throw SingularCoupling("junction reconstruction is singular at CFL 1 on the upstream edge");
    const int m = order;
    const double h = 1.0 / cfl;
    Eigen::MatrixXd v(m, m);
    Eigen::VectorXd rhs(m);
    for (int k = 0; k < m; ++k) {
        v(0, k) = k == 0 ? 1.0 : 0.0;
        v(1, k) = 1.0;
        v(2, k) = std::pow(h, k);
        if (m == 4) v(3, k) = std::pow(h, k) / (k + 1);  // mean of tau^k over [0, h]
    }
    rhs[0] = point_last_old;
    rhs[1] = point_last_new;
    rhs[2] = point_prev_old;
    if (m == 4) rhs[3] = average_last_old;
    const Eigen::VectorXd x = v.fullPivLu().solve(rhs);
    return {x.data(), x.data() + m};
}

double evaluate_polynomial(const std::vector<double>& coeffs, double tau) {
    double s = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * tau + *it;
    return s;
}

int junction_order(int scheme_order) { return scheme_order <= 3 ? 3 : 4; }

NetworkSolver::NetworkSolver(NetworkConfig config, const StencilMask& mask, double dt)
    : config_(std::move(config)), dt_(dt), junction_order_(iaf::junction_order(mask.order())) {
    const auto errs = validate(config_, dt_);
    if (!errs.empty()) {
        std::string msg = "invalid network:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    order_ = topological_order(config_);
    for (const auto& e : config_.edges) {
        const double c = e.speed * dt_ / e.dx();
        cfls_.push_back(c);
        solvers_.emplace_back(build_weights(mask, c), Grid1D(e.n_cells, 0.0, e.length), e.speed);
    }
}

std::vector<StateAF> NetworkSolver::initial_states() const {
    std::vector<StateAF> s;
    for (const auto& e : config_.edges) {
        auto it = config_.initial.find(e.id);
        const ProfileDescriptor p = it == config_.initial.end() ? ProfileDescriptor{profile::Zero{}} : it->second;
        s.push_back(init_state(Grid1D(e.n_cells, 0.0, e.length), p, Layout::Bounded));
    }
    return s;
}

std::vector<StateAF> NetworkSolver::step(const std::vector<StateAF>& states, double t_n) const {
    const int n = static_cast<int>(config_.edges.size());
    if (static_cast<int>(states.size()) != n) throw ConfigError("network step: one state per edge expected");
    const BoundarySignal root = make_signal(config_.boundary);
    std::vector<StateAF> next(n);
    std::vector<std::vector<double>> outlet(n);
    for (int e : order_) {
        const NetworkEdge& edge = config_.edges[e];
        std::vector<int> upstream;
        for (int f = 0; f < n; ++f)
            if (config_.edges[f].to == edge.from) upstream.push_back(f);
        BoundarySignal b;
        if (upstream.empty()) {
            b = [&root, a = edge.alpha](double t) { return a * root(t); };
        } else {
            b = [this, &outlet, upstream, t_n, a = edge.alpha](double t) {
                const double tau = (t - t_n) / dt_;
                double s = 0.0;
                for (int f : upstream) s += evaluate_polynomial(outlet[f], tau);
                return a * s;
            };
        }
        next[e] = solvers_[e].step(states[e], b, t_n);
        const int nc = edge.n_cells;
        outlet[e] = junction_reconstruction(junction_order_, cfls_[e], states[e].points[nc], next[e].points[nc],
                                            states[e].points[nc - 1], states[e].averages[nc - 1]);
    }
    return next;
}

NetworkRun run_network(const NetworkConfig& config, const StencilMask& mask, double target_cfl,
                       int reference_edge, double final_time) {
    if (reference_edge < 0 || reference_edge >= static_cast<int>(config.edges.size()))
        throw ConfigError("reference edge out of range");
    const NetworkEdge& ref = config.edges[reference_edge];
    NetworkRun out;
    out.n_steps = snap_steps(ref.speed, final_time, target_cfl, ref.dx());
    out.dt = out.n_steps > 0 ? final_time / out.n_steps : target_cfl * ref.dx() / ref.speed;
    const NetworkSolver solver(config, mask, out.dt);
    out.edge_cfls = solver.edge_cfls();
    out.states = solver.initial_states();
    for (int s = 0; s < out.n_steps; ++s) out.states = solver.step(out.states, s * out.dt);
    out.final_time = out.n_steps * out.dt;
    return out;
}

double exact_network_solution(const NetworkConfig& cfg, double t, int edge, double x) {
    const NetworkEdge& e = cfg.edges.at(edge);
    const double s = t - x / e.speed;
    if (s < 0) {
        auto it = cfg.initial.find(e.id);
        return it == cfg.initial.end() ? 0.0 : evaluate(it->second, x - e.speed * t);
    }
    double inflow = 0.0;
    bool root = true;
    for (std::size_t f = 0; f < cfg.edges.size(); ++f)
        if (cfg.edges[f].to == e.from) {
            root = false;
            inflow += exact_network_solution(cfg, s, static_cast<int>(f), cfg.edges[f].length);
        }
    if (root) inflow = make_signal(cfg.boundary)(s);
    return e.alpha * inflow;
}

NetworkErrors network_errors(const NetworkConfig& cfg, const std::vector<StateAF>& states, double t) {
    NetworkErrors out;
    double pts_sum = 0.0;
    for (std::size_t e = 0; e < cfg.edges.size(); ++e) {
        const NetworkEdge& edge = cfg.edges[e];
        const Grid1D grid(edge.n_cells, 0.0, edge.length);
        StateAF exact(edge.n_cells, Layout::Bounded);
        auto f = [&](double x) { return exact_network_solution(cfg, t, static_cast<int>(e), x); };
        for (int j = 0; j <= edge.n_cells; ++j) exact.points[j] = f(grid.interface(j));
        for (int i = 0; i < edge.n_cells; ++i)
            exact.averages[i] = gauss5::integrate(f, grid.interface(i), grid.interface(i + 1)) / grid.dx();
        const ErrorNorms en = error_norms(states[e], exact, grid.dx());
        out.per_edge.push_back(en);
        out.total_cells += edge.n_cells;
        pts_sum += en.l1_pts * edge.n_cells;
        out.l1_avg_all += en.l1_avg;
        out.linf_pts_all = std::max(out.linf_pts_all, en.linf_pts);
    }
    out.l1_pts_all = out.total_cells > 0 ? pts_sum / out.total_cells : 0.0;
    return out;
}

}  // namespace iaf
