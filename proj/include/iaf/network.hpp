#pragma once

#include <map>
#include <string>
#include <vector>

#include "iaf/appendix.hpp"
#include "iaf/core.hpp"
#include "iaf/solver1d.hpp"

namespace iaf {

struct NetworkEdge {
    std::string id;
    std::string from;
    std::string to;
    double length = 1.0;
    double speed = 1.0;
    int n_cells = 8;
    double alpha = 1.0;  // share of the tail node's outflow entering this edge

    double crossing_time() const { return length / speed; }
    double dx() const { return length / n_cells; }
};

struct NetworkConfig {
    std::vector<std::string> nodes;
    std::vector<NetworkEdge> edges;
    SignalDescriptor boundary = signal::Zero{};  // b(t) at every root node
    std::map<std::string, ProfileDescriptor> initial;  // by edge id; zero if absent

    int edge_index(const std::string& id) const;
};

// Keys: nodes[], edges[]{id, from, to, length, speed, n_cells, alpha},
// boundary{type: "sine"|"constant"|"zero", omega, amplitude, value}, initial[]{edge, profile}.
NetworkConfig parse_network_config(const std::string& json_text);
NetworkConfig load_network_config(const std::string& path);

// The six-edge splitting/merging network with destructive interference on edge 6.
NetworkConfig six_edge_network(int cells_per_unit_length = 8);

// Every violation found, each naming its location; empty when valid. With dt > 0 the
// per-edge CFL numbers are checked too.
std::vector<std::string> validate(const NetworkConfig& config, double dt = 0.0);

// Edge indices such that every edge follows all edges entering its tail node.
std::vector<int> topological_order(const NetworkConfig& config);

// Outlet reconstruction in tau = (t - t^n)/dt, coefficients ascending:
// p(0) = q_N^n, p(1) = q_N^{n+1}, p(1/c) = q_{N-1}^n, and for order 4 also
// c * integral_0^{1/c} p = avg_{N-1}^n. Throws SingularCoupling when |c - 1| < 1e-8.
std::vector<double> junction_reconstruction(int order, double cfl, double point_last_old,
                                            double point_last_new, double point_prev_old,
                                            double average_last_old = 0.0);

double evaluate_polynomial(const std::vector<double>& coeffs, double tau);

// Junction order used with an interior scheme of the given order (3 -> 3, 4 and 5 -> 4).
int junction_order(int scheme_order);

class NetworkSolver {
public:
    NetworkSolver(NetworkConfig config, const StencilMask& mask, double dt);

    std::vector<StateAF> step(const std::vector<StateAF>& states, double t_n) const;
    std::vector<StateAF> initial_states() const;

    const NetworkConfig& config() const { return config_; }
    const std::vector<double>& edge_cfls() const { return cfls_; }
    double dt() const { return dt_; }
    int junction_order() const { return junction_order_; }

private:
    NetworkConfig config_;
    double dt_;
    int junction_order_;
    std::vector<double> cfls_;
    std::vector<int> order_;
    std::vector<DirichletSolver> solvers_;
};

struct NetworkRun {
    std::vector<StateAF> states;
    double final_time = 0.0;
    int n_steps = 0;
    double dt = 0.0;
    std::vector<double> edge_cfls;
};

// Global dt from the target CFL on `reference_edge`, snapped to hit T.
NetworkRun run_network(const NetworkConfig& config, const StencilMask& mask, double target_cfl,
                       int reference_edge, double final_time);

// Exact solution by tracing characteristics back through the junctions to the root
// signal or to the initial data.
double exact_network_solution(const NetworkConfig& config, double t, int edge, double x);

struct NetworkErrors {
    std::vector<ErrorNorms> per_edge;
    int total_cells = 0;
    double l1_pts_all = 0.0;  // (1 / total cells) * sum over all edge points
    double l1_avg_all = 0.0;  // sum over edges of dx_e * sum |avg - exact|
    double linf_pts_all = 0.0;
};

NetworkErrors network_errors(const NetworkConfig& config, const std::vector<StateAF>& states, double t);

}  // namespace iaf
