#pragma once

#include <optional>
#include <string>

#include "iaf/appendix.hpp"
#include "iaf/banded.hpp"
#include "iaf/core.hpp"
#include "iaf/stencil.hpp"

namespace iaf {

// One time step of a single-stage implicit scheme on a periodic grid.
//
// Unknowns are ordered per cell k as [q_{k+1}^{n+1}, avg_k^{n+1}] (point index k+1
// wraps to 0 for the last cell). Row 2k is the point update producing q_{k+1}, row
// 2k+1 the average update of cell k. The matrix depends only on (scheme, c, N) and is
// factored once.
class PeriodicSolver {
public:
    PeriodicSolver(const SchemeWeights& weights, int n_cells);

    StateAF step(const StateAF& state) const;

    const SparseMatrix& implicit_matrix() const { return a_; }
    // Maps the flattened old state [averages..., points...] to minus the right-hand side.
    const SparseMatrix& explicit_matrix() const { return b_; }
    int n_cells() const { return n_; }

private:
    int n_;
    SparseMatrix a_;
    SparseMatrix b_;
    CyclicBandedLU lu_;
};

// How a Dirichlet step treats its (block lower triangular or banded) system.
enum class DirichletMethod { Auto, Banded, Marching };

// One time step on a bounded grid with inflow data b(t) at x_left.
//
// The inflow values q_0, q_1 and avg_0 at t^{n+1} follow from tracing characteristics
// back to the boundary, which requires c >= 1. Unknowns are [q_{k+1}, avg_k] for
// k = 1 .. N-1. Schemes without downwind averages keep the average equation of cell k;
// schemes using avg_{i+1}^{n+1} attribute the equation of cell k-1 to avg_k, with the
// inflow flux through x_left taken from b. Schemes using avg_{i+1}^n but not
// avg_{i+1}^{n+1} are rejected.
class DirichletSolver {
public:
    DirichletSolver(const SchemeWeights& weights, const Grid1D& grid, double speed);

    StateAF step(const StateAF& state, const BoundarySignal& b, double t_n,
                 DirichletMethod method = DirichletMethod::Auto) const;

    // True when every row references only its own or upwind blocks.
    bool can_march() const { return lower_triangular_; }
    bool shifts_equations() const { return shifted_; }
    const SparseMatrix& implicit_matrix() const { return a_; }

private:
    StateAF march(const std::vector<double>& rhs, StateAF next) const;

    int n_;
    double dx_;
    double speed_;
    double dt_;
    bool shifted_ = false;
    bool lower_triangular_ = true;
    SparseMatrix a_;
    SparseMatrix b_;
    std::optional<BandedLU> lu_;
    std::string lu_failure_;
};

// Traced inflow values at t^{n+1} = t_n + dt (requires speed * dt >= dx).
struct InflowValues {
    double point0 = 0.0;  // q_0 = b(t^{n+1})
    double point1 = 0.0;  // q_1 = b(t^{n+1} - dx/u)
    double average0 = 0.0;  // (u/dx) * integral of b over [t^{n+1} - dx/u, t^{n+1}]
    double flux0 = 0.0;  // (1/dt) * integral of b over [t^n, t^{n+1}]
};

InflowValues trace_inflow(const BoundarySignal& b, double t_n, double dt, double dx, double speed);

// Number of steps to reach T at roughly the target CFL: ceil(u T / (cfl dx)), with
// quotients within 1e-9 of an integer taken as that integer.
int snap_steps(double speed, double final_time, double target_cfl, double dx);

struct RunResult {
    StateAF final_state;
    double final_time = 0.0;
    int n_steps = 0;
    double dt = 0.0;
    double cfl = 0.0;
    SchemeId scheme;
    // Periodic runs only: |sum avg^end - sum avg^0| * dx and the initial mass.
    std::optional<double> mass_change;
    std::optional<double> initial_mass;
};

RunResult run(const AdvectionProblem& problem, const Grid1D& grid, const SchemeId& scheme,
              double target_cfl, double final_time);

}  // namespace iaf
