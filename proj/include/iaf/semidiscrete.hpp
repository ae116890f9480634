#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iaf/banded.hpp"
#include "iaf/core.hpp"

namespace iaf {

struct ButcherTableau {
    std::string name;
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }
};

// "backward-euler", "crank-nicolson", "radau-ia", "radau-iia", "dirk-crouzeix"
ButcherTableau tableau(const std::string& name);
std::vector<std::string> integrator_names();

// Stability function R(z) = 1 + z b^T (I - z A)^{-1} 1.
std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z);

// Third-order semi-discrete Active Flux on a periodic grid:
//   d/dt avg_i = -u (q_{i+1/2} - q_{i-1/2}) / dx
//   d/dt q_{i+1/2} = -u (2 q_{i-1/2} - 6 avg_i + 4 q_{i+1/2}) / dx
StateAF semidiscrete_rhs(const StateAF& state, double speed, double dx);

// Implicit Runge-Kutta step for the linear semi-discretization. All stage
// derivatives are solved for at once; the stage matrix is factored in the constructor.
class IrkStepper {
public:
    IrkStepper(ButcherTableau t, int n_cells, double speed, double dx, double dt);

    StateAF step(const StateAF& state) const;
    const ButcherTableau& method() const { return tableau_; }

private:
    ButcherTableau tableau_;
    int n_;
    double speed_;
    double dx_;
    double dt_;
    CyclicBandedLU lu_;
};

StateAF irk_step(const ButcherTableau& t, const StateAF& state, double speed, double dx, double dt);

struct SemidiscreteRun {
    StateAF final_state;
    double final_time = 0.0;
    int n_steps = 0;
    double dt = 0.0;
    double cfl = 0.0;
    double initial_mass = 0.0;
    double mass_change = 0.0;
};

// Periodic problems only; time snapping as in run().
SemidiscreteRun run_semidiscrete(const AdvectionProblem& problem, const Grid1D& grid,
                                 const ButcherTableau& t, double target_cfl, double final_time);

}  // namespace iaf
