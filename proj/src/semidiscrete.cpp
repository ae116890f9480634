#include "iaf/semidiscrete.hpp"

#include <cmath>

#include "iaf/errors.hpp"
#include "iaf/solver1d.hpp"

namespace iaf {

ButcherTableau tableau(const std::string& name) {
    ButcherTableau t;
    t.name = name;
    if (name == "backward-euler") {
        t.a = Eigen::MatrixXd::Constant(1, 1, 1.0);
        t.b = Eigen::VectorXd::Constant(1, 1.0);
        t.c = Eigen::VectorXd::Constant(1, 1.0);
    } else if (name == "crank-nicolson") {
        t.a.resize(2, 2);
        t.a << 0.0, 0.0, 0.5, 0.5;
        t.b.resize(2);
        t.b << 0.5, 0.5;
        t.c.resize(2);
        t.c << 0.0, 1.0;
    } else if (name == "radau-ia") {
        t.a.resize(2, 2);
        t.a << 1.0 / 4, -1.0 / 4, 1.0 / 4, 5.0 / 12;
        t.b.resize(2);
        t.b << 1.0 / 4, 3.0 / 4;
        t.c.resize(2);
        t.c << 0.0, 2.0 / 3;
    } else if (name == "radau-iia") {
        t.a.resize(2, 2);
        t.a << 5.0 / 12, -1.0 / 12, 3.0 / 4, 1.0 / 4;
        t.b.resize(2);
        t.b << 3.0 / 4, 1.0 / 4;
        t.c.resize(2);
        t.c << 1.0 / 3, 1.0;
    } else if (name == "dirk-crouzeix") {
        const double s3 = std::sqrt(3.0);
        const double g = 0.5 + s3 / 6;
        t.a.resize(2, 2);
        t.a << g, 0.0, -s3 / 3, g;
        t.b.resize(2);
        t.b << 0.5, 0.5;
        t.c.resize(2);
        t.c << g, 0.5 - s3 / 6;
    } else {
        throw ConfigError("unknown integrator '" + name + "'");
    }
    return t;
}

std::vector<std::string> integrator_names() {
    return {"backward-euler", "crank-nicolson", "radau-ia", "radau-iia", "dirk-crouzeix"};
}

std::complex<double> stability_function(const ButcherTableau& t, std::complex<double> z) {
    const int s = t.stages();
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(s, s) - z * t.a.cast<std::complex<double>>();
    const Eigen::VectorXcd k = m.partialPivLu().solve(Eigen::VectorXcd::Ones(s));
    return 1.0 + z * (t.b.cast<std::complex<double>>().dot(k));
}

StateAF semidiscrete_rhs(const StateAF& state, double speed, double dx) {
    if (state.layout != Layout::Periodic) throw ConfigError("semi-discrete path supports periodic grids only");
    const int n = state.n_cells();
    const double s = speed / dx;
    StateAF d(n, Layout::Periodic);
    for (int i = 0; i < n; ++i) {
        const double left = state.points[i];
        const double right = state.points[(i + 1) % n];
        d.averages[i] = -s * (right - left);
        d.points[(i + 1) % n] = -s * (2 * left - 6 * state.averages[i] + 4 * right);
    }
    return d;
}

namespace {

// Entries of the semi-discrete operator in the per-cell ordering [q_{k+1}, avg_k].
std::vector<Eigen::Triplet<double>> operator_entries(int n, double s) {
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k < n; ++k) {
        const int pt_left = 2 * ((k + n - 1) % n);  // q_k
        const int pt_right = 2 * k;                 // q_{k+1}
        const int avg = 2 * k + 1;
        t.emplace_back(avg, pt_right, -s);
        t.emplace_back(avg, pt_left, s);
        t.emplace_back(pt_right, pt_left, -2 * s);
        t.emplace_back(pt_right, avg, 6 * s);
        t.emplace_back(pt_right, pt_right, -4 * s);
    }
    return t;
}

}  // namespace

IrkStepper::IrkStepper(ButcherTableau t, int n_cells, double speed, double dx, double dt)
    : tableau_(std::move(t)), n_(n_cells), speed_(speed), dx_(dx), dt_(dt) {
    if (n_ < 2) throw ConfigError("semi-discrete solver needs at least 2 cells");
    const int s = tableau_.stages();
    const int blk = 2 * s;
    // Unknown (cell k, stage i, component r) sits at blk k + 2 i + r.
    std::vector<Eigen::Triplet<double>> m;
    for (int p = 0; p < blk * n_; ++p) m.emplace_back(p, p, 1.0);
    for (const auto& e : operator_entries(n_, speed_ / dx_)) {
        const int kp = e.row() / 2, rp = e.row() % 2;
        const int kq = e.col() / 2, rq = e.col() % 2;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j) {
                const double a = tableau_.a(i, j);
                if (a == 0.0) continue;
                m.emplace_back(blk * kp + 2 * i + rp, blk * kq + 2 * j + rq, -dt_ * a * e.value());
            }
    }
    SparseMatrix mat(blk * n_, blk * n_);
    mat.setFromTriplets(m.begin(), m.end());
    try {
        lu_ = CyclicBandedLU(mat, blk);
    } catch (const NumericalError& e) {
        throw NumericalError("stage system of " + tableau_.name + " is singular: " + e.what());
    }
}

StateAF IrkStepper::step(const StateAF& state) const {
    if (state.layout != Layout::Periodic || state.n_cells() != n_)
        throw ConfigError("IRK step: state does not match the stepper grid");
    const int s = tableau_.stages();
    const int blk = 2 * s;
    const StateAF f = semidiscrete_rhs(state, speed_, dx_);
    std::vector<double> k(static_cast<std::size_t>(blk) * n_);
    for (int c = 0; c < n_; ++c)
        for (int i = 0; i < s; ++i) {
            k[blk * c + 2 * i] = f.points[(c + 1) % n_];
            k[blk * c + 2 * i + 1] = f.averages[c];
        }
    lu_.solve_in_place(k);
    StateAF next = state;
    for (int c = 0; c < n_; ++c)
        for (int i = 0; i < s; ++i) {
            const double w = dt_ * tableau_.b(i);
            next.points[(c + 1) % n_] += w * k[blk * c + 2 * i];
            next.averages[c] += w * k[blk * c + 2 * i + 1];
        }
    return next;
}

StateAF irk_step(const ButcherTableau& t, const StateAF& state, double speed, double dx, double dt) {
    return IrkStepper(t, state.n_cells(), speed, dx, dt).step(state);
}

SemidiscreteRun run_semidiscrete(const AdvectionProblem& problem, const Grid1D& grid,
                                 const ButcherTableau& t, double target_cfl, double final_time) {
    problem.validate();
    if (!problem.periodic()) throw ConfigError("semi-discrete path supports periodic grids only");
    SemidiscreteRun out;
    out.n_steps = snap_steps(problem.speed, final_time, target_cfl, grid.dx());
    out.final_state = init_state(grid, problem.initial, Layout::Periodic);
    out.initial_mass = total_mass(out.final_state, grid.dx());
    out.cfl = target_cfl;
    if (out.n_steps == 0) return out;
    out.dt = final_time / out.n_steps;
    out.cfl = problem.speed * out.dt / grid.dx();
    out.final_time = out.dt * out.n_steps;
    const IrkStepper stepper(t, grid.n_cells(), problem.speed, grid.dx(), out.dt);
    for (int n = 0; n < out.n_steps; ++n) out.final_state = stepper.step(out.final_state);
    out.mass_change = std::abs(total_mass(out.final_state, grid.dx()) - out.initial_mass);
    return out;
}

}  // namespace iaf
