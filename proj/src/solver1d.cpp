#include "iaf/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iaf/errors.hpp"

namespace iaf {

namespace {

enum class Kind { AvgOld, PtOld, AvgNew, PtNew, InflowFlux };

struct Term {
    Kind kind;
    int index;
    double coef;
};

using Equation = std::vector<Term>;

// DOF d of the interface stencil around point j.
Term dof_term(int d, int j, double coef) {
    switch (static_cast<Dof>(d)) {
        case Dof::AvgLeftOld: return {Kind::AvgOld, j - 1, coef};
        case Dof::PointOld: return {Kind::PtOld, j, coef};
        case Dof::AvgRightOld: return {Kind::AvgOld, j, coef};
        case Dof::AvgLeftNew: return {Kind::AvgNew, j - 1, coef};
        case Dof::PointNew: return {Kind::PtNew, j, coef};
        case Dof::AvgRightNew: return {Kind::AvgNew, j, coef};
    }
    return {Kind::AvgOld, 0, 0.0};
}

// q_{j+1}^{n+1} - sum w_point . DOFs(j) = 0
Equation point_equation(const SchemeWeights& w, int j) {
    Equation e{{Kind::PtNew, j + 1, 1.0}};
    for (int d = 0; d < kDofCount; ++d)
        if (w.mask[d]) e.push_back(dof_term(d, j, -w.point[d]));
    return e;
}

void add_flux(Equation& e, const SchemeWeights& w, int j, double scale) {
    for (int d = 0; d < kDofCount; ++d)
        if (w.mask[d]) e.push_back(dof_term(d, j, scale * w.flux[d]));
}

// avg_k^{n+1} - avg_k^n + c (F_{k+1} - F_k) = 0, with F_k from b when `inflow`.
Equation average_equation(const SchemeWeights& w, int k, bool inflow = false) {
    Equation e{{Kind::AvgNew, k, 1.0}, {Kind::AvgOld, k, -1.0}};
    add_flux(e, w, k + 1, w.cfl);
    if (inflow)
        e.push_back({Kind::InflowFlux, 0, -w.cfl});
    else
        add_flux(e, w, k, -w.cfl);
    return e;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

StateAF unpack_periodic(const std::vector<double>& x, int n) {
    StateAF s(n, Layout::Periodic);
    for (int k = 0; k < n; ++k) {
        s.points[wrap(k + 1, n)] = x[2 * k];
        s.averages[k] = x[2 * k + 1];
    }
    return s;
}

std::string scheme_tag(const SchemeWeights& w) {
    std::ostringstream os;
    os.precision(17);
    os << w.mask.to_string() << " at CFL " << w.cfl;
    return os.str();
}

}  // namespace

PeriodicSolver::PeriodicSolver(const SchemeWeights& weights, int n_cells) : n_(n_cells) {
    if (n_ < 2) throw ConfigError("periodic solver needs at least 2 cells");
    const int n = n_;
    // Columns of the explicit operator: averages 0..N-1, then points 0..N-1.
    auto unknown = [n](const Term& t) {
        return t.kind == Kind::PtNew ? 2 * (wrap(t.index - 1, n)) : 2 * wrap(t.index, n) + 1;
    };
    auto known = [n](const Term& t) {
        return t.kind == Kind::AvgOld ? wrap(t.index, n) : n + wrap(t.index, n);
    };
    std::vector<Eigen::Triplet<double>> ta, tb;
    for (int k = 0; k < n; ++k) {
        const Equation rows[2] = {point_equation(weights, k), average_equation(weights, k)};
        for (int r = 0; r < 2; ++r)
            for (const Term& t : rows[r]) {
                if (t.kind == Kind::PtNew || t.kind == Kind::AvgNew)
                    ta.emplace_back(2 * k + r, unknown(t), t.coef);
                else
                    tb.emplace_back(2 * k + r, known(t), t.coef);
            }
    }
    a_ = SparseMatrix(2 * n, 2 * n);
    a_.setFromTriplets(ta.begin(), ta.end());
    b_ = SparseMatrix(2 * n, 2 * n);
    b_.setFromTriplets(tb.begin(), tb.end());
    try {
        lu_ = CyclicBandedLU(a_, 2);
    } catch (const NumericalError& e) {
        throw NumericalError("implicit system of scheme " + scheme_tag(weights) + " is singular: " + e.what());
    }
}

StateAF PeriodicSolver::step(const StateAF& state) const {
    if (state.layout != Layout::Periodic || state.n_cells() != n_)
        throw ConfigError("periodic step: state does not match the solver grid");
    Eigen::VectorXd old(2 * n_);
    for (int k = 0; k < n_; ++k) {
        old[k] = state.averages[k];
        old[n_ + k] = state.points[k];
    }
    Eigen::VectorXd rhs = -(b_ * old);
    std::vector<double> x(rhs.data(), rhs.data() + rhs.size());
    lu_.solve_in_place(x);
    return unpack_periodic(x, n_);
}

InflowValues trace_inflow(const BoundarySignal& b, double t_n, double dt, double dx, double speed) {
    const double t1 = t_n + dt;
    const double lag = dx / speed;
    if (lag > dt * (1 + 1e-12))
        throw ConfigError("Dirichlet inflow needs CFL >= 1 (traced time precedes t^n)");
    // Composite rule with panels no longer than dx/u.
    auto integral = [&b](double a, double z, double panel) {
        const int m = std::max(1, static_cast<int>(std::ceil((z - a) / panel - 1e-9)));
        const double h = (z - a) / m;
        double s = 0.0;
        for (int p = 0; p < m; ++p) s += gauss5::integrate(b, a + p * h, a + (p + 1) * h);
        return s;
    };
    InflowValues v;
    v.point0 = b(t1);
    v.point1 = b(t1 - lag);
    v.average0 = integral(t1 - lag, t1, lag) / lag;
    v.flux0 = integral(t_n, t1, lag) / dt;
    for (double x : {v.point0, v.point1, v.average0, v.flux0})
        if (!std::isfinite(x)) throw ConfigError("boundary signal is not finite at the traced times");
    return v;
}

DirichletSolver::DirichletSolver(const SchemeWeights& weights, const Grid1D& grid, double speed)
    : n_(grid.n_cells()), dx_(grid.dx()), speed_(speed), dt_(weights.cfl * grid.dx() / speed) {
    if (!(speed > 0)) throw ConfigError("advection speed must be positive");
    if (n_ < 2) throw ConfigError("Dirichlet solver needs at least 2 cells");
    if (weights.cfl < 1.0 - 1e-12)
        throw ConfigError("Dirichlet boundaries need CFL >= 1 (got " + scheme_tag(weights) + ")");
    const StencilMask& m = weights.mask;
    const bool right_old = m.uses(Dof::AvgRightOld);
    const bool right_new = m.uses(Dof::AvgRightNew);
    if (right_old && !right_new)
        throw UnsupportedBoundary("scheme " + m.to_string() +
                                  " uses avg_{i+1}^n without avg_{i+1}^{n+1}; its outflow equation has no "
                                  "unknown to shift to");
    shifted_ = right_new;

    const int n = n_;
    // Known columns: averages 0..N-1, points 0..N, then q_0^{n+1}, q_1^{n+1}, avg_0^{n+1}, F_0.
    const int c_pt0 = 2 * n + 1, c_pt1 = c_pt0 + 1, c_avg0 = c_pt0 + 2, c_flux = c_pt0 + 3;
    auto check = [n](const Term& t) {
        const int hi = (t.kind == Kind::PtOld || t.kind == Kind::PtNew) ? n : n - 1;
        if (t.index < 0 || t.index > hi) throw NumericalError("Dirichlet assembly: stencil leaves the grid");
    };
    std::vector<Eigen::Triplet<double>> ta, tb;
    for (int k = 1; k < n; ++k) {
        const Equation rows[2] = {point_equation(weights, k),
                                  shifted_ ? average_equation(weights, k - 1, k == 1) : average_equation(weights, k)};
        for (int r = 0; r < 2; ++r) {
            const int row = 2 * (k - 1) + r;
            for (const Term& t : rows[r]) {
                switch (t.kind) {
                    case Kind::InflowFlux: tb.emplace_back(row, c_flux, t.coef); break;
                    case Kind::AvgOld: check(t); tb.emplace_back(row, t.index, t.coef); break;
                    case Kind::PtOld: check(t); tb.emplace_back(row, n + t.index, t.coef); break;
                    case Kind::PtNew:
                        check(t);
                        if (t.index < 2)
                            tb.emplace_back(row, t.index == 0 ? c_pt0 : c_pt1, t.coef);
                        else
                            ta.emplace_back(row, 2 * (t.index - 2), t.coef);
                        break;
                    case Kind::AvgNew:
                        check(t);
                        if (t.index == 0)
                            tb.emplace_back(row, c_avg0, t.coef);
                        else
                            ta.emplace_back(row, 2 * (t.index - 1) + 1, t.coef);
                        break;
                }
            }
        }
    }
    const int dim = 2 * (n - 1);
    a_ = SparseMatrix(dim, dim);
    a_.setFromTriplets(ta.begin(), ta.end());
    b_ = SparseMatrix(dim, c_flux + 1);
    b_.setFromTriplets(tb.begin(), tb.end());
    for (const auto& t : ta)
        if (t.col() / 2 > t.row() / 2 && t.value() != 0.0) lower_triangular_ = false;
    try {
        lu_ = BandedLU(a_);
    } catch (const NumericalError& e) {
        lu_failure_ = "Dirichlet system of scheme " + scheme_tag(weights) + " is singular: " + e.what();
        // Block lower triangular systems still march; pivoting can break down on them first.
        if (!lower_triangular_) throw NumericalError(lu_failure_);
    }
}

StateAF DirichletSolver::step(const StateAF& state, const BoundarySignal& b, double t_n,
                              DirichletMethod method) const {
    if (state.layout != Layout::Bounded || state.n_cells() != n_)
        throw ConfigError("Dirichlet step: state does not match the solver grid");
    const InflowValues in = trace_inflow(b, t_n, dt_, dx_, speed_);
    const int n = n_;
    Eigen::VectorXd known(2 * n + 5);
    for (int k = 0; k < n; ++k) known[k] = state.averages[k];
    for (int j = 0; j <= n; ++j) known[n + j] = state.points[j];
    known[2 * n + 1] = in.point0;
    known[2 * n + 2] = in.point1;
    known[2 * n + 3] = in.average0;
    known[2 * n + 4] = in.flux0;
    const Eigen::VectorXd rhs = -(b_ * known);
    std::vector<double> x(rhs.data(), rhs.data() + rhs.size());

    StateAF next(n, Layout::Bounded);
    next.points[0] = in.point0;
    next.points[1] = in.point1;
    next.averages[0] = in.average0;

    const bool marching = method == DirichletMethod::Marching || (method == DirichletMethod::Auto && lower_triangular_);
    if (marching) {
        if (!lower_triangular_) throw ConfigError("marching requires a block lower triangular Dirichlet system");
        return march(x, std::move(next));
    }
    if (!lu_) throw NumericalError(lu_failure_);
    lu_->solve_in_place(x);
    for (int k = 1; k < n; ++k) {
        next.points[k + 1] = x[2 * (k - 1)];
        next.averages[k] = x[2 * (k - 1) + 1];
    }
    return next;
}

// Forward substitution over the 2x2 diagonal blocks, left to right.
StateAF DirichletSolver::march(const std::vector<double>& rhs, StateAF next) const {
    const int dim = static_cast<int>(rhs.size());
    std::vector<double> x(dim, 0.0);
    double scale = 1.0;
    for (int r = 0; r < a_.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a_, r); it; ++it) scale = std::max(scale, std::abs(it.value()));
    for (int blk = 0; 2 * blk < dim; ++blk) {
        Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
        Eigen::Vector2d r(rhs[2 * blk], rhs[2 * blk + 1]);
        for (int q = 0; q < 2; ++q) {
            const int row = 2 * blk + q;
            for (SparseMatrix::InnerIterator it(a_, row); it; ++it) {
                const int col = static_cast<int>(it.col());
                if (col / 2 == blk)
                    d(q, col - 2 * blk) += it.value();
                else
                    r[q] -= it.value() * x[col];
            }
        }
        const double det = d.determinant();
        if (!(std::abs(det) > 1e-13 * scale * scale)) throw NumericalError("Dirichlet marching: singular diagonal block");
        const Eigen::Vector2d s = d.inverse() * r;
        x[2 * blk] = s[0];
        x[2 * blk + 1] = s[1];
    }
    for (int k = 1; k < n_; ++k) {
        next.points[k + 1] = x[2 * (k - 1)];
        next.averages[k] = x[2 * (k - 1) + 1];
    }
    return next;
}

int snap_steps(double speed, double final_time, double target_cfl, double dx) {
    if (!(target_cfl > 0)) throw ConfigError("target CFL must be positive");
    if (!(final_time >= 0)) throw ConfigError("final time must be non-negative");
    const double q = speed * final_time / (target_cfl * dx);
    const double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return static_cast<int>(r);
    return static_cast<int>(std::ceil(q));
}

RunResult run(const AdvectionProblem& problem, const Grid1D& grid, const SchemeId& scheme,
              double target_cfl, double final_time) {
    problem.validate();
    const Layout layout = problem.periodic() ? Layout::Periodic : Layout::Bounded;
    RunResult out;
    out.scheme = scheme;
    out.n_steps = snap_steps(problem.speed, final_time, target_cfl, grid.dx());
    out.final_state = init_state(grid, problem.initial, layout);
    if (out.n_steps == 0) {
        out.cfl = target_cfl;
        if (layout == Layout::Periodic) {
            out.initial_mass = total_mass(out.final_state, grid.dx());
            out.mass_change = 0.0;
        }
        return out;
    }
    out.dt = final_time / out.n_steps;
    out.cfl = problem.speed * out.dt / grid.dx();
    out.final_time = out.dt * out.n_steps;
    const SchemeWeights w = build_weights(scheme.mask, out.cfl);

    if (layout == Layout::Periodic) {
        const double m0 = total_mass(out.final_state, grid.dx());
        const PeriodicSolver solver(w, grid.n_cells());
        for (int s = 0; s < out.n_steps; ++s) out.final_state = solver.step(out.final_state);
        out.initial_mass = m0;
        out.mass_change = std::abs(total_mass(out.final_state, grid.dx()) - m0);
    } else {
        const BoundarySignal b = make_signal(std::get<DirichletBoundary>(problem.boundary).signal);
        const DirichletSolver solver(w, grid, problem.speed);
        for (int s = 0; s < out.n_steps; ++s) out.final_state = solver.step(out.final_state, b, s * out.dt);
    }
    return out;
}

}  // namespace iaf
