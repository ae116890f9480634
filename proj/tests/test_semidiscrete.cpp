#include "doctest.h"

#include <unsupported/Eigen/KroneckerProduct>

#include "iaf/semidiscrete.hpp"

using namespace iaf;

namespace {

Eigen::VectorXd flatten(const StateAF& s) {
    const int n = s.n_cells();
    Eigen::VectorXd v(2 * n);
    for (int k = 0; k < n; ++k) {
        v[k] = s.averages[k];
        v[n + k] = s.points[k];
    }
    return v;
}

StateAF unflatten(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size()) / 2;
    StateAF s(n, Layout::Periodic);
    for (int k = 0; k < n; ++k) {
        s.averages[k] = v[k];
        s.points[k] = v[n + k];
    }
    return s;
}

Eigen::MatrixXd operator_matrix(int n, double u, double dx) {
    Eigen::MatrixXd l(2 * n, 2 * n);
    for (int c = 0; c < 2 * n; ++c) l.col(c) = flatten(semidiscrete_rhs(unflatten(Eigen::VectorXd::Unit(2 * n, c)), u, dx));
    return l;
}

Eigen::MatrixXd step_matrix(const IrkStepper& stepper, int n) {
    Eigen::MatrixXd m(2 * n, 2 * n);
    for (int c = 0; c < 2 * n; ++c) m.col(c) = flatten(stepper.step(unflatten(Eigen::VectorXd::Unit(2 * n, c))));
    return m;
}

}  // namespace

TEST_CASE("right-hand side") {
    StateAF k(8, Layout::Periodic);
    std::fill(k.averages.begin(), k.averages.end(), 3.0);
    std::fill(k.points.begin(), k.points.end(), 3.0);
    const StateAF d = semidiscrete_rhs(k, 1.0, 0.1);
    for (double v : d.averages) CHECK(v == doctest::Approx(0.0).scale(1.0));
    for (double v : d.points) CHECK(v == doctest::Approx(0.0).scale(1.0));

    StateAF delta(8, Layout::Periodic);
    delta.points[1] = 1.0;  // the interface between cells 0 and 1
    const StateAF dd = semidiscrete_rhs(delta, 2.0, 0.5);
    CHECK(dd.averages[0] == doctest::Approx(-4.0));
    CHECK(dd.averages[1] == doctest::Approx(4.0));
    CHECK(dd.points[1] == doctest::Approx(-2.0 * 4.0 / 0.5));
    CHECK(dd.points[2] == doctest::Approx(-2.0 * 2.0 / 0.5));
}

TEST_CASE("tableaux") {
    const ButcherTableau r = tableau("radau-iia");
    CHECK(r.a(0, 0) == doctest::Approx(5.0 / 12));
    CHECK(r.a(0, 1) == doctest::Approx(-1.0 / 12));
    CHECK(r.a(1, 0) == doctest::Approx(0.75));
    CHECK(r.a(1, 1) == doctest::Approx(0.25));
    CHECK(r.b[0] == doctest::Approx(0.75));
    CHECK(r.c[0] == doctest::Approx(1.0 / 3));
    for (const auto& name : integrator_names()) {
        const ButcherTableau t = tableau(name);
        CHECK(t.b.sum() == doctest::Approx(1.0));
        for (int k = 0; k < t.stages(); ++k) CHECK(t.a.row(k).sum() == doctest::Approx(t.c[k]));
    }
    CHECK_THROWS(tableau("rk4"));
}

TEST_CASE("stability functions on the scalar test equation") {
    const std::complex<double> z(-0.7, 0.4);
    CHECK(std::abs(stability_function(tableau("backward-euler"), z) - 1.0 / (1.0 - z)) < 1e-14);
    CHECK(std::abs(stability_function(tableau("crank-nicolson"), z) - (1.0 + z / 2.0) / (1.0 - z / 2.0)) < 1e-14);
    const auto radau = (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
    CHECK(std::abs(stability_function(tableau("radau-iia"), z) - radau) < 1e-14);
    CHECK(std::abs(stability_function(tableau("radau-ia"), z) - radau) < 1e-14);
}

TEST_CASE("monolithic stage solve equals a dense Kronecker solve") {
    const int n = 10;
    const double u = 1.0, dx = 0.1, dt = 0.25;
    const Eigen::MatrixXd l = operator_matrix(n, u, dx);
    StateAF y0(n, Layout::Periodic);
    for (int k = 0; k < n; ++k) {
        y0.averages[k] = std::sin(0.6 * k);
        y0.points[k] = std::cos(0.9 * k);
    }
    const Eigen::VectorXd v0 = flatten(y0);
    for (const auto& name : integrator_names()) {
        const ButcherTableau t = tableau(name);
        const int s = t.stages();
        const Eigen::MatrixXd big = Eigen::MatrixXd::Identity(2 * n * s, 2 * n * s) -
                                    dt * Eigen::kroneckerProduct(t.a, l).eval();
        const Eigen::VectorXd rhs = Eigen::kroneckerProduct(Eigen::VectorXd::Ones(s), (l * v0).eval()).eval();
        const Eigen::VectorXd k = big.fullPivLu().solve(rhs);
        Eigen::VectorXd v1 = v0;
        for (int st = 0; st < s; ++st) v1 += dt * t.b[st] * k.segment(st * 2 * n, 2 * n);
        const Eigen::VectorXd got = flatten(irk_step(t, y0, u, dx, dt));
        INFO(name);
        CHECK((got - v1).norm() < 1e-12 * v1.norm());
    }
}

TEST_CASE("stage solves conserve mass") {
    const int n = 32;
    StateAF y(n, Layout::Periodic);
    for (int k = 0; k < n; ++k) {
        y.averages[k] = std::exp(-0.1 * (k - 10) * (k - 10));
        y.points[k] = y.averages[k];
    }
    for (const auto& name : integrator_names()) {
        const StateAF y1 = irk_step(tableau(name), y, 1.0, 1.0 / n, 3.0 / n);
        CHECK(std::abs(total_mass(y1, 1.0) - total_mass(y, 1.0)) <= 1e-12 * total_mass(y, 1.0));
    }
}

TEST_CASE("all five integrators are stable at c = 3") {
    const int n = 100;
    const double dx = 1.0 / n;
    for (const auto& name : integrator_names()) {
        const IrkStepper stepper(tableau(name), n, 1.0, dx, 3.0 * dx);
        const Eigen::VectorXcd ev = step_matrix(stepper, n).eigenvalues();
        INFO(name);
        CHECK(ev.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
    }
}

TEST_CASE("temporal orders on the periodic sine test") {
    const AdvectionProblem p{1.0, profile::Sine{}, PeriodicBoundary{}};
    for (const auto& [name, order] : std::vector<std::pair<std::string, double>>{
             {"backward-euler", 1.0}, {"crank-nicolson", 2.0}, {"radau-iia", 3.0}, {"dirk-crouzeix", 3.0}}) {
        std::vector<double> err;
        for (int n : {80, 160}) {
            const Grid1D g(n, 0.0, 1.0);
            const SemidiscreteRun r = run_semidiscrete(p, g, tableau(name), 0.5, 1.0);
            err.push_back(error_norms(r.final_state, exact_advection(p.initial, 1.0, r.final_time, g), g.dx()).l1_avg);
        }
        INFO(name);
        CHECK(std::log2(err[0] / err[1]) == doctest::Approx(order).epsilon(0.3 / order));
    }
}
