#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace iaf {

// Equidistant cells [x_left + i dx, x_left + (i+1) dx], i = 0 .. n_cells-1.
class Grid1D {
public:
    Grid1D(int n_cells, double x_left, double x_right);

    int n_cells() const { return n_cells_; }
    double x_left() const { return x_left_; }
    double x_right() const { return x_right_; }
    double length() const { return x_right_ - x_left_; }
    double dx() const { return dx_; }

    double interface(int j) const { return x_left_ + j * dx_; }
    double center(int i) const { return x_left_ + (i + 0.5) * dx_; }

private:
    int n_cells_;
    double x_left_;
    double x_right_;
    double dx_;
};

enum class Layout { Periodic, Bounded };

// Cell averages and interface point values at one time level.
//
// Point j sits at x_left + j dx. Periodic layouts store j = 0 .. N-1 (point N
// is point 0); bounded layouts store j = 0 .. N.
struct StateAF {
    std::vector<double> averages;
    std::vector<double> points;
    Layout layout = Layout::Periodic;

    StateAF() = default;
    StateAF(int n_cells, Layout layout);

    int n_cells() const { return static_cast<int>(averages.size()); }
    static int n_points(int n_cells, Layout layout) {
        return layout == Layout::Periodic ? n_cells : n_cells + 1;
    }
    // Throws ConfigError if lengths disagree with the layout or entries are not finite.
    void validate() const;
};

namespace profile {

struct Zero {};
struct Constant {
    double value = 1.0;
};
// sin(wavenumber * x)
struct Sine {
    double wavenumber = 2.0 * M_PI;
};
// exp(-((x - center) / width)^2)
struct Gaussian {
    double center = 0.0;
    double width = 1.0;
};
// Gaussian / square / triangle / half-ellipse test profile, defined on [-1, 1]
// and shifted by `offset` (default maps it onto [0, 2]).
struct JiangShuComposite {
    double a = 0.5;
    double z0 = -0.7;
    double delta = 0.005;
    double alpha = 10.0;
    double beta_g = std::log(2.0) / (36.0 * 0.005 * 0.005);
    double offset = 1.0;
};

}  // namespace profile

using ProfileDescriptor = std::variant<profile::Zero, profile::Constant, profile::Sine,
                                       profile::Gaussian, profile::JiangShuComposite>;

double evaluate(const ProfileDescriptor& profile, double x);
std::string describe(const ProfileDescriptor& profile);

// "zero", "constant:K", "sine[:K]", "gaussian:CENTER,WIDTH", "jiang-shu"
ProfileDescriptor parse_profile(const std::string& text);

// Boundary data b(t) for an inflow boundary.
using BoundarySignal = std::function<double(double)>;

namespace signal {
struct Zero {};
struct Constant {
    double value = 0.0;
};
// amplitude * sin(omega * t)
struct Sine {
    double omega = 1.0;
    double amplitude = 1.0;
};
}  // namespace signal

using SignalDescriptor = std::variant<signal::Zero, signal::Constant, signal::Sine>;

BoundarySignal make_signal(const SignalDescriptor& descriptor);

// "zero", "constant:K", "sine[:OMEGA[,AMPLITUDE]]"
SignalDescriptor parse_signal(const std::string& text);

struct PeriodicBoundary {};
struct DirichletBoundary {
    SignalDescriptor signal;
};
using BoundaryCondition = std::variant<PeriodicBoundary, DirichletBoundary>;

struct AdvectionProblem {
    double speed = 1.0;
    ProfileDescriptor initial;
    BoundaryCondition boundary = PeriodicBoundary{};

    // Throws ConfigError unless speed > 0.
    void validate() const;
    bool periodic() const { return std::holds_alternative<PeriodicBoundary>(boundary); }
};

// Five-point Gauss-Legendre rule (exact for polynomials of degree <= 9).
namespace gauss5 {
inline constexpr std::array<double, 5> nodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
inline constexpr std::array<double, 5> weights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

template <class F>
double integrate(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * f(mid + half * nodes[k]);
    return half * sum;
}
}  // namespace gauss5

StateAF init_state(const Grid1D& grid, const ProfileDescriptor& profile, Layout layout);

// Exact solution q0(x - u t) of a periodic problem, wrapped into the grid's domain and
// discretized like init_state.
StateAF exact_advection(const ProfileDescriptor& profile, double speed, double t,
                        const Grid1D& grid);

struct ErrorNorms {
    double l1_avg = 0.0;    // dx * sum |avg - avg_exact|
    double l1_pts = 0.0;    // (1/N) * sum |pt - pt_exact|
    double linf_pts = 0.0;  // max |pt - pt_exact|
};

ErrorNorms error_norms(const StateAF& state, const StateAF& exact, double dx);

double total_mass(const StateAF& state, double dx);
// Sum of |avg_{i+1} - avg_i|, cyclic for periodic layouts.
double total_variation(const StateAF& state);

}  // namespace iaf
