#include "doctest.h"

#include <cmath>

#include "iaf/core.hpp"
#include "iaf/errors.hpp"

using namespace iaf;

TEST_CASE("grid spacing and indexing") {
    const Grid1D g(8, -1.0, 3.0);
    CHECK(g.dx() == 0.5);
    CHECK(g.interface(0) == -1.0);
    CHECK(g.interface(8) == 3.0);
    CHECK(g.center(0) == -0.75);
}

TEST_CASE("state layouts") {
    CHECK(StateAF(5, Layout::Periodic).points.size() == 5);
    CHECK(StateAF(5, Layout::Bounded).points.size() == 6);
    StateAF s(3, Layout::Periodic);
    s.points.push_back(0.0);
    CHECK_THROWS_AS(s.validate(), ConfigError);
    StateAF t(3, Layout::Bounded);
    t.averages[1] = std::nan("");
    CHECK_THROWS_AS(t.validate(), NumericalError);
}

TEST_CASE("init_state: trivial profiles") {
    const Grid1D g(10, 0.0, 1.0);
    const StateAF z = init_state(g, profile::Zero{}, Layout::Periodic);
    for (double v : z.averages) CHECK(v == 0.0);
    const StateAF one = init_state(g, profile::Constant{1.0}, Layout::Bounded);
    for (double v : one.averages) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    for (double v : one.points) CHECK(v == 1.0);
}

TEST_CASE("init_state: sine averages against the antiderivative") {
    const Grid1D g(20, 0.0, 1.0);
    const StateAF s = init_state(g, profile::Sine{}, Layout::Periodic);
    const double k = 2.0 * M_PI;
    for (int i = 0; i < 20; ++i) {
        const double exact = (std::cos(k * g.interface(i)) - std::cos(k * g.interface(i + 1))) / (k * g.dx());
        CHECK(std::abs(s.averages[i] - exact) <= 1e-12);
        CHECK(s.points[i] == doctest::Approx(std::sin(k * g.interface(i))));
    }
}

TEST_CASE("gauss5 integrates degree 9 exactly") {
    for (int p = 0; p <= 9; ++p) {
        const double got = gauss5::integrate([p](double x) { return std::pow(x, p); }, 0.3, 1.7);
        const double exact = (std::pow(1.7, p + 1) - std::pow(0.3, p + 1)) / (p + 1);
        CHECK(std::abs(got - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("exact_advection") {
    const Grid1D g(40, 0.0, 1.0);
    const ProfileDescriptor q0 = profile::Gaussian{0.4, 0.1};
    const StateAF s0 = init_state(g, q0, Layout::Periodic);
    const StateAF same = exact_advection(q0, 1.0, 0.0, g);
    const StateAF period = exact_advection(q0, 2.0, 0.5, g);
    for (int i = 0; i < 40; ++i) {
        CHECK(same.averages[i] == s0.averages[i]);
        CHECK(period.averages[i] == doctest::Approx(s0.averages[i]).epsilon(1e-12));
        CHECK(period.points[i] == doctest::Approx(s0.points[i]).epsilon(1e-12));
    }
    const StateAF sine = exact_advection(profile::Sine{}, 1.0, 0.25, g);
    CHECK(sine.points[20] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("error norms") {
    StateAF a(2, Layout::Periodic), b(2, Layout::Periodic);
    a.averages = {1.0, -1.0};
    a.points = {0.1, 0.3};
    const ErrorNorms e = error_norms(a, b, 0.5);
    CHECK(e.l1_avg == doctest::Approx(1.0));
    CHECK(e.l1_pts == doctest::Approx(0.2));
    CHECK(e.linf_pts == doctest::Approx(0.3));
    const ErrorNorms r = error_norms(b, a, 0.5);
    CHECK(r.l1_avg == e.l1_avg);
    CHECK(r.l1_pts == e.l1_pts);
    const ErrorNorms zero = error_norms(a, a, 0.5);
    CHECK(zero.l1_avg == 0.0);
    CHECK(zero.linf_pts == 0.0);
}

TEST_CASE("mass and total variation") {
    StateAF s(4, Layout::Periodic);
    s.averages = {0.0, 1.0, 0.0, 1.0};
    CHECK(total_mass(s, 0.25) == doctest::Approx(0.5));
    CHECK(total_variation(s) == doctest::Approx(4.0));
    StateAF b(4, Layout::Bounded);
    b.averages = {0.0, 1.0, 0.0, 1.0};
    CHECK(total_variation(b) == doctest::Approx(3.0));
}

TEST_CASE("profile and signal parsing") {
    CHECK(std::holds_alternative<profile::JiangShuComposite>(parse_profile("jiang-shu")));
    const auto g = std::get<profile::Gaussian>(parse_profile("gaussian:2.5,0.5"));
    CHECK(g.center == 2.5);
    CHECK(g.width == 0.5);
    CHECK_THROWS_AS(parse_profile("gaussian:1"), ConfigError);
    CHECK_THROWS_AS(parse_profile("square"), ConfigError);
    const auto s = std::get<signal::Sine>(parse_signal("sine:2,0.5"));
    CHECK(s.omega == 2.0);
    CHECK(s.amplitude == 0.5);
    CHECK(make_signal(signal::Constant{3.0})(7.0) == 3.0);
    CHECK_THROWS_AS(parse_signal("sine:x"), ConfigError);
}

TEST_CASE("jiang-shu profile sits on [0, 2]") {
    const profile::JiangShuComposite p;
    CHECK(evaluate(p, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    double peak = 0.0;
    for (int k = 0; k <= 2000; ++k) peak = std::max(peak, evaluate(p, k * 1e-3));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));
}
