#include "doctest.h"

#include <cmath>

#include "iaf/errors.hpp"
#include "iaf/network.hpp"

using namespace iaf;

TEST_CASE("six-edge network parameters") {
    const NetworkConfig cfg = six_edge_network(8);
    CHECK(validate(cfg).empty());
    const double tau2 = cfg.edges[1].crossing_time();
    const double tau3 = cfg.edges[2].crossing_time();
    const double tau5 = cfg.edges[4].crossing_time();
    CHECK(tau2 + tau5 == doctest::Approx(21.5));
    CHECK(tau3 == doctest::Approx(20.0));
    const double a1 = cfg.edges[1].alpha, a2 = cfg.edges[3].alpha;
    CHECK(a1 * (1.0 - a2) == doctest::Approx(1.0 - a1));
    const double omega = 2.0 * M_PI / 3.0;
    CHECK(std::remainder(omega * (tau2 + tau5) - omega * tau3 - M_PI, 2.0 * M_PI) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("config file round trip") {
    const NetworkConfig cfg = load_network_config(IAF_SOURCE_DIR "/configs/six_edge_network.json");
    const NetworkConfig ref = six_edge_network(8);
    REQUIRE(cfg.edges.size() == ref.edges.size());
    for (std::size_t e = 0; e < cfg.edges.size(); ++e) {
        CHECK(cfg.edges[e].id == ref.edges[e].id);
        CHECK(cfg.edges[e].speed == ref.edges[e].speed);
        CHECK(cfg.edges[e].n_cells == ref.edges[e].n_cells);
        CHECK(cfg.edges[e].alpha == doctest::Approx(ref.edges[e].alpha).epsilon(1e-16));
    }
    CHECK_THROWS_AS(parse_network_config("{\"nodes\": [}"), ConfigError);
    CHECK_THROWS_AS(parse_network_config("{\"nodes\": [\"a\"], \"edges\": [{\"id\": \"1\"}]}"), ConfigError);
}

TEST_CASE("validation reports every violation") {
    NetworkConfig cfg = six_edge_network(4);
    cfg.edges[1].alpha = 0.5;
    cfg.edges.push_back({"7", "N5", "N0", 1.0, 1.0, 4, 1.0});
    const auto errs = validate(cfg);
    bool alpha = false, cycle = false;
    for (const auto& e : errs) {
        alpha = alpha || e.find("N1") != std::string::npos;
        cycle = cycle || e.find("cycle") != std::string::npos;
    }
    CHECK(alpha);
    CHECK(cycle);
    CHECK_THROWS_AS(topological_order(cfg), ConfigError);
    const NetworkConfig ok = six_edge_network(4);
    CHECK_FALSE(validate(ok, 0.01).empty());  // CFL below one on every edge
}

TEST_CASE("topological order") {
    const NetworkConfig cfg = six_edge_network(4);
    const auto order = topological_order(cfg);
    std::vector<int> pos(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
    for (std::size_t e = 0; e < cfg.edges.size(); ++e)
        for (std::size_t f = 0; f < cfg.edges.size(); ++f)
            if (cfg.edges[f].to == cfg.edges[e].from) CHECK(pos[f] < pos[e]);
}

TEST_CASE("junction reconstruction") {
    // Third order at c = 2 against the printed closed form.
    const double c = 2.0, qn = 0.7, qn1 = -0.2, qm = 1.1;
    const auto p = junction_reconstruction(3, c, qn, qn1, qm);
    CHECK(p[0] == doctest::Approx(qn));
    const double linear = (c * c * (qn - qm) + qn1 - qn) / (1.0 - c);
    CHECK(p[1] == doctest::Approx(linear));
    CHECK(evaluate_polynomial(p, 1.0) == doctest::Approx(qn1));
    CHECK(evaluate_polynomial(p, 1.0 / c) == doctest::Approx(qm));

    const double avg = 0.9;
    const auto p4 = junction_reconstruction(4, 3.0, qn, qn1, qm, avg);
    CHECK(evaluate_polynomial(p4, 0.0) == doctest::Approx(qn));
    CHECK(evaluate_polynomial(p4, 1.0) == doctest::Approx(qn1));
    CHECK(evaluate_polynomial(p4, 1.0 / 3.0) == doctest::Approx(qm));
    double mean = 0.0;
    for (std::size_t k = 0; k < p4.size(); ++k) mean += p4[k] * std::pow(1.0 / 3.0, k + 1) / (k + 1);
    CHECK(3.0 * mean == doctest::Approx(avg));

    CHECK_THROWS_AS(junction_reconstruction(3, 1.0, qn, qn1, qm), SingularCoupling);
    CHECK(junction_order(3) == 3);
    CHECK(junction_order(4) == 4);
    CHECK(junction_order(5) == 4);
}

TEST_CASE("exact network solution") {
    const NetworkConfig cfg = six_edge_network(8);
    const double omega = 2.0 * M_PI / 3.0;
    for (double t : {60.0, 73.3}) {
        for (double x : {0.0, 4.5, 17.0}) {
            CHECK(std::abs(exact_network_solution(cfg, t, 5, x)) < 1e-12);
            CHECK(exact_network_solution(cfg, t, 3, x) ==
                  doctest::Approx(0.75 * (2.0 / 3.0) * std::sin(omega * (t - 5.0 - 10.0 - x))));
        }
    }
    // Before any signal arrives only the initial pulse is present.
    CHECK(exact_network_solution(cfg, 0.0, 0, 2.5) == doctest::Approx(1.0));
    CHECK(exact_network_solution(cfg, 1.0, 0, 3.5) == doctest::Approx(1.0));
    CHECK(exact_network_solution(cfg, 1.0, 1, 3.0) == 0.0);
}

TEST_CASE("network run: interference on the last edge decays with resolution") {
    auto edge6 = [](int k) {
        const NetworkConfig cfg = six_edge_network(k);
        const NetworkRun r = run_network(cfg, resolve_scheme("4B").mask, 5.0, 0, 70.0);
        double m = 0.0;
        for (double v : r.states[5].points) m = std::max(m, std::abs(v));
        return m;
    };
    const double coarse = edge6(8);
    const double fine = edge6(16);
    CHECK(fine < coarse);
    CHECK(coarse < 1e-2);
}

TEST_CASE("network convergence against the back-traced solution") {
    std::vector<double> err;
    for (int k : {8, 16}) {
        const NetworkConfig cfg = six_edge_network(k);
        const NetworkRun r = run_network(cfg, resolve_scheme("4B").mask, 5.0, 0, 100.0);
        err.push_back(network_errors(cfg, r.states, r.final_time).l1_pts_all);
    }
    CHECK(std::log2(err[0] / err[1]) >= 3.5);
}
