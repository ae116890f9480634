#include "doctest.h"

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>

#include "iaf/appendix.hpp"
#include "iaf/errors.hpp"
#include "iaf/stencil.hpp"

using namespace iaf;
using Rational = boost::multiprecision::cpp_rational;

namespace {

Rational rpow(const Rational& x, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Row of the interpolation condition attached to `dof`, monomial basis of degree < m.
std::vector<Rational> condition_row(Dof dof, int m, const Rational& c) {
    std::vector<Rational> row(m);
    const Rational h = 1 / c;
    for (int k = 0; k < m; ++k) {
        const int e = k + 1;
        switch (dof) {
            case Dof::PointOld: row[k] = k == 0 ? 1 : 0; break;
            case Dof::PointNew: row[k] = 1; break;
            case Dof::AvgLeftNew: row[k] = c * (rpow(1 + h, e) - 1) / e; break;
            case Dof::AvgRightNew: row[k] = c * (1 - rpow(1 - h, e)) / e; break;
            case Dof::AvgLeftOld: row[k] = c * rpow(h, e) / e; break;
            case Dof::AvgRightOld: row[k] = -c * rpow(-h, e) / e; break;
        }
    }
    return row;
}

// Solves M^T w = rhs exactly; nullopt when singular.
std::optional<std::vector<Rational>> solve_transposed(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m[j][i];
        a[i][n] = rhs[i];
    }
    for (int col = 0; col < n; ++col) {
        int p = col;
        while (p < n && a[p][col] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[col]);
        for (int i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            const Rational f = a[i][col] / a[col][col];
            for (int j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    std::vector<Rational> w(n);
    for (int i = 0; i < n; ++i) w[i] = a[i][n] / a[i][i];
    return w;
}

struct ExactWeights {
    std::array<Rational, kDofCount> point{};
    std::array<Rational, kDofCount> flux{};
};

std::optional<ExactWeights> exact_weights(const StencilMask& mask, const Rational& c) {
    std::vector<Dof> used;
    for (int d = 0; d < kDofCount; ++d)
        if (mask[d]) used.push_back(static_cast<Dof>(d));
    const int m = static_cast<int>(used.size());
    std::vector<std::vector<Rational>> rows;
    for (Dof d : used) rows.push_back(condition_row(d, m, c));
    std::vector<Rational> at(m), mean(m);
    for (int k = 0; k < m; ++k) {
        at[k] = rpow(1 - 1 / c, k);
        mean[k] = Rational(1, k + 1);
    }
    const auto wp = solve_transposed(rows, at);
    const auto wf = solve_transposed(rows, mean);
    if (!wp || !wf) return std::nullopt;
    ExactWeights out;
    for (int k = 0; k < m; ++k) {
        out.point[static_cast<int>(used[k])] = (*wp)[k];
        out.flux[static_cast<int>(used[k])] = (*wf)[k];
    }
    return out;
}

}  // namespace

TEST_CASE("mask parsing and enumeration") {
    const StencilMask m = StencilMask::parse("010|011");
    CHECK(m.order() == 3);
    CHECK(m.to_string() == "010|011");
    CHECK(m.uses(Dof::PointOld));
    CHECK(m.uses(Dof::AvgRightNew));
    CHECK_FALSE(m.uses(Dof::AvgLeftOld));
    CHECK_THROWS_AS(StencilMask::parse("0101011"), ConfigError);
    CHECK_THROWS_AS(StencilMask::parse("012|011"), ConfigError);
    CHECK(enumerate_masks(3).size() == 20);
    CHECK(enumerate_masks(4).size() == 15);
    CHECK(enumerate_masks(5).size() == 6);
    CHECK(enumerate_masks(6).size() == 1);
    const auto three = enumerate_masks(3);
    CHECK(std::is_sorted(three.begin(), three.end()));
}

TEST_CASE("3C at c = 3 against its closed form") {
    const SchemeWeights w = build_weights(StencilMask::parse("010|011"), 3.0);
    CHECK(w.point[static_cast<int>(Dof::AvgRightNew)] == doctest::Approx(12.0 / 7.0).epsilon(1e-14));
    CHECK(w.point[static_cast<int>(Dof::PointOld)] == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
    CHECK(w.point[static_cast<int>(Dof::PointNew)] == doctest::Approx(-16.0 / 21.0).epsilon(1e-14));
    CHECK(w.flux[static_cast<int>(Dof::AvgRightNew)] == doctest::Approx(9.0 / 7.0).epsilon(1e-14));
    CHECK(w.flux[static_cast<int>(Dof::PointOld)] == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(w.flux[static_cast<int>(Dof::PointNew)] == doctest::Approx(-4.0 / 7.0).epsilon(1e-14));
    for (Dof d : {Dof::AvgLeftOld, Dof::AvgRightOld, Dof::AvgLeftNew}) {
        CHECK(w.point[static_cast<int>(d)] == 0.0);
        CHECK(w.flux[static_cast<int>(d)] == 0.0);
    }
}

TEST_CASE("weights agree with an exact rational solve for all 42 masks") {
    for (const Rational c : {Rational(3), Rational(5, 2), Rational(2), Rational(7, 3)}) {
        const double cd = static_cast<double>(c);
        for (int order = 3; order <= 6; ++order)
            for (const auto& mask : enumerate_masks(order)) {
                const auto exact = exact_weights(mask, c);
                if (!exact) {
                    CHECK_THROWS_AS(build_weights(mask, cd), SingularCfl);
                    continue;
                }
                SchemeWeights w;
                try {
                    w = build_weights(mask, cd);
                } catch (const SingularCfl&) {
                    continue;  // nonsingular in exact arithmetic but past the condition limit
                }
                for (int d = 0; d < kDofCount; ++d) {
                    const double p = static_cast<double>(exact->point[d]);
                    const double f = static_cast<double>(exact->flux[d]);
                    INFO(mask.to_string(), " c=", cd, " dof ", d);
                    CHECK(std::abs(w.point[d] - p) <= 1e-10 * std::max(1.0, std::abs(p)));
                    CHECK(std::abs(w.flux[d] - f) <= 1e-10 * std::max(1.0, std::abs(f)));
                }
            }
    }
}

TEST_CASE("consistency: weights sum to one and unused DOFs carry none") {
    for (int order = 3; order <= 6; ++order)
        for (const auto& mask : enumerate_masks(order))
            for (double c : {1.5, 3.0, 4.5, 8.0}) {
                SchemeWeights w;
                try {
                    w = build_weights(mask, c);
                } catch (const SingularCfl&) {
                    continue;
                }
                double sp = 0.0, sf = 0.0;
                for (int d = 0; d < kDofCount; ++d) {
                    sp += w.point[d];
                    sf += w.flux[d];
                    if (!mask[d]) {
                        CHECK(w.point[d] == 0.0);
                        CHECK(w.flux[d] == 0.0);
                    }
                }
                CHECK(std::abs(sp - 1.0) <= 1e-12);
                CHECK(std::abs(sf - 1.0) <= 1e-12);
            }
}

TEST_CASE("unit CFL point weights reduce to a shift") {
    for (int order = 3; order <= 6; ++order)
        for (const auto& mask : enumerate_masks(order)) {
            if (!mask.uses(Dof::PointOld) || !mask.uses(Dof::PointNew)) continue;
            SchemeWeights w;
            try {
                w = build_weights(mask, 1.0);
            } catch (const SingularCfl&) {
                continue;
            }
            for (int d = 0; d < kDofCount; ++d)
                CHECK(w.point[d] == doctest::Approx(d == static_cast<int>(Dof::PointOld) ? 1.0 : 0.0).epsilon(1e-13));
        }
}

TEST_CASE("singular CFL of 3C") {
    CHECK_THROWS_AS(build_weights(StencilMask::parse("010|011"), 2.0 / 3.0), SingularCfl);
    try {
        build_weights(StencilMask::parse("010|011"), 2.0 / 3.0);
    } catch (const SingularCfl& e) {
        CHECK(e.cfl() == doctest::Approx(2.0 / 3.0));
    }
}

TEST_CASE("weights depend continuously on c") {
    const StencilMask m = StencilMask::parse("011|111");
    const SchemeWeights a = build_weights(m, 3.0);
    const SchemeWeights b = build_weights(m, 3.0 + 1e-7);
    for (int d = 0; d < kDofCount; ++d) CHECK(std::abs(a.point[d] - b.point[d]) < 1e-5);
}

TEST_CASE("mismatch up to scale") {
    const std::array<double, 3> a = {1.0, -2.0, 3.0};
    const std::array<double, 3> b = {-2.0, 4.0, -6.0};
    const std::array<double, 3> c = {1.0, 0.0, 0.0};
    CHECK(mismatch_up_to_scale(a, b) < 1e-15);
    CHECK(mismatch_up_to_scale(a, c) > 0.1);
}
