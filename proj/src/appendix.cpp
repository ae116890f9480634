#include "iaf/appendix.hpp"

#include <algorithm>

#include "iaf/errors.hpp"

namespace iaf {

namespace {

// Point slots: avg_i^n, q_{i+1/2}^n, avg_{i+1}^n, avg_i^{n+1}, q_{i+1/2}^{n+1}, avg_{i+1}^{n+1}, q_{i+3/2}^{n+1}
enum P { pA0, pQ0, pA1, pB0, pR0, pB1, pR1 };
// Average slots: avg_{i-1}^n, q_{i-1/2}^n, avg_i^n, q_{i+1/2}^n, avg_{i+1}^n,
//                avg_{i-1}^{n+1}, q_{i-1/2}^{n+1}, avg_i^{n+1}, q_{i+1/2}^{n+1}, avg_{i+1}^{n+1}
enum A { aAm, aQm, aA0, aQp, aAp, aBm, aRm, aB0, aRp, aBp };

double sq(double x) { return x * x; }

// 3rd order

PointResidual p3A(double c) {
    PointResidual r{};
    r[pB0] = (c - 1) * (-1 + 3 * c);
    r[pB1] = 5 + (4 - 9 * c) * c;
    r[pQ0] = -4;
    r[pR1] = -2 + 6 * c * c;
    return r;
}
AverageResidual a3A(double c) {
    AverageResidual r{};
    r[aBm] = sq(c - 1) * c * c;
    r[aBp] = c * c * sq(1 + c);
    r[aA0] = 2 - 6 * c * c;
    r[aB0] = -2 * (c * c - 1) * (c * c - 1);
    r[aQm] = -2 * c * (c * c - 1);
    r[aQp] = 2 * c * (c * c - 1);
    return r;
}

PointResidual p3B(double c) {
    PointResidual r{};
    r[pA1] = -4;
    r[pB0] = c * (-1 + 3 * c);
    r[pB1] = -(1 + c) * (-4 + 9 * c);
    r[pR1] = 6 * c * (1 + c);
    return r;
}
AverageResidual a3B(double c) {
    AverageResidual r{};
    r[aAp] = 2 * (c - 1);
    r[aBm] = (c - 1) * c;
    r[aA0] = -2 * (2 + c);
    r[aBp] = (1 + c) * (2 + c);
    r[aB0] = 4 - 2 * c * (1 + c);
    return r;
}

PointResidual p3C(double c) {
    PointResidual r{};
    r[pB1] = 6 * (c - 1) * c;
    r[pQ0] = 1;
    r[pR0] = -1 + (4 - 3 * c) * c;
    r[pR1] = (2 - 3 * c) * c;
    return r;
}
AverageResidual a3C(double c) {
    AverageResidual r{};
    r[aBp] = -c * c * c;
    r[aA0] = -2 + 3 * c;
    r[aB0] = 2 - 3 * c + c * c * c;
    r[aQm] = (c - 1) * c;
    r[aRm] = -sq(c - 1) * c;
    r[aQp] = -(c - 1) * c;
    r[aRp] = sq(c - 1) * c;
    return r;
}

PointResidual p3D(double c) {
    PointResidual r{};
    r[pA1] = 1;
    r[pB1] = -1 + 6 * c * c;
    r[pR0] = c - 3 * c * c;
    r[pR1] = -c * (1 + 3 * c);
    return r;
}
AverageResidual a3D(double c) {
    AverageResidual r{};
    r[aAp] = (c - 1) * c;
    r[aA0] = -sq(1 + c);
    r[aBp] = c * sq(1 + c);
    r[aB0] = 1 + 2 * c - c * c * (2 + c);
    r[aRm] = c * (c * c - 1);
    r[aRp] = c - c * c * c;
    return r;
}

PointResidual p3E(double c) {
    PointResidual r{};
    r[pA0] = -4;
    r[pB1] = (13 - 9 * c) * c;
    r[pB0] = (c - 1) * (-4 + 3 * c);
    r[pR1] = 6 * (c - 1) * c;
    return r;
}
AverageResidual a3E(double c) {
    AverageResidual r{};
    r[aA0] = 2 * (c - 2);
    r[aBm] = (c - 2) * (c - 1);
    r[aAm] = -2 * (1 + c);
    r[aB0] = -2 * (c - 2) * (1 + c);
    r[aBp] = c * (1 + c);
    return r;
}

PointResidual p3F(double c) {
    PointResidual r{};
    r[pA0] = 1;
    r[pB1] = 5 + 6 * (c - 2) * c;
    r[pR0] = -4 + (7 - 3 * c) * c;
    r[pR1] = (2 - 3 * c) * (c - 1);
    return r;
}
AverageResidual a3F(double c) {
    AverageResidual r{};
    r[aA0] = (c - 2) * (c - 1);
    r[aAm] = -c * c;
    r[aBp] = (c - 1) * c * c;
    r[aB0] = -(c - 2) * (-1 + c + c * c);
    r[aRm] = (c - 2) * (c - 1) * c;
    r[aRp] = -(c - 2) * (c - 1) * c;
    return r;
}

PointResidual p3G(double c) {
    PointResidual r{};
    r[pA1] = -5;
    r[pB0] = -1 + 6 * c * c;
    r[pR0] = -(1 + c) * (-4 + 9 * c);
    r[pR1] = (1 + c) * (2 + 3 * c);
    return r;
}
AverageResidual a3G(double c) {
    AverageResidual r{};
    r[aAp] = c * c;
    r[aBm] = c * c * (1 + c);
    r[aA0] = -(1 + c) * (2 + c);
    r[aB0] = 2 - c * (-3 + c + c * c);
    r[aRm] = -c * (1 + c) * (2 + c);
    r[aRp] = c * (1 + c) * (2 + c);
    return r;
}

PointResidual p3H(double c) {
    PointResidual r{};
    r[pB0] = 6 * (c - 1) * c;
    r[pQ0] = -5;
    r[pR0] = 5 + (4 - 9 * c) * c;
    r[pR1] = c * (2 + 3 * c);
    return r;
}
AverageResidual a3H(double c) {
    AverageResidual r{};
    r[aA0] = -2 - 3 * c;
    r[aBm] = c * c * c;
    r[aB0] = 2 + 3 * c - c * c * c;
    r[aQm] = -c * (1 + c);
    r[aRm] = -c * sq(1 + c);
    r[aQp] = c * (1 + c);
    r[aRp] = c * sq(1 + c);
    return r;
}

PointResidual p3I(double c) {
    PointResidual r{};
    r[pA0] = -5;
    r[pB0] = 5 + 6 * (-2 + c) * c;
    r[pR0] = (13 - 9 * c) * c;
    r[pR1] = c * (-1 + 3 * c);
    return r;
}
AverageResidual a3I(double c) {
    AverageResidual r{};
    r[aA0] = sq(c - 1);
    r[aBm] = sq(c - 1) * c;
    r[aAm] = -c * (1 + c);
    r[aB0] = -(1 + c) * (1 + (-3 + c) * c);
    r[aRm] = c - c * c * c;
    r[aRp] = c * (c * c - 1);
    return r;
}

// 4th order

PointResidual p4A(double c) {
    PointResidual r{};
    r[pA1] = -1;
    r[pB0] = -c * c * c;
    r[pB1] = 1 - c * c * (6 + 5 * c);
    r[pR0] = c * (1 + c) * (-1 + 4 * c);
    r[pR1] = c * (1 + c) * (1 + 2 * c);
    return r;
}
AverageResidual a4A(double c) {
    AverageResidual r{};
    r[aAp] = 2 * (c - 1) * c;
    r[aA0] = -2 * (1 + c) * (2 + c);
    r[aBp] = c * sq(1 + c) * (2 + c);
    r[aB0] = -2 * (c - 1) * (2 + c) * (1 + 2 * c);
    r[aBm] = c * c - c * c * c * c;
    r[aRm] = 2 * (c - 1) * c * (1 + c) * (2 + c);
    r[aRp] = -2 * (c - 1) * c * (1 + c) * (2 + c);
    return r;
}

PointResidual p4B(double c) {
    PointResidual r{};
    r[pB0] = (c - 1) * c * (-1 + 2 * c);
    r[pB1] = (c - 1) * c * (7 + 10 * c);
    r[pQ0] = 2;
    r[pR0] = -2 * (c - 1) * (-1 + c + 4 * c * c);
    r[pR1] = c * (2 - 4 * c * c);
    return r;
}
AverageResidual a4B(double c) {
    AverageResidual r{};
    const double e = c * c - 1;
    r[aBm] = -sq(c - 1) * c * c * c;
    r[aBp] = c * c * c * sq(1 + c);
    r[aA0] = 4 - 8 * c * c;
    r[aB0] = -4 * e * e;
    r[aQm] = -2 * c * e;
    r[aRm] = 2 * c * e * e;
    r[aQp] = 2 * c * e;
    r[aRp] = -2 * c * e * e;
    return r;
}

PointResidual p4C(double c) {
    PointResidual r{};
    r[pA0] = -1;
    r[pB0] = -sq(c - 1) * (c - 1);
    r[pB1] = c * (-3 + (9 - 5 * c) * c);
    r[pR0] = (c - 1) * c * (-5 + 4 * c);
    r[pR1] = (c - 1) * c * (-1 + 2 * c);
    return r;
}
AverageResidual a4C(double c) {
    AverageResidual r{};
    r[aA0] = 2 * (c - 2) * (c - 1);
    r[aBm] = -(c - 2) * sq(c - 1) * c;
    r[aAm] = -2 * c * (1 + c);
    r[aB0] = -2 * (c - 2) * (1 + c) * (-1 + 2 * c);
    r[aBp] = c * c * (c * c - 1);
    r[aRm] = 2 * (c - 2) * (c - 1) * c * (1 + c);
    r[aRp] = -2 * (c - 2) * (c - 1) * c * (1 + c);
    return r;
}

PointResidual p4D(double c) {
    PointResidual r{};
    r[pA1] = (c - 1) * (-5 + 4 * c);
    r[pA0] = -(1 + c) * (-1 + 4 * c);
    r[pB0] = (c - 1) * (1 + c * (-5 + 3 * c));
    r[pB1] = -(1 + c) * (5 + c * (-17 + 9 * c));
    r[pR1] = 6 * c * (c * c - 1);
    return r;
}
AverageResidual a4D(double c) {
    AverageResidual r{};
    r[aBm] = (c - 2) * (c - 1);
    r[aAp] = -(c - 2) * (c - 1);
    r[aAm] = -(1 + c) * (2 + c);
    r[aBp] = (1 + c) * (2 + c);
    r[aB0] = 8 - 2 * c * c;
    r[aA0] = 2 * (-4 + c * c);
    return r;
}

// 5th order

PointResidual p5A(double c) {
    PointResidual r{};
    r[pB0] = -(c - 1) * c * c * (-1 + 5 * c * c);
    r[pA1] = 2 * (c - 1) * (-2 + c + 5 * c * c);
    r[pB1] = -(c - 1) * sq(1 + c) * (-4 + 5 * c * (2 + 5 * c));
    r[pQ0] = -2 * c * (1 + c) * (1 + 5 * c);
    r[pR0] = 2 * (c - 1) * c * (1 + c) * (-3 + 5 * c * (1 + 2 * c));
    r[pR1] = 2 * c * sq(1 + c) * (-2 + 5 * c * c);
    return r;
}
AverageResidual a5A(double c) {
    AverageResidual r{};
    const double k = (c - 1) * c * (1 + c) * (2 + c);
    r[aAp] = sq(c - 1) * c * c;
    r[aBm] = 0.5 * sq(c - 1) * c * c * c;
    r[aBp] = -0.5 * c * c * sq(1 + c) * (2 + c);
    r[aB0] = sq(c - 1) * (2 + c) * (2 + 3 * c);
    r[aA0] = -4 + c * c * (9 - (c - 2) * c);
    r[aQm] = k;
    r[aRm] = -(c - 1) * k;
    r[aQp] = -k;
    r[aRp] = (c - 1) * k;
    return r;
}

PointResidual p5B(double c) {
    PointResidual r{};
    r[pB0] = -sq(c - 1) * (4 + 5 * (c - 2) * c);
    r[pA0] = -2 * (-2 + c + 5 * c * c);
    r[pB1] = c * (-16 + c * (9 + 5 * (8 - 5 * c) * c));
    r[pQ0] = 2 * (c - 1) * (-4 + 5 * c);
    r[pR0] = 2 * (c - 1) * (-1 + 2 * c) * (-4 + 5 * (c - 1) * c);
    r[pR1] = 2 * (c - 1) * c * (-2 + 5 * c * c);
    return r;
}
AverageResidual a5B(double c) {
    AverageResidual r{};
    const double k = 2 * (c - 2) * (c - 1) * c * (1 + c);
    r[aBm] = (c - 2) * sq(c - 1) * c * c;
    r[aAm] = 2 * c * c * sq(1 + c);
    r[aBp] = -c * c * c * sq(1 + c);
    r[aB0] = 2 * (c - 2) * sq(1 + c) * (-2 + 3 * c);
    r[aA0] = -2 * (4 + c * c * (-9 + c * (2 + c)));
    r[aQm] = -k;
    r[aRm] = -k * (1 + c);
    r[aQp] = k;
    r[aRp] = k * (1 + c);
    return r;
}

PointResidual p5C(double c) {
    PointResidual r{};
    r[pA1] = sq(c - 1) * (-4 + 5 * c);
    r[pA0] = -c * (1 + c) * (1 + 5 * c);
    r[pB0] = -sq(c - 1) * c * (-1 + 5 * (c - 1) * c);
    r[pB1] = -(1 + c) * (-4 + c * (17 + c * (-4 + 5 * c * (-8 + 5 * c))));
    r[pR0] = 2 * (c - 1) * c * (1 + c) * (2 + 5 * c * (-3 + 2 * c));
    r[pR1] = 2 * c * (2 - 7 * c * c + 5 * c * c * c * c);
    return r;
}
AverageResidual a5C(double c) {
    AverageResidual r{};
    const double q = 4 - 5 * c * c + c * c * c * c;
    r[aAp] = -(c - 2) * sq(c - 1) * c;
    r[aBm] = -(c - 2) * sq(c - 1) * c * (1 + c);
    r[aAm] = -c * sq(1 + c) * (2 + c);
    r[aBp] = (c - 1) * c * sq(1 + c) * (2 + c);
    r[aB0] = -8 + 26 * c * c - 6 * c * c * c * c;
    r[aA0] = 2 * q;
    r[aRm] = 2 * c * q;
    r[aRp] = -2 * c * q;
    return r;
}

constexpr NamedScheme kSchemes[] = {
    {"3A", "CFL > 1", p3A, a3A},
    {"3B", "CFL > 1", p3B, a3B},
    {"3C", "CFL > 1", p3C, a3C},
    {"3D", "CFL > 1", p3D, a3D},
    {"3E", "CFL not in [1, 2]", p3E, a3E},
    {"3F", "CFL > 2", p3F, a3F},
    {"3G", "CFL > 3.74", p3G, a3G},
    {"3H", "CFL > 4.55", p3H, a3H},
    {"3I", "CFL > 4.74", p3I, a3I},
    {"4A", "unconditionally stable", p4A, a4A},
    {"4B", "CFL > 1.10", p4B, a4B},
    {"4C", "CFL > 1", p4C, a4C},
    {"4D", "marginally stable", p4D, a4D},
    {"5A", "CFL > 1", p5A, a5A},
    {"5B", "CFL > 2", p5B, a5B},
    {"5C", "CFL > 2", p5C, a5C},
};

}  // namespace

std::span<const NamedScheme> named_schemes() { return kSchemes; }

std::optional<double> appendix_mismatch(const StencilMask& mask, const NamedScheme& scheme,
                                        std::span<const double> cfls) {
    std::optional<double> worst;
    for (double c : cfls) {
        SchemeWeights w;
        try {
            w = build_weights(mask, c);
        } catch (const SingularCfl&) {
            continue;
        }
        const ResidualRows rows = residual_rows(w);
        const double e = std::max(mismatch_up_to_scale(rows.point, scheme.point(c)),
                                  mismatch_up_to_scale(rows.average, scheme.average(c)));
        worst = std::max(worst.value_or(0.0), e);
    }
    return worst;
}

std::optional<std::string> match_appendix(const StencilMask& mask) {
    if (mask.order() < 3 || mask.order() > 5) return std::nullopt;
    std::optional<std::string> hit;
    for (const NamedScheme& s : kSchemes) {
        if (static_cast<int>(s.name[0] - '0') != mask.order()) continue;
        const auto e = appendix_mismatch(mask, s, kMatchCfls);
        if (!e || *e > kMatchTolerance) continue;
        if (hit) throw NumericalError("mask " + mask.to_string() + " matches both " + *hit + " and " + s.name);
        hit = s.name;
    }
    return hit;
}

const std::map<std::string, StencilMask>& scheme_masks() {
    static const std::map<std::string, StencilMask> table = [] {
        std::map<std::string, StencilMask> t;
        for (int order = 3; order <= 6; ++order)
            for (const StencilMask& m : enumerate_masks(order)) {
                const auto name = match_appendix(m);
                if (!name) continue;
                if (!t.emplace(*name, m).second)
                    throw NumericalError("scheme " + *name + " is matched by several masks");
            }
        for (const NamedScheme& s : kSchemes)
            if (!t.count(s.name)) throw NumericalError(std::string("scheme ") + s.name + " matches no mask");
        return t;
    }();
    return table;
}

SchemeId resolve_scheme(const std::string& text) {
    const auto& names = scheme_masks();
    if (auto it = names.find(text); it != names.end()) return {it->first, it->second};
    if (text.find('|') == std::string::npos)
        throw ConfigError("unknown scheme '" + text + "' (expected a name such as 3C or a mask such as 010|011)");
    const StencilMask m = StencilMask::parse(text);
    for (const auto& [name, mask] : names)
        if (mask == m) return {name, m};
    return {m.to_string(), m};
}

}  // namespace iaf
