#include "iaf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include <Eigen/Eigenvalues>

#include "iaf/appendix.hpp"
#include "iaf/errors.hpp"
#include "iaf/solver1d.hpp"

namespace iaf {

FourierSymbol fourier_symbol(const SchemeWeights& w, double beta) {
    const Complex e = std::polar(1.0, beta);
    const Complex em = std::conj(e);
    const double c = w.cfl;
    const auto& p = w.point;
    const auto& f = w.flux;
    FourierSymbol s;
    s.beta = beta;
    s.a(0, 0) = e - p[4];
    s.a(0, 1) = -(p[3] + p[5] * e);
    s.a(1, 0) = c * f[4] * (1.0 - em);
    s.a(1, 1) = 1.0 + c * (f[3] * (1.0 - em) + f[5] * (e - 1.0));
    s.b(0, 0) = p[1];
    s.b(0, 1) = p[0] + p[2] * e;
    s.b(1, 0) = -c * f[1] * (1.0 - em);
    s.b(1, 1) = 1.0 - c * (f[0] * (1.0 - em) + f[2] * (e - 1.0));
    return s;
}

std::array<Complex, 3> characteristic_polynomial(const FourierSymbol& s) {
    const auto& a = s.a;
    const auto& b = s.b;
    return {b.determinant(),
            -(b(0, 0) * a(1, 1) + a(0, 0) * b(1, 1)) + (b(0, 1) * a(1, 0) + a(0, 1) * b(1, 0)),
            a.determinant()};
}

std::pair<Complex, Complex> amplification_eigs(const FourierSymbol& s) {
    const auto [a0, a1, a2] = characteristic_polynomial(s);
    // Hadamard bound: invariant under row scaling, which leaves the roots unchanged.
    const double scale = s.a.row(0).norm() * s.a.row(1).norm();
    if (!(std::abs(a2) > kSingularSymbolTolerance * scale))
        throw SingularSymbol("Fourier symbol A is singular at beta = " + std::to_string(s.beta));
    const Complex root = std::sqrt(a1 * a1 - 4.0 * a2 * a0);
    // q = -(a1 + sign * root) / 2 with the sign avoiding cancellation.
    const Complex q = std::abs(a1 + root) >= std::abs(a1 - root) ? -(a1 + root) / 2.0 : -(a1 - root) / 2.0;
    if (q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
    return {q / a2, a0 / q};
}

namespace {

// True when all roots of p (coefficients ascending) satisfy |z| < 1.
bool schur_strict(std::vector<Complex> p) {
    while (p.size() > 1 && p.back() == Complex(0.0)) p.pop_back();
    while (p.size() > 1) {
        const std::size_t n = p.size() - 1;
        const Complex lead = p[n];
        const Complex tail = p[0];
        if (!(std::abs(tail) < std::abs(lead))) return false;
        // (conj(lead) p(z) - tail p*(z)) / z, where p*_k = conj(p_{n-k}).
        std::vector<Complex> q(n);
        for (std::size_t k = 1; k <= n; ++k) q[k - 1] = std::conj(lead) * p[k] - tail * std::conj(p[n - k]);
        p = std::move(q);
    }
    return true;
}

std::vector<Complex> scaled(const std::vector<Complex>& p, double r) {
    std::vector<Complex> q(p.size());
    double f = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k, f *= r) q[k] = p[k] * f;
    return q;
}

}  // namespace

SchurResult schur_unit_disk(const std::vector<Complex>& coeffs, double tol) {
    std::vector<Complex> p = coeffs;
    while (!p.empty() && p.back() == Complex(0.0)) p.pop_back();
    if (p.empty()) throw NumericalError("Schur test: zero polynomial");
    // Roots of p(r z) are the roots of p divided by r.
    SchurResult r;
    r.inside = schur_strict(scaled(p, 1.0 - tol));
    r.marginal = !r.inside && schur_strict(scaled(p, 1.0 + tol));
    return r;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Marginal: return "marginal";
        case Verdict::Unstable: return "unstable";
        case Verdict::Singular: return "singular";
    }
    return "?";
}

double root_uncertainty(const std::array<Complex, 3>& p, std::pair<Complex, Complex> z) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double a2 = std::abs(p[2]);
    const double r = std::max(std::abs(z.first), std::abs(z.second));
    const double dp = 64.0 * eps * (std::abs(p[0]) + std::abs(p[1]) + a2) * (1.0 + r + r * r);
    const double gap = std::abs(z.first - z.second);
    const double simple = gap > 0.0 ? dp / (a2 * gap) : std::numeric_limits<double>::infinity();
    return std::min(simple, std::sqrt(dp / a2));
}

Classification classify(const StencilMask& mask, double cfl, const ClassifyOptions& opt) {
    Classification out;
    out.max_abs_z = std::numeric_limits<double>::quiet_NaN();
    SchemeWeights w;
    try {
        w = build_weights(mask, cfl);
    } catch (const SingularCfl&) {
        return out;
    }
    double worst = 0.0;
    int near_one = 0;
    bool unstable = false;
    for (int k = 0; k < opt.n_beta; ++k) {
        const double beta = M_PI * k / (opt.n_beta - 1);
        const FourierSymbol sym = fourier_symbol(w, beta);
        std::pair<Complex, Complex> z;
        try {
            z = amplification_eigs(sym);
        } catch (const SingularSymbol&) {
            return out;
        }
        const double m = std::max(std::abs(z.first), std::abs(z.second));
        const double tol = opt.tol + root_uncertainty(characteristic_polynomial(sym), z);
        worst = std::max(worst, m);
        if (m > 1.0 + tol) unstable = true;
        if (std::abs(m - 1.0) <= tol) ++near_one;
    }
    out.max_abs_z = worst;
    if (unstable)
        out.verdict = Verdict::Unstable;
    else if (near_one > opt.marginal_fraction * opt.n_beta)
        out.verdict = Verdict::Marginal;
    else
        out.verdict = Verdict::Stable;
    return out;
}

StabilityReport scan_cmin(const StencilMask& mask, const ScanOptions& opt) {
    StabilityReport r;
    r.mask = mask;
    r.name = match_appendix(mask).value_or("");
    for (int k = 1; k <= opt.n_cfl; ++k) {
        r.cfls.push_back(opt.cfl_step * k);
        r.verdicts.push_back(classify(mask, r.cfls.back(), opt.classify).verdict);
    }
    auto stable = [&](double c) { return classify(mask, c, opt.classify).verdict == Verdict::Stable; };
    // Bisect for the switch point between a failing and a stable CFL.
    auto refine = [&](double bad, double good) {
        for (int s = 0; s < opt.bisection_steps; ++s) {
            const double mid = 0.5 * (bad + good);
            (stable(mid) ? good : bad) = mid;
        }
        return good;
    };
    const int n = static_cast<int>(r.cfls.size());
    auto failing = [&](int i) { return r.verdicts[i] == Verdict::Unstable || r.verdicts[i] == Verdict::Marginal; };

    int last_bad = -1;
    bool any_stable = false, any_unstable = false, any_marginal = false;
    for (int i = 0; i < n; ++i) {
        if (failing(i)) last_bad = i;
        any_stable |= r.verdicts[i] == Verdict::Stable;
        any_unstable |= r.verdicts[i] == Verdict::Unstable;
        any_marginal |= r.verdicts[i] == Verdict::Marginal;
    }
    r.marginal = any_marginal && !any_stable && !any_unstable;
    if (last_bad < 0 && any_stable)
        r.c_min = 0.0;
    else if (last_bad >= 0 && last_bad + 1 < n && r.verdicts[last_bad + 1] == Verdict::Stable)
        r.c_min = refine(r.cfls[last_bad], r.cfls[last_bad + 1]);
    else if (last_bad >= 0 && last_bad + 1 < n) {
        // A singular sample follows the last failing one; the next stable sample bounds c_min.
        int j = last_bad + 1;
        while (j < n && r.verdicts[j] != Verdict::Stable) ++j;
        if (j < n) r.c_min = r.cfls[j - 1];
    }

    for (int i = 0; i < n;) {
        if (r.verdicts[i] != Verdict::Stable) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && r.verdicts[j + 1] == Verdict::Stable) ++j;
        StabilityWindow w{r.cfls[i], r.cfls[j]};
        if (i > 0 && failing(i - 1)) w.lo = refine(r.cfls[i - 1], r.cfls[i]);
        if (j + 1 < n && failing(j + 1)) w.hi = refine(r.cfls[j + 1], r.cfls[j]);
        if (i == 0) w.lo = 0.0;
        r.windows.push_back(w);
        i = j + 1;
    }
    return r;
}

std::vector<StabilityReport> scan_all(const ScanOptions& opt) {
    std::vector<StencilMask> masks;
    for (int order = 3; order <= 6; ++order)
        for (const auto& m : enumerate_masks(order)) masks.push_back(m);
    std::vector<std::future<StabilityReport>> jobs;
    for (const auto& m : masks) jobs.push_back(std::async(std::launch::async, [m, &opt] { return scan_cmin(m, opt); }));
    std::vector<StabilityReport> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

DiffusionDispersionCurve curves(const StencilMask& mask, double cfl, int n_beta, double level) {
    const SchemeWeights w = build_weights(mask, cfl);
    DiffusionDispersionCurve out;
    out.mask = mask;
    out.cfl = cfl;
    out.beta_half = M_PI;
    Complex prev(1.0);
    double phase = 0.0;
    bool crossed = false;
    for (int k = 0; k < n_beta; ++k) {
        CurveSample s;
        s.beta = M_PI * k / (n_beta - 1);
        std::tie(s.z1, s.z2) = amplification_eigs(fourier_symbol(w, s.beta));
        const double d1 = std::abs(s.z1 - prev), d2 = std::abs(s.z2 - prev);
        if (std::abs(d1 - d2) <= 1e-8 * std::max(1.0, std::abs(prev))) {
            s.physical = std::abs(s.z1) >= std::abs(s.z2) ? s.z1 : s.z2;
            if (k > 0 && std::abs(s.z1 - s.z2) > 0) out.ambiguous_branch = true;
        } else {
            s.physical = d1 < d2 ? s.z1 : s.z2;
        }
        if (k > 0) phase += std::arg(s.physical / prev);
        prev = s.physical;
        s.diffusion = std::abs(s.physical);
        s.dispersion = k == 0 ? 1.0 : phase / (-s.beta * cfl);
        if (!crossed && k > 0 && s.diffusion < level) {
            const CurveSample& a = out.samples.back();
            const double t = (a.diffusion - level) / (a.diffusion - s.diffusion);
            out.beta_half = a.beta + t * (s.beta - a.beta);
            crossed = true;
        }
        out.samples.push_back(s);
    }
    return out;
}

LStabilityProbe l_stability_probe(const StencilMask& mask, double beta) {
    auto max_z = [&](double c) {
        const SchemeWeights w = build_weights(mask, c, std::numeric_limits<double>::infinity());
        const auto z = amplification_eigs(fourier_symbol(w, beta));
        return std::max(std::abs(z.first), std::abs(z.second));
    };
    LStabilityProbe p;
    p.at_1e3 = max_z(1e3);
    p.at_1e6 = max_z(1e6);
    p.decays = p.at_1e3 < 1e-2 && p.at_1e6 < 1e-2 && p.at_1e6 < p.at_1e3;
    return p;
}

MatrixStability matrix_stability(const StencilMask& mask, double cfl, int n_cells, double tol) {
    MatrixStability out;
    out.spectral_radius = std::numeric_limits<double>::quiet_NaN();
    std::optional<PeriodicSolver> solver;
    try {
        solver.emplace(build_weights(mask, cfl), n_cells);
    } catch (const NumericalError&) {
        return out;
    }
    const int dim = 2 * n_cells;
    Eigen::MatrixXd m(dim, dim);
    StateAF unit(n_cells, Layout::Periodic);
    for (int col = 0; col < dim; ++col) {
        std::fill(unit.averages.begin(), unit.averages.end(), 0.0);
        std::fill(unit.points.begin(), unit.points.end(), 0.0);
        (col < n_cells ? unit.averages[col] : unit.points[col - n_cells]) = 1.0;
        const StateAF next = solver->step(unit);
        for (int k = 0; k < n_cells; ++k) {
            m(k, col) = next.averages[k];
            m(n_cells + k, col) = next.points[k];
        }
    }
    const Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
    const Eigen::VectorXd mod = es.eigenvalues().cwiseAbs();
    out.spectral_radius = mod.maxCoeff();
    const int near_one = static_cast<int>((mod.array() >= 1.0 - tol).count());
    if (out.spectral_radius > 1.0 + tol)
        out.verdict = Verdict::Unstable;
    else if (near_one > 0.1 * dim)
        out.verdict = Verdict::Marginal;
    else
        out.verdict = Verdict::Stable;
    return out;
}

Complex closed_form_3d(double cfl, double beta) {
    const double c = cfl, cb = std::cos(beta), sb = std::sin(beta);
    const Complex i(0.0, 1.0);
    return -(2.0 + cb - i * c * sb) / (2.0 - c * c + cb + c * c * cb + 2.0 * i * c * sb);
}

}  // namespace iaf
