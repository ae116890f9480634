#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iaf/stencil.hpp"

namespace iaf {

using Complex = std::complex<double>;

// A Qhat^{n+1} = B Qhat^n for the mode q_{i+1/2} = Q1 e^{i beta i}, avg_i = Q2 e^{i beta i}.
struct FourierSymbol {
    double beta = 0.0;
    Eigen::Matrix2cd a;
    Eigen::Matrix2cd b;
};

FourierSymbol fourier_symbol(const SchemeWeights& w, double beta);

// Coefficients (a0, a1, a2) of det(B - z A) = a2 z^2 + a1 z + a0.
std::array<Complex, 3> characteristic_polynomial(const FourierSymbol& s);

// |det A| below this fraction of the product of its row norms is treated as singular.
inline constexpr double kSingularSymbolTolerance = 1e-10;

// Roots of det(B - z A). Throws SingularSymbol when det A ~ 0.
std::pair<Complex, Complex> amplification_eigs(const FourierSymbol& s);

// Schur-Cohn test on p(z) = sum_k coeffs[k] z^k. `inside`: every root has
// |z| < 1 - tol. `marginal`: every root has |z| < 1 + tol but not all are inside.
struct SchurResult {
    bool inside = false;
    bool marginal = false;
};

SchurResult schur_unit_disk(const std::vector<Complex>& coeffs, double tol = 1e-10);

enum class Verdict { Stable, Marginal, Unstable, Singular };

std::string to_string(Verdict v);

struct ClassifyOptions {
    int n_beta = 1025;    // beta_k = pi k / (n_beta - 1)
    double tol = 1e-10;
    double marginal_fraction = 0.1;
};

struct Classification {
    Verdict verdict = Verdict::Singular;
    double max_abs_z = 0.0;  // NaN when singular
};

// Error bound on the computed root moduli from rounding in the coefficients; grows like
// sqrt(eps) when the two roots collide.
double root_uncertainty(const std::array<Complex, 3>& coeffs, std::pair<Complex, Complex> roots);

// Unstable when some sample has max |z| > 1 + tol + root_uncertainty.
Classification classify(const StencilMask& mask, double cfl, const ClassifyOptions& opt = {});

struct StabilityWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct StabilityReport {
    StencilMask mask;
    std::string name;                   // tabulated name, empty if none
    std::vector<double> cfls;           // 0.05 k, k = 1..200
    std::vector<Verdict> verdicts;
    std::optional<double> c_min;        // stable for every sampled c above; 0 if everywhere
    std::vector<StabilityWindow> windows;  // maximal stable runs, ends refined by bisection
    bool marginal = false;              // never stable, never unstable, marginal somewhere
};

struct ScanOptions {
    int n_cfl = 200;
    double cfl_step = 0.05;
    int bisection_steps = 40;
    ClassifyOptions classify;
};

StabilityReport scan_cmin(const StencilMask& mask, const ScanOptions& opt = {});

// All masks of orders 3..6 (42), scanned concurrently, in enumerate_masks order.
std::vector<StabilityReport> scan_all(const ScanOptions& opt = {});

struct CurveSample {
    double beta = 0.0;
    Complex z1;
    Complex z2;
    Complex physical;
    double diffusion = 0.0;   // |z| of the physical branch
    double dispersion = 1.0;  // unwrapped arg z / (-beta c), 1 at beta = 0
};

struct DiffusionDispersionCurve {
    StencilMask mask;
    double cfl = 0.0;
    std::vector<CurveSample> samples;
    double beta_half = 0.0;       // first crossing of `level`, pi if none
    bool ambiguous_branch = false;  // a near-collision forced the max-|z| fallback
};

DiffusionDispersionCurve curves(const StencilMask& mask, double cfl, int n_beta = 1025,
                                double level = 0.995);

// Max |z| at c = 1e3 and 1e6 for a fixed beta; true when both are below 1e-2 and decreasing.
struct LStabilityProbe {
    double at_1e3 = 0.0;
    double at_1e6 = 0.0;
    bool decays = false;
};

LStabilityProbe l_stability_probe(const StencilMask& mask, double beta = M_PI / 2);

struct MatrixStability {
    Verdict verdict = Verdict::Singular;
    double spectral_radius = 0.0;
};

// Dense 2N x 2N one-step map of the periodic solver, via its eigenvalues.
MatrixStability matrix_stability(const StencilMask& mask, double cfl, int n_cells = 100,
                                 double tol = 1e-8);

// The printed closed form of scheme 001|011's nonzero eigenvalue:
// -(2 + cos b - i c sin b) / (2 - c^2 + cos b + c^2 cos b + 2 i c sin b).
Complex closed_form_3d(double cfl, double beta);

}  // namespace iaf
