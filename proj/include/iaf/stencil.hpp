#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace iaf {

// The six degrees of freedom adjacent to interface x_{i+1/2}, explicit row first.
enum class Dof : int {
    AvgLeftOld = 0,   // avg_i^n
    PointOld = 1,     // q_{i+1/2}^n
    AvgRightOld = 2,  // avg_{i+1}^n
    AvgLeftNew = 3,   // avg_i^{n+1}
    PointNew = 4,     // q_{i+1/2}^{n+1}
    AvgRightNew = 5,  // avg_{i+1}^{n+1}
};

inline constexpr int kDofCount = 6;

// Which DOFs pin the time reconstruction at an interface. Textual form "eee|iii".
class StencilMask {
public:
    constexpr StencilMask() = default;
    explicit constexpr StencilMask(std::array<bool, kDofCount> used) : used_(used) {}

    // Throws ConfigError on anything but six 0/1 flags split by '|'.
    static StencilMask parse(const std::string& text);

    bool uses(Dof d) const { return used_[static_cast<int>(d)]; }
    bool operator[](int i) const { return used_[i]; }
    int order() const;
    std::string to_string() const;
    std::uint8_t bits() const;

    bool operator==(const StencilMask&) const = default;
    auto operator<=>(const StencilMask& o) const { return to_string() <=> o.to_string(); }

private:
    std::array<bool, kDofCount> used_{};
};

// All C(6, order) masks, sorted by their "eee|iii" string.
std::vector<StencilMask> enumerate_masks(int order);

// Reconstruction weights for one (mask, CFL) pair.
//
// The point update is q_{i+3/2}^{n+1} = sum_d point[d] * DOF_d and the
// normalized flux (flux integral / (u dt)) is sum_d flux[d] * DOF_d.
struct SchemeWeights {
    double cfl = 0.0;
    StencilMask mask;
    std::array<double, kDofCount> point{};
    std::array<double, kDofCount> flux{};
    double condition_number = 0.0;
};

inline constexpr double kMaxInterpolationCondition = 1e12;

// Solves the interpolation system in the monomial basis of tau = (t - t^n)/dt.
// Throws SingularCfl when the (column-scaled) system's condition number exceeds
// `max_condition`.
SchemeWeights build_weights(const StencilMask& mask, double cfl,
                            double max_condition = kMaxInterpolationCondition);

// Coefficients of the scheme's two residual equations, in these slot orders:
//   point:   avg_i^n, q_{i+1/2}^n, avg_{i+1}^n, avg_i^{n+1}, q_{i+1/2}^{n+1},
//            avg_{i+1}^{n+1}, q_{i+3/2}^{n+1}
//   average: avg_{i-1}^n, q_{i-1/2}^n, avg_i^n, q_{i+1/2}^n, avg_{i+1}^n,
//            avg_{i-1}^{n+1}, q_{i-1/2}^{n+1}, avg_i^{n+1}, q_{i+1/2}^{n+1}, avg_{i+1}^{n+1}
using PointResidual = std::array<double, 7>;
using AverageResidual = std::array<double, 10>;

struct ResidualRows {
    PointResidual point{};
    AverageResidual average{};
};

// point:   q_{i+3/2}^{n+1} - sum w_point . DOFs(i+1/2)
// average: avg_i^{n+1} - avg_i^n + c (F_{i+1/2} - F_{i-1/2})
ResidualRows residual_rows(const SchemeWeights& w);

// || b - s a || / || b || with s the least-squares scale; 0 when a and b are parallel.
template <std::size_t N>
double mismatch_up_to_scale(const std::array<double, N>& a, const std::array<double, N>& b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        ab += a[k] * b[k];
        aa += a[k] * a[k];
        bb += b[k] * b[k];
    }
    if (bb == 0.0) return aa == 0.0 ? 0.0 : 1.0;
    if (aa == 0.0) return 1.0;
    const double s = ab / aa;
    double rr = 0.0;
    for (std::size_t k = 0; k < N; ++k) rr += (b[k] - s * a[k]) * (b[k] - s * a[k]);
    return std::sqrt(rr / bb);
}

}  // namespace iaf
