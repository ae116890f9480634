#include "iaf/stencil.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "iaf/errors.hpp"

namespace iaf {

StencilMask StencilMask::parse(const std::string& text) {
    if (text.size() != 7 || text[3] != '|')
        throw ConfigError("mask '" + text + "' is not of the form eee|iii");
    std::array<bool, kDofCount> used{};
    int k = 0;
    for (std::size_t p = 0; p < text.size(); ++p) {
        if (p == 3) continue;
        if (text[p] != '0' && text[p] != '1')
            throw ConfigError("mask '" + text + "' may only contain 0 and 1");
        used[k++] = text[p] == '1';
    }
    return StencilMask(used);
}

int StencilMask::order() const { return static_cast<int>(std::count(used_.begin(), used_.end(), true)); }

std::string StencilMask::to_string() const {
    std::string s;
    for (int k = 0; k < kDofCount; ++k) {
        if (k == 3) s += '|';
        s += used_[k] ? '1' : '0';
    }
    return s;
}

std::uint8_t StencilMask::bits() const {
    std::uint8_t b = 0;
    for (int k = 0; k < kDofCount; ++k)
        if (used_[k]) b |= static_cast<std::uint8_t>(1u << (kDofCount - 1 - k));
    return b;
}

std::vector<StencilMask> enumerate_masks(int order) {
    if (order < 3 || order > 6) throw ConfigError("mask order must lie in 3..6");
    std::vector<StencilMask> out;
    for (unsigned b = 0; b < (1u << kDofCount); ++b) {
        std::array<bool, kDofCount> used{};
        for (int k = 0; k < kDofCount; ++k) used[k] = (b >> (kDofCount - 1 - k)) & 1u;
        StencilMask m(used);
        if (m.order() == order) out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

using RealL = long double;
using MatL = Eigen::Matrix<RealL, Eigen::Dynamic, Eigen::Dynamic>;
using VecL = Eigen::Matrix<RealL, Eigen::Dynamic, 1>;

// Mean of tau^k over [a, b], written without the cancellation of (b^{k+1} - a^{k+1}) / (b - a).
RealL mean_monomial(RealL a, RealL b, int k) {
    RealL s = 0;
    for (int j = 0; j <= k; ++j) s += std::pow(a, j) * std::pow(b, k - j);
    return s / (k + 1);
}

// Row of the interpolation condition attached to a DOF, in the monomial basis.
VecL condition_row(Dof d, RealL cfl, int m) {
    const RealL h = 1 / cfl;
    VecL row(m);
    for (int k = 0; k < m; ++k) {
        switch (d) {
            case Dof::PointOld: row[k] = k == 0 ? 1 : 0; break;
            case Dof::PointNew: row[k] = 1; break;
            case Dof::AvgLeftOld: row[k] = mean_monomial(0, h, k); break;
            case Dof::AvgRightOld: row[k] = mean_monomial(-h, 0, k); break;
            case Dof::AvgLeftNew: row[k] = mean_monomial(1, 1 + h, k); break;
            case Dof::AvgRightNew: row[k] = mean_monomial(1 - h, 1, k); break;
        }
    }
    return row;
}

}  // namespace

SchemeWeights build_weights(const StencilMask& mask, double cfl, double max_condition) {
    if (!(cfl > 0) || !std::isfinite(cfl)) throw ConfigError("CFL number must be positive and finite");
    const int m = mask.order();
    if (m < 1) throw ConfigError("mask selects no degrees of freedom");

    std::vector<int> selected;
    MatL v(m, m);
    for (int d = 0; d < kDofCount; ++d) {
        if (!mask[d]) continue;
        v.row(static_cast<int>(selected.size())) = condition_row(static_cast<Dof>(d), cfl, m).transpose();
        selected.push_back(d);
    }

    // Scale tau by the node range so the condition number reflects the conditions,
    // not the monomial magnitudes.
    const RealL range = 1 + static_cast<RealL>(1) / cfl;
    Eigen::MatrixXd scaled(m, m);
    for (int k = 0; k < m; ++k)
        for (int r = 0; r < m; ++r) scaled(r, k) = static_cast<double>(v(r, k) * std::pow(range, k));
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    const auto& sv = svd.singularValues();
    const double cond = sv(m - 1) > 0 ? sv(0) / sv(m - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
        std::ostringstream os;
        os.precision(17);
        os << "stencil " << mask.to_string() << " is singular at CFL " << cfl << " (condition number "
           << cond << ")";
        throw SingularCfl(os.str(), cfl);
    }

    // Weights are the rows of V^{-1} contracted with the target functional:
    // V^T w = e, e_k = tau*^k (point) or 1/(k+1) (flux over [0, 1]).
    const RealL foot = 1 - static_cast<RealL>(1) / cfl;
    VecL e_point(m), e_flux(m);
    for (int k = 0; k < m; ++k) {
        e_point[k] = std::pow(foot, k);
        e_flux[k] = static_cast<RealL>(1) / (k + 1);
    }
    const Eigen::FullPivLU<MatL> lu(v.transpose());
    const VecL wp = lu.solve(e_point);
    const VecL wf = lu.solve(e_flux);

    SchemeWeights w;
    w.cfl = cfl;
    w.mask = mask;
    w.condition_number = cond;
    for (int r = 0; r < m; ++r) {
        w.point[selected[r]] = static_cast<double>(wp[r]);
        w.flux[selected[r]] = static_cast<double>(wf[r]);
    }
    return w;
}

ResidualRows residual_rows(const SchemeWeights& w) {
    ResidualRows r;
    for (int d = 0; d < kDofCount; ++d) r.point[d] = -w.point[d];
    r.point[6] = 1.0;

    const double c = w.cfl;
    const auto& f = w.flux;
    auto& a = r.average;
    // F_{i+1/2}: avg_i^n, q_{i+1/2}^n, avg_{i+1}^n, avg_i^{n+1}, q_{i+1/2}^{n+1}, avg_{i+1}^{n+1}
    constexpr std::array<int, 6> right = {2, 3, 4, 7, 8, 9};
    // F_{i-1/2}: avg_{i-1}^n, q_{i-1/2}^n, avg_i^n, avg_{i-1}^{n+1}, q_{i-1/2}^{n+1}, avg_i^{n+1}
    constexpr std::array<int, 6> left = {0, 1, 2, 5, 6, 7};
    for (int d = 0; d < kDofCount; ++d) {
        a[right[d]] += c * f[d];
        a[left[d]] -= c * f[d];
    }
    a[7] += 1.0;
    a[2] -= 1.0;
    return r;
}

}  // namespace iaf
