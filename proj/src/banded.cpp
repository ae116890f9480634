#include "iaf/banded.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "iaf/errors.hpp"

namespace iaf {

namespace {

// Pivots below this fraction of the largest matrix entry count as zero.
constexpr double kRelativePivotTolerance = 1e-13;
constexpr double kInverseGrowthLimit = 1e12;

double max_abs(const SparseMatrix& a) {
    double m = 0.0;
    for (int r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

}  // namespace

BandedLU::BandedLU(const SparseMatrix& a) : n_(static_cast<int>(a.rows())) {
    if (a.rows() != a.cols()) throw NumericalError("banded solve needs a square matrix");
    for (int r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
            if (it.value() == 0.0) continue;
            kl_ = std::max(kl_, static_cast<int>(it.row() - it.col()));
            ku_ = std::max(ku_, static_cast<int>(it.col() - it.row()));
        }
    width_ = 2 * kl_ + ku_ + 1;
    band_.assign(static_cast<std::size_t>(n_) * width_, 0.0);
    lower_.assign(static_cast<std::size_t>(n_) * std::max(kl_, 1), 0.0);
    pivot_.resize(n_);
    for (int r = 0; r < a.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(a, r); it; ++it)
            u(static_cast<int>(it.row()), static_cast<int>(it.col())) += it.value();

    const double tiny = kRelativePivotTolerance * max_abs(a);
    for (int k = 0; k < n_; ++k) {
        const int last_row = std::min(n_ - 1, k + kl_);
        const int last_col = std::min(n_ - 1, k + kl_ + ku_);
        int p = k;
        for (int i = k + 1; i <= last_row; ++i)
            if (std::abs(u(i, k)) > std::abs(u(p, k))) p = i;
        if (!(std::abs(u(p, k)) > tiny)) throw NumericalError("banded LU: matrix is singular");
        pivot_[k] = p;
        if (p != k)
            for (int j = k; j <= last_col; ++j) std::swap(u(k, j), u(p, j));
        const double piv = u(k, k);
        for (int i = k + 1; i <= last_row; ++i) {
            const double l = u(i, k) / piv;
            lower_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] = l;
            u(i, k) = 0.0;
            if (l == 0.0) continue;
            for (int j = k + 1; j <= last_col; ++j) u(i, j) -= l * u(k, j);
        }
    }
}

void BandedLU::solve_in_place(std::span<double> b) const {
    if (static_cast<int>(b.size()) != n_) throw NumericalError("banded solve: size mismatch");
    for (int k = 0; k < n_; ++k) {
        if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
        const int last_row = std::min(n_ - 1, k + kl_);
        for (int i = k + 1; i <= last_row; ++i)
            b[i] -= lower_[static_cast<std::size_t>(k) * kl_ + (i - k - 1)] * b[k];
    }
    for (int k = n_ - 1; k >= 0; --k) {
        const int last_col = std::min(n_ - 1, k + kl_ + ku_);
        double s = b[k];
        for (int j = k + 1; j <= last_col; ++j) s -= u(k, j) * b[j];
        b[k] = s / u(k, k);
    }
}

CyclicBandedLU::CyclicBandedLU(const SparseMatrix& a, int border) : n_(static_cast<int>(a.rows())) {
    if (a.rows() != a.cols()) throw NumericalError("cyclic solve needs a square matrix");
    if (border <= 0 || border >= n_) throw NumericalError("cyclic solve: border must be in (0, n)");
    Eigen::SparseMatrix<double> col_major(a);
    col_major.makeCompressed();
    lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    lu_->compute(col_major);
    if (lu_->info() != Eigen::Success) throw NumericalError("cyclic banded LU: matrix is singular");
    if (!std::isfinite(lu_->logAbsDeterminant())) throw NumericalError("cyclic banded LU: matrix is singular");
    // Rounding leaves tiny nonzero pivots on singular matrices, so probe the inverse with
    // the constant, alternating and a pseudo-random vector.
    const double scale = std::max(max_abs(a), 1e-300);
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int probe = 0; probe < 3; ++probe) {
        Eigen::VectorXd v(n_);
        for (int i = 0; i < n_; ++i) v[i] = probe == 0 ? 1.0 : probe == 1 ? ((i / border) % 2 ? -1.0 : 1.0) : dist(gen);
        const Eigen::VectorXd x = lu_->solve(v);
        if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() * scale > kInverseGrowthLimit * v.lpNorm<Eigen::Infinity>())
            throw NumericalError("cyclic banded LU: matrix is singular");
    }
}

void CyclicBandedLU::solve_in_place(std::span<double> b) const {
    if (static_cast<int>(b.size()) != n_) throw NumericalError("cyclic solve: size mismatch");
    Eigen::Map<Eigen::VectorXd> v(b.data(), n_);
    const Eigen::VectorXd x = lu_->solve(v);
    v = x;
}

}  // namespace iaf
