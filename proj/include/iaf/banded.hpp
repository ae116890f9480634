#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>
#include <span>
#include <vector>

namespace iaf {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// LU factorization with partial pivoting of a banded matrix, LAPACK gbtrf style.
// Bandwidths are read off the sparsity pattern. Row interchanges widen the upper
// band to kl + ku.
class BandedLU {
public:
    BandedLU() = default;
    explicit BandedLU(const SparseMatrix& a);

    void solve_in_place(std::span<double> b) const;
    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

private:
    double& u(int i, int j) { return band_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }
    double u(int i, int j) const { return band_[static_cast<std::size_t>(i) * width_ + (j - i + kl_)]; }

    int n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int width_ = 0;
    std::vector<double> band_;
    std::vector<double> lower_;  // multipliers, kl per column
    std::vector<int> pivot_;
};

// Solver for a banded matrix with wrap-around corner couplings (periodic grids).
// Sparse LU with partial pivoting on the whole matrix; the leading banded block
// on its own can be exponentially ill-conditioned, so it is never factored alone.
class CyclicBandedLU {
public:
    CyclicBandedLU() = default;
    CyclicBandedLU(const SparseMatrix& a, int border);

    void solve_in_place(std::span<double> b) const;
    int size() const { return n_; }

private:
    int n_ = 0;
    std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
};

}  // namespace iaf
