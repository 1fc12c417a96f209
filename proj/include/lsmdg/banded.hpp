// Symmetric positive definite banded matrices and their Cholesky solve.
// One-dimensional cell adjacency keeps J^T J banded, so the normal equations
// are factored in O(n b^2).
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

namespace lsmdg {

class BandedSpdMatrix {
 public:
  BandedSpdMatrix() = default;
  BandedSpdMatrix(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  /// Symmetric read; zero outside the band.
  double operator()(int i, int j) const;
  /// Adds v to entry (i, j) and, implicitly, (j, i). Throws outside the band.
  void add(int i, int j, double v);
  void add_diagonal(int i, double v) { lower(i, i) += v; }

  /// Accumulates J^T J.
  void add_gram(const Eigen::SparseMatrix<double, Eigen::RowMajor>& J);

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd dense() const;

  double& lower(int i, int j) { return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)]; }
  double lower(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * (bw_ + 1) + (i - j)];
  }

 private:
  int n_ = 0;
  int bw_ = 0;
  std::vector<double> data_;
};

/// Largest column distance between two nonzeros of any row of J, which is
/// the half bandwidth of J^T J.
int gram_bandwidth(const Eigen::SparseMatrix<double, Eigen::RowMajor>& J);

/// Cholesky solve with one step of iterative refinement. Throws
/// LinearSolveError on a non-positive pivot.
Eigen::VectorXd solve_linear_spd(const BandedSpdMatrix& A, const Eigen::VectorXd& b);

/// Dense convenience overload; the band is detected from the nonzeros.
Eigen::VectorXd solve_linear_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace lsmdg
