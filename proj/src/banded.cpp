#include "lsmdg/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsmdg/errors.hpp"

namespace lsmdg {

BandedSpdMatrix::BandedSpdMatrix(int n, int bandwidth)
    : n_(n), bw_(bandwidth), data_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {
  if (n < 0 || bandwidth < 0) throw ConfigError("banded matrix: negative size");
}

double BandedSpdMatrix::operator()(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return lower(i, j);
}

void BandedSpdMatrix::add(int i, int j, double v) {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) throw ConfigError("banded matrix: entry outside the band");
  lower(i, j) += v;
}

void BandedSpdMatrix::add_gram(const Eigen::SparseMatrix<double, Eigen::RowMajor>& J) {
  for (int row = 0; row < J.outerSize(); ++row) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator a(J, row); a; ++a) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator b(J, row); b; ++b) {
        if (b.col() > a.col()) break;
        add(static_cast<int>(a.col()), static_cast<int>(b.col()), a.value() * b.value());
      }
    }
  }
}

Eigen::VectorXd BandedSpdMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    y[i] += lower(i, i) * x[i];
    for (int j = std::max(0, i - bw_); j < i; ++j) {
      const double a = lower(i, j);
      y[i] += a * x[j];
      y[j] += a * x[i];
    }
  }
  return y;
}

Eigen::MatrixXd BandedSpdMatrix::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - bw_); j <= i; ++j) A(i, j) = A(j, i) = lower(i, j);
  return A;
}

int gram_bandwidth(const Eigen::SparseMatrix<double, Eigen::RowMajor>& J) {
  int bw = 0;
  for (int row = 0; row < J.outerSize(); ++row) {
    Eigen::Index lo = -1, hi = -1;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(J, row); it; ++it) {
      if (lo < 0) lo = it.col();
      hi = it.col();
    }
    if (lo >= 0) bw = std::max(bw, static_cast<int>(hi - lo));
  }
  return bw;
}

namespace {

BandedSpdMatrix cholesky(const BandedSpdMatrix& A) {
  const int n = A.size();
  const int bw = A.bandwidth();
  BandedSpdMatrix L = A;
  for (int i = 0; i < n; ++i) {
    const int k0 = std::max(0, i - bw);
    for (int j = k0; j <= i; ++j) {
      double s = L.lower(i, j);
      for (int k = std::max(k0, j - bw); k < j; ++k) s -= L.lower(i, k) * L.lower(j, k);
      if (j < i) {
        L.lower(i, j) = s / L.lower(j, j);
      } else {
        if (!(s > 0.0)) {
          std::ostringstream msg;
          msg << "non-positive pivot " << s << " at row " << i;
          throw LinearSolveError(msg.str());
        }
        L.lower(i, i) = std::sqrt(s);
      }
    }
  }
  return L;
}

Eigen::VectorXd substitute(const BandedSpdMatrix& L, Eigen::VectorXd x) {
  const int n = L.size();
  const int bw = L.bandwidth();
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = std::max(0, i - bw); k < i; ++k) s -= L.lower(i, k) * x[k];
    x[i] = s / L.lower(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k <= std::min(n - 1, i + bw); ++k) s -= L.lower(k, i) * x[k];
    x[i] = s / L.lower(i, i);
  }
  return x;
}

}  // namespace

Eigen::VectorXd solve_linear_spd(const BandedSpdMatrix& A, const Eigen::VectorXd& b) {
  if (b.size() != A.size()) throw ConfigError("solve_linear_spd: size mismatch");
  const int n = A.size();
  const int bw = A.bandwidth();
  // Symmetric diagonal scaling to unit diagonal before factoring.
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    if (!(A.lower(i, i) > 0.0)) {
      std::ostringstream msg;
      msg << "non-positive diagonal " << A.lower(i, i) << " at row " << i;
      throw LinearSolveError(msg.str());
    }
    d[i] = 1.0 / std::sqrt(A.lower(i, i));
  }
  BandedSpdMatrix scaled(n, bw);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bw); j <= i; ++j) scaled.lower(i, j) = d[i] * A.lower(i, j) * d[j];
  const BandedSpdMatrix L = cholesky(scaled);
  const Eigen::VectorXd sb = d.cwiseProduct(b);
  Eigen::VectorXd z = substitute(L, sb);
  z += substitute(L, sb - scaled.multiply(z));
  return d.cwiseProduct(z);
}

Eigen::VectorXd solve_linear_spd(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw ConfigError("solve_linear_spd: matrix not square");
  int bw = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (A(i, j) != 0.0 || A(j, i) != 0.0) bw = std::max(bw, i - j);
  BandedSpdMatrix banded(n, bw);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bw); j <= i; ++j) banded.lower(i, j) = 0.5 * (A(i, j) + A(j, i));
  return solve_linear_spd(banded, b);
}

}  // namespace lsmdg
