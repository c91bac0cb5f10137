#pragma once
// Dense row-major matrices and the two BLAS/LAPACK operations the simulation
// needs: matrix products and symmetric eigenvalues.  BLAS threading is forced
// to one thread so results do not depend on how trials are scheduled across
// cores; parallelism belongs one level up, across independent trials.

#include <cblas.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlspec/activation.hpp"  // ValidationError, NumericalError
#include "nlspec/lapack.hpp"

extern "C" void openblas_set_num_threads(int);

namespace nlspec {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {
    if (r <= 0 || c <= 0) throw ValidationError("Matrix: dimensions must be positive");
  }
  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

// keep each trial's BLAS single-threaded; call once per process/thread entry
inline void use_single_threaded_blas() { openblas_set_num_threads(1); }

// C = alpha A B
inline Matrix matmul(const Matrix& A, const Matrix& B, double alpha = 1.0) {
  if (A.cols != B.rows) throw ValidationError("matmul: inner dimensions differ");
  Matrix C(A.rows, B.cols);
  cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, A.rows, B.cols,
              A.cols, alpha, A.a.data(), A.cols, B.a.data(), B.cols, 0.0,
              C.a.data(), C.cols);
  return C;
}

// alpha Y Y^T (symmetric, full storage)
inline Matrix gram(const Matrix& Y, double alpha) {
  Matrix S(Y.rows, Y.rows);
  cblas_dsyrk(CblasRowMajor, CblasUpper, CblasNoTrans, Y.rows, Y.cols, alpha,
              Y.a.data(), Y.cols, 0.0, S.a.data(), S.rows);
  // mirror the upper triangle; the eigensolver reads one triangle but
  // downstream checks may touch the full matrix
  for (int i = 0; i < S.rows; ++i)
    for (int j = 0; j < i; ++j) S(i, j) = S(j, i);
  return S;
}

// ascending eigenvalues of a symmetric matrix (content is overwritten)
inline std::vector<double> symmetric_eigenvalues(Matrix S) {
  if (S.rows != S.cols)
    throw ValidationError("symmetric_eigenvalues: matrix must be square");
  std::vector<double> w(S.rows);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'N', 'U', S.rows,
                                         S.a.data(), S.cols, w.data());
  if (info != 0)
    throw NumericalError("symmetric_eigenvalues: dsyevd failed, info=" +
                         std::to_string(info));
  return w;
}

// Ascending eigenvalues of (1/m) Y Y^T for Y of size n x m, computed on the
// smaller Gram side; when n > m the spectrum is completed with the n - m
// structural zero modes.
inline std::vector<double> gram_spectrum(const Matrix& Y) {
  const int n = Y.rows, m = Y.cols;
  std::vector<double> eig;
  if (n <= m) {
    eig = symmetric_eigenvalues(gram(Y, 1.0 / m));
  } else {
    // nonzero spectrum of Y Y^T/m equals that of Y^T Y/m
    Matrix S(m, m);
    cblas_dsyrk(CblasRowMajor, CblasUpper, CblasTrans, m, n, 1.0 / m,
                Y.a.data(), m, 0.0, S.a.data(), m);
    eig = symmetric_eigenvalues(std::move(S));
    std::vector<double> full(std::size_t(n - m), 0.0);
    full.insert(full.end(), eig.begin(), eig.end());
    // rounding can leave the smallest computed eigenvalue a hair below zero,
    // so re-sort after splicing in the exact zeros
    std::sort(full.begin(), full.end());
    eig = std::move(full);
  }
  return eig;
}

}  // namespace nlspec
