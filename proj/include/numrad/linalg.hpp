#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace numrad {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Malformed or out-of-contract user input (non-square, non-finite, bad file).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A LAPACK routine reported failure.
class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a closed-form routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws InputError unless `a` is square, non-empty and finite.
void require_valid(const ComplexMatrix& a, const std::string& what = "matrix");

/// Largest absolute column sum.
double norm_one(const ComplexMatrix& a);

/// Eigen-decomposition of a Hermitian matrix. Values are sorted descending
/// and column k of `vectors` is the unit eigenvector for values[k].
struct HermitianEigen {
  Eigen::VectorXd values;
  ComplexMatrix vectors;

  double lambda_max() const { return values(0); }
  double lambda_min() const { return values(values.size() - 1); }
};

enum class EigMode {
  full,      ///< all eigenpairs
  extremes,  ///< only the largest and smallest pair (two columns)
};

/// Hermitian eigensolver (LAPACK zheevd). Only the lower triangle of `h` is
/// referenced. Every call is counted, see kernel_counts().
HermitianEigen hermitian_eig(const ComplexMatrix& h, EigMode mode = EigMode::full);

/// Generalized eigenvalues of the pencil R - lambda S.
struct PencilEigenvalues {
  std::vector<Complex> finite;
  int infinite_count = 0;
  bool singular = false;
};

/// QZ eigenvalues of (R, S) via LAPACK zggev. An index whose projected
/// diagonal pair (alpha, beta) is below 1e-10 * max(|R|, |S|) in both
/// components marks the pencil as (near-)singular.
PencilEigenvalues pencil_eig(const ComplexMatrix& r, const ComplexMatrix& s);

/// Eigenvalue of largest modulus of a general square matrix (not counted).
Complex dominant_eigenvalue(const ComplexMatrix& a);

/// Per-thread cumulative counts of kernel invocations.
struct KernelCounts {
  long hermitian = 0;
  long pencil = 0;
};

KernelCounts kernel_counts();

/// Records the kernel counters at construction; delta() is the number of
/// calls made on this thread since then.
class CountScope {
 public:
  CountScope() : start_(kernel_counts()) {}
  KernelCounts delta() const {
    const KernelCounts now = kernel_counts();
    return {now.hermitian - start_.hermitian, now.pencil - start_.pencil};
  }

 private:
  KernelCounts start_;
};

/// Rotates the phase of `v` so its largest-modulus entry is real positive.
void normalize_phase(Eigen::Ref<ComplexVector> v);

/// Principal argument with Arg(0) := 0.
inline double arg0(Complex z) { return z == Complex(0.0, 0.0) ? 0.0 : std::arg(z); }

}  // namespace numrad
