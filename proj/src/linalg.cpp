#include "numrad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

extern "C" {
void zheevd_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
             const int* lda, double* w, std::complex<double>* work, const int* lwork,
             double* rwork, const int* lrwork, int* iwork, const int* liwork, int* info);

void zggev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a,
            const int* lda, std::complex<double>* b, const int* ldb,
            std::complex<double>* alpha, std::complex<double>* beta,
            std::complex<double>* vl, const int* ldvl, std::complex<double>* vr,
            const int* ldvr, std::complex<double>* work, const int* lwork, double* rwork,
            int* info);
}

namespace numrad {

namespace {

thread_local KernelCounts t_counts;

}  // namespace

KernelCounts kernel_counts() { return t_counts; }

void require_valid(const ComplexMatrix& a, const std::string& what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InputError(what + " must be square and non-empty (got " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + ")");
  }
  if (!a.allFinite()) throw InputError(what + " has non-finite entries");
}

double norm_one(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

void normalize_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const double m = std::abs(v(k));
  if (m > 0.0) v *= std::conj(v(k)) / m;
}

HermitianEigen hermitian_eig(const ComplexMatrix& h, EigMode mode) {
  require_valid(h, "Hermitian matrix");
  ++t_counts.hermitian;

  const int n = static_cast<int>(h.rows());
  ComplexMatrix a = h;
  Eigen::VectorXd w(n);
  const char jobz = 'V', uplo = 'L';
  int info = 0;

  // workspace query
  int lwork = -1, lrwork = -1, liwork = -1;
  std::complex<double> wq;
  double rq = 0.0;
  int iq = 0;
  zheevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), &wq, &lwork, &rq, &lrwork, &iq, &liwork,
          &info);
  if (info != 0) throw KernelError("zheevd workspace query failed, info=" + std::to_string(info));
  lwork = static_cast<int>(wq.real());
  lrwork = static_cast<int>(rq);
  liwork = iq;
  std::vector<std::complex<double>> work(std::max(1, lwork));
  std::vector<double> rwork(std::max(1, lrwork));
  std::vector<int> iwork(std::max(1, liwork));
  zheevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork,
          iwork.data(), &liwork, &info);
  if (info != 0) throw KernelError("zheevd failed to converge, info=" + std::to_string(info));

  // LAPACK returns ascending order
  HermitianEigen out;
  if (mode == EigMode::extremes && n > 2) {
    out.values.resize(2);
    out.vectors.resize(n, 2);
    out.values << w(n - 1), w(0);
    out.vectors.col(0) = a.col(n - 1);
    out.vectors.col(1) = a.col(0);
  } else {
    out.values = w.reverse();
    out.vectors = a.rowwise().reverse();
  }
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) normalize_phase(out.vectors.col(k));
  return out;
}

PencilEigenvalues pencil_eig(const ComplexMatrix& r, const ComplexMatrix& s) {
  require_valid(r, "pencil R");
  require_valid(s, "pencil S");
  if (r.rows() != s.rows()) throw InputError("pencil matrices must have the same order");
  ++t_counts.pencil;

  const int n = static_cast<int>(r.rows());
  ComplexMatrix a = r;
  ComplexMatrix b = s;
  std::vector<std::complex<double>> alpha(n), beta(n);
  const char jobv = 'N';
  const int one = 1;
  std::complex<double> dummy;
  int info = 0;
  int lwork = -1;
  std::complex<double> wq;
  std::vector<double> rwork(8 * static_cast<std::size_t>(n));
  zggev_(&jobv, &jobv, &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(), &dummy, &one,
         &dummy, &one, &wq, &lwork, rwork.data(), &info);
  if (info != 0) throw KernelError("zggev workspace query failed, info=" + std::to_string(info));
  lwork = std::max(1, static_cast<int>(wq.real()));
  std::vector<std::complex<double>> work(lwork);
  zggev_(&jobv, &jobv, &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(), &dummy, &one,
         &dummy, &one, work.data(), &lwork, rwork.data(), &info);
  if (info != 0) throw KernelError("zggev failed, info=" + std::to_string(info));

  const double norm_r = norm_one(r);
  const double norm_s = norm_one(s);
  const double tol_singular = 1e-10 * std::max(norm_r, norm_s);
  const double tol_infinite = n * std::numeric_limits<double>::epsilon() * norm_s;

  PencilEigenvalues out;
  out.finite.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double aa = std::abs(alpha[k]);
    const double bb = std::abs(beta[k]);
    if (aa < tol_singular && bb < tol_singular) {
      out.singular = true;
      continue;
    }
    if (bb <= tol_infinite) {
      ++out.infinite_count;
      continue;
    }
    out.finite.push_back(alpha[k] / beta[k]);
  }
  return out;
}

Complex dominant_eigenvalue(const ComplexMatrix& a) {
  require_valid(a);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(a, false);
  if (es.info() != Eigen::Success) throw KernelError("eigenvalues of A did not converge");
  const auto& ev = es.eigenvalues();
  Eigen::Index k = 0;
  ev.cwiseAbs().maxCoeff(&k);
  return ev(k);
}

}  // namespace numrad
