#include "qfi/sld.hpp"

#include <cmath>
#include <sstream>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"

namespace qfi {

SldResult sld_spectral(const DensityOperator& rho, const ComplexMatrix& drho,
                       const Tolerances& tol) {
  const Eigen::Index d = rho.dim();
  if (drho.rows() != d || drho.cols() != d)
    throw ArgumentError("sld_spectral: derivative dimension mismatch");
  if (!is_hermitian(drho, tol.herm))
    throw ArgumentError("sld_spectral: derivative is not Hermitian");
  if (std::abs(drho.trace().real()) > tol.trace || std::abs(drho.trace().imag()) > tol.trace)
    throw ArgumentError("sld_spectral: derivative is not traceless");

  const EigResult eig = hermitian_eig(rho.matrix(), tol);
  const ComplexMatrix dmat = eig.vectors.adjoint() * drho * eig.vectors;

  SldResult out;
  ComplexMatrix ltilde = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double s = eig.values(j) + eig.values(k);
      if (s > tol.kernel) {
        ltilde(j, k) = 2.0 * dmat(j, k) / s;
        out.qfi += 2.0 * std::norm(dmat(j, k)) / s;
      } else {
        out.skipped_pairs.emplace_back(j, k);
        if (std::abs(dmat(j, k)) > tol.sld) {
          std::ostringstream os;
          os << "sld_spectral: derivative weight " << std::abs(dmat(j, k))
             << " on kernel pair (" << j << ", " << k
             << "); the state rank changes here and no SLD exists on the support";
          throw RankChangeError(os.str());
        }
      }
    }
  }
  out.sld = hermitian_part(eig.vectors * ltilde * eig.vectors.adjoint());
  return out;
}

ProjectiveMeasurement optimal_measurement(const DensityOperator& rho, const ComplexMatrix& drho,
                                          const Tolerances& tol) {
  const SldResult res = sld_spectral(rho, drho, tol);
  const EigResult eig = hermitian_eig(res.sld, tol);
  const Eigen::Index d = eig.values.size();

  std::vector<ComplexMatrix> projs;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= d; ++i) {
    if (i < d && eig.values(i) - eig.values(i - 1) <= tol.degen) continue;
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (Eigen::Index k = start; k < i; ++k)
      p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
    projs.push_back(hermitian_part(p));
    start = i;
  }
  return ProjectiveMeasurement(std::move(projs), tol);
}

}  // namespace qfi
