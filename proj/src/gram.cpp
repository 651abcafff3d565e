#include "qfi/gram.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "qfi/errors.hpp"
#include "qfi/linalg.hpp"

namespace qfi {

GramSystem GramSystem::build(const std::vector<PureState>& basis, const RealVector& probs,
                             const RealVector& dprobs, const Tolerances& tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  if (n == 0) throw ArgumentError("gram: empty ensemble");
  if (probs.size() != n || dprobs.size() != n)
    throw ArgumentError("gram: weights and ensemble sizes differ");
  if (n * n > kMaxDenseDim)
    throw ResourceError("gram: ensemble too large for the vectorized solve");

  const Eigen::Index d = basis.front().dim();
  for (const auto& psi : basis)
    if (psi.dim() != d) throw ArgumentError("gram: ensemble state dimensions differ");

  for (Eigen::Index i = 0; i < n; ++i) {
    if (probs(i) <= tol.prob) {
      std::ostringstream os;
      os << "gram: weight " << i << " = " << probs(i) << " is at or below the zero threshold";
      throw SingularError(os.str());
    }
  }
  if (std::abs(probs.sum() - 1.0) > tol.trace)
    throw ArgumentError("gram: weights do not sum to 1");
  if (std::abs(dprobs.sum()) > tol.trace)
    throw ArgumentError("gram: weight derivatives do not sum to 0");

  GramSystem sys;
  sys.dim_ = d;
  sys.basis_ = basis;
  sys.probs_ = probs;
  sys.dprobs_ = dprobs;
  sys.tol_ = tol;

  // Rescaled basis phi_i = sqrt(p_i) psi_i: the coefficient matrix R becomes
  // the identity and the weight motion moves into D = diag(dp_i / p_i).
  sys.S_ = ComplexMatrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sys.S_(i, i) = probs(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex ov = basis[static_cast<std::size_t>(i)].amplitudes().dot(
          basis[static_cast<std::size_t>(j)].amplitudes());
      sys.S_(i, j) = std::sqrt(probs(i) * probs(j)) * ov;
      sys.S_(j, i) = std::conj(sys.S_(i, j));
    }
  }
  sys.R_ = ComplexMatrix::Identity(n, n);
  sys.D_ = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) sys.D_(i, i) = dprobs(i) / probs(i);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sys.S_);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= tol.gram) {
    std::ostringstream os;
    os << "gram: smallest Gram eigenvalue "
       << (es.info() == Eigen::Success ? es.eigenvalues().minCoeff() : 0.0)
       << " does not clear the independence threshold " << tol.gram;
    throw ArgumentError(os.str());
  }
  return sys;
}

GramSystem GramSystem::from_ensemble(const std::vector<PureState>& basis,
                                     const RealVector& probs, const RealVector& dprobs,
                                     const Tolerances& tol) {
  GramSystem sys = build(basis, probs, dprobs, tol);
  sys.solve();
  return sys;
}

void GramSystem::solve() {
  if (solved_) return;
  const Eigen::Index n = S_.rows();

  // 2D = SL + LS, vectorized column-major:
  // vec(SL) = (I kron S) vec(L), vec(LS) = (S^T kron I) vec(L).
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix k = kron(id, S_) + kron(S_.transpose(), id);
  const Eigen::Map<const ComplexVector> d_vec(D_.data(), n * n);
  const ComplexVector l_vec = k.colPivHouseholderQr().solve(2.0 * d_vec);

  L_ = Eigen::Map<const ComplexMatrix>(l_vec.data(), n, n);
  L_ = hermitian_part(L_);
  M_ = S_ * L_;

  const double residual = max_abs(2.0 * D_ - (S_ * L_ + L_ * S_));
  if (residual > tol_.sld) {
    std::ostringstream os;
    os << "gram: compressed SLD solve left residual " << residual;
    throw StateError(os.str());
  }
  solved_ = true;
}

const ComplexMatrix& GramSystem::L() const {
  if (!solved_) throw StateError("gram: system not solved yet");
  return L_;
}

const ComplexMatrix& GramSystem::M() const {
  if (!solved_) throw StateError("gram: system not solved yet");
  return M_;
}

double gram_qfi(const GramSystem& sys) {
  if (!sys.solved()) throw StateError("gram_qfi: system not solved yet");
  const ComplexMatrix& s = sys.S();
  const ComplexMatrix& l = sys.L();
  return (s * l * s * l * s * sys.R()).trace().real();
}

double decomposed_qfi(const RealVector& probs, const RealVector& dprobs, const ComplexMatrix& S,
                    const ComplexMatrix& L, const Tolerances& tol) {
  const Eigen::Index n = probs.size();
  if (n == 0 || dprobs.size() != n || S.rows() != n || S.cols() != n || L.rows() != n ||
      L.cols() != n)
    throw ArgumentError("decomposed_qfi: inconsistent sizes");

  double classical = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (probs(i) <= tol.prob) {
      std::ostringstream os;
      os << "decomposed_qfi: weight " << i << " is at or below the zero threshold";
      throw SingularError(os.str());
    }
    classical += dprobs(i) * dprobs(i) / probs(i);
  }

  const ComplexMatrix m = S * L;
  Complex corr = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      corr += S(i, j) * (dprobs(i) / probs(i) - dprobs(j) / probs(j)) * m(j, i);
  return classical - 0.5 * corr.real();
}

}  // namespace qfi
