#include "dephasing/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace dephasing {

namespace {

bool all_finite(const ComplexMatrix& m) {
  return m.array().isFinite().all();
}

} // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError("HermitianOperator: matrix must be square and nonempty");
  }
  if (!all_finite(m)) {
    throw ValidationError("HermitianOperator: non-finite entries");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300)) {
    throw ValidationError("HermitianOperator: matrix is not self-adjoint (max |H - H^dag| entry = " +
                          std::to_string(asym) + ")");
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
}

StateVector::StateVector(ComplexVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw ValidationError("StateVector: empty amplitude vector");
  }
  if (!amps_.array().isFinite().all()) {
    throw ValidationError("StateVector: non-finite amplitudes");
  }
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("StateVector: norm " + std::to_string(norm) + " is not 1");
  }
}

StateVector StateVector::normalized(ComplexVector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("StateVector::normalized: zero or non-finite vector");
  }
  v /= norm;
  return StateVector(std::move(v));
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw ValidationError("StateVector::basis: index out of range");
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim(), dim());
  for (const auto& c : clusters_) {
    sum += c.eigenvalue * c.projector;
  }
  return sum;
}

ComplexVector SpectralDecomposition::propagate(const ComplexVector& psi,
                                               double t) const {
  if (psi.size() != dim()) {
    throw ValidationError("propagate: dimension mismatch");
  }
  ComplexVector coeffs = eigenvectors_.adjoint() * psi;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= std::exp(Complex(0.0, -eigenvalues_[i] * t));
  }
  return eigenvectors_ * coeffs;
}

SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                         double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_decompose: eigensolver failed to converge");
  }

  SpectralDecomposition out;
  out.eigenvalues_ = solver.eigenvalues();
  out.eigenvectors_ = solver.eigenvectors();

  const Eigen::Index n = out.eigenvalues_.size();
  if (cluster_tol <= 0.0) {
    const double range = out.eigenvalues_[n - 1] - out.eigenvalues_[0];
    cluster_tol = std::max(1e-9 * range, 1e-13);
  }
  out.cluster_tol_ = cluster_tol;

  // Eigenvalues come back sorted; merge runs of adjacent values within tol.
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n &&
           out.eigenvalues_[end] - out.eigenvalues_[end - 1] <= cluster_tol) {
      ++end;
    }
    EigenCluster cluster;
    cluster.multiplicity = static_cast<int>(end - start);
    cluster.eigenvalue =
        out.eigenvalues_.segment(start, end - start).mean();
    const auto block = out.eigenvectors_.middleCols(start, end - start);
    cluster.projector = block * block.adjoint();
    out.clusters_.push_back(std::move(cluster));
    start = end;
  }
  return out;
}

StateVector evolve(const HermitianOperator& h, const StateVector& psi,
                   double t) {
  if (h.dim() != psi.dim()) {
    throw ValidationError("evolve: dimension mismatch");
  }
  return StateVector::normalized(
      spectral_decompose(h).propagate(psi.amplitudes(), t));
}

ComplexMatrix tensor_product(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) {
    throw ValidationError("tensor_product: empty operator list");
  }
  ComplexMatrix acc = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) {
    const ComplexMatrix& b = ops[i];
    ComplexMatrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index r = 0; r < acc.rows(); ++r) {
      for (Eigen::Index c = 0; c < acc.cols(); ++c) {
        next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) =
            acc(r, c) * b;
      }
    }
    acc = std::move(next);
  }
  return acc;
}

StateVector tensor_state(const std::vector<StateVector>& states) {
  if (states.empty()) {
    throw ValidationError("tensor_state: empty state list");
  }
  ComplexVector acc = states.front().amplitudes();
  for (std::size_t i = 1; i < states.size(); ++i) {
    const ComplexVector& b = states[i].amplitudes();
    ComplexVector next(acc.size() * b.size());
    for (Eigen::Index r = 0; r < acc.size(); ++r) {
      next.segment(r * b.size(), b.size()) = acc[r] * b;
    }
    acc = std::move(next);
  }
  return StateVector(std::move(acc));
}

namespace {

void check_projector(const ComplexMatrix& p, const char* name) {
  const double herm = (p - p.adjoint()).cwiseAbs().maxCoeff();
  const double idem = (p * p - p).cwiseAbs().maxCoeff();
  if (herm > 1e-8 || idem > 1e-8) {
    throw ValidationError(std::string("range_intersection: ") + name +
                          " is not an orthogonal projector");
  }
}

} // namespace

std::vector<StateVector> range_intersection(const ComplexMatrix& p,
                                            const ComplexMatrix& q,
                                            double tol) {
  if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols()) {
    throw ValidationError("range_intersection: dimension mismatch");
  }
  check_projector(p, "P");
  check_projector(q, "Q");

  const ComplexMatrix pqp = p * q * p;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(pqp);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("range_intersection: eigensolver failed");
  }

  std::vector<ComplexVector> raw;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    if (solver.eigenvalues()[i] >= 1.0 - tol) {
      raw.push_back(solver.eigenvectors().col(i));
    }
  }
  if (raw.empty()) {
    return {};
  }

  // The eigensolver leaves O(sqrt(eps)) residuals on near-unit eigenvectors;
  // alternating projections drive both residuals down to round-off.
  for (auto& v : raw) {
    for (int iter = 0; iter < 200; ++iter) {
      const double res_p = (p * v - v).norm();
      const double res_q = (q * v - v).norm();
      if (res_p <= 1e-13 && res_q <= 1e-13) {
        break;
      }
      v = p * v;
      v = q * v;
      const double norm = v.norm();
      if (norm < 0.5) {
        break; // not actually in the intersection; keep the last iterate
      }
      v /= norm;
    }
  }

  // Re-orthonormalize (polishing can reintroduce tiny overlaps).
  std::vector<StateVector> basis;
  for (auto& v : raw) {
    for (const auto& u : basis) {
      v -= u.amplitudes().dot(v) * u.amplitudes();
    }
    const double norm = v.norm();
    if (norm > 1e-6) {
      basis.push_back(StateVector::normalized(v));
    }
  }
  return basis;
}

} // namespace dephasing
