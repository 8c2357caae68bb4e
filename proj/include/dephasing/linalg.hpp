#ifndef DEPHASING_LINALG_HPP
#define DEPHASING_LINALG_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "dephasing/errors.hpp"

namespace dephasing {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Dense self-adjoint operator. The constructor rejects matrices whose
// anti-Hermitian part exceeds 1e-12 of the largest entry and stores the
// symmetrized matrix (H + H^dag)/2.
class HermitianOperator {
public:
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  static HermitianOperator zero(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Zero(dim, dim));
  }

private:
  ComplexMatrix mat_;
};

// Unit-norm complex vector (norm within 1e-12 of 1).
class StateVector {
public:
  explicit StateVector(ComplexVector amplitudes);

  // Rescales an arbitrary nonzero vector to unit norm.
  static StateVector normalized(ComplexVector v);
  static StateVector basis(Eigen::Index dim, Eigen::Index index);

  const ComplexVector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }

private:
  ComplexVector amps_;
};

struct EigenCluster {
  double eigenvalue = 0.0;
  ComplexMatrix projector;
  int multiplicity = 0;
};

// Eigendecomposition with nearby eigenvalues merged into degenerate clusters.
// Keeps the raw eigenbasis around so propagation stays O(dim^2) per call.
class SpectralDecomposition {
public:
  const std::vector<EigenCluster>& clusters() const { return clusters_; }
  double cluster_tol() const { return cluster_tol_; }
  Eigen::Index dim() const { return eigenvectors_.rows(); }

  ComplexMatrix reconstruct() const;

  // e^{-iHt} psi through the eigenbasis.
  ComplexVector propagate(const ComplexVector& psi, double t) const;

  // Raw (unclustered) spectrum, ascending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

private:
  friend SpectralDecomposition spectral_decompose(const HermitianOperator&,
                                                  double);
  std::vector<EigenCluster> clusters_;
  Eigen::VectorXd eigenvalues_;
  ComplexMatrix eigenvectors_;
  double cluster_tol_ = 0.0;
};

// clusterTol <= 0 selects the default 1e-9 * spectral range.
SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                         double cluster_tol = 0.0);

// e^{-iHt}|psi>, computed via spectral decomposition.
StateVector evolve(const HermitianOperator& h, const StateVector& psi,
                   double t);

// Kronecker products in list order.
ComplexMatrix tensor_product(const std::vector<ComplexMatrix>& ops);
StateVector tensor_state(const std::vector<StateVector>& states);

// Orthonormal basis of range(P) ∩ range(Q), detected as eigenvectors of PQP
// with eigenvalue within tol of 1 and polished by alternating projections.
std::vector<StateVector> range_intersection(const ComplexMatrix& p,
                                            const ComplexMatrix& q,
                                            double tol = 1e-9);

} // namespace dephasing

#endif
