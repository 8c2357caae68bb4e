#ifndef DEPHASING_ANALYZER_HPP
#define DEPHASING_ANALYZER_HPP

#include <cstdint>
#include <vector>

#include "dephasing/engine.hpp"

namespace dephasing {

// Simultaneous eigenvector of both branch Hamiltonians.
struct CommonEigenvector {
  StateVector vector;
  double lambda0;
  double lambda1;
};

struct DfsGroup {
  double delta = 0.0; // lambda0 - lambda1, shared within the group
  std::vector<StateVector> basis;
};

// Decoherence-free subspace report: every unit vector inside a single
// group's span keeps |r(t)| = 1 at all times.
struct DfsReport {
  std::vector<DfsGroup> groups;
  bool exists = false;
  int block_dim = 0; // total count of common eigenvectors
};

inline constexpr double kIntersectionTol = 1e-9;

// All common eigenvectors of (H0, H1), found by intersecting eigencluster
// projector ranges. tol is the detection threshold on PQP eigenvalues
// (keep when >= 1 - tol).
std::vector<CommonEigenvector> common_eigenvectors(const DephasingModel& model,
                                                   double tol = kIntersectionTol);

// Groups common eigenvectors by branch energy difference lambda0 - lambda1.
DfsReport decoherence_free_states(const DephasingModel& model,
                                  double tol = kIntersectionTol);

// True iff min over the sampled grid of |r(t)| >= 1 - tol.
bool verify_coherence(const DephasingModel& model, const StateVector& I,
                      double horizon, int samples, double tol);

enum class PerturbationStructure {
  dense,          // unconstrained Gaussian Hermitian perturbation
  preserved_block // perturbation commuting with the common-eigenvector block
};

// Fraction of random Hermitian perturbations of H_E (Frobenius norm
// scale * |H_E|_F) after which a common eigenvector still exists.
// Requires the unperturbed model to have one.
double fragility_probe(const DephasingModel& model, double scale, int samples,
                       std::uint64_t seed,
                       PerturbationStructure structure = PerturbationStructure::dense);

} // namespace dephasing

#endif
