#include "dephasing/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dephasing {

std::vector<CommonEigenvector> common_eigenvectors(const DephasingModel& model,
                                                   double tol) {
  const auto& c0 = model.branch_spectrum(0).clusters();
  const auto& c1 = model.branch_spectrum(1).clusters();
  std::vector<CommonEigenvector> out;
  for (const auto& j : c0) {
    for (const auto& k : c1) {
      // tr(PQ) bounds the largest eigenvalue of PQP from above; skip pairs
      // that cannot host an intersection.
      const double trace_bound =
          (j.projector.array() * k.projector.transpose().array()).sum().real();
      if (trace_bound < 1.0 - tol) {
        continue;
      }
      for (auto& v : range_intersection(j.projector, k.projector, tol)) {
        out.push_back({std::move(v), j.eigenvalue, k.eigenvalue});
      }
    }
  }
  return out;
}

DfsReport decoherence_free_states(const DephasingModel& model, double tol) {
  std::vector<CommonEigenvector> common = common_eigenvectors(model, tol);
  std::sort(common.begin(), common.end(),
            [](const CommonEigenvector& a, const CommonEigenvector& b) {
              return (a.lambda0 - a.lambda1) < (b.lambda0 - b.lambda1);
            });

  // Delta-grouping tolerance matches the eigenvalue clustering tolerance.
  const double group_tol = std::max(model.branch_spectrum(0).cluster_tol(),
                                    model.branch_spectrum(1).cluster_tol());

  DfsReport report;
  report.block_dim = static_cast<int>(common.size());
  report.exists = !common.empty();
  std::size_t start = 0;
  while (start < common.size()) {
    std::size_t end = start + 1;
    const auto delta_of = [](const CommonEigenvector& c) {
      return c.lambda0 - c.lambda1;
    };
    while (end < common.size() &&
           delta_of(common[end]) - delta_of(common[end - 1]) <= group_tol) {
      ++end;
    }
    DfsGroup group;
    double delta_sum = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      delta_sum += delta_of(common[i]);
      group.basis.push_back(std::move(common[i].vector));
    }
    group.delta = delta_sum / static_cast<double>(end - start);
    report.groups.push_back(std::move(group));
    start = end;
  }
  return report;
}

bool verify_coherence(const DephasingModel& model, const StateVector& I,
                      double horizon, int samples, double tol) {
  if (!(horizon > 0.0) || samples < 2) {
    throw NumericalError("verify_coherence: need horizon > 0 and samples >= 2");
  }
  const EchoSeries series(model, I);
  const double dt = horizon / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    if (std::abs(series.r(i * dt)) < 1.0 - tol) {
      return false;
    }
  }
  return true;
}

namespace {

ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      g(r, c) = Complex(gauss(rng), gauss(rng));
    }
  }
  return 0.5 * (g + g.adjoint().eval());
}

} // namespace

double fragility_probe(const DephasingModel& model, double scale, int samples,
                       std::uint64_t seed, PerturbationStructure structure) {
  if (!(scale > 0.0) || samples < 1) {
    throw NumericalError("fragility_probe: need scale > 0 and samples >= 1");
  }
  const std::vector<CommonEigenvector> common = common_eigenvectors(model);
  if (common.empty()) {
    throw NumericalError(
        "fragility_probe: model has no common eigenvector to destroy");
  }

  const Eigen::Index dim = model.dim();
  const double env_norm = model.h_env().matrix().norm();
  const double target_norm = scale * (env_norm > 0.0 ? env_norm : 1.0);

  // For the structured mode, perturbations are confined to the block that
  // keeps every common eigenvector an exact eigenvector: a diagonal shift on
  // each common vector plus an arbitrary Hermitian term on the complement.
  ComplexMatrix block(dim, static_cast<Eigen::Index>(common.size()));
  for (std::size_t i = 0; i < common.size(); ++i) {
    block.col(static_cast<Eigen::Index>(i)) = common[i].vector.amplitudes();
  }
  const ComplexMatrix in_proj = block * block.adjoint();
  const ComplexMatrix out_proj =
      ComplexMatrix::Identity(dim, dim) - in_proj;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int preserved = 0;
  for (int s = 0; s < samples; ++s) {
    ComplexMatrix delta = random_hermitian(dim, rng);
    if (structure == PerturbationStructure::preserved_block) {
      ComplexMatrix shifted = out_proj * delta * out_proj;
      for (std::size_t i = 0; i < common.size(); ++i) {
        const auto& v = common[i].vector.amplitudes();
        shifted += gauss(rng) * (v * v.adjoint());
      }
      delta = std::move(shifted);
    }
    const double norm = delta.norm();
    if (norm == 0.0) {
      continue;
    }
    delta *= target_norm / norm;
    const DephasingModel perturbed(
        model.h_int(), HermitianOperator(model.h_env().matrix() + delta));
    if (!common_eigenvectors(perturbed).empty()) {
      ++preserved;
    }
  }
  return static_cast<double>(preserved) / static_cast<double>(samples);
}

} // namespace dephasing
