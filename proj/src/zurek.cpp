#include "dephasing/zurek.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dephasing {

double omega(std::uint32_t x, std::span<const double> couplings) {
  const int n = static_cast<int>(couplings.size());
  if (n < 1 || n > kMaxZurekSpins) {
    throw ValidationError("omega: need 1 <= n <= 12 couplings");
  }
  if (x >= (std::uint32_t(1) << n)) {
    throw ValidationError("omega: bitstring longer than coupling list");
  }
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const int bit = (x >> (n - k)) & 1u;
    sum += (bit ? -1.0 : 1.0) * couplings[k - 1];
  }
  return sum;
}

namespace {

std::vector<double> all_omegas(std::span<const double> couplings) {
  const std::uint32_t levels = std::uint32_t(1) << couplings.size();
  std::vector<double> omegas(levels);
  for (std::uint32_t x = 0; x < levels; ++x) {
    omegas[x] = omega(x, couplings);
  }
  return omegas;
}

} // namespace

double min_gap(std::span<const double> couplings) {
  std::vector<double> omegas = all_omegas(couplings);
  std::sort(omegas.begin(), omegas.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    gap = std::min(gap, omegas[i] - omegas[i - 1]);
  }
  double scale = 0.0;
  for (double g : couplings) {
    scale += std::abs(g);
  }
  if (omegas.size() < 2) {
    throw NumericalError("min_gap: single level has no gaps");
  }
  if (!(gap > 1e-12 * std::max(scale, 1.0))) {
    throw NumericalError("min_gap: degenerate omega spectrum");
  }
  return gap;
}

DephasingModel build_zurek(const ZurekConfig& config) {
  if (!std::isfinite(config.lambda)) {
    throw ValidationError("build_zurek: lambda must be finite");
  }
  min_gap(config.couplings); // enforces 1 <= n <= 12 and distinct omega_x

  const Eigen::Index dim = config.dim();
  ComplexMatrix h_int = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    h_int(x, x) = omega(static_cast<std::uint32_t>(x), config.couplings);
  }
  // lambda*N |Phi><Phi| with |Phi> uniform: every entry equals lambda.
  ComplexMatrix h_env = ComplexMatrix::Constant(dim, dim, config.lambda);
  return DephasingModel(HermitianOperator(std::move(h_int)),
                        HermitianOperator(std::move(h_env)));
}

ProductState::ProductState(std::vector<Complex> a, std::vector<Complex> b)
    : alphas(std::move(a)), betas(std::move(b)) {
  if (alphas.empty() || alphas.size() != betas.size()) {
    throw ValidationError("ProductState: alpha/beta lists must match and be nonempty");
  }
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double norm2 = std::norm(alphas[k]) + std::norm(betas[k]);
    if (std::abs(norm2 - 1.0) > 1e-12) {
      throw ValidationError("ProductState: spin " + std::to_string(k + 1) +
                            " is not normalized");
    }
  }
}

StateVector product_state(const ProductState& spec) {
  std::vector<StateVector> spins;
  spins.reserve(spec.alphas.size());
  for (std::size_t k = 0; k < spec.alphas.size(); ++k) {
    ComplexVector v(2);
    v << spec.alphas[k], spec.betas[k];
    spins.emplace_back(std::move(v));
  }
  return tensor_state(spins);
}

PerturbativeEcho::PerturbativeEcho(const ZurekConfig& config)
    : lambda_(config.lambda), omegas_(all_omegas(config.couplings)) {
  min_gap(config.couplings);

  const Eigen::Index dim = config.dim();
  ComplexMatrix h0 = ComplexMatrix::Constant(dim, dim, config.lambda);
  for (Eigen::Index x = 0; x < dim; ++x) {
    h0(x, x) += omegas_[static_cast<std::size_t>(x)];
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h0);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("PerturbativeEcho: eigensolver failed");
  }

  // Label each exact eigenvalue by the unperturbed basis state its
  // eigenvector overlaps most.
  matched_energies_.assign(static_cast<std::size_t>(dim), 0.0);
  std::vector<bool> taken(static_cast<std::size_t>(dim), false);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Index x;
    solver.eigenvectors().col(j).cwiseAbs().maxCoeff(&x);
    if (taken[static_cast<std::size_t>(x)]) {
      throw NumericalError(
          "PerturbativeEcho: ambiguous eigenvector labelling; lambda too large");
    }
    taken[static_cast<std::size_t>(x)] = true;
    matched_energies_[static_cast<std::size_t>(x)] = solver.eigenvalues()[j];
  }
}

double PerturbativeEcho::echo(double t) const {
  double sum = 0.0;
  for (std::size_t x = 1; x < omegas_.size(); ++x) {
    const double s = std::sin(0.5 * (matched_energies_[x] - matched_energies_[0]) * t);
    const double d = omegas_[0] - omegas_[x];
    sum += (s * s) * (s * s) / (d * d);
  }
  return 1.0 - 16.0 * lambda_ * lambda_ * sum;
}

double PerturbativeEcho::average() const {
  double sum = 0.0;
  for (std::size_t x = 1; x < omegas_.size(); ++x) {
    const double d = omegas_[0] - omegas_[x];
    sum += 1.0 / (d * d);
  }
  return 1.0 - 6.0 * lambda_ * lambda_ * sum;
}

double perturbative_echo(const ZurekConfig& config, double t) {
  return PerturbativeEcho(config).echo(t);
}

double perturbative_average(const ZurekConfig& config) {
  return PerturbativeEcho(config).average();
}

double product_average_echo(std::span<const double> couplings,
                            const ProductState& spec) {
  if (static_cast<int>(couplings.size()) != spec.n()) {
    throw ValidationError("product_average_echo: coupling/spin count mismatch");
  }
  min_gap(couplings); // the closed form needs distinct omega_x
  double prod = 1.0;
  for (std::size_t k = 0; k < spec.alphas.size(); ++k) {
    const double pa = std::norm(spec.alphas[k]);
    const double pb = std::norm(spec.betas[k]);
    prod *= pa * pa + pb * pb;
  }
  return prod;
}

double preparation_bound(double epsilon, int n) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw ValidationError("preparation_bound: epsilon must lie in [0, 1/2]");
  }
  if (n < 1) {
    throw ValidationError("preparation_bound: n must be positive");
  }
  const double per_spin = (1.0 - epsilon) * (1.0 - epsilon) + epsilon * epsilon;
  return std::pow(per_spin, n);
}

} // namespace dephasing
