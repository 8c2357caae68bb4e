#ifndef DEPHASING_ZUREK_HPP
#define DEPHASING_ZUREK_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dephasing/engine.hpp"

namespace dephasing {

// n-spin bath coupled through sigma^z sigma^z with couplings g_k, plus a
// rank-1 self-evolution lambda*N |Phi><Phi| on the uniform state.
struct ZurekConfig {
  std::vector<double> couplings;
  double lambda = 0.0;

  int n() const { return static_cast<int>(couplings.size()); }
  Eigen::Index dim() const { return Eigen::Index(1) << n(); }
};

inline constexpr int kMaxZurekSpins = 12; // dense 4096-dim diagonalization cap

// omega_x = sum_k (-1)^{x_k} g_k with x = x_1 x_2 ... x_n in binary
// (x_1 the most significant bit).
double omega(std::uint32_t x, std::span<const double> couplings);

// Minimum |omega_x - omega_y| over distinct levels; throws on degeneracy.
double min_gap(std::span<const double> couplings);

DephasingModel build_zurek(const ZurekConfig& config);

// Environment prepared per spin as alpha_k|0> + beta_k|1>.
struct ProductState {
  std::vector<Complex> alphas;
  std::vector<Complex> betas;

  ProductState(std::vector<Complex> a, std::vector<Complex> b);
  int n() const { return static_cast<int>(alphas.size()); }
};

StateVector product_state(const ProductState& spec);

// Second-order echo for the bath prepared in |0...0>, with the perturbed
// level energies E_x matched to unperturbed labels by eigenvector overlap.
// Caches the diagonalization of H0 for repeated time points.
class PerturbativeEcho {
public:
  explicit PerturbativeEcho(const ZurekConfig& config);

  double echo(double t) const;    // |r(t)|^2 to second order in lambda
  double average() const;         // 1 - 6 lambda^2 sum 1/(omega_0-omega_x)^2

private:
  double lambda_;
  std::vector<double> omegas_;            // unperturbed, label order
  std::vector<double> matched_energies_;  // exact E_x, label order
};

double perturbative_echo(const ZurekConfig& config, double t);
double perturbative_average(const ZurekConfig& config);

// Infinite-time average of |r(t)|^2 at lambda = 0 for a product-state
// preparation: prod_k (|alpha_k|^4 + |beta_k|^4). Valid for distinct,
// non-resonant omega_x.
double product_average_echo(std::span<const double> couplings,
                            const ProductState& spec);

// ((1-eps)^2 + eps^2)^n, the worst-case average over |beta_k|^2 <= eps.
double preparation_bound(double epsilon, int n);

} // namespace dephasing

#endif
