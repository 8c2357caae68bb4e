#ifndef DEPHASING_ENGINE_HPP
#define DEPHASING_ENGINE_HPP

#include <memory>
#include <utility>
#include <vector>

#include "dephasing/linalg.hpp"

namespace dephasing {

// Qubit initial amplitudes a|0> + b|1>.
struct QubitAmplitudes {
  Complex a;
  Complex b;

  QubitAmplitudes(Complex a_, Complex b_);
  static QubitAmplitudes balanced() {
    return QubitAmplitudes(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  }
};

// Pure-dephasing model: system sigma^z couples to the environment through
// hInt while the environment self-evolves under hEnv. The two branch
// Hamiltonians hEnv +/- hInt and their spectra are computed once up front.
class DephasingModel {
public:
  DephasingModel(HermitianOperator h_int, HermitianOperator h_env);

  Eigen::Index dim() const { return h_int_.dim(); }
  const HermitianOperator& h_int() const { return h_int_; }
  const HermitianOperator& h_env() const { return h_env_; }

  const HermitianOperator& branch(int k) const;
  const SpectralDecomposition& branch_spectrum(int k) const;

private:
  HermitianOperator h_int_;
  HermitianOperator h_env_;
  HermitianOperator h0_;
  HermitianOperator h1_;
  SpectralDecomposition spec0_;
  SpectralDecomposition spec1_;
};

// (H_E + H~, H_E - H~).
std::pair<HermitianOperator, HermitianOperator>
branch_hamiltonians(const DephasingModel& model);

// r(t) = <I| e^{iH0 t} e^{-iH1 t} |I>, propagator route.
Complex decoherence_factor(const DephasingModel& model, const StateVector& I,
                           double t);

// Same quantity through the spectral double sum over projector pairs.
Complex decoherence_factor_spectral(const DephasingModel& model,
                                    const StateVector& I, double t);

// P = 1 - 2|a|^2|b|^2 (1 - |r|^2).
double purity(const QubitAmplitudes& amps, Complex r);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Complex> r_values;
  std::vector<double> echo;   // |r|^2
  std::vector<double> purity; // Tr rho^2
};

TrajectoryRecord trajectory(const DephasingModel& model, const StateVector& I,
                            const QubitAmplitudes& amps,
                            const std::vector<double>& times);

// Uniform-grid mean of |r(t)|^2 over [0, horizon].
double time_averaged_echo(const DephasingModel& model, const StateVector& I,
                          double horizon, int samples);

// r(t) collapsed to sum_m c_m e^{i f_m t} for a fixed initial state; makes
// long trajectories O(#frequency pairs) per sample instead of O(dim^2).
class EchoSeries {
public:
  EchoSeries(const DephasingModel& model, const StateVector& I);

  Complex r(double t) const;
  std::size_t term_count() const { return freqs_.size(); }

private:
  std::vector<double> freqs_;
  std::vector<Complex> coeffs_;
};

// 1e4 / (smallest nonzero gap between branch frequencies lambda_j - mu_k).
double default_horizon(const DephasingModel& model);

} // namespace dephasing

#endif
