#include "dephasing/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dephasing {

QubitAmplitudes::QubitAmplitudes(Complex a_, Complex b_) : a(a_), b(b_) {
  const double norm2 = std::norm(a) + std::norm(b);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw ValidationError("QubitAmplitudes: |a|^2 + |b|^2 = " +
                          std::to_string(norm2) + " is not 1");
  }
}

namespace {

HermitianOperator check_dims(HermitianOperator h_env, Eigen::Index dim) {
  if (h_env.dim() != dim) {
    throw ValidationError("DephasingModel: hInt and hEnv dimensions differ");
  }
  return h_env;
}

} // namespace

DephasingModel::DephasingModel(HermitianOperator h_int, HermitianOperator h_env)
    : h_int_(std::move(h_int)),
      h_env_(check_dims(std::move(h_env), h_int_.dim())),
      h0_(h_env_.matrix() + h_int_.matrix()),
      h1_(h_env_.matrix() - h_int_.matrix()),
      spec0_(spectral_decompose(h0_)),
      spec1_(spectral_decompose(h1_)) {}

const HermitianOperator& DephasingModel::branch(int k) const {
  if (k == 0) return h0_;
  if (k == 1) return h1_;
  throw ValidationError("DephasingModel::branch: k must be 0 or 1");
}

const SpectralDecomposition& DephasingModel::branch_spectrum(int k) const {
  if (k == 0) return spec0_;
  if (k == 1) return spec1_;
  throw ValidationError("DephasingModel::branch_spectrum: k must be 0 or 1");
}

std::pair<HermitianOperator, HermitianOperator>
branch_hamiltonians(const DephasingModel& model) {
  return {model.branch(0), model.branch(1)};
}

Complex decoherence_factor(const DephasingModel& model, const StateVector& I,
                           double t) {
  if (I.dim() != model.dim()) {
    throw ValidationError("decoherence_factor: dimension mismatch");
  }
  const ComplexVector eps0 = model.branch_spectrum(0).propagate(I.amplitudes(), t);
  const ComplexVector eps1 = model.branch_spectrum(1).propagate(I.amplitudes(), t);
  return eps0.dot(eps1);
}

Complex decoherence_factor_spectral(const DephasingModel& model,
                                    const StateVector& I, double t) {
  if (I.dim() != model.dim()) {
    throw ValidationError("decoherence_factor_spectral: dimension mismatch");
  }
  const auto& c0 = model.branch_spectrum(0).clusters();
  const auto& c1 = model.branch_spectrum(1).clusters();
  Complex r = 0.0;
  for (const auto& j : c0) {
    const ComplexVector u = j.projector * I.amplitudes();
    for (const auto& k : c1) {
      const Complex weight = u.dot(k.projector * I.amplitudes());
      r += std::exp(Complex(0.0, (j.eigenvalue - k.eigenvalue) * t)) * weight;
    }
  }
  return r;
}

double purity(const QubitAmplitudes& amps, Complex r) {
  const double mod = std::abs(r);
  if (mod > 1.0 + 1e-12) {
    throw NumericalError("purity: |r| exceeds 1");
  }
  const double echo = std::min(mod * mod, 1.0);
  return 1.0 - 2.0 * std::norm(amps.a) * std::norm(amps.b) * (1.0 - echo);
}

EchoSeries::EchoSeries(const DephasingModel& model, const StateVector& I) {
  if (I.dim() != model.dim()) {
    throw ValidationError("EchoSeries: dimension mismatch");
  }
  const auto& c0 = model.branch_spectrum(0).clusters();
  const auto& c1 = model.branch_spectrum(1).clusters();
  std::vector<ComplexVector> u(c0.size()), w(c1.size());
  for (std::size_t j = 0; j < c0.size(); ++j) {
    u[j] = c0[j].projector * I.amplitudes();
  }
  for (std::size_t k = 0; k < c1.size(); ++k) {
    w[k] = c1[k].projector * I.amplitudes();
  }
  freqs_.reserve(c0.size() * c1.size());
  coeffs_.reserve(c0.size() * c1.size());
  for (std::size_t j = 0; j < c0.size(); ++j) {
    for (std::size_t k = 0; k < c1.size(); ++k) {
      const Complex coeff = u[j].dot(w[k]);
      if (std::abs(coeff) > 1e-16) {
        freqs_.push_back(c0[j].eigenvalue - c1[k].eigenvalue);
        coeffs_.push_back(coeff);
      }
    }
  }
}

Complex EchoSeries::r(double t) const {
  Complex sum = 0.0;
  for (std::size_t m = 0; m < freqs_.size(); ++m) {
    sum += coeffs_[m] * std::exp(Complex(0.0, freqs_[m] * t));
  }
  return sum;
}

TrajectoryRecord trajectory(const DephasingModel& model, const StateVector& I,
                            const QubitAmplitudes& amps,
                            const std::vector<double>& times) {
  if (times.empty()) {
    throw NumericalError("trajectory: empty time grid");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw NumericalError("trajectory: times must be strictly increasing");
    }
  }
  const EchoSeries series(model, I);
  TrajectoryRecord rec;
  rec.times = times;
  rec.r_values.resize(times.size());
  rec.echo.resize(times.size());
  rec.purity.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex r = series.r(times[i]);
    rec.r_values[i] = r;
    rec.echo[i] = std::norm(r);
    rec.purity[i] = purity(amps, r);
  }
  return rec;
}

double time_averaged_echo(const DephasingModel& model, const StateVector& I,
                          double horizon, int samples) {
  if (!(horizon > 0.0)) {
    throw NumericalError("time_averaged_echo: horizon must be positive");
  }
  if (samples < 2) {
    throw NumericalError("time_averaged_echo: need at least 2 samples");
  }
  const EchoSeries series(model, I);
  double sum = 0.0;
  const double dt = horizon / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    sum += std::norm(series.r(i * dt));
  }
  return sum / samples;
}

double default_horizon(const DephasingModel& model) {
  std::vector<double> freqs;
  for (const auto& j : model.branch_spectrum(0).clusters()) {
    for (const auto& k : model.branch_spectrum(1).clusters()) {
      freqs.push_back(j.eigenvalue - k.eigenvalue);
    }
  }
  std::sort(freqs.begin(), freqs.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    const double gap = freqs[i] - freqs[i - 1];
    if (gap > 1e-12 && gap < min_gap) {
      min_gap = gap;
    }
  }
  if (!std::isfinite(min_gap)) {
    // Single frequency: any horizon works; pick one period-ish scale.
    return 1e4;
  }
  return 1e4 / min_gap;
}

} // namespace dephasing
