#include <doctest.h>

#include "test_util.hpp"

using namespace dephasing;
using namespace dephasing::testing;

namespace {

DephasingModel random_model(Eigen::Index dim, std::mt19937_64& rng) {
  return DephasingModel(HermitianOperator(random_hermitian(dim, rng)),
                        HermitianOperator(random_hermitian(dim, rng)));
}

} // namespace

TEST_CASE("branch_hamiltonians: H0 = H_E + H~, H1 = H_E - H~") {
  SUBCASE("pure interaction") {
    const DephasingModel model(HermitianOperator(pauli_z()),
                               HermitianOperator::zero(2));
    const auto [h0, h1] = branch_hamiltonians(model);
    CHECK((h0.matrix() - pauli_z()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((h1.matrix() + pauli_z()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("pure self-evolution") {
    std::mt19937_64 rng(21);
    const ComplexMatrix a = random_hermitian(3, rng);
    const DephasingModel model(HermitianOperator::zero(3), HermitianOperator(a));
    const auto [h0, h1] = branch_hamiltonians(model);
    CHECK((h0.matrix() - a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((h1.matrix() - a).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("difference recovers 2 H~") {
    std::mt19937_64 rng(22);
    const ComplexMatrix hi = random_hermitian(4, rng);
    const DephasingModel model(HermitianOperator(hi),
                               HermitianOperator(random_hermitian(4, rng)));
    const auto [h0, h1] = branch_hamiltonians(model);
    CHECK((h0.matrix() - h1.matrix() - 2.0 * hi).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("decoherence_factor: r(0) = 1") {
  std::mt19937_64 rng(23);
  const DephasingModel model = random_model(5, rng);
  const StateVector I = random_state(5, rng);
  CHECK(std::abs(decoherence_factor(model, I, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("decoherence_factor: static environment + interaction eigenstate stays coherent") {
  std::mt19937_64 rng(24);
  const ComplexMatrix hi = random_hermitian(4, rng);
  const DephasingModel model(HermitianOperator(hi), HermitianOperator::zero(4));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hi);
  const StateVector I = StateVector::normalized(solver.eigenvectors().col(1));
  for (double t : {0.3, 1.7, 8.1, 40.0}) {
    CHECK(std::abs(std::abs(decoherence_factor(model, I, t)) - 1.0) < 1e-10);
  }
}

TEST_CASE("propagator and spectral routes agree") {
  std::mt19937_64 rng(25);
  for (Eigen::Index dim : {4, 9, 16}) {
    const DephasingModel model = random_model(dim, rng);
    const StateVector I = random_state(dim, rng);
    for (double t : {0.0, 0.4, 2.9, 13.0}) {
      const Complex a = decoherence_factor(model, I, t);
      const Complex b = decoherence_factor_spectral(model, I, t);
      CHECK(std::abs(a - b) < 1e-10);
      CHECK(std::abs(a) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("spectral route: commuting branches with a shared eigenvector give one term") {
  // Diagonal model: every basis vector is a joint eigenvector.
  ComplexMatrix hi(3, 3), he(3, 3);
  hi.setZero();
  he.setZero();
  hi.diagonal() << 1.0, 2.0, 3.0;
  he.diagonal() << -0.5, 0.25, 4.0;
  const DephasingModel model((HermitianOperator(hi)), HermitianOperator(he));
  const StateVector I = StateVector::basis(3, 1);
  for (double t : {0.7, 3.3}) {
    const Complex r = decoherence_factor_spectral(model, I, t);
    CHECK(std::abs(std::abs(r) - 1.0) < 1e-12);
    // Single term e^{i(lambda0-lambda1)t} with lambda0-lambda1 = 2*hi(1,1).
    CHECK(std::abs(r - std::exp(Complex(0, 2.0 * 2.0 * t))) < 1e-12);
  }
}

TEST_CASE("r(-t) is the conjugate of r(t) for real symmetric branches") {
  std::mt19937_64 rng(26);
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(5, 5);
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(5, 5);
  const ComplexMatrix hi = (0.5 * (a + a.transpose())).cast<Complex>();
  const ComplexMatrix he = (0.5 * (b + b.transpose())).cast<Complex>();
  const DephasingModel model((HermitianOperator(hi)), HermitianOperator(he));
  Eigen::VectorXd re = Eigen::VectorXd::Random(5);
  const StateVector I = StateVector::normalized(re.cast<Complex>());
  for (double t : {0.9, 4.2}) {
    const Complex fwd = decoherence_factor(model, I, t);
    const Complex bwd = decoherence_factor(model, I, -t);
    CHECK(std::abs(bwd - std::conj(fwd)) < 1e-11);
  }
}

TEST_CASE("purity: closed form and limits") {
  const QubitAmplitudes balanced = QubitAmplitudes::balanced();
  CHECK(purity(balanced, Complex(1.0, 0.0)) == doctest::Approx(1.0));
  CHECK(purity(balanced, Complex(0.0, 0.0)) == doctest::Approx(0.5));
}

TEST_CASE("purity equals Tr rho^2 of the reduced density matrix") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const DephasingModel model = random_model(6, rng);
    const StateVector I = random_state(6, rng);
    std::uniform_real_distribution<double> angle(0.0, 3.14159);
    const double theta = angle(rng);
    const QubitAmplitudes amps(std::cos(theta / 2),
                               std::exp(Complex(0, angle(rng))) * std::sin(theta / 2));
    const double t = 1.7 * (trial + 1) / 3.0;

    // Oracle: build the 2x2 reduced density matrix from the branch states.
    const ComplexVector e0 = model.branch_spectrum(0).propagate(I.amplitudes(), t);
    const ComplexVector e1 = model.branch_spectrum(1).propagate(I.amplitudes(), t);
    ComplexMatrix rho(2, 2);
    rho(0, 0) = std::norm(amps.a);
    rho(1, 1) = std::norm(amps.b);
    rho(0, 1) = amps.a * std::conj(amps.b) * e1.dot(e0);
    rho(1, 0) = std::conj(rho(0, 1));
    const double trace_rho2 = (rho * rho).trace().real();

    const Complex r = decoherence_factor(model, I, t);
    CHECK(purity(amps, r) == doctest::Approx(trace_rho2).epsilon(1e-12));
  }
}

TEST_CASE("trajectory: single time zero") {
  std::mt19937_64 rng(28);
  const DephasingModel model = random_model(4, rng);
  const StateVector I = random_state(4, rng);
  const auto rec = trajectory(model, I, QubitAmplitudes::balanced(), {0.0});
  REQUIRE(rec.times.size() == 1);
  CHECK(std::abs(rec.r_values[0] - 1.0) < 1e-12);
  CHECK(rec.purity[0] == doctest::Approx(1.0));
}

TEST_CASE("trajectory: shared-eigenstate input keeps echo at 1") {
  std::mt19937_64 rng(29);
  const PlantedModel planted = planted_model(6, 1, rng);
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) {
    times.push_back(0.25 * i);
  }
  const auto rec = trajectory(planted.model, planted.planted[0],
                              QubitAmplitudes::balanced(), times);
  for (double echo : rec.echo) {
    CHECK(echo >= 1.0 - 1e-9);
    CHECK(echo <= 1.0 + 1e-12);
  }
}

TEST_CASE("trajectory spot values match single decoherence_factor calls") {
  std::mt19937_64 rng(30);
  const DephasingModel model = random_model(5, rng);
  const StateVector I = random_state(5, rng);
  const std::vector<double> times{0.0, 0.5, 1.25, 7.0};
  const auto rec = trajectory(model, I, QubitAmplitudes::balanced(), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(std::abs(rec.r_values[i] - decoherence_factor(model, I, times[i])) < 1e-10);
  }
}

TEST_CASE("trajectory rejects unsorted times") {
  std::mt19937_64 rng(31);
  const DephasingModel model = random_model(3, rng);
  const StateVector I = random_state(3, rng);
  CHECK_THROWS_AS(
      trajectory(model, I, QubitAmplitudes::balanced(), {0.0, 2.0, 1.0}),
      NumericalError);
}

TEST_CASE("time_averaged_echo: coherent model averages to 1") {
  std::mt19937_64 rng(32);
  const PlantedModel planted = planted_model(5, 1, rng);
  const double avg =
      time_averaged_echo(planted.model, planted.planted[0], 100.0, 2001);
  CHECK(avg == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("time_averaged_echo converges in the sample count") {
  std::mt19937_64 rng(33);
  const DephasingModel model = random_model(6, rng);
  const StateVector I = random_state(6, rng);
  const double horizon = default_horizon(model);
  const double a = time_averaged_echo(model, I, horizon, 40000);
  const double b = time_averaged_echo(model, I, horizon, 80000);
  CHECK(std::abs(a - b) < 1e-3);
}
