#ifndef DEPHASING_BLOCH_HPP
#define DEPHASING_BLOCH_HPP

#include <span>
#include <string>
#include <vector>

#include "dephasing/linalg.hpp"

namespace dephasing {

// Unit vector on the Bloch sphere.
struct BlochVector {
  double x;
  double y;
  double z;

  BlochVector(double x_, double y_, double z_);
  static BlochVector from_angles(double theta, double phi);
};

double dot(const BlochVector& a, const BlochVector& b);

// Two precession fields m0 = (sin a, 0, cos a), m1 = (-sin a, 0, cos a)
// of equal frequency. omega is fixed to 1 internally; times are in 1/omega.
struct FieldPair {
  double alpha;

  explicit FieldPair(double alpha_);
  BlochVector m0() const;
  BlochVector m1() const;
};

enum class Regime { perpendicular, aligned, boundary };
std::string to_string(Regime regime);

struct BlochOptimum {
  BlochVector v_star{0.0, 1.0, 0.0};
  double r_min = 0.0;
  double t_worst = 0.0;
  Regime regime = Regime::perpendicular;
};

// Rodrigues rotation of v about a unit axis.
BlochVector rotate(const BlochVector& v, const BlochVector& axis, double angle);

// |r(t)| = cos(gamma(t)/2), gamma the angle between v precessed about m0
// and about m1 for time t.
double coherence_at(const BlochVector& v, const FieldPair& fields, double t);

struct MinCoherence {
  double r_min = 0.0;
  double t_worst = 0.0;
};

// Minimum of coherence_at over one period [0, 2pi], grid scan plus
// golden-section refinement to 1e-6 in omega*t.
MinCoherence min_coherence(const BlochVector& v, const FieldPair& fields,
                           int time_samples = 512);

// Max-min search over the sphere: Fibonacci grid, then coordinate descent
// on (theta, phi) down to 1e-4 rad steps.
BlochOptimum optimize_initial_state(const FieldPair& fields,
                                    int sphere_samples = 2000,
                                    int time_samples = 512);

// cos(alpha) for alpha <= pi/3, cos(pi - 2 alpha) above; continuous at pi/3.
double theoretical_rmin(double alpha);

// Worst-case angle min(4 alpha, 2pi - 4 alpha) for v aligned with a field.
double aligned_max_angle(double alpha);

// Two-frequency minimum |p1 - p2| for I an eigenstate of H0 whose H1 weight
// sits on exactly two clusters.
double eigenstate_candidate_rmin(const StateVector& I,
                                 const SpectralDecomposition& decomp1);

struct SweepRow {
  double alpha = 0.0;
  double r_min = 0.0;
  BlochVector v_star{0.0, 1.0, 0.0};
  double t_worst = 0.0;
  double theoretical = 0.0;
  Regime regime = Regime::perpendicular;
};

struct SweepBudgets {
  int sphere_samples = 2000;
  int time_samples = 512;
  int threads = 0; // 0 = hardware concurrency
};

std::vector<SweepRow> alpha_sweep(std::span<const double> alphas,
                                  const SweepBudgets& budgets = {});

} // namespace dephasing

#endif
