#include "dephasing/bloch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

namespace dephasing {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPeriod = 2.0 * kPi; // omega = 1

using Vec3 = std::array<double, 3>;

Vec3 raw(const BlochVector& v) { return {v.x, v.y, v.z}; }

double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Vec3 rodrigues(const Vec3& v, const Vec3& k, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec3 kxv = cross3(k, v);
  const double kv = dot3(k, v);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = v[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c);
  }
  return out;
}

} // namespace

BlochVector::BlochVector(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
    throw ValidationError("BlochVector: vector is not unit length");
  }
  x /= norm;
  y /= norm;
  z /= norm;
}

BlochVector BlochVector::from_angles(double theta, double phi) {
  return BlochVector(std::sin(theta) * std::cos(phi),
                     std::sin(theta) * std::sin(phi), std::cos(theta));
}

double dot(const BlochVector& a, const BlochVector& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

FieldPair::FieldPair(double alpha_) : alpha(alpha_) {
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) {
    throw ValidationError("FieldPair: alpha must lie in (0, pi/2)");
  }
}

BlochVector FieldPair::m0() const {
  return BlochVector(std::sin(alpha), 0.0, std::cos(alpha));
}

BlochVector FieldPair::m1() const {
  return BlochVector(-std::sin(alpha), 0.0, std::cos(alpha));
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::perpendicular: return "perpendicular";
    case Regime::aligned: return "aligned";
    case Regime::boundary: return "boundary";
  }
  return "unknown";
}

BlochVector rotate(const BlochVector& v, const BlochVector& axis, double angle) {
  const Vec3 out = rodrigues(raw(v), raw(axis), angle);
  return BlochVector(out[0], out[1], out[2]);
}

double coherence_at(const BlochVector& v, const FieldPair& fields, double t) {
  const Vec3 v0 = rodrigues(raw(v), raw(fields.m0()), t);
  const Vec3 v1 = rodrigues(raw(v), raw(fields.m1()), t);
  const Vec3 x = cross3(v0, v1);
  const double gamma = std::atan2(std::sqrt(dot3(x, x)), dot3(v0, v1));
  return std::cos(0.5 * gamma);
}

namespace {

// Golden-section minimization on [lo, hi] to the given width.
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double width, double& arg_min) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  arg_min = 0.5 * (a + b);
  return f(arg_min);
}

} // namespace

MinCoherence min_coherence(const BlochVector& v, const FieldPair& fields,
                           int time_samples) {
  if (time_samples < 64) {
    throw ValidationError("min_coherence: need at least 64 time samples");
  }
  const auto f = [&](double t) { return coherence_at(v, fields, t); };

  const double dt = kPeriod / time_samples;
  int best = 0;
  double best_val = f(0.0);
  for (int i = 1; i < time_samples; ++i) {
    const double val = f(i * dt);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  double t_worst = best * dt;
  double r_min = golden_min(f, (best - 1) * dt, (best + 1) * dt, 1e-6, t_worst);
  if (t_worst < 0.0) t_worst += kPeriod;
  if (t_worst > kPeriod) t_worst -= kPeriod;
  return {r_min, t_worst};
}

namespace {

struct Candidate {
  double theta;
  double phi;
  MinCoherence value;
};

BlochVector vec_of(const Candidate& c) {
  return BlochVector::from_angles(c.theta, c.phi);
}

Candidate evaluate(double theta, double phi, const FieldPair& fields,
                   int time_samples) {
  return {theta, phi,
          min_coherence(BlochVector::from_angles(theta, phi), fields,
                        time_samples)};
}

// Coordinate descent on (theta, phi) with shrinking step. The improvement
// threshold keeps the walk from wandering along flat plateaus on rounding
// noise, which would break the deterministic tie-break downstream.
Candidate refine(Candidate c, const FieldPair& fields, int time_samples) {
  double step = 0.05;
  while (step >= 1e-4) {
    bool improved = false;
    const double trials[4][2] = {{c.theta + step, c.phi},
                                 {c.theta - step, c.phi},
                                 {c.theta, c.phi + step},
                                 {c.theta, c.phi - step}};
    for (const auto& trial : trials) {
      Candidate next = evaluate(trial[0], trial[1], fields, time_samples);
      if (next.value.r_min > c.value.r_min + 1e-12) {
        c = next;
        improved = true;
      }
    }
    if (!improved) {
      step *= 0.5;
    }
  }
  return c;
}

} // namespace

BlochOptimum optimize_initial_state(const FieldPair& fields, int sphere_samples,
                                    int time_samples) {
  if (sphere_samples < 500) {
    throw ValidationError("optimize_initial_state: need at least 500 sphere samples");
  }

  std::vector<Candidate> seeds;
  // Fibonacci sphere grid.
  constexpr double golden_angle = kPi * (3.0 - 2.23606797749979); // pi(3-sqrt 5)
  for (int i = 0; i < sphere_samples; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / sphere_samples;
    const double theta = std::acos(std::clamp(z, -1.0, 1.0));
    const double phi = golden_angle * i;
    seeds.push_back(evaluate(theta, phi, fields, time_samples));
  }
  std::sort(seeds.begin(), seeds.end(), [](const Candidate& a, const Candidate& b) {
    return a.value.r_min > b.value.r_min;
  });

  // Polish the leading grid seeds plus the analytic candidate families
  // (+/- y and the field axes); the optimum can be a plateau, so the grid
  // alone may tie without containing the canonical representative.
  std::vector<Candidate> finals;
  const std::size_t polish = std::min<std::size_t>(8, seeds.size());
  for (std::size_t i = 0; i < polish; ++i) {
    finals.push_back(refine(seeds[i], fields, time_samples));
  }
  finals.push_back(refine(evaluate(kPi / 2.0, kPi / 2.0, fields, time_samples),
                          fields, time_samples));
  finals.push_back(refine(evaluate(kPi / 2.0, -kPi / 2.0, fields, time_samples),
                          fields, time_samples));
  finals.push_back(refine(evaluate(fields.alpha, 0.0, fields, time_samples),
                          fields, time_samples));
  finals.push_back(refine(evaluate(kPi - fields.alpha, kPi, fields, time_samples),
                          fields, time_samples));
  finals.push_back(refine(evaluate(fields.alpha, kPi, fields, time_samples),
                          fields, time_samples));
  finals.push_back(refine(evaluate(kPi - fields.alpha, 0.0, fields, time_samples),
                          fields, time_samples));

  double best_val = 0.0;
  for (const auto& c : finals) {
    best_val = std::max(best_val, c.value.r_min);
  }
  // Symmetry makes the optimum non-unique; prefer largest y, then largest z.
  // Coordinate descent stops at 1e-4 rad, so components carry ~1e-4 noise;
  // treat y values that close as equal before falling back to z.
  const Candidate* pick = nullptr;
  for (const auto& c : finals) {
    if (c.value.r_min < best_val - 1e-7) {
      continue;
    }
    if (pick == nullptr) {
      pick = &c;
      continue;
    }
    const BlochVector vc = vec_of(c);
    const BlochVector vp = vec_of(*pick);
    if (vc.y > vp.y + 1e-3 ||
        (std::abs(vc.y - vp.y) <= 1e-3 && vc.z > vp.z + 1e-3)) {
      pick = &c;
    }
  }

  BlochOptimum opt;
  opt.v_star = vec_of(*pick);
  opt.r_min = pick->value.r_min;
  opt.t_worst = pick->value.t_worst;
  if (std::abs(fields.alpha - kPi / 3.0) <= 1e-6) {
    opt.regime = Regime::boundary;
  } else if (fields.alpha < kPi / 3.0) {
    opt.regime = Regime::perpendicular;
  } else {
    opt.regime = Regime::aligned;
  }
  return opt;
}

double theoretical_rmin(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) {
    throw ValidationError("theoretical_rmin: alpha must lie in (0, pi/2)");
  }
  return alpha <= kPi / 3.0 ? std::cos(alpha) : std::cos(kPi - 2.0 * alpha);
}

double aligned_max_angle(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi / 2.0)) {
    throw ValidationError("aligned_max_angle: alpha must lie in (0, pi/2)");
  }
  return std::min(4.0 * alpha, 2.0 * kPi - 4.0 * alpha);
}

double eigenstate_candidate_rmin(const StateVector& I,
                                 const SpectralDecomposition& decomp1) {
  if (I.dim() != decomp1.dim()) {
    throw ValidationError("eigenstate_candidate_rmin: dimension mismatch");
  }
  std::vector<double> weights;
  for (const auto& cluster : decomp1.clusters()) {
    const double p =
        I.amplitudes().dot(cluster.projector * I.amplitudes()).real();
    if (p > 1e-9) {
      weights.push_back(p);
    }
  }
  if (weights.empty() || weights.size() > 2) {
    throw NumericalError(
        "eigenstate_candidate_rmin: weight must sit on one or two clusters");
  }
  const double p1 = weights[0];
  const double p2 = weights.size() == 2 ? weights[1] : 0.0;
  return std::abs(p1 - p2);
}

std::vector<SweepRow> alpha_sweep(std::span<const double> alphas,
                                  const SweepBudgets& budgets) {
  for (double a : alphas) {
    FieldPair check(a); // validate before spawning workers
    (void)check;
  }
  std::vector<SweepRow> rows(alphas.size());
  const auto work = [&](std::size_t i) {
    const FieldPair fields(alphas[i]);
    const BlochOptimum opt = optimize_initial_state(
        fields, budgets.sphere_samples, budgets.time_samples);
    rows[i] = {alphas[i],          opt.r_min, opt.v_star,
               opt.t_worst,        theoretical_rmin(alphas[i]),
               opt.regime};
  };

  unsigned threads = budgets.threads > 0
                         ? static_cast<unsigned>(budgets.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(alphas.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      work(i);
    }
    return rows;
  }

  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < alphas.size(); i += threads) {
        work(i);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  return rows;
}

} // namespace dephasing
