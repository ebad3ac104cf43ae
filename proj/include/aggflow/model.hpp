#pragma once

#include <vector>

#include "aggflow/errors.hpp"

namespace aggflow {

// Scalar coefficient profile (used for a, m, eta): strictly positive and C^1
// on [-1, 1], extended by its endpoint values outside that interval.
class CoefficientProfile {
 public:
  static CoefficientProfile constant(double c);
  // Samples are uniformly spaced on [-1, 1] and interpolated by a C^1 cubic
  // Hermite with centered-difference slopes. Needs at least 4 samples.
  static CoefficientProfile table(std::vector<double> samples);

  double value(double s) const;
  double derivative(double s) const;

  bool is_constant() const { return constant_; }
  double min_value() const { return min_; }
  double max_value() const { return max_; }

 private:
  CoefficientProfile() = default;

  bool constant_ = true;
  double c_ = 1.0;
  std::vector<double> y_;      // node values
  std::vector<double> slope_;  // Hermite slopes at nodes
  double min_ = 1.0;
  double max_ = 1.0;
};

enum class PotentialKind { Logarithmic, DoubleWell };

// Homogeneous free-energy density.
//
// Logarithmic: psi(s) = (theta/2)[(1+s)ln(1+s) + (1-s)ln(1-s)] - (theta_c/2)s^2,
// finite on [-1,1] with singular derivatives at the endpoints.
// DoubleWell (regular, mainly for convergence studies):
// psi(s) = scale*(1-s^2)^2/4, defined on all of R.
class PotentialSpec {
 public:
  static PotentialSpec logarithmic(double theta, double theta_c);
  static PotentialSpec double_well(double scale);

  PotentialKind kind() const { return kind_; }
  // Singular potentials confine phi to (-1,1); derivative evaluations outside
  // the closed interval are domain errors.
  bool singular() const { return kind_ == PotentialKind::Logarithmic; }

  double theta() const { return theta_; }
  double theta_c() const { return theta_c_; }
  double scale() const { return scale_; }

  double psi(double s) const;
  double dpsi(double s) const;
  double d2psi(double s) const;

  // Smallest kappa >= 0 with psi(s) + kappa s^2 / 2 convex:
  // max(0, theta_c - theta) for the logarithmic potential, scale for the
  // double well.
  double kappa() const;

 private:
  PotentialSpec() = default;

  PotentialKind kind_ = PotentialKind::Logarithmic;
  double theta_ = 1.0;
  double theta_c_ = 2.0;
  double scale_ = 1.0;
};

// Convexified derivative psi'(s) + kappa*s (nondecreasing on the domain).
double psi0_prime(double s, const PotentialSpec& pot);

// The interface-coefficient transform A(s) = integral_0^s sqrt(a(tau)) dtau
// together with everything the solver needs in A-coordinates:
// A, its inverse, the difference quotient F(s,t) = (A(s)-A(t))/(s-t), and the
// reparametrized potential psi~(r) = psi(A^-1(r)) with its convex split
// psi~0(r) = psi~(r) + kappa~ r^2/2.
//
// Constant a uses closed forms; otherwise a dense quadrature table with C^1
// interpolation (A' = sqrt(a) is known exactly at the nodes).
class TransformA {
 public:
  TransformA(const CoefficientProfile& a, const PotentialSpec& pot);

  double A(double s) const;
  double A_inv(double r) const;
  double dA(double s) const;  // sqrt(a(s))

  // Difference quotient; falls back to the integral mean
  // integral_0^1 sqrt(a(t s + (1-t) t0)) dt when |s - t0| < 1e-8.
  double F(double s, double t) const;
  double dF_ds(double s, double t) const;

  double r_lo() const { return r_lo_; }  // A(-1)
  double r_hi() const { return r_hi_; }  // A(1)

  double kappa_tilde() const { return kappa_tilde_; }

  double tilde_psi_prime(double r) const;
  double tilde_psi_second(double r) const;
  double tilde_psi0_prime(double r) const;
  double tilde_psi0_second(double r) const;

  bool closed_form() const { return closed_; }
  const PotentialSpec& potential() const { return pot_; }
  const CoefficientProfile& a_coeff() const { return a_; }

 private:
  // Unchecked evaluations, linearly extended beyond [-1,1] (the coefficient
  // clamps there, so the extension is exact for the clamped profile).
  double A_raw(double s) const;
  double A_inv_raw(double r) const;
  void check_s(double s) const;
  void check_r(double r) const;

  CoefficientProfile a_;
  PotentialSpec pot_;
  bool closed_ = true;
  double sqrt_a0_ = 1.0;

  std::vector<double> s_nodes_;
  std::vector<double> A_nodes_;
  std::vector<double> dA_nodes_;

  double r_lo_ = -1.0;
  double r_hi_ = 1.0;
  double kappa_tilde_ = 0.0;
};

enum class ModelVariant {
  Agg,         // relative mass flux enters the momentum balance
  AggKinetic,  // |v|^2/2 couples into the chemical potential instead
};

struct ModelParams {
  double rho1;
  double rho2;
  CoefficientProfile a;
  CoefficientProfile mobility;
  CoefficientProfile viscosity;
  PotentialSpec potential;
  ModelVariant variant;

  ModelParams(double rho1_, double rho2_, CoefficientProfile a_,
              CoefficientProfile mobility_, CoefficientProfile viscosity_,
              PotentialSpec potential_, ModelVariant variant_ = ModelVariant::Agg);

  double beta() const { return 0.5 * (rho2 - rho1); }
  bool matched() const { return rho1 == rho2; }
  double rho(double phi) const { return 0.5 * (rho1 + rho2) + beta() * phi; }

  // Lower/upper bounds shared by all three coefficient profiles.
  double m0() const { return m0_; }
  double K() const { return K_; }

 private:
  double m0_ = 1.0;
  double K_ = 1.0;
};

// psi(phi) + |grad A(phi)|^2 / 2 for a single point.
double free_energy_density(double phi, double grad_A_sq, const PotentialSpec& pot);

}  // namespace aggflow
