#include "aggflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aggflow {
namespace {

constexpr double kDomainSlack = 1e-12;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Cubic Hermite interpolation on a uniform node grid over [-1,1].
struct HermiteOut {
  double val;
  double der;
};

HermiteOut hermite_eval(const std::vector<double>& y, const std::vector<double>& m,
                        double s) {
  const int n = static_cast<int>(y.size());
  const double dx = 2.0 / (n - 1);
  const double x = std::clamp(s, -1.0, 1.0);
  int k = static_cast<int>((x + 1.0) / dx);
  k = std::clamp(k, 0, n - 2);
  const double t = (x - (-1.0 + k * dx)) / dx;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  HermiteOut out;
  out.val = h00 * y[k] + h10 * dx * m[k] + h01 * y[k + 1] + h11 * dx * m[k + 1];
  out.der = (6 * t2 - 6 * t) * (y[k] - y[k + 1]) / dx + (3 * t2 - 4 * t + 1) * m[k] +
            (3 * t2 - 2 * t) * m[k + 1];
  return out;
}

// Gauss-Legendre nodes/weights on [-1,1].
constexpr double kG5x[5] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                            0.5384693101056830910, 0.9061798459386639928};
constexpr double kG5w[5] = {0.2369268850561890875, 0.4786286704993664680,
                            0.5688888888888888889, 0.4786286704993664680,
                            0.2369268850561890875};

constexpr double kG16x[16] = {
    -0.9894009349916499326, -0.9445750230732325761, -0.8656312023878317439,
    -0.7554044083550030339, -0.6178762444026437484, -0.4580167776572273863,
    -0.2816035507792589132, -0.0950125098376374402, 0.0950125098376374402,
    0.2816035507792589132,  0.4580167776572273863,  0.6178762444026437484,
    0.7554044083550030339,  0.8656312023878317439,  0.9445750230732325761,
    0.9894009349916499326};
constexpr double kG16w[16] = {
    0.0271524594117540949, 0.0622535239386478929, 0.0951585116824927848,
    0.1246289712555338721, 0.1495959888165767321, 0.1691565193950025382,
    0.1826034150449235889, 0.1894506104550684963, 0.1894506104550684963,
    0.1826034150449235889, 0.1691565193950025382, 0.1495959888165767321,
    0.1246289712555338721, 0.0951585116824927848, 0.0622535239386478929,
    0.0271524594117540949};

constexpr int kTableIntervals = 2048;
constexpr int kKappaLadder = 4001;

}  // namespace

CoefficientProfile CoefficientProfile::constant(double c) {
  if (!(c > 0.0)) throw NonPositiveCoefficient("constant coefficient must be > 0");
  CoefficientProfile p;
  p.constant_ = true;
  p.c_ = c;
  p.min_ = c;
  p.max_ = c;
  return p;
}

CoefficientProfile CoefficientProfile::table(std::vector<double> samples) {
  if (samples.size() < 4)
    throw ValidationError("coefficient table needs at least 4 samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw ValidationError("coefficient table has a non-finite sample");
  }
  CoefficientProfile p;
  p.constant_ = false;
  p.y_ = std::move(samples);
  const int n = static_cast<int>(p.y_.size());
  const double dx = 2.0 / (n - 1);
  p.slope_.resize(n);
  // Second-order one-sided end slopes so quadratic data is reproduced exactly.
  p.slope_[0] = (-3.0 * p.y_[0] + 4.0 * p.y_[1] - p.y_[2]) / (2 * dx);
  p.slope_[n - 1] = (3.0 * p.y_[n - 1] - 4.0 * p.y_[n - 2] + p.y_[n - 3]) / (2 * dx);
  for (int i = 1; i < n - 1; ++i) p.slope_[i] = (p.y_[i + 1] - p.y_[i - 1]) / (2 * dx);

  // The Hermite interpolant can dip below the node values; bound it densely.
  double lo = p.y_[0], hi = p.y_[0];
  const int dense = 8192;
  for (int i = 0; i <= dense; ++i) {
    const double s = -1.0 + 2.0 * i / dense;
    const double v = hermite_eval(p.y_, p.slope_, s).val;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  p.min_ = lo;
  p.max_ = hi;
  if (!(lo > 0.0)) throw NonPositiveCoefficient("coefficient table dips to a non-positive value");
  return p;
}

double CoefficientProfile::value(double s) const {
  if (constant_) return c_;
  return hermite_eval(y_, slope_, s).val;  // clamped outside [-1,1]
}

double CoefficientProfile::derivative(double s) const {
  if (constant_) return 0.0;
  if (s < -1.0 || s > 1.0) return 0.0;
  return hermite_eval(y_, slope_, s).der;
}

PotentialSpec PotentialSpec::logarithmic(double theta, double theta_c) {
  if (!(theta > 0.0)) throw ValidationError("logarithmic potential needs theta > 0");
  if (!(theta_c >= 0.0)) throw ValidationError("logarithmic potential needs theta_c >= 0");
  PotentialSpec p;
  p.kind_ = PotentialKind::Logarithmic;
  p.theta_ = theta;
  p.theta_c_ = theta_c;
  return p;
}

PotentialSpec PotentialSpec::double_well(double scale) {
  if (!(scale > 0.0)) throw ValidationError("double-well potential needs scale > 0");
  PotentialSpec p;
  p.kind_ = PotentialKind::DoubleWell;
  p.scale_ = scale;
  return p;
}

double PotentialSpec::psi(double s) const {
  if (kind_ == PotentialKind::Logarithmic) {
    if (std::abs(s) > 1.0 + kDomainSlack)
      throw DomainError("psi: |s| > 1 outside the logarithmic domain");
    const double x = std::clamp(s, -1.0, 1.0);
    return 0.5 * theta_ * (xlogx(1.0 + x) + xlogx(1.0 - x)) - 0.5 * theta_c_ * x * x;
  }
  const double q = 1.0 - s * s;
  return 0.25 * scale_ * q * q;
}

double PotentialSpec::dpsi(double s) const {
  if (kind_ == PotentialKind::Logarithmic) {
    if (std::abs(s) >= 1.0)
      throw DomainError("psi': |s| >= 1 outside the logarithmic domain");
    return 0.5 * theta_ * std::log((1.0 + s) / (1.0 - s)) - theta_c_ * s;
  }
  return scale_ * s * (s * s - 1.0);
}

double PotentialSpec::d2psi(double s) const {
  if (kind_ == PotentialKind::Logarithmic) {
    if (std::abs(s) >= 1.0)
      throw DomainError("psi'': |s| >= 1 outside the logarithmic domain");
    return theta_ / (1.0 - s * s) - theta_c_;
  }
  return scale_ * (3.0 * s * s - 1.0);
}

double PotentialSpec::kappa() const {
  if (kind_ == PotentialKind::Logarithmic) return std::max(0.0, theta_c_ - theta_);
  return scale_;
}

double psi0_prime(double s, const PotentialSpec& pot) {
  return pot.dpsi(s) + pot.kappa() * s;
}

TransformA::TransformA(const CoefficientProfile& a, const PotentialSpec& pot)
    : a_(a), pot_(pot) {
  closed_ = a_.is_constant();
  if (closed_) {
    const double a0 = a_.value(0.0);
    sqrt_a0_ = std::sqrt(a0);
    r_lo_ = -sqrt_a0_;
    r_hi_ = sqrt_a0_;
    kappa_tilde_ = pot_.kappa() / a0;
    return;
  }

  const int n = kTableIntervals;
  s_nodes_.resize(n + 1);
  A_nodes_.resize(n + 1);
  dA_nodes_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    s_nodes_[i] = -1.0 + 2.0 * i / n;
    dA_nodes_[i] = std::sqrt(a_.value(s_nodes_[i]));
  }
  A_nodes_[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x0 = s_nodes_[i];
    const double x1 = s_nodes_[i + 1];
    const double xm = 0.5 * (x0 + x1);
    const double hw = 0.5 * (x1 - x0);
    double acc = 0.0;
    for (int q = 0; q < 5; ++q) acc += kG5w[q] * std::sqrt(a_.value(xm + hw * kG5x[q]));
    A_nodes_[i + 1] = A_nodes_[i] + hw * acc;
  }
  // Re-anchor so A(0) = 0 exactly (s = 0 is the middle node).
  const double shift = A_nodes_[n / 2];
  for (double& v : A_nodes_) v -= shift;
  r_lo_ = A_nodes_.front();
  r_hi_ = A_nodes_.back();

  // kappa~ from the sampled interior minimum of psi~'' with a 5% margin.
  const double span = r_hi_ - r_lo_;
  const double delta = 5e-4 * span;
  double min_second = std::numeric_limits<double>::infinity();
  kappa_tilde_ = 0.0;  // tilde_psi_second below must not add kappa~ yet
  for (int i = 0; i < kKappaLadder; ++i) {
    const double r = r_lo_ + delta + (span - 2 * delta) * i / (kKappaLadder - 1);
    min_second = std::min(min_second, tilde_psi_second(r));
  }
  kappa_tilde_ = 1.05 * std::max(0.0, -min_second);
}

void TransformA::check_s(double s) const {
  if (pot_.singular() && std::abs(s) > 1.0 + kDomainSlack)
    throw DomainError("transform: |s| > 1 with a singular potential");
}

void TransformA::check_r(double r) const {
  if (!pot_.singular()) return;
  const double slack = kDomainSlack * std::max({1.0, std::abs(r_lo_), std::abs(r_hi_)});
  if (r < r_lo_ - slack || r > r_hi_ + slack)
    throw DomainError("transform: r outside [A(-1), A(1)]");
}

double TransformA::A_raw(double s) const {
  if (closed_) return sqrt_a0_ * s;
  if (s > 1.0) return r_hi_ + dA_nodes_.back() * (s - 1.0);
  if (s < -1.0) return r_lo_ + dA_nodes_.front() * (s + 1.0);
  return hermite_eval(A_nodes_, dA_nodes_, s).val;
}

double TransformA::A(double s) const {
  check_s(s);
  if (pot_.singular()) s = std::clamp(s, -1.0, 1.0);
  return A_raw(s);
}

double TransformA::A_inv_raw(double r) const {
  if (closed_) return r / sqrt_a0_;
  if (r >= r_hi_) return 1.0 + (r - r_hi_) / dA_nodes_.back();
  if (r <= r_lo_) return -1.0 + (r - r_lo_) / dA_nodes_.front();
  // Bracket in the monotone node table, then safeguarded Newton.
  auto it = std::upper_bound(A_nodes_.begin(), A_nodes_.end(), r);
  int k = static_cast<int>(it - A_nodes_.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(A_nodes_.size()) - 2);
  double lo = s_nodes_[k];
  double hi = s_nodes_[k + 1];
  double s = lo + (hi - lo) * (r - A_nodes_[k]) /
                      std::max(A_nodes_[k + 1] - A_nodes_[k], 1e-300);
  for (int it2 = 0; it2 < 60; ++it2) {
    const HermiteOut h = hermite_eval(A_nodes_, dA_nodes_, s);
    const double f = h.val - r;
    if (f > 0.0) hi = s; else lo = s;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(r_hi_))) break;
    double step = h.der > 0.0 ? f / h.der : 0.0;
    double next = s - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
  }
  return s;
}

double TransformA::A_inv(double r) const {
  check_r(r);
  if (pot_.singular()) r = std::clamp(r, r_lo_, r_hi_);
  return A_inv_raw(r);
}

double TransformA::dA(double s) const { return std::sqrt(a_.value(s)); }

double TransformA::F(double s, double t) const {
  if (s == t) return dA(s);
  const double d = s - t;
  if (std::abs(d) >= 1e-8) return (A_raw(s) - A_raw(t)) / d;
  // Integral mean of sqrt(a) along the segment.
  double acc = 0.0;
  for (int q = 0; q < 16; ++q) {
    const double tau = 0.5 * (kG16x[q] + 1.0);
    acc += kG16w[q] * dA(t + tau * d);
  }
  return 0.5 * acc;
}

double TransformA::dF_ds(double s, double t) const {
  if (a_.is_constant()) return 0.0;
  if (s == t) return a_.derivative(s) / (4.0 * std::sqrt(a_.value(s)));
  const double d = s - t;
  if (std::abs(d) >= 1e-8) return (dA(s) - F(s, t)) / d;
  // dF/ds = integral_0^1 tau * (sqrt(a))'(t + tau d) dtau
  double acc = 0.0;
  for (int q = 0; q < 16; ++q) {
    const double tau = 0.5 * (kG16x[q] + 1.0);
    const double x = t + tau * d;
    acc += kG16w[q] * tau * a_.derivative(x) / (2.0 * std::sqrt(a_.value(x)));
  }
  return 0.5 * acc;
}

double TransformA::tilde_psi_prime(double r) const {
  const double s = A_inv_raw(r);
  return pot_.dpsi(s) / dA(s);
}

double TransformA::tilde_psi_second(double r) const {
  const double s = A_inv_raw(r);
  const double av = a_.value(s);
  return pot_.d2psi(s) / av - pot_.dpsi(s) * a_.derivative(s) / (2.0 * av * av);
}

double TransformA::tilde_psi0_prime(double r) const {
  return tilde_psi_prime(r) + kappa_tilde_ * r;
}

double TransformA::tilde_psi0_second(double r) const {
  return tilde_psi_second(r) + kappa_tilde_;
}

ModelParams::ModelParams(double rho1_, double rho2_, CoefficientProfile a_in,
                         CoefficientProfile mobility_in, CoefficientProfile viscosity_in,
                         PotentialSpec potential_in, ModelVariant variant_)
    : rho1(rho1_),
      rho2(rho2_),
      a(std::move(a_in)),
      mobility(std::move(mobility_in)),
      viscosity(std::move(viscosity_in)),
      potential(potential_in),
      variant(variant_) {
  if (!(rho1 > 0.0) || !(rho2 > 0.0))
    throw ValidationError("specific densities must be > 0");
  m0_ = std::min({a.min_value(), mobility.min_value(), viscosity.min_value()});
  K_ = std::max({a.max_value(), mobility.max_value(), viscosity.max_value()});
  if (!(m0_ > 0.0)) throw NonPositiveCoefficient("coefficient bounds must be positive");
}

double free_energy_density(double phi, double grad_A_sq, const PotentialSpec& pot) {
  return pot.psi(phi) + 0.5 * grad_A_sq;
}

}  // namespace aggflow
