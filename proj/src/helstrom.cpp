#include "zenolab/helstrom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace zenolab::helstrom {
namespace {

constexpr double kDensityTolerance = 1e-10;

void check_density(const qcore::Matrix& rho, const char* name) {
  if (rho.rows() != rho.cols() || rho.rows() < 1) {
    throw ValidationError(std::string(name) + " must be a square matrix");
  }
  if (!rho.allFinite()) throw ValidationError(std::string(name) + " has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
    throw ValidationError(std::string(name) + " is not Hermitian");
  }
  if (std::abs(rho.trace() - qcore::Complex(1.0)) > kDensityTolerance) {
    throw ValidationError(std::string(name) + " does not have unit trace");
  }
}

/// Hermitian part with roundoff-negative eigenvalues clamped to zero.
qcore::Matrix clamp_psd(const qcore::Matrix& rho, const char* name) {
  const qcore::Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<qcore::Matrix> solver(herm);
  Eigen::VectorXd values = solver.eigenvalues();
  if (values.minCoeff() < -kDensityTolerance) {
    throw ValidationError(std::string(name) + " is not positive semidefinite");
  }
  values = values.cwiseMax(0.0);
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

CostValue::CostValue(double cost) : cost_(cost) {
  if (!std::isfinite(cost) || cost < -1e-15 || cost > 0.5 + 1e-12) {
    throw NumericalError("cost outside [0, 1/2]: " + std::to_string(cost));
  }
  cost_ = std::clamp(cost, 0.0, 0.5);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

void DiscriminationInstance::validate() const {
  if (psi0.dimension() != psi1.dimension()) throw ValidationError("hypothesis states differ in dimension");
  check_probability(prior, "prior");
}

CostValue helstrom_from_transition(double prior, double transition) {
  check_probability(prior, "prior");
  check_probability(transition, "transition probability");
  // x / (2 (1 + sqrt(1-x))) avoids the cancellation in 1 - sqrt(1-x) for small x.
  const double x = std::clamp(4.0 * prior * (1.0 - prior) * transition, 0.0, 1.0);
  return CostValue(0.5 * x / (1.0 + std::sqrt(1.0 - x)));
}

CostValue helstrom_pure(const DiscriminationInstance& instance) {
  instance.validate();
  const double t = std::min(1.0, std::norm(qcore::inner_product(instance.psi0, instance.psi1)));
  return helstrom_from_transition(instance.prior, t);
}

CostValue helstrom_mixed(const qcore::Matrix& rho0, const qcore::Matrix& rho1, double prior) {
  check_probability(prior, "prior");
  check_density(rho0, "rho0");
  check_density(rho1, "rho1");
  if (rho0.rows() != rho1.rows()) throw ValidationError("density matrices differ in dimension");
  const qcore::Matrix gamma = prior * clamp_psd(rho0, "rho0") - (1.0 - prior) * clamp_psd(rho1, "rho1");
  Eigen::SelfAdjointEigenSolver<qcore::Matrix> solver(gamma, Eigen::EigenvaluesOnly);
  const double trace_norm = solver.eigenvalues().cwiseAbs().sum();
  return CostValue(std::clamp(0.5 * (1.0 - trace_norm), 0.0, 0.5));
}

namespace {

// Computed probabilities may overshoot [0, 1] by rounding; anything further out is a bug.
double computed_probability(double p, const char* name) {
  constexpr double kSlack = 1e-12;
  if (!(p >= -kSlack && p <= 1.0 + kSlack)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double posterior_update(double prior, double p_event_given_h0, double p_event_given_h1) {
  check_probability(prior, "prior");
  p_event_given_h0 = computed_probability(p_event_given_h0, "p(event | h0)");
  p_event_given_h1 = computed_probability(p_event_given_h1, "p(event | h1)");
  const double joint0 = prior * p_event_given_h0;
  const double marginal = joint0 + (1.0 - prior) * p_event_given_h1;
  if (!(marginal > 0.0)) throw DegenerateBranchError("posterior update on a zero-probability event");
  return std::clamp(joint0 / marginal, 0.0, 1.0);
}

CostValue guess_only_cost(double prior) {
  check_probability(prior, "prior");
  return CostValue(std::min(prior, 1.0 - prior));
}

}  // namespace zenolab::helstrom
