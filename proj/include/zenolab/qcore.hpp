#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zenolab/errors.hpp"

namespace zenolab::qcore {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kPruneFloor = 1e-30;
inline constexpr int kMaxDimension = 64;
/// Dimension of the five-level model.
inline constexpr int kModelDimension = 5;

/// Normalized state vector. Construction validates the norm; use normalize()
/// for raw vectors.
class PureState {
 public:
  explicit PureState(Vector amplitudes);
  PureState(std::initializer_list<Complex> amplitudes);

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  int dimension() const noexcept { return static_cast<int>(amplitudes_.size()); }
  Complex operator[](int i) const { return amplitudes_(i); }

  PureState with_phase(double phase) const;

 private:
  Vector amplitudes_;
};

PureState normalize(const Vector& raw);
PureState normalize(std::span<const Complex> raw);

/// (E0, E1, delta) generating the 5x5 block Hamiltonian.
struct HamiltonianSpec {
  double e0 = 0.0;
  double e1 = 0.0;
  double delta = 0.0;

  void validate() const;
};

class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  int dimension() const noexcept { return static_cast<int>(entries_.rows()); }

 private:
  Matrix entries_;
};

class MeasurementDirection {
 public:
  /// Normalizes the given vector.
  explicit MeasurementDirection(const Vector& v);
  MeasurementDirection(std::initializer_list<Complex> v);

  /// (0,1,1,0,0)/sqrt(2).
  static MeasurementDirection standard();

  const Vector& vector() const noexcept { return vector_; }
  int dimension() const noexcept { return static_cast<int>(vector_.size()); }

 private:
  Vector vector_;
};

struct MeasurementOutcome {
  double click_prob;
  double survive_prob;
  PureState post_click_state;
  PureState post_survive_state;
};

struct Eigenpair {
  double value;
  Vector vector;
};

HermitianOperator build_hamiltonian(const HamiltonianSpec& spec);

/// Closed-form eigensystem, ordered e0+delta (x2), e0-delta (x2), e1.
std::vector<Eigenpair> eigendecompose(const HamiltonianSpec& spec);

/// exp(-iHt) psi through the closed-form eigensystem.
PureState evolve(const HamiltonianSpec& spec, double t, const PureState& psi);

/// Binary projective measurement onto m, keeping both branches. Throws
/// DegenerateBranchError (carrying click_prob) when the survival branch is
/// below kPruneFloor.
MeasurementOutcome measure_binary(const MeasurementDirection& m, const PureState& psi);

Complex inner_product(const PureState& phi, const PureState& psi);

/// |psi><psi|
Matrix density(const PureState& psi);

}  // namespace zenolab::qcore
