#include "zenolab/qcore.hpp"

#include <cmath>
#include <string>

namespace zenolab::qcore {
namespace {

void check_dimension(Eigen::Index d) {
  if (d < 2 || d > kMaxDimension) {
    throw ValidationError("state dimension must be in [2, " + std::to_string(kMaxDimension) +
                          "], got " + std::to_string(d));
  }
}

void check_finite(const Vector& v) {
  if (!v.allFinite()) throw ValidationError("non-finite amplitude");
}

Vector basis_pair(int i, int j, double sign) {
  Vector v = Vector::Zero(kModelDimension);
  v(i) = M_SQRT1_2;
  v(j) = sign * M_SQRT1_2;
  return v;
}

}  // namespace

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  check_dimension(amplitudes_.size());
  check_finite(amplitudes_);
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > kUnitTolerance) {
    throw ValidationError("state is not normalized: |psi|^2 = " + std::to_string(n2));
  }
}

PureState::PureState(std::initializer_list<Complex> amplitudes)
    : PureState(Eigen::Map<const Vector>(amplitudes.begin(),
                                         static_cast<Eigen::Index>(amplitudes.size()))) {}

PureState PureState::with_phase(double phase) const {
  return PureState(amplitudes_ * std::polar(1.0, phase));
}

PureState normalize(const Vector& raw) {
  check_dimension(raw.size());
  check_finite(raw);
  const double n = raw.norm();
  if (!(n > kPruneFloor)) throw DegenerateBranchError("cannot normalize a near-zero vector");
  return PureState(raw / n);
}

PureState normalize(std::span<const Complex> raw) {
  return normalize(Vector(Eigen::Map<const Vector>(raw.data(), static_cast<Eigen::Index>(raw.size()))));
}

void HamiltonianSpec::validate() const {
  if (!std::isfinite(e0) || !std::isfinite(e1) || !std::isfinite(delta)) {
    throw ValidationError("Hamiltonian parameters must be finite");
  }
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ValidationError("operator must be square");
  check_dimension(entries_.rows());
  if (!entries_.allFinite()) throw ValidationError("non-finite operator entry");
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kUnitTolerance) {
    throw ValidationError("operator is not Hermitian (max |H - H^dagger| = " +
                          std::to_string(asym) + ")");
  }
}

MeasurementDirection::MeasurementDirection(const Vector& v) : vector_(normalize(v).amplitudes()) {}

MeasurementDirection::MeasurementDirection(std::initializer_list<Complex> v)
    : MeasurementDirection(Vector(Eigen::Map<const Vector>(v.begin(), static_cast<Eigen::Index>(v.size())))) {}

MeasurementDirection MeasurementDirection::standard() { return MeasurementDirection({0, 1, 1, 0, 0}); }

HermitianOperator build_hamiltonian(const HamiltonianSpec& spec) {
  spec.validate();
  Matrix h = Matrix::Zero(kModelDimension, kModelDimension);
  for (int block : {0, 2}) {
    h(block, block) = spec.e0;
    h(block + 1, block + 1) = spec.e0;
    h(block, block + 1) = spec.delta;
    h(block + 1, block) = spec.delta;
  }
  h(4, 4) = spec.e1;
  return HermitianOperator(std::move(h));
}

std::vector<Eigenpair> eigendecompose(const HamiltonianSpec& spec) {
  spec.validate();
  Vector last = Vector::Zero(kModelDimension);
  last(4) = 1.0;
  return {
      {spec.e0 + spec.delta, basis_pair(0, 1, +1.0)},
      {spec.e0 + spec.delta, basis_pair(2, 3, +1.0)},
      {spec.e0 - spec.delta, basis_pair(0, 1, -1.0)},
      {spec.e0 - spec.delta, basis_pair(2, 3, -1.0)},
      {spec.e1, std::move(last)},
  };
}

PureState evolve(const HamiltonianSpec& spec, double t, const PureState& psi) {
  if (!std::isfinite(t)) throw ValidationError("evolution time must be finite");
  if (psi.dimension() != kModelDimension) {
    throw ValidationError("evolve expects a dimension-5 state, got " + std::to_string(psi.dimension()));
  }
  Vector out = Vector::Zero(kModelDimension);
  for (const auto& [value, v] : eigendecompose(spec)) {
    out += std::polar(1.0, -value * t) * v.dot(psi.amplitudes()) * v;
  }
  // Valid inputs can still overflow the phase (e.g. huge e0 * t); that is a numerical failure.
  if (!out.allFinite()) throw NumericalError("evolution produced non-finite amplitudes");
  if (std::abs(out.norm() - 1.0) > kUnitTolerance) throw NumericalError("evolution lost unitarity");
  return PureState(std::move(out));
}

MeasurementOutcome measure_binary(const MeasurementDirection& m, const PureState& psi) {
  if (m.dimension() != psi.dimension()) throw ValidationError("measurement/state dimension mismatch");
  const Complex amp = m.vector().dot(psi.amplitudes());
  const double click = std::norm(amp);
  const Vector residual = psi.amplitudes() - amp * m.vector();
  const double survive = residual.squaredNorm();
  if (survive < kPruneFloor) {
    throw DegenerateBranchError("survival branch below prune floor", click);
  }
  // Phase chosen so that <post_click|psi> is real and nonnegative.
  const Complex phase = std::abs(amp) > 0.0 ? amp / std::abs(amp) : Complex(1.0);
  return MeasurementOutcome{
      .click_prob = click,
      .survive_prob = survive,
      .post_click_state = PureState(m.vector() * phase),
      .post_survive_state = PureState(residual / std::sqrt(survive)),
  };
}

Complex inner_product(const PureState& phi, const PureState& psi) {
  if (phi.dimension() != psi.dimension()) throw ValidationError("inner product dimension mismatch");
  return phi.amplitudes().dot(psi.amplitudes());
}

Matrix density(const PureState& psi) { return psi.amplitudes() * psi.amplitudes().adjoint(); }

}  // namespace zenolab::qcore
