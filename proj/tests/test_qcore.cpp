#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "test_helpers.hpp"
#include "zenolab/qcore.hpp"

using namespace zenolab;
using namespace zenolab::qcore;
using zenolab::fixtures::dense_propagator;
using zenolab::fixtures::random_spec;
using zenolab::fixtures::random_state;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(PureState, RejectsUnnormalizedAndBadDimensions) {
  EXPECT_THROW(PureState({1.0, 1.0}), ValidationError);
  EXPECT_THROW(PureState(Vector::Ones(1)), ValidationError);
  Vector big = Vector::Zero(65);
  big(0) = 1.0;
  EXPECT_THROW(PureState{big}, ValidationError);
  EXPECT_NO_THROW(PureState({0.6, Complex(0.0, 0.8)}));
}

TEST(Normalize, Examples) {
  const auto s = normalize(Vector{{2.0, 0.0, 0.0, 0.0, 0.0}});
  EXPECT_EQ(s[0], Complex(1.0));
  const auto t = normalize(Vector{{1.0, 1.0, 0.0, 0.0, 0.0}});
  EXPECT_NEAR(t[0].real(), M_SQRT1_2, 2e-16);
  EXPECT_NEAR(t[1].real(), M_SQRT1_2, 2e-16);
  EXPECT_THROW(normalize(Vector::Zero(5)), DegenerateBranchError);
  EXPECT_THROW(normalize(Vector::Constant(5, 1e-40)), DegenerateBranchError);
}

TEST(BuildHamiltonian, DiagonalWhenUncoupled) {
  const auto h = build_hamiltonian({1.0, 2.0, 0.0}).entries();
  Matrix expected = Matrix::Zero(5, 5);
  expected.diagonal() << 1, 1, 1, 1, 2;
  EXPECT_EQ(h, expected);
}

TEST(BuildHamiltonian, CouplingPattern) {
  const auto h = build_hamiltonian({0.0, 0.0, 0.01}).entries();
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const bool coupled = (i == 0 && j == 1) || (i == 1 && j == 0) || (i == 2 && j == 3) || (i == 3 && j == 2);
      EXPECT_EQ(h(i, j), Complex(coupled ? 0.01 : 0.0)) << i << "," << j;
    }
  }
}

TEST(BuildHamiltonian, RejectsNonFinite) {
  EXPECT_THROW(build_hamiltonian({NAN, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(build_hamiltonian({0.0, INFINITY, 0.0}), ValidationError);
}

TEST(BuildHamiltonian, SpectrumMatchesNumericalSolver) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = random_spec(rng);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(build_hamiltonian(spec).entries());
    std::vector<double> expected{spec.e0 + spec.delta, spec.e0 + spec.delta, spec.e0 - spec.delta,
                                 spec.e0 - spec.delta, spec.e1};
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(solver.eigenvalues()(i), expected[i], 1e-12);
  }
}

TEST(Eigendecompose, Example) {
  const auto pairs = eigendecompose({5.0, 7.0, 0.1});
  ASSERT_EQ(pairs.size(), 5u);
  const double expected[] = {5.1, 5.1, 4.9, 4.9, 7.0};
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(pairs[i].value, expected[i]);
}

TEST(Eigendecompose, OrthonormalEvenWhenDegenerate) {
  const auto pairs = eigendecompose({1.0, 1.0, 0.0});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      EXPECT_NEAR(std::abs(pairs[i].vector.dot(pairs[j].vector)), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(Eigendecompose, ReconstructsHamiltonianFor1000RandomSpecs) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto spec = random_spec(rng);
    Matrix sum = Matrix::Zero(5, 5);
    for (const auto& [value, v] : eigendecompose(spec)) sum += value * v * v.adjoint();
    ASSERT_LE(max_abs(sum - build_hamiltonian(spec).entries()), 1e-12);
  }
}

TEST(Evolve, DiagonalEvolutionOnlyPhases) {
  const HamiltonianSpec spec{1.3, 0.2, 0.0};
  const auto out = evolve(spec, 0.7, PureState({1, 0, 0, 0, 0}));
  EXPECT_NEAR(std::abs(out[0] - std::polar(1.0, -1.3 * 0.7)), 0.0, 1e-15);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(std::abs(out[i]), 0.0);
}

TEST(Evolve, BlockAmplitudeMatchesClosedForm) {
  const double delta = 0.37, b = 1.1, t = 2.3;
  const double a = std::sqrt(1.0 - b * b * delta * delta);
  const auto out = evolve({0.4, -1.0, delta}, t, PureState({a, 0, 0, 0, b * delta}));
  EXPECT_NEAR(std::abs(out[1]), a * std::abs(std::sin(delta * t)), 1e-15);
  EXPECT_NEAR(std::abs(out[0]), a * std::abs(std::cos(delta * t)), 1e-15);
  EXPECT_NEAR(std::abs(out[4]), b * delta, 1e-15);
}

TEST(Evolve, GroupProperty) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = random_spec(rng);
    const auto psi = random_state(rng);
    const double t1 = 0.9 * trial / 100.0, t2 = 1.7 - t1;
    const auto two = evolve(spec, t2, evolve(spec, t1, psi));
    const auto one = evolve(spec, t1 + t2, psi);
    ASSERT_LE((two.amplitudes() - one.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Evolve, AgreesWithDenseExponentialOracle) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> time(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = random_spec(rng);
    const auto psi = random_state(rng);
    const double t = time(rng);
    const Vector expected = dense_propagator(build_hamiltonian(spec).entries(), t) * psi.amplitudes();
    ASSERT_LE((evolve(spec, t, psi).amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Evolve, Unitarity) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> time(-50.0, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto out = evolve(random_spec(rng), time(rng), random_state(rng));
    ASSERT_NEAR(out.amplitudes().norm(), 1.0, 1e-12);
  }
}

TEST(Evolve, RejectsWrongDimensionAndTime) {
  EXPECT_THROW(evolve({0, 0, 0.1}, 1.0, PureState({1.0, 0.0})), ValidationError);
  EXPECT_THROW(evolve({0, 0, 0.1}, NAN, PureState({1, 0, 0, 0, 0})), ValidationError);
}

TEST(MeasureBinary, DirectProjection) {
  const auto o = measure_binary(MeasurementDirection::standard(), PureState({0, 1, 0, 0, 0}));
  EXPECT_NEAR(o.click_prob, 0.5, 1e-15);
  EXPECT_NEAR(o.survive_prob, 0.5, 1e-15);
  const Vector expected{{0.0, M_SQRT1_2, -M_SQRT1_2, 0.0, 0.0}};
  EXPECT_LE((o.post_survive_state.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MeasureBinary, OrthogonalStateSurvivesUnchanged) {
  const PureState psi({0.6, 0, 0, 0.8, 0});
  const auto o = measure_binary(MeasurementDirection::standard(), psi);
  EXPECT_EQ(o.click_prob, 0.0);
  EXPECT_LE((o.post_survive_state.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MeasureBinary, DegenerateSurvivalThrowsWithClickProbability) {
  const auto m = MeasurementDirection::standard();
  try {
    measure_binary(m, PureState(m.vector() * Complex(0.0, 1.0)));
    FAIL() << "expected DegenerateBranchError";
  } catch (const DegenerateBranchError& e) {
    EXPECT_NEAR(e.click_prob(), 1.0, 1e-15);
  }
}

TEST(MeasureBinary, ClickAfterOneEvolutionStep) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = 0.5 * u(rng), dt = 3.0 * u(rng), bd = 0.9 * u(rng);
    const double a = std::sqrt(1.0 - bd * bd);
    const auto psi = evolve({u(rng), u(rng), delta}, dt, PureState({a, 0, 0, 0, bd}));
    const auto o = measure_binary(MeasurementDirection::standard(), psi);
    const double s = std::sin(delta * dt);
    ASSERT_NEAR(o.click_prob, 0.5 * a * a * s * s, 1e-12);
  }
}

TEST(MeasureBinary, CompletenessAndReconstruction) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto psi = random_state(rng);
    const MeasurementDirection m(zenolab::fixtures::random_vector(rng));
    const auto o = measure_binary(m, psi);
    ASSERT_NEAR(o.click_prob + o.survive_prob, 1.0, 1e-12);
    ASSERT_NEAR(o.post_click_state.amplitudes().norm(), 1.0, 1e-12);
    ASSERT_NEAR(o.post_survive_state.amplitudes().norm(), 1.0, 1e-12);

    // Amplitude reconstruction: psi = sqrt(p_c) click + sqrt(p_s) survive.
    const Vector sum = std::sqrt(o.click_prob) * o.post_click_state.amplitudes() +
                       std::sqrt(o.survive_prob) * o.post_survive_state.amplitudes();
    ASSERT_LE((sum - psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);

    // Density reconstruction of the measured (dephased) state: P rho P + Q rho Q.
    const Matrix p = m.vector() * m.vector().adjoint();
    const Matrix q = Matrix::Identity(5, 5) - p;
    const Matrix rho = density(psi);
    const Matrix mixture = o.click_prob * density(o.post_click_state) + o.survive_prob * density(o.post_survive_state);
    ASSERT_LE(max_abs(mixture - (p * rho * p + q * rho * q)), 1e-12);

    // <post_click|psi> is real and nonnegative.
    const Complex c = inner_product(o.post_click_state, psi);
    ASSERT_GE(c.real(), 0.0);
    ASSERT_NEAR(c.imag(), 0.0, 1e-14);
  }
}

TEST(MeasureBinary, ProjectionIsIdempotent) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 500; ++trial) {
    const MeasurementDirection m(zenolab::fixtures::random_vector(rng));
    const auto once = measure_binary(m, random_state(rng));
    ASSERT_LE(measure_binary(m, once.post_survive_state).click_prob, 1e-24);
  }
}

TEST(MeasureBinary, PhaseInsensitive) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 500; ++trial) {
    const MeasurementDirection m(zenolab::fixtures::random_vector(rng));
    const auto psi = random_state(rng);
    const auto a = measure_binary(m, psi);
    const auto b = measure_binary(m, psi.with_phase(phase(rng)));
    ASSERT_NEAR(a.click_prob, b.click_prob, 1e-14);
    ASSERT_NEAR(a.survive_prob, b.survive_prob, 1e-14);
  }
}

TEST(InnerProduct, NormalizationAndCandidateOverlap) {
  std::mt19937_64 rng(20);
  const auto psi = random_state(rng);
  EXPECT_NEAR(std::abs(inner_product(psi, psi) - 1.0), 0.0, 1e-14);

  const double delta = 0.01, b = 10.0, a = std::sqrt(0.99);
  const PureState s0({a, 0, 0, 0, b * delta}), s1({0, 0, 0, a, b * delta});
  EXPECT_NEAR(inner_product(s0, s1).real(), b * b * delta * delta, 1e-15);
  EXPECT_THROW(inner_product(s0, PureState({1.0, 0.0})), ValidationError);
}

TEST(InnerProduct, InvariantUnderJointEvolution) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = random_spec(rng);
    const auto phi = random_state(rng), psi = random_state(rng);
    const double before = std::abs(inner_product(phi, psi));
    const double after = std::abs(inner_product(evolve(spec, 1.9, phi), evolve(spec, 1.9, psi)));
    ASSERT_NEAR(before, after, 1e-12);
  }
}
