#include <doctest.h>

#include <cmath>

#include "ecstates/states.hpp"
#include "test_helpers.hpp"

using namespace ecstates;
using namespace ecstates::testing;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("density matrix validation") {
  SUBCASE("maximally mixed qubit is valid with eigenvalues 0.5, 0.5") {
    const DensityMatrix rho = state_of(diag2(0.5, 0.5));
    CHECK(rho.dim() == 2);
    CHECK(rho.eigenvalues()(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho.eigenvalues()(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho.rank() == 2);
  }
  SUBCASE("negative eigenvalue rejected") {
    CHECK_THROWS_AS(state_of(diag2(1.1, -0.1)), NotPositive);
  }
  SUBCASE("indefinite Hermitian matrix rejected") {
    Matrix m(2, 2);
    m << 0.5, kI, -kI, 0.5;  // eigenvalues 1.5 and -0.5
    CHECK_THROWS_AS(state_of(m), NotPositive);
  }
  SUBCASE("non-Hermitian matrix rejected") {
    Matrix m(2, 2);
    m << 0.5, 0.1, 0.3, 0.5;
    CHECK_THROWS_AS(state_of(m), NotHermitian);
  }
  SUBCASE("wrong trace rejected") { CHECK_THROWS_AS(state_of(diag2(0.5, 0.4)), TraceNotOne); }
}

TEST_CASE("subnormalized operator validation") {
  const SubnormalizedOperator t(HermitianMatrix(diag2(0.3, 0.3)));
  CHECK(t.trace() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(t.rank() == 2);
  CHECK_NOTHROW(SubnormalizedOperator(HermitianMatrix(Matrix::Zero(2, 2))));
  CHECK_THROWS_AS(SubnormalizedOperator(HermitianMatrix(diag2(0.8, 0.4))), TraceNotOne);
  CHECK_THROWS_AS(SubnormalizedOperator(HermitianMatrix(diag2(0.5, -0.1))), NotPositive);
}

TEST_CASE("pure state canonical phase") {
  const PureState psi(vec2(Complex(0.0, 1.0) / std::sqrt(2.0), Complex(0.0, 1.0) / std::sqrt(2.0)));
  CHECK(psi.vec()(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(psi.vec()(0).imag() == doctest::Approx(0.0));
  CHECK_THROWS_AS(PureState(vec2(1.0, 1.0)), InvalidParameter);
  const PureState rescaled = PureState::normalized(vec2(3.0, 4.0));
  CHECK(rescaled.vec().norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("energy evaluation") {
  CHECK(energy(state_of(diag2(0.5, 0.5)), observable_of(diag2(0, 1))) == doctest::Approx(0.5));
  CHECK(energy(state_of(diag3(0, 0, 1)), observable_of(diag3(0, 1, 2))) == doctest::Approx(2.0));
  CHECK(energy(state_of(diag2(0.75, 0.25)), observable_of(diag2(0, 1))) == doctest::Approx(0.25));
  CHECK_THROWS_AS(energy(state_of(diag2(0.5, 0.5)), observable_of(diag3(0, 1, 2))),
                  DimensionMismatch);
}

TEST_CASE("membership in the bounded and exact energy sets") {
  const EnergyObservable h = observable_of(diag2(0, 1));
  const DensityMatrix half = state_of(diag2(0.5, 0.5));
  const DensityMatrix excited = state_of(diag2(0, 1));
  CHECK(member(half, h, {0.5, BudgetMode::AtMost}, 1e-9));
  CHECK_FALSE(member(excited, h, {0.5, BudgetMode::AtMost}, 1e-9));
  CHECK(member(half, h, {0.5, BudgetMode::Exact}, 1e-9));
  CHECK_FALSE(member(half, h, {0.4, BudgetMode::Exact}, 1e-9));
}

TEST_CASE("spectral ensembles") {
  SUBCASE("mixed qubit splits into two orthonormal components") {
    const Ensemble ens = spectral_ensemble(state_of(diag2(0.5, 0.5)));
    REQUIRE(ens.components.size() == 2);
    CHECK(ens.components[0].weight == doctest::Approx(0.5));
    CHECK(std::abs(ens.components[0].state.vec().dot(ens.components[1].state.vec())) <
          1e-12);
  }
  SUBCASE("pure state yields a single component") {
    const Ensemble ens = spectral_ensemble(state_of(diag2(1, 0)));
    REQUIRE(ens.components.size() == 1);
    CHECK(ens.components[0].weight == doctest::Approx(1.0));
  }
  SUBCASE("weights follow the spectrum") {
    const Ensemble ens = spectral_ensemble(state_of(diag3(0.7, 0.2, 0.1)));
    REQUIRE(ens.components.size() == 3);
    CHECK(ens.components[0].weight == doctest::Approx(0.7));
    CHECK(ens.components[1].weight == doctest::Approx(0.2));
    CHECK(ens.components[2].weight == doctest::Approx(0.1));
  }
}

TEST_CASE("barycenter") {
  const PureState e0(vec2(1, 0)), e1(vec2(0, 1));
  SUBCASE("orthonormal mixture gives the maximally mixed state") {
    const DensityMatrix rho = barycenter(Ensemble::validated({{0.5, e0}, {0.5, e1}}));
    CHECK((rho.mat() - diag2(0.5, 0.5)).norm() < 1e-12);
  }
  SUBCASE("singleton ensemble reproduces the projector") {
    const PureState psi = PureState::normalized(vec2(1, kI));
    const DensityMatrix rho = barycenter(Ensemble::validated({{1.0, psi}}));
    CHECK((rho.mat() - psi.projector()).norm() < 1e-12);
  }
  SUBCASE("equatorial mixture also gives the maximally mixed state") {
    const PureState plus = PureState::normalized(vec2(1, 1));
    const PureState minus = PureState::normalized(vec2(1, -1));
    const DensityMatrix rho = barycenter(Ensemble::validated({{0.5, plus}, {0.5, minus}}));
    CHECK((rho.mat() - diag2(0.5, 0.5)).norm() < 1e-12);
  }
  SUBCASE("mismatched component dimensions rejected") {
    CHECK_THROWS_AS(barycenter(Ensemble::validated(
                        {{0.5, e0}, {0.5, PureState(vec3(1, 0, 0))}})),
                    DimensionMismatch);
  }
}

TEST_CASE("fixtures") {
  SUBCASE("oscillator observable is the number operator") {
    const EnergyObservable h = oscillator_observable(3);
    CHECK((h.mat() - diag3(0, 1, 2)).norm() < 1e-15);
    CHECK(h.ground_energy() == doctest::Approx(0.0));
    CHECK(h.max_energy() == doctest::Approx(2.0));
  }
  SUBCASE("cold Gibbs state approaches the ground state") {
    const DensityMatrix rho = gibbs_state(observable_of(diag2(0, 1)), 50.0);
    CHECK((rho.mat() - diag2(1, 0)).norm() < 1e-9);
  }
  SUBCASE("beta must be positive") {
    CHECK_THROWS_AS(gibbs_state(observable_of(diag2(0, 1)), 0.0), InvalidParameter);
  }
  SUBCASE("random fixtures are deterministic per seed") {
    const DensityMatrix a = random_density(4, 2, 7), b = random_density(4, 2, 7);
    CHECK((a.mat() - b.mat()).norm() == 0.0);
    CHECK(a.rank() == 2);
    const PureState p = random_pure(5, 11), q = random_pure(5, 11);
    CHECK((p.vec() - q.vec()).norm() == 0.0);
    CHECK((p.vec() - random_pure(5, 12).vec()).norm() > 1e-3);
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(oscillator_observable(0), InvalidParameter);
    CHECK_THROWS_AS(random_density(3, 4, 1), InvalidParameter);
    CHECK_THROWS_AS(random_density(3, 0, 1), InvalidParameter);
  }
}

TEST_CASE("energy is affine in the state") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const DensityMatrix rho = random_density(d, d, seed);
    const DensityMatrix sigma = random_density(d, 1 + static_cast<int>(seed % d), seed + 100);
    const EnergyObservable h = random_observable(d, seed + 200);
    const double lambda = 0.1 + 0.8 * static_cast<double>(seed) / 21.0;
    const DensityMatrix mix =
        state_of(lambda * rho.mat() + (1.0 - lambda) * sigma.mat());
    CHECK(energy(mix, h) ==
          doctest::Approx(lambda * energy(rho, h) + (1.0 - lambda) * energy(sigma, h))
              .epsilon(1e-9));
  }
}

TEST_CASE("spectral ensemble and barycenter invert each other") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const DensityMatrix rho = random_density(d, 1 + static_cast<int>(seed % d), seed);
    const Ensemble ens = spectral_ensemble(rho);
    CHECK(trace_norm(barycenter(ens).mat() - rho.mat()) < 1e-9);
  }
}

TEST_CASE("ensemble energy equals the weighted component energies") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const DensityMatrix rho = random_density(d, d, seed);
    const EnergyObservable h = random_observable(d, seed + 50);
    const Ensemble ens = spectral_ensemble(rho);
    double weighted = 0.0;
    for (const auto& c : ens.components) weighted += c.weight * energy(c.state, h);
    CHECK(energy(rho, h) == doctest::Approx(weighted).epsilon(1e-9));
  }
}

TEST_CASE("energy never drops below the ground energy") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const DensityMatrix rho = random_density(d, 1 + static_cast<int>((seed / 2) % d), seed);
    const EnergyObservable h = random_observable(d, seed + 300);
    CHECK(energy(rho, h) >= h.ground_energy() - 1e-9);
  }
}

TEST_CASE("eigh produces small residuals and trace_norm sums absolute eigenvalues") {
  const DensityMatrix rho = random_density(6, 6, 3);
  const EigenSystem sys = eigh(rho.mat());
  for (int k = 0; k < 6; ++k) {
    CHECK((rho.mat() * sys.vectors.col(k) - sys.values(k) * sys.vectors.col(k)).norm() <
          1e-9 * rho.mat().norm());
  }
  CHECK(trace_norm(diag2(0.5, -0.25)) == doctest::Approx(0.75).epsilon(1e-12));
}
