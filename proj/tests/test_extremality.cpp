#include <doctest.h>

#include <cmath>

#include "ecstates/extremality.hpp"
#include "test_helpers.hpp"

using namespace ecstates;
using namespace ecstates::testing;

namespace {

// A witness direction must stay inside the set in both directions.
void check_witness(const ExtremalityReport& report, const Matrix& rho_mat,
                   const EnergyObservable& h, double budget) {
  REQUIRE(report.witness.has_value());
  const Matrix delta = report.witness->mat();
  CHECK(delta.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(delta.trace()) < 1e-9);
  if (report.energy_active) CHECK(std::abs((h.mat() * delta).trace()) < 1e-8);
  const double eps = 1e-4;
  for (const double sign : {+1.0, -1.0}) {
    const DensityMatrix moved = state_of(rho_mat + sign * eps * delta);
    CHECK(member(moved, h, {budget, BudgetMode::AtMost}));
  }
}

}  // namespace

TEST_CASE("pure states are extreme in the bounded-energy state set") {
  const EnergyObservable h = observable_of(diag2(0, 1));
  SUBCASE("ground state, inactive constraint") {
    const ExtremalityReport r = is_extreme_state(state_of(diag2(1, 0)), h, 0.5);
    CHECK(r.is_extreme);
    CHECK(r.perturbation_dim == 0);
    CHECK_FALSE(r.energy_active);
    CHECK_FALSE(r.witness.has_value());
  }
  SUBCASE("equatorial state, active constraint") {
    const PureState plus = PureState::normalized(vec2(1, 1));
    const ExtremalityReport r = is_extreme_state(state_of(plus.projector()), h, 0.5);
    CHECK(r.is_extreme);
    CHECK(r.energy_active);
  }
}

TEST_CASE("the maximally mixed qubit is not extreme and carries a witness") {
  const EnergyObservable h = observable_of(diag2(0, 1));
  const Matrix rho = diag2(0.5, 0.5);
  const ExtremalityReport r = is_extreme_state(state_of(rho), h, 0.5);
  CHECK_FALSE(r.is_extreme);
  CHECK(r.perturbation_dim > 0);
  CHECK(r.energy_active);  // energy is exactly 0.5
  check_witness(r, rho, h, 0.5);
}

TEST_CASE("membership is a precondition") {
  const EnergyObservable h = observable_of(diag2(0, 1));
  CHECK_THROWS_AS(is_extreme_state(state_of(diag2(0.5, 0.5)), h, 0.4), NotMember);
  CHECK_THROWS_AS(
      is_extreme_subnormalized(SubnormalizedOperator(HermitianMatrix(diag2(0.5, 0.5))), h, 0.4),
      NotMember);
}

TEST_CASE("subnormalized extremality") {
  SUBCASE("the zero operator is extreme") {
    const SubnormalizedOperator zero(HermitianMatrix(Matrix::Zero(2, 2)));
    const ExtremalityReport r = is_extreme_subnormalized(zero, observable_of(diag2(0, 1)), 0.5);
    CHECK(r.is_extreme);
    CHECK(r.perturbation_dim == 0);
  }
  SUBCASE("a rank-one operator pinned by trace and energy bounds is extreme") {
    // T = 0.5 |1><1| with H = diag(0, 2), E = 1: scaling up breaks the energy
    // bound, scaling down is only possible jointly with a trace increase.
    const SubnormalizedOperator t(HermitianMatrix(diag2(0, 0.5)));
    const ExtremalityReport r = is_extreme_subnormalized(t, observable_of(diag2(0, 2)), 1.0);
    CHECK(r.is_extreme);
  }
  SUBCASE("rank two is never extreme") {
    const SubnormalizedOperator t(HermitianMatrix(diag2(0.3, 0.3)));
    const ExtremalityReport r = is_extreme_subnormalized(t, observable_of(diag2(0, 1)), 1.0);
    CHECK_FALSE(r.is_extreme);
    CHECK(r.witness.has_value());
  }
}

TEST_CASE("oracle perturbation dimensions match the hand counts") {
  const EnergyObservable h = observable_of(diag2(0, 1));
  SUBCASE("pure state, inactive energy: r^2 - 1 = 0") {
    const ExtremalityReport r =
        extreme_oracle(SubnormalizedOperator(state_of(diag2(1, 0))), h, 0.5, SetKind::States);
    CHECK(r.method == DecisionMethod::Oracle);
    CHECK(r.perturbation_dim == 0);
    CHECK(r.is_extreme);
  }
  SUBCASE("rank 2, active energy: 4 - 1 - 1 = 2") {
    const ExtremalityReport r =
        extreme_oracle(SubnormalizedOperator(state_of(diag2(0.5, 0.5))), h, 0.5, SetKind::States);
    CHECK(r.perturbation_dim == 2);
    CHECK_FALSE(r.is_extreme);
  }
  SUBCASE("rank 2, inactive energy: 4 - 1 = 3") {
    const ExtremalityReport r =
        extreme_oracle(SubnormalizedOperator(state_of(diag2(0.5, 0.5))), h, 0.9, SetKind::States);
    CHECK(r.perturbation_dim == 3);
  }
  SUBCASE("zero operator: empty support") {
    const ExtremalityReport r = extreme_oracle(SubnormalizedOperator(HermitianMatrix(
                                                   Matrix::Zero(2, 2))),
                                               h, 0.5, SetKind::Subnormalized);
    CHECK(r.perturbation_dim == 0);
  }
}

TEST_CASE("fast path agrees with the oracle on random states") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const int rank = 1 + static_cast<int>(seed % d);
    const DensityMatrix rho = random_density(d, rank, seed);
    const EnergyObservable h = random_observable(d, seed + 400);
    const double e = energy(rho, h);
    // One active and one inactive budget per sample.
    for (const double budget : {e, e + 0.25 * (1.0 + std::abs(e))}) {
      const ExtremalityReport fast = is_extreme_state(rho, h, budget);
      const ExtremalityReport slow =
          extreme_oracle(SubnormalizedOperator(rho), h, budget, SetKind::States);
      CHECK(fast.is_extreme == slow.is_extreme);
      CHECK(fast.is_extreme == (rho.rank() == 1));
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("witnesses stay inside the set in both directions") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const int rank = 2 + static_cast<int>(seed % (d - 1));
    const DensityMatrix rho = random_density(d, rank, seed);
    const EnergyObservable h = random_observable(d, seed + 500);
    const double budget = energy(rho, h);  // active constraint
    const ExtremalityReport r = is_extreme_state(rho, h, budget);
    REQUIRE_FALSE(r.is_extreme);
    check_witness(r, rho.mat(), h, budget);
  }
}

TEST_CASE("midpoints of distinct members are never extreme") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const int d = 2 + static_cast<int>(seed % 4);
    const DensityMatrix a = random_density(d, 1 + static_cast<int>(seed % d), seed);
    const DensityMatrix b = random_density(d, d, seed + 77);
    const EnergyObservable h = random_observable(d, seed + 600);
    const double budget = std::max(energy(a, h), energy(b, h));
    const DensityMatrix mid = state_of(0.5 * (a.mat() + b.mat()));
    CHECK_FALSE(is_extreme_state(mid, h, budget).is_extreme);
  }
}

TEST_CASE("oracle-extreme subnormalized operators have rank at most one") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int d = 2 + static_cast<int>(seed % 5);
    const int rank = 1 + static_cast<int>(seed % d);
    const DensityMatrix rho = random_density(d, rank, seed);
    const double scale = 0.05 + 0.9 * static_cast<double>(seed % 11) / 11.0;
    const SubnormalizedOperator t(HermitianMatrix(scale * rho.mat()));
    const EnergyObservable h = random_observable(d, seed + 700);
    const double e = energy(t, h);
    for (const double budget : {e, e + 0.3 * (1.0 + std::abs(e))}) {
      const ExtremalityReport r = extreme_oracle(t, h, budget, SetKind::Subnormalized);
      if (r.is_extreme) CHECK(t.rank() <= 1);
    }
  }
}
