#pragma once

#include <optional>

#include "ecstates/states.hpp"

namespace ecstates {

enum class SetKind { States, Subnormalized };
enum class DecisionMethod { Theorem, Oracle };

// Verdict of an extremality test. perturbation_dim is the real dimension of
// the space of Hermitian directions Delta with supp Delta inside supp T that
// keep every active constraint stationary; the point is extreme iff it is 0.
// When positive, witness holds one such direction with Frobenius norm 1.
struct ExtremalityReport {
  bool is_extreme;
  DecisionMethod method;
  int perturbation_dim;
  bool energy_active;
  std::optional<HermitianMatrix> witness;
};

// Extremality of rho in { states with Tr H rho <= E }. Fast path: extreme iff
// rank one; the perturbation machinery only runs to furnish dim and witness.
ExtremalityReport is_extreme_state(const DensityMatrix& rho, const EnergyObservable& h, double budget);

// Extremality in the subnormalized set { T >= 0, Tr T <= 1, Tr H T <= E }.
// Rank >= 2 is never extreme; rank <= 1 is decided by the oracle since the
// verdict depends on which constraints are active.
ExtremalityReport is_extreme_subnormalized(const SubnormalizedOperator& t, const EnergyObservable& h,
                                           double budget);

// Direct perturbation-space computation, no theorem shortcuts.
ExtremalityReport extreme_oracle(const SubnormalizedOperator& t, const EnergyObservable& h,
                                 double budget, SetKind set_kind);

}  // namespace ecstates
