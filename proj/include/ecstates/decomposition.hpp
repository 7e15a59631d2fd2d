#pragma once

#include <utility>
#include <vector>

#include "ecstates/states.hpp"

namespace ecstates {

// Restriction of an energy observable to a two-dimensional subspace in Bloch
// coordinates: a state with Bloch vector r has energy c0 + c . r.
struct TwoDimEnergyForm {
  Vector e1, e2;        // orthonormal basis of the span
  double c0;            // Tr(H_2) / 2
  Eigen::Vector3d c;    // (Re H_2(0,1), -Im H_2(0,1), (H_2(0,0) - H_2(1,1)) / 2)

  double energy_at(const Eigen::Vector3d& r) const { return c0 + c.dot(r); }
  Vector vector_from_bloch(const Eigen::Vector3d& r) const;  // unit r -> unit vector
  Eigen::Vector3d bloch_from_vector(const Vector& phi) const;
};

TwoDimEnergyForm two_dim_energy_form(const PureState& psi_a, const PureState& psi_b,
                                     const EnergyObservable& h);

// Split of p_a |a><a| + p_b |b><b| into two pure components whose individual
// energies both equal the pair mean (chord of the fixed-energy disk). A rank-1
// pair degenerates to weights (p_a + p_b, 0) with the state duplicated.
struct Rank2Split {
  double q_u;
  PureState phi_u;
  double q_v;
  PureState phi_v;
};

Rank2Split split_rank2_at_energy(double p_a, const PureState& psi_a, double p_b,
                                 const PureState& psi_b, const EnergyObservable& h);

// Pure-state decomposition certificate. Self-contained: carries the target,
// the observable, and the claimed per-component energies so that
// verify_certificate can recompute everything.
struct DecompositionCertificate {
  DensityMatrix target;
  EnergyObservable observable;
  Ensemble ensemble;
  std::vector<double> component_energies;
  double reconstruction_error;  // || barycenter - target ||_1
  BudgetMode mode;
  double budget;                // Exact: common energy E0; AtMost: the bound E
  int merges;                   // merge-loop iterations used
};

// Decomposition with every component at energy E0 = Tr H rho exactly
// (greedy min/max pair merging plus chord splitting).
DecompositionCertificate equal_energy_decomposition(const DensityMatrix& rho,
                                                    const EnergyObservable& h);

// AtMost-mode certificate for a member of the bounded-energy set; components
// all sit at Tr H rho <= E.
DecompositionCertificate bounded_energy_decomposition(const DensityMatrix& rho,
                                                      const EnergyObservable& h, double budget);

// Rank-(n+1) approximation: keep the first n components, dump the tail weight
// onto the ground state of h.
struct TailReport {
  double tail_weight;        // q_n
  double tail_energy_bound;  // q_n^-1 sum_{i>n} p_i <phi_i|H|phi_i>
  double tau_energy;         // ground-state energy of the replacement component
  double trace_distance;     // || rho_n - rho ||_1 <= 2 q_n
};

std::pair<DensityMatrix, TailReport> finite_rank_approximation(
    const std::vector<std::pair<double, PureState>>& eigenweights, const EnergyObservable& h,
    int n);

bool verify_certificate(const DecompositionCertificate& cert);

// --- shared two-dimensional energy geometry ------------------------------

// Unit vector in span{from, anchor} with energy exactly target, chosen as the
// fixed-energy circle point closest to `from`. Throws NoChord if the plane
// misses the Bloch ball.
PureState pure_state_at_energy(const PureState& from, const PureState& anchor,
                               const EnergyObservable& h, double target);

// Exact maximizer of phi^dagger M phi over unit phi in span{u, v} with energy
// exactly target (the quadratic form is linear in the Bloch vector, so the
// circle maximum is closed-form).
PureState max_form_at_energy(const PureState& u, const PureState& v, const EnergyObservable& h,
                             const Matrix& form, double target);

}  // namespace ecstates
