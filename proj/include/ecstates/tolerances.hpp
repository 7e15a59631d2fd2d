#pragma once

namespace ecstates {

// Central numeric tuning surface. Everything that decides "equal enough" or
// "active enough" reads from here; nothing else hard-codes a threshold.
struct Tolerances {
  double hermitian = 1e-10;      // max |M - M^dagger| entry accepted as Hermitian
  double psd = 1e-10;            // eigenvalue floor: lambda >= -psd accepted as >= 0
  double trace = 1e-10;          // trace and weight-sum deviations
  double rank = 1e-9;            // eigenvalue > rank * trace counts toward the rank
  double active = 1e-8;          // |energy - E| <= active marks the constraint active
  double nullspace = 1e-10;      // singular-value cutoff for null-space extraction
  double gram = 1e-12;           // Gram-determinant floor for two-dimensional spans
  double chord = 1e-12;          // slack before a fixed-energy plane misses the ball
  double balance = 1e-9;
  double reconstruction = 1e-9;         // per-component energy balance in the merge loop
  double mu = 1e-10;             // golden-section tolerance on the dual multiplier
  double channel = 1e-9;         // trace-preservation defect allowed for Kraus families
  double entropy_floor = 1e-12;  // eigenvalues below this are excluded from entropy
  double fd_step = 1e-6;         // finite-difference step for entropy gradients
  double prune = 1e-13;          // ensemble weights below this are dropped
  double witness_step = 1e-4;    // probe step for extremality witness margins
};

inline constexpr Tolerances tol{};

}  // namespace ecstates
