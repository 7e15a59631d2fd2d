#pragma once

#include <cstdint>
#include <functional>

#include "ecstates/states.hpp"

namespace ecstates {

// Channel in Kraus form: rho -> sum_i K_i rho K_i^dagger with
// sum_i K_i^dagger K_i = identity within tol.channel.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> kraus);

  int dim_in() const { return static_cast<int>(kraus_.front().cols()); }
  int dim_out() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }

 private:
  std::vector<Matrix> kraus_;
};

DensityMatrix apply_channel(const KrausChannel& phi, const DensityMatrix& rho);

// Environment-side channel of the Stinespring dilation V psi = sum_i
// (K_i psi) (x) |i>: output entries Tr(K_i rho K_j^dagger). Its output
// entropy equals the channel output entropy on pure inputs.
KrausChannel complementary_channel(const KrausChannel& phi);

// -sum lambda ln lambda in nats; eigenvalues below tol.entropy_floor skipped.
double von_neumann_entropy(const DensityMatrix& rho);

// Energy-constrained operator norm:
//   value^2 = sup { ||A phi||^2 : ||phi|| = 1, <phi|H|phi> <= E }.
// Solved through the dual g(mu) = lambda_max(A^dagger A - mu H) + mu E with a
// feasible witness recovered on the energy-E circle; gap = dual - witness
// value in squared units (exactness: >= -1e-9 and <= 1e-6 max(1, dual)).
struct ENormResult {
  double value;
  double mu_star;
  PureState witness;
  double dual_value;
  double gap;
};

ENormResult enorm(const Matrix& a, const EnergyObservable& h, double budget);

// Multi-start projected gradient ascent of ||A phi||^2 on the feasible sphere;
// independent check of the dual solver. n_starts = 0 reports the ground-state
// baseline. Deterministic per seed; starts are merged best-first with ties
// broken by the lowest start index.
struct PrimalAscentResult {
  double value;
  PureState phi;
};

PrimalAscentResult enorm_primal_oracle(const Matrix& a, const EnergyObservable& h, double budget,
                                       int n_starts, std::uint64_t seed);

// sup over sampled mixed feasible states of sqrt(Tr(A rho A^dagger)); never
// exceeds the pure-state supremum. n_samples = 0 reports the ground-state
// value.
double enorm_mixed_oracle(const Matrix& a, const EnergyObservable& h, double budget, int n_samples,
                          std::uint64_t seed);

// Constrained minimal output entropy over pure states (heuristic contract:
// best of n_starts descents, deterministic per seed).
struct MinEntropyResult {
  double value;  // nats
  PureState argmin;
  BudgetMode mode;
  int restarts_used;
};

MinEntropyResult min_output_entropy(const KrausChannel& phi, const EnergyObservable& h,
                                    double budget, BudgetMode mode, int n_starts,
                                    std::uint64_t seed);

// Spot check that suprema of convex (resp. infima of concave) functions over
// the bounded-energy set are attained on pure states: samples both classes
// and compares extrema.
enum class TransferDirection { SupConvex, InfConcave };

struct TransferReport {
  double pure_extremum;
  double mixed_extremum;
  bool passed;
  int n_mixed;
  int n_pure;
};

TransferReport convexity_transfer_check(const std::function<double(const DensityMatrix&)>& f,
                                        TransferDirection direction, const EnergyObservable& h,
                                        double budget, int n_mixed, int n_pure,
                                        std::uint64_t seed);

// Deterministic Haar-style random channel fixture: k Kraus operators carved
// from a random isometry.
KrausChannel random_channel(int dim_in, int dim_out, int n_kraus, std::uint64_t seed);

}  // namespace ecstates
