#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "ecstates/errors.hpp"
#include "ecstates/tolerances.hpp"

namespace ecstates {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending with the
// matching eigenvector columns. Residual ||M v - lambda v|| <= 1e-9 ||M||.
struct EigenSystem {
  Eigen::VectorXd values;
  Matrix vectors;
};

EigenSystem eigh(const Matrix& m);

// Trace norm ||M||_1 = sum |lambda_i| of a Hermitian matrix.
double trace_norm(const Matrix& hermitian);

// Square matrix validated to be Hermitian within tol.hermitian.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }

 private:
  Matrix mat_;
};

// Unit vector with canonical global phase: the first entry with
// |v_k| > 1e-12 * max|v| is made real positive.
class PureState {
 public:
  explicit PureState(Vector v);                 // requires || ||v|| - 1 || <= 1e-8
  static PureState normalized(const Vector& v); // rescales any nonzero vector

  int dim() const { return static_cast<int>(vec_.size()); }
  const Vector& vec() const { return vec_; }
  Matrix projector() const { return vec_ * vec_.adjoint(); }

 private:
  struct Raw {};
  PureState(Vector v, Raw) : vec_(std::move(v)) {}
  Vector vec_;
};

// Positive semidefinite, trace one. Construction validates (NotHermitian,
// NotPositive with eigenvalue floor -tol.psd, TraceNotOne) and caches the
// eigendecomposition with eigenvalues clamped to [0, 1], descending.
class DensityMatrix {
 public:
  explicit DensityMatrix(const HermitianMatrix& m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  const Eigen::VectorXd& eigenvalues() const { return values_; }  // descending
  const Matrix& eigenvectors() const { return vectors_; }
  int rank() const;  // count of eigenvalues > tol.rank

 private:
  Matrix mat_;
  Eigen::VectorXd values_;
  Matrix vectors_;
};

// Positive semidefinite with 0 <= trace <= 1 (the pyramid over the states
// with apex at the zero operator).
class SubnormalizedOperator {
 public:
  explicit SubnormalizedOperator(const HermitianMatrix& m);
  explicit SubnormalizedOperator(const DensityMatrix& rho);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double trace() const { return trace_; }
  const Eigen::VectorXd& eigenvalues() const { return values_; }  // descending
  const Matrix& eigenvectors() const { return vectors_; }
  int rank() const;  // count of eigenvalues > tol.rank * trace

 private:
  Matrix mat_;
  double trace_;
  Eigen::VectorXd values_;
  Matrix vectors_;
};

// Hermitian observable with spectrum in [0, inf); lowest eigenvalue is the
// ground energy. Eigenvalues cached ascending.
class EnergyObservable {
 public:
  explicit EnergyObservable(const HermitianMatrix& m);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  const Eigen::VectorXd& eigenvalues() const { return values_; }  // ascending
  const Matrix& eigenvectors() const { return vectors_; }
  double ground_energy() const { return values_(0); }
  double max_energy() const { return values_(values_.size() - 1); }
  // Ground eigenvector; degenerate ground spaces are resolved deterministically
  // by projecting the lowest-index standard basis vector into the eigenspace.
  PureState ground_state() const;

 private:
  Matrix mat_;
  Eigen::VectorXd values_;
  Matrix vectors_;
};

// Finite pure-state ensemble: weights positive, summing to one.
struct Ensemble {
  struct Component {
    double weight;
    PureState state;
  };
  std::vector<Component> components;

  static Ensemble validated(std::vector<Component> components);
  int dim() const { return components.empty() ? 0 : components.front().state.dim(); }
};

enum class BudgetMode { AtMost, Exact };

struct EnergyBudget {
  double E;
  BudgetMode mode;
};

// --- operations ---------------------------------------------------------

double energy(const DensityMatrix& rho, const EnergyObservable& h);
double energy(const SubnormalizedOperator& t, const EnergyObservable& h);
double energy(const PureState& psi, const EnergyObservable& h);

bool member(const DensityMatrix& rho, const EnergyObservable& h, const EnergyBudget& budget,
            double tolerance = tol.active);
bool member(const SubnormalizedOperator& t, const EnergyObservable& h, const EnergyBudget& budget,
            double tolerance = tol.active);

// Spectral decomposition as an ensemble; zero-weight eigenvectors dropped,
// weights renormalized.
Ensemble spectral_ensemble(const DensityMatrix& rho);

// Barycenter sum_i p_i |psi_i><psi_i| of an ensemble, validated as a state.
DensityMatrix barycenter(const Ensemble& ensemble);

// diag(0, 1, ..., d-1): truncated oscillator number operator.
EnergyObservable oscillator_observable(int d);

// exp(-beta H) / Tr exp(-beta H); requires beta > 0.
DensityMatrix gibbs_state(const EnergyObservable& h, double beta);

// Deterministic pseudo-random fixtures (Gaussian ensembles, fixed seed).
DensityMatrix random_density(int d, int rank, std::uint64_t seed);
PureState random_pure(int d, std::uint64_t seed);

}  // namespace ecstates
