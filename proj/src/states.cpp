#include "ecstates/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace ecstates {

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
  if (m.rows() == 0) throw InvalidParameter(std::string(what) + ": empty matrix");
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b));
  }
}

std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(n01(gen), n01(gen));
  return g;
}

}  // namespace

EigenSystem eigh(const Matrix& m) {
  require_square(m, "eigh");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw InvalidParameter("eigh: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const Matrix& hermitian) {
  return eigh((hermitian + hermitian.adjoint()) / 2.0).values.cwiseAbs().sum();
}

HermitianMatrix::HermitianMatrix(Matrix m) : mat_(std::move(m)) {
  require_square(mat_, "HermitianMatrix");
  const double scale = std::max(1.0, max_abs(mat_));
  const double defect = max_abs(mat_ - mat_.adjoint().eval());
  if (defect > tol.hermitian * scale) {
    throw NotHermitian("max |M - M^dagger| entry is " + std::to_string(defect));
  }
}

PureState::PureState(Vector v) : vec_(std::move(v)) {
  if (vec_.size() == 0) throw InvalidParameter("PureState: empty vector");
  const double norm = vec_.norm();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw InvalidParameter("PureState: vector norm is " + std::to_string(norm));
  }
  // Renormalizing an already-unit vector would perturb stored coordinates and
  // break lossless round-trips through the document format.
  if (std::abs(norm - 1.0) > 1e-14) vec_ /= norm;
  const double vmax = vec_.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < vec_.size(); ++k) {
    const Complex z = vec_(k);
    const double a = std::abs(z);
    if (a > 1e-12 * vmax) {
      // Pin the pivot entry to exactly (|z|, 0): the rounded rotation alone
      // leaves a stray ulp in its imaginary part, and construction must be
      // idempotent for document round-trips to be lossless.
      if (z.imag() != 0.0 || z.real() < 0.0) {
        vec_ *= std::conj(z) / a;
        vec_(k) = Complex(a, 0.0);
      }
      break;
    }
  }
}

PureState PureState::normalized(const Vector& v) {
  const double norm = v.norm();
  if (norm <= 0.0) throw InvalidParameter("PureState: zero vector");
  return PureState(Vector(v / norm));
}

DensityMatrix::DensityMatrix(const HermitianMatrix& m) : mat_(m.mat()) {
  EigenSystem sys = eigh(mat_);
  if (sys.values.minCoeff() < -tol.psd) {
    throw NotPositive("lowest eigenvalue is " + std::to_string(sys.values.minCoeff()));
  }
  const double trace = mat_.trace().real();
  if (std::abs(trace - 1.0) > tol.trace) {
    throw TraceNotOne("trace is " + std::to_string(trace));
  }
  values_ = sys.values.reverse();
  vectors_ = sys.vectors.rowwise().reverse();
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    values_(i) = std::clamp(values_(i), 0.0, 1.0);
}

int DensityMatrix::rank() const {
  return static_cast<int>((values_.array() > tol.rank).count());
}

SubnormalizedOperator::SubnormalizedOperator(const HermitianMatrix& m) : mat_(m.mat()) {
  EigenSystem sys = eigh(mat_);
  if (sys.values.minCoeff() < -tol.psd) {
    throw NotPositive("lowest eigenvalue is " + std::to_string(sys.values.minCoeff()));
  }
  trace_ = mat_.trace().real();
  if (trace_ < -tol.trace || trace_ > 1.0 + tol.trace) {
    throw TraceNotOne("trace is " + std::to_string(trace_) + ", must lie in [0, 1]");
  }
  trace_ = std::clamp(trace_, 0.0, 1.0);
  values_ = sys.values.reverse();
  vectors_ = sys.vectors.rowwise().reverse();
  for (Eigen::Index i = 0; i < values_.size(); ++i) values_(i) = std::max(values_(i), 0.0);
}

SubnormalizedOperator::SubnormalizedOperator(const DensityMatrix& rho)
    : mat_(rho.mat()), trace_(1.0), values_(rho.eigenvalues()), vectors_(rho.eigenvectors()) {}

int SubnormalizedOperator::rank() const {
  return static_cast<int>((values_.array() > tol.rank * trace_).count());
}

EnergyObservable::EnergyObservable(const HermitianMatrix& m) : mat_(m.mat()) {
  EigenSystem sys = eigh(mat_);
  if (sys.values.minCoeff() < -tol.psd) {
    throw NotPositive("lowest eigenvalue is " + std::to_string(sys.values.minCoeff()));
  }
  values_ = std::move(sys.values);
  vectors_ = std::move(sys.vectors);
}

PureState EnergyObservable::ground_state() const {
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  const double cutoff = ground_energy() + 1e-9 * scale;
  Eigen::Index g = 1;
  while (g < values_.size() && values_(g) <= cutoff) ++g;
  const Matrix basis = vectors_.leftCols(g);
  for (int k = 0; k < dim(); ++k) {
    Vector v = basis * basis.adjoint().col(k);
    if (v.norm() > 1e-8) return PureState::normalized(v);
  }
  return PureState::normalized(Vector(vectors_.col(0)));
}

Ensemble Ensemble::validated(std::vector<Component> components) {
  if (components.empty()) throw InvalidParameter("Ensemble: no components");
  const int d = components.front().state.dim();
  double sum = 0.0;
  for (const Component& c : components) {
    require_same_dim(c.state.dim(), d, "Ensemble");
    if (c.weight <= 0.0) throw InvalidParameter("Ensemble: nonpositive weight");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > tol.trace) {
    throw InvalidParameter("Ensemble: weights sum to " + std::to_string(sum));
  }
  Ensemble out;
  out.components = std::move(components);
  return out;
}

double energy(const DensityMatrix& rho, const EnergyObservable& h) {
  require_same_dim(rho.dim(), h.dim(), "energy");
  return (h.mat() * rho.mat()).trace().real();
}

double energy(const SubnormalizedOperator& t, const EnergyObservable& h) {
  require_same_dim(t.dim(), h.dim(), "energy");
  return (h.mat() * t.mat()).trace().real();
}

double energy(const PureState& psi, const EnergyObservable& h) {
  require_same_dim(psi.dim(), h.dim(), "energy");
  return (psi.vec().adjoint() * h.mat() * psi.vec())(0).real();
}

namespace {

bool budget_holds(double e, const EnergyBudget& budget, double tolerance) {
  if (budget.mode == BudgetMode::Exact) return std::abs(e - budget.E) <= tolerance;
  return e <= budget.E + tolerance;
}

}  // namespace

bool member(const DensityMatrix& rho, const EnergyObservable& h, const EnergyBudget& budget,
            double tolerance) {
  return budget_holds(energy(rho, h), budget, tolerance);
}

bool member(const SubnormalizedOperator& t, const EnergyObservable& h, const EnergyBudget& budget,
            double tolerance) {
  return budget_holds(energy(t, h), budget, tolerance);
}

Ensemble spectral_ensemble(const DensityMatrix& rho) {
  std::vector<Ensemble::Component> components;
  double kept = 0.0;
  for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
    if (rho.eigenvalues()(i) > tol.rank) kept += rho.eigenvalues()(i);
  }
  for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
    const double p = rho.eigenvalues()(i);
    if (p <= tol.rank) continue;
    components.push_back({p / kept, PureState::normalized(rho.eigenvectors().col(i))});
  }
  return Ensemble::validated(std::move(components));
}

DensityMatrix barycenter(const Ensemble& ensemble) {
  if (ensemble.components.empty()) throw InvalidParameter("barycenter: empty ensemble");
  const int d = ensemble.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const Ensemble::Component& c : ensemble.components) sum += c.weight * c.state.projector();
  return DensityMatrix(HermitianMatrix((sum + sum.adjoint()) / 2.0));
}

EnergyObservable oscillator_observable(int d) {
  if (d < 1) throw InvalidParameter("oscillator_observable: dimension must be >= 1");
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = Complex(i, 0.0);
  return EnergyObservable(HermitianMatrix(std::move(m)));
}

DensityMatrix gibbs_state(const EnergyObservable& h, double beta) {
  if (!(beta > 0.0)) throw InvalidParameter("gibbs_state: beta must be > 0");
  const Eigen::VectorXd& lam = h.eigenvalues();
  Eigen::VectorXd w = (-beta * (lam.array() - lam(0))).exp();
  w /= w.sum();
  Matrix m = h.eigenvectors() * w.asDiagonal() * h.eigenvectors().adjoint();
  return DensityMatrix(HermitianMatrix((m + m.adjoint()) / 2.0));
}

DensityMatrix random_density(int d, int rank, std::uint64_t seed) {
  if (d < 1 || rank < 1 || rank > d) throw InvalidParameter("random_density: bad dimensions");
  auto gen = engine(seed);
  Matrix g = gaussian_matrix(d, rank, gen);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(HermitianMatrix((m + m.adjoint()) / 2.0));
}

PureState random_pure(int d, std::uint64_t seed) {
  if (d < 1) throw InvalidParameter("random_pure: dimension must be >= 1");
  auto gen = engine(seed);
  Vector v = gaussian_matrix(d, 1, gen).col(0);
  return PureState::normalized(v);
}

}  // namespace ecstates
