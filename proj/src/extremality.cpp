#include "ecstates/extremality.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace ecstates {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Coordinates of an r x r Hermitian matrix in the Frobenius-orthonormal basis
// { E_kk, (E_ij + E_ji)/sqrt2, i(E_ij - E_ji)/sqrt2 }: r^2 real parameters.
Eigen::VectorXd hermitian_coords(const Matrix& g) {
  const int r = static_cast<int>(g.rows());
  Eigen::VectorXd x(r * r);
  int idx = 0;
  for (int k = 0; k < r; ++k) x(idx++) = g(k, k).real();
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      x(idx++) = kSqrt2 * g(i, j).real();
      x(idx++) = kSqrt2 * g(i, j).imag();
    }
  }
  return x;
}

Matrix hermitian_from_coords(const Eigen::VectorXd& x, int r) {
  Matrix m = Matrix::Zero(r, r);
  int idx = 0;
  for (int k = 0; k < r; ++k) m(k, k) = Complex(x(idx++), 0.0);
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      const double re = x(idx++) / kSqrt2;
      const double im = x(idx++) / kSqrt2;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  }
  return m;
}

struct PerturbationSpace {
  int dim = 0;
  // Null-space directions, both compressed to the support eigenbasis and
  // expanded to the full space; Frobenius-orthonormal.
  std::vector<Matrix> support_basis;
  std::vector<Matrix> full_basis;
};

struct OracleSetup {
  int support_rank = 0;
  bool trace_active = false;
  bool energy_active = false;
  double energy_value = 0.0;
  Eigen::VectorXd support_values;  // eigenvalues of T on its support
  Matrix support_vectors;          // d x r
  Matrix h_support;                // r x r compression of H
};

OracleSetup analyze(const SubnormalizedOperator& t, const EnergyObservable& h, double budget,
                    SetKind set_kind) {
  OracleSetup s;
  const double trace = t.trace();
  const double cutoff = tol.rank * trace;
  int r = 0;
  while (r < t.dim() && t.eigenvalues()(r) > cutoff) ++r;
  s.support_rank = r;
  s.energy_value = energy(t, h);
  s.energy_active = std::abs(s.energy_value - budget) <= tol.active;
  s.trace_active = set_kind == SetKind::States || std::abs(trace) <= tol.active ||
                   std::abs(trace - 1.0) <= tol.active;
  if (r > 0) {
    s.support_values = t.eigenvalues().head(r);
    s.support_vectors = t.eigenvectors().leftCols(r);
    Matrix hc = s.support_vectors.adjoint() * h.mat() * s.support_vectors;
    s.h_support = (hc + hc.adjoint()) / 2.0;
  }
  return s;
}

PerturbationSpace perturbation_space(const OracleSetup& s) {
  PerturbationSpace space;
  const int r = s.support_rank;
  if (r == 0) return space;
  const int params = r * r;

  std::vector<Eigen::VectorXd> rows;
  if (s.trace_active) {
    Eigen::VectorXd row = hermitian_coords(Matrix::Identity(r, r));
    rows.push_back(row / row.norm());
  }
  if (s.energy_active) {
    Eigen::VectorXd row = hermitian_coords(s.h_support);
    const double norm = row.norm();
    if (norm > 1e-14 * std::max(1.0, s.h_support.cwiseAbs().maxCoeff())) {
      rows.push_back(row / norm);
    }
  }

  Eigen::MatrixXd null_basis;
  if (rows.empty()) {
    null_basis = Eigen::MatrixXd::Identity(params, params);
  } else {
    Eigen::MatrixXd constraints(static_cast<int>(rows.size()), params);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) constraints.row(i) = rows[i];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > tol.nullspace) ++rank;
    }
    null_basis = svd.matrixV().rightCols(params - rank);
  }

  space.dim = static_cast<int>(null_basis.cols());
  for (Eigen::Index k = 0; k < null_basis.cols(); ++k) {
    Matrix delta_s = hermitian_from_coords(null_basis.col(k), r);
    space.support_basis.push_back(delta_s);
    Matrix delta = s.support_vectors * delta_s * s.support_vectors.adjoint();
    space.full_basis.push_back((delta + delta.adjoint()) / 2.0);
  }
  return space;
}

// Witness that keeps T +/- witness_step * Delta inside the set as robustly as
// the null space allows: maximize the worst-case eigenvalue/slack margin.
std::optional<HermitianMatrix> pick_witness(const OracleSetup& s, const PerturbationSpace& space,
                                            double budget) {
  if (space.dim == 0) return std::nullopt;
  const double eps = tol.witness_step;
  const Matrix d0 = s.support_values.asDiagonal();
  double best = -std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < space.dim; ++k) {
    const Matrix& delta = space.support_basis[k];
    double margin = std::min(eigh(d0 + eps * delta).values.minCoeff(),
                             eigh(d0 - eps * delta).values.minCoeff());
    const double trace_shift = eps * std::abs(delta.trace().real());
    if (!s.trace_active) {
      const double trace = s.support_values.sum();
      margin = std::min({margin, 1.0 - trace - trace_shift, trace - trace_shift});
    }
    if (!s.energy_active) {
      const double energy_shift = eps * std::abs((s.h_support * delta).trace().real());
      margin = std::min(margin, budget - s.energy_value - energy_shift);
    }
    if (margin > best) {
      best = margin;
      best_k = k;
    }
  }
  Matrix w = space.full_basis[best_k];
  return HermitianMatrix(w / w.norm());
}

void require_member(const SubnormalizedOperator& t, const EnergyObservable& h, double budget) {
  if (energy(t, h) > budget + tol.active) {
    throw NotMember("energy " + std::to_string(energy(t, h)) + " exceeds budget " +
                    std::to_string(budget));
  }
}

ExtremalityReport report_from_space(const OracleSetup& s, const PerturbationSpace& space,
                                    DecisionMethod method, double budget) {
  ExtremalityReport rep;
  rep.is_extreme = space.dim == 0;
  rep.method = method;
  rep.perturbation_dim = space.dim;
  rep.energy_active = s.energy_active;
  rep.witness = pick_witness(s, space, budget);
  return rep;
}

}  // namespace

ExtremalityReport is_extreme_state(const DensityMatrix& rho, const EnergyObservable& h,
                                   double budget) {
  SubnormalizedOperator t(rho);
  require_member(t, h, budget);
  OracleSetup s = analyze(t, h, budget, SetKind::States);
  if (rho.rank() == 1) {
    return {true, DecisionMethod::Theorem, 0, s.energy_active, std::nullopt};
  }
  PerturbationSpace space = perturbation_space(s);
  ExtremalityReport rep = report_from_space(s, space, DecisionMethod::Theorem, budget);
  rep.is_extreme = false;
  return rep;
}

ExtremalityReport is_extreme_subnormalized(const SubnormalizedOperator& t,
                                           const EnergyObservable& h, double budget) {
  require_member(t, h, budget);
  if (t.rank() >= 2) {
    OracleSetup s = analyze(t, h, budget, SetKind::Subnormalized);
    PerturbationSpace space = perturbation_space(s);
    ExtremalityReport rep = report_from_space(s, space, DecisionMethod::Theorem, budget);
    rep.is_extreme = false;
    return rep;
  }
  return extreme_oracle(t, h, budget, SetKind::Subnormalized);
}

ExtremalityReport extreme_oracle(const SubnormalizedOperator& t, const EnergyObservable& h,
                                 double budget, SetKind set_kind) {
  if (t.dim() != h.dim()) {
    throw DimensionMismatch("extreme_oracle: operator and observable dimensions differ");
  }
  if (set_kind == SetKind::States && std::abs(t.trace() - 1.0) > tol.trace) {
    throw NotMember("trace " + std::to_string(t.trace()) + " is not a state");
  }
  require_member(t, h, budget);
  OracleSetup s = analyze(t, h, budget, set_kind);
  PerturbationSpace space = perturbation_space(s);
  return report_from_space(s, space, DecisionMethod::Oracle, budget);
}

}  // namespace ecstates
