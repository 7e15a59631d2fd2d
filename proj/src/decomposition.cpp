#include "ecstates/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace ecstates {

namespace {

// Bloch form of a 2x2 Hermitian matrix: Tr(m rho(r)) = m0 + m . r for the
// state rho(r) = (I + r . sigma) / 2.
std::pair<double, Eigen::Vector3d> bloch_form(const Matrix& m2) {
  const double m0 = m2.trace().real() / 2.0;
  Eigen::Vector3d m(m2(0, 1).real(), -m2(0, 1).imag(), (m2(0, 0).real() - m2(1, 1).real()) / 2.0);
  return {m0, m};
}

// Deterministic unit vector orthogonal to the unit vector n.
Eigen::Vector3d pick_inplane(const Eigen::Vector3d& n) {
  int k = 0;
  n.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d u = Eigen::Vector3d::Unit(k) - n(k) * n;
  return u.normalized();
}

Eigen::Vector3d bloch_of_state2(const Matrix& rho2) {
  return {2.0 * rho2(0, 1).real(), -2.0 * rho2(0, 1).imag(),
          rho2(0, 0).real() - rho2(1, 1).real()};
}

// Point on the fixed-energy circle { c0 + c.r = target, |r| = 1 } whose
// in-plane direction follows `toward`; falls back to a deterministic
// direction when `toward` has no in-plane component.
Eigen::Vector3d circle_point(const TwoDimEnergyForm& form, double target,
                             const Eigen::Vector3d& toward) {
  const double cnorm = form.c.norm();
  const double scale = std::max(1.0, std::abs(form.c0));
  if (cnorm <= 1e-14 * scale) {
    // Energy is constant on the span; any unit vector qualifies.
    if (std::abs(target - form.c0) > tol.active) {
      throw NoChord("span has constant energy " + std::to_string(form.c0));
    }
    const double tn = toward.norm();
    return tn > 1e-9 ? Eigen::Vector3d(toward / tn) : Eigen::Vector3d::UnitZ();
  }
  const Eigen::Vector3d n = form.c / cnorm;
  double h = (target - form.c0) / cnorm;
  if (std::abs(h) > 1.0 + tol.chord) {
    throw NoChord("fixed-energy plane misses the Bloch ball");
  }
  h = std::clamp(h, -1.0, 1.0);
  Eigen::Vector3d ip = toward - toward.dot(n) * n;
  const Eigen::Vector3d d = ip.norm() > 1e-9 ? Eigen::Vector3d(ip.normalized()) : pick_inplane(n);
  return h * n + std::sqrt(std::max(0.0, 1.0 - h * h)) * d;
}

}  // namespace

Vector TwoDimEnergyForm::vector_from_bloch(const Eigen::Vector3d& r) const {
  const double x = r(0), y = r(1), z = r(2);
  Complex a, b;
  if (1.0 + z >= 1.0 - z) {
    const double n = std::sqrt(2.0 * (1.0 + z));
    a = Complex((1.0 + z) / n, 0.0);
    b = Complex(x / n, y / n);
  } else {
    const double n = std::sqrt(2.0 * (1.0 - z));
    a = Complex(x / n, -y / n);
    b = Complex((1.0 - z) / n, 0.0);
  }
  return a * e1 + b * e2;
}

Eigen::Vector3d TwoDimEnergyForm::bloch_from_vector(const Vector& phi) const {
  const Complex z1 = (e1.adjoint() * phi)(0);
  const Complex z2 = (e2.adjoint() * phi)(0);
  if ((phi - z1 * e1 - z2 * e2).norm() > 1e-8) {
    throw InvalidParameter("bloch_from_vector: vector is outside the span");
  }
  const Complex off = z1 * std::conj(z2);
  return {2.0 * off.real(), -2.0 * off.imag(), std::norm(z1) - std::norm(z2)};
}

TwoDimEnergyForm two_dim_energy_form(const PureState& psi_a, const PureState& psi_b,
                                     const EnergyObservable& h) {
  if (psi_a.dim() != h.dim() || psi_b.dim() != h.dim()) {
    throw DimensionMismatch("two_dim_energy_form: dimensions differ");
  }
  TwoDimEnergyForm form;
  form.e1 = psi_a.vec();
  const Complex proj = (form.e1.adjoint() * psi_b.vec())(0);
  Vector w = psi_b.vec() - proj * form.e1;
  if (w.squaredNorm() <= tol.gram) {
    throw DependentVectors("Gram determinant is " + std::to_string(w.squaredNorm()));
  }
  form.e2 = w.normalized();
  Matrix h2(2, 2);
  h2(0, 0) = (form.e1.adjoint() * h.mat() * form.e1)(0);
  h2(0, 1) = (form.e1.adjoint() * h.mat() * form.e2)(0);
  h2(1, 0) = std::conj(h2(0, 1));
  h2(1, 1) = (form.e2.adjoint() * h.mat() * form.e2)(0);
  auto [c0, c] = bloch_form(h2);
  form.c0 = c0;
  form.c = c;
  return form;
}

Rank2Split split_rank2_at_energy(double p_a, const PureState& psi_a, double p_b,
                                 const PureState& psi_b, const EnergyObservable& h) {
  if (p_a <= 0.0 || p_b <= 0.0) {
    throw InvalidParameter("split_rank2_at_energy: weights must be positive");
  }
  const TwoDimEnergyForm form = two_dim_energy_form(psi_a, psi_b, h);
  const double w = p_a + p_b;

  Eigen::Vector2cd za((form.e1.adjoint() * psi_a.vec())(0), (form.e2.adjoint() * psi_a.vec())(0));
  Eigen::Vector2cd zb((form.e1.adjoint() * psi_b.vec())(0), (form.e2.adjoint() * psi_b.vec())(0));
  Matrix sigma2 = (p_a * za * za.adjoint() + p_b * zb * zb.adjoint()) / w;
  const Eigen::Vector3d s = bloch_of_state2(sigma2);
  const double pair_mean = form.energy_at(s);

  // Chord through s inside the fixed-energy disk { c . r = pair_mean - c0 }.
  Eigen::Vector3d d;
  const double cnorm = form.c.norm();
  if (cnorm <= 1e-14 * std::max(1.0, std::abs(form.c0))) {
    d = s.norm() > 1e-9 ? Eigen::Vector3d(s.normalized()) : Eigen::Vector3d::UnitZ();
  } else {
    const Eigen::Vector3d n = form.c / cnorm;
    if (std::abs((pair_mean - form.c0) / cnorm) > 1.0 + tol.chord) {
      throw NoChord("pair-mean energy plane misses the Bloch ball");
    }
    Eigen::Vector3d ip = s - s.dot(n) * n;
    d = ip.norm() > 1e-9 ? Eigen::Vector3d(ip.normalized()) : pick_inplane(n);
  }

  const double sd = s.dot(d);
  const double disc = std::max(0.0, sd * sd + 1.0 - s.squaredNorm());
  const double t_plus = -sd + std::sqrt(disc);
  const double t_minus = -sd - std::sqrt(disc);
  if (t_plus - t_minus <= 1e-12) {
    // sigma is already pure: single component duplicated.
    PureState phi = PureState::normalized(form.vector_from_bloch(s.normalized()));
    return {w, phi, 0.0, phi};
  }
  const Eigen::Vector3d u = s + t_plus * d;
  const Eigen::Vector3d v = s + t_minus * d;
  const double alpha = -t_minus / (t_plus - t_minus);
  PureState phi_u = PureState::normalized(form.vector_from_bloch(u));
  PureState phi_v = PureState::normalized(form.vector_from_bloch(v));
  return {w * alpha, phi_u, w * (1.0 - alpha), phi_v};
}

namespace {

struct PoolEntry {
  double p;
  PureState psi;
  double e;
};

}  // namespace

DecompositionCertificate equal_energy_decomposition(const DensityMatrix& rho,
                                                    const EnergyObservable& h) {
  const double e0 = energy(rho, h);
  const Ensemble spectral = spectral_ensemble(rho);

  std::vector<PoolEntry> pool;
  std::vector<PoolEntry> done;
  for (const Ensemble::Component& c : spectral.components) {
    PoolEntry entry{c.weight, c.state, energy(c.state, h)};
    (std::abs(entry.e - e0) <= tol.balance ? done : pool).push_back(entry);
  }

  int merges = 0;
  int guard = 4 * rho.rank() + 8;
  while (!pool.empty() && guard-- > 0) {
    if (pool.size() == 1) {
      // Exact energy conservation forces a lone leftover to carry only
      // floating-point residue; keep it unless it is off-energy dust.
      const PoolEntry& last = pool.front();
      if (std::abs(last.e - e0) <= tol.balance || last.p > 3e-11) done.push_back(last);
      pool.clear();
      break;
    }
    auto lo = std::min_element(pool.begin(), pool.end(),
                               [](const PoolEntry& x, const PoolEntry& y) { return x.e < y.e; });
    auto hi = std::max_element(pool.begin(), pool.end(),
                               [](const PoolEntry& x, const PoolEntry& y) { return x.e < y.e; });
    if (lo->e >= e0 - tol.balance || hi->e <= e0 + tol.balance) {
      // Single-sided residue, same situation as above.
      for (const PoolEntry& entry : pool) {
        if (std::abs(entry.e - e0) <= tol.balance || entry.p > 3e-11) done.push_back(entry);
      }
      pool.clear();
      break;
    }
    PoolEntry a = *lo;
    PoolEntry b = *hi;
    // Weights that merge to the common energy e0: transfer the smaller of the
    // two imbalances completely.
    const double q = b.p * (b.e - e0) / (e0 - a.e);
    double wa, wb;
    if (q <= a.p) {
      wa = q;
      wb = b.p;
    } else {
      wa = a.p;
      wb = a.p * (e0 - a.e) / (b.e - e0);
    }
    // The transfer ratio divides by the energy imbalances, so near-complete
    // consumptions can leave a rounding crumb of leftover weight. Absorb a
    // leftover whenever taking the component whole shifts the merged pair's
    // mean energy negligibly; crumbs always qualify because their size scales
    // inversely with the imbalance that the shift is proportional to.
    const double shift_cap = 1e-11 * (wa + wb) * std::max(1.0, std::abs(e0));
    if ((a.p - wa) * (e0 - a.e) <= shift_cap) wa = a.p;
    if ((b.p - wb) * (b.e - e0) <= shift_cap) wb = b.p;
    Rank2Split split = split_rank2_at_energy(wa, a.psi, wb, b.psi, h);
    ++merges;

    a.p -= wa;
    b.p -= wb;
    if (hi > lo) {
      pool.erase(hi);
      pool.erase(lo);
    } else {
      pool.erase(lo);
      pool.erase(hi);
    }
    if (a.p > tol.prune) pool.push_back(a);
    if (b.p > tol.prune) pool.push_back(b);
    if (split.q_u > tol.prune) done.push_back({split.q_u, split.phi_u, energy(split.phi_u, h)});
    if (split.q_v > tol.prune) done.push_back({split.q_v, split.phi_v, energy(split.phi_v, h)});
  }

  double total = 0.0;
  for (const PoolEntry& entry : done) total += entry.p;
  std::vector<Ensemble::Component> components;
  std::vector<double> energies;
  components.reserve(done.size());
  for (const PoolEntry& entry : done) {
    components.push_back({entry.p / total, entry.psi});
    energies.push_back(entry.e);
  }
  Ensemble ensemble = Ensemble::validated(std::move(components));

  Matrix bary = Matrix::Zero(rho.dim(), rho.dim());
  for (const Ensemble::Component& c : ensemble.components) bary += c.weight * c.state.projector();

  DecompositionCertificate cert{rho,
                                h,
                                std::move(ensemble),
                                std::move(energies),
                                trace_norm(bary - rho.mat()),
                                BudgetMode::Exact,
                                e0,
                                merges};
  return cert;
}

DecompositionCertificate bounded_energy_decomposition(const DensityMatrix& rho,
                                                      const EnergyObservable& h, double budget) {
  if (!member(rho, h, {budget, BudgetMode::AtMost})) {
    throw NotMember("energy " + std::to_string(energy(rho, h)) + " exceeds budget " +
                    std::to_string(budget));
  }
  DecompositionCertificate cert = equal_energy_decomposition(rho, h);
  cert.mode = BudgetMode::AtMost;
  cert.budget = budget;
  return cert;
}

std::pair<DensityMatrix, TailReport> finite_rank_approximation(
    const std::vector<std::pair<double, PureState>>& eigenweights, const EnergyObservable& h,
    int n) {
  const int count = static_cast<int>(eigenweights.size());
  if (count == 0) throw InvalidParameter("finite_rank_approximation: empty component list");
  if (n < 1 || n >= count) {
    throw InvalidParameter("finite_rank_approximation: n must satisfy 1 <= n < components");
  }
  const int d = h.dim();
  double sum = 0.0;
  for (const auto& [p, psi] : eigenweights) {
    if (psi.dim() != d) throw DimensionMismatch("finite_rank_approximation: dimensions differ");
    if (p < -tol.trace) throw InvalidParameter("finite_rank_approximation: negative weight");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol.trace) {
    throw InvalidParameter("finite_rank_approximation: weights sum to " + std::to_string(sum));
  }
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const Complex overlap =
          (eigenweights[i].second.vec().adjoint() * eigenweights[j].second.vec())(0);
      if (std::abs(overlap) > 1e-8) {
        throw InvalidParameter("finite_rank_approximation: components are not orthonormal");
      }
    }
  }

  Matrix full = Matrix::Zero(d, d);
  for (const auto& [p, psi] : eigenweights) full += p * psi.projector();

  Matrix truncated = Matrix::Zero(d, d);
  double tail_weight = 0.0;
  double tail_energy = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto& [p, psi] = eigenweights[i];
    if (i < n) {
      truncated += p * psi.projector();
    } else {
      tail_weight += p;
      tail_energy += p * energy(psi, h);
    }
  }
  const PureState tau = h.ground_state();
  if (tail_weight > tol.prune) truncated += tail_weight * tau.projector();

  TailReport report;
  report.tail_weight = tail_weight;
  report.tail_energy_bound = tail_weight > tol.prune ? tail_energy / tail_weight : h.ground_energy();
  report.tau_energy = energy(tau, h);
  report.trace_distance = trace_norm(truncated - full);
  DensityMatrix rho_n(HermitianMatrix((truncated + truncated.adjoint()) / 2.0));
  return {std::move(rho_n), report};
}

bool verify_certificate(const DecompositionCertificate& cert) {
  const double field_tol = tol.balance;
  if (cert.component_energies.size() != cert.ensemble.components.size()) return false;
  if (static_cast<int>(cert.ensemble.components.size()) > 2 * cert.target.rank()) return false;

  Matrix bary = Matrix::Zero(cert.target.dim(), cert.target.dim());
  for (const Ensemble::Component& c : cert.ensemble.components) {
    if (c.state.dim() != cert.target.dim()) return false;
    bary += c.weight * c.state.projector();
  }
  const double err = trace_norm(bary - cert.target.mat());
  if (err > tol.reconstruction) return false;
  if (std::abs(err - cert.reconstruction_error) > field_tol) return false;

  for (std::size_t i = 0; i < cert.ensemble.components.size(); ++i) {
    const double e = energy(cert.ensemble.components[i].state, cert.observable);
    if (std::abs(e - cert.component_energies[i]) > field_tol) return false;
    if (cert.mode == BudgetMode::Exact) {
      if (std::abs(e - cert.budget) > tol.active) return false;
    } else {
      if (e > cert.budget + tol.active) return false;
    }
  }
  return true;
}

PureState pure_state_at_energy(const PureState& from, const PureState& anchor,
                               const EnergyObservable& h, double target) {
  const TwoDimEnergyForm form = two_dim_energy_form(from, anchor, h);
  const Eigen::Vector3d s = form.bloch_from_vector(from.vec());
  const Eigen::Vector3d r = circle_point(form, target, s);
  return PureState::normalized(form.vector_from_bloch(r));
}

PureState max_form_at_energy(const PureState& u, const PureState& v, const EnergyObservable& h,
                             const Matrix& form_matrix, double target) {
  const TwoDimEnergyForm form = two_dim_energy_form(u, v, h);
  Matrix m2(2, 2);
  m2(0, 0) = (form.e1.adjoint() * form_matrix * form.e1)(0);
  m2(0, 1) = (form.e1.adjoint() * form_matrix * form.e2)(0);
  m2(1, 0) = std::conj(m2(0, 1));
  m2(1, 1) = (form.e2.adjoint() * form_matrix * form.e2)(0);
  auto [m0, m] = bloch_form(m2);
  (void)m0;
  const Eigen::Vector3d r = circle_point(form, target, m);
  return PureState::normalized(form.vector_from_bloch(r));
}

}  // namespace ecstates
