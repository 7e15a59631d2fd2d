#include "ecstates/constrained_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "ecstates/decomposition.hpp"

namespace ecstates {

namespace {

Matrix hermitized(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

std::pair<double, Eigen::Vector3d> bloch_form2(const Matrix& m2) {
  const double m0 = m2.trace().real() / 2.0;
  Eigen::Vector3d m(m2(0, 1).real(), -m2(0, 1).imag(), (m2(0, 0).real() - m2(1, 1).real()) / 2.0);
  return {m0, m};
}

Matrix compress(const Matrix& m, const Matrix& basis) {
  return hermitized(basis.adjoint() * m * basis);
}

double quad(const Matrix& m, const Vector& v) { return (v.adjoint() * m * v)(0).real(); }

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& eng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(eng), gauss(eng));
  }
  return g;
}

void require_operator(const Matrix& a, const EnergyObservable& h) {
  if (a.rows() != a.cols() || a.rows() != h.dim()) {
    throw DimensionMismatch("operator is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", observable dim " +
                            std::to_string(h.dim()));
  }
}

void require_feasible(const EnergyObservable& h, double budget) {
  if (budget < h.ground_energy() - tol.active) {
    throw InfeasibleBudget("budget " + std::to_string(budget) + " below ground energy " +
                           std::to_string(h.ground_energy()));
  }
}

// Unit vectors spanning the eigenspace of the largest eigenvalue.
Matrix top_eigenspace(const EigenSystem& sys, double rel_cut) {
  const int d = static_cast<int>(sys.values.size());
  const double top = sys.values(d - 1);
  const double cut = top - rel_cut * std::max(1.0, std::abs(top));
  int first = d - 1;
  while (first > 0 && sys.values(first - 1) >= cut) --first;
  return sys.vectors.rightCols(d - first);
}

// Max-M eigenvector of m - mu*h whose H-expectation is minimal over the
// (possibly degenerate) top eigenspace.
Vector top_vector_min_energy(const Matrix& m, const EnergyObservable& h, double mu) {
  EigenSystem sys = eigh(hermitized(m - mu * h.mat()));
  Matrix basis = top_eigenspace(sys, 1e-12);
  if (basis.cols() == 1) return basis.col(0);
  EigenSystem hc = eigh(compress(h.mat(), basis));
  return basis * hc.vectors.col(0);
}

// Largest value of the restriction of `m` to the unit sphere of span{u, v}
// subject to <phi|H|phi> <= budget; exact via the Bloch parametrization.
PureState best_in_span(const Vector& u, const Vector& v, const EnergyObservable& h,
                       const Matrix& m, double budget) {
  const TwoDimEnergyForm form =
      two_dim_energy_form(PureState::normalized(u), PureState::normalized(v), h);
  Matrix m2(2, 2);
  m2(0, 0) = (form.e1.adjoint() * m * form.e1)(0);
  m2(0, 1) = (form.e1.adjoint() * m * form.e2)(0);
  m2(1, 0) = std::conj(m2(0, 1));
  m2(1, 1) = (form.e2.adjoint() * m * form.e2)(0);
  auto [m0, mv] = bloch_form2(m2);
  (void)m0;
  Eigen::Vector3d r;
  if (mv.norm() <= 1e-14) {
    r = form.bloch_from_vector(u.normalized());
    if (form.energy_at(r) > budget) r = -form.c.normalized();
  } else {
    r = mv.normalized();
  }
  if (form.energy_at(r) > budget) {
    return max_form_at_energy(PureState::normalized(u), PureState::normalized(v), h, m, budget);
  }
  return PureState::normalized(form.vector_from_bloch(r));
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidParameter("channel needs at least one Kraus operator");
  const auto rows = kraus_.front().rows();
  const auto cols = kraus_.front().cols();
  if (rows < 1 || cols < 1) throw InvalidParameter("empty Kraus operator");
  Matrix sum = Matrix::Zero(cols, cols);
  for (const Matrix& k : kraus_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionMismatch("Kraus operators have mixed shapes");
    }
    sum += k.adjoint() * k;
  }
  const double defect = (sum - Matrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (defect > tol.channel) {
    throw InvalidParameter("channel is not trace preserving, completeness defect " +
                           std::to_string(defect));
  }
}

DensityMatrix apply_channel(const KrausChannel& phi, const DensityMatrix& rho) {
  if (rho.dim() != phi.dim_in()) {
    throw DimensionMismatch("state dim " + std::to_string(rho.dim()) + ", channel input dim " +
                            std::to_string(phi.dim_in()));
  }
  Matrix out = Matrix::Zero(phi.dim_out(), phi.dim_out());
  for (const Matrix& k : phi.kraus()) out += k * rho.mat() * k.adjoint();
  out = hermitized(out);
  out /= out.trace().real();  // absorb the completeness defect
  return DensityMatrix(HermitianMatrix(out));
}

KrausChannel complementary_channel(const KrausChannel& phi) {
  const int k = static_cast<int>(phi.kraus().size());
  const int din = phi.dim_in();
  const int dout = phi.dim_out();
  // Environment side of V|psi> = sum_i (K_i|psi>) (x) |i>: one Kraus operator
  // per output basis vector, rows indexed by the environment.
  std::vector<Matrix> hat(dout, Matrix::Zero(k, din));
  for (int m = 0; m < dout; ++m) {
    for (int i = 0; i < k; ++i) hat[m].row(i) = phi.kraus()[i].row(m);
  }
  return KrausChannel(std::move(hat));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    const double lam = rho.eigenvalues()(i);
    if (lam > tol.entropy_floor) s -= lam * std::log(lam);
  }
  return std::max(0.0, s);
}

ENormResult enorm(const Matrix& a, const EnergyObservable& h, double budget) {
  require_operator(a, h);
  require_feasible(h, budget);
  const int d = h.dim();
  const Matrix m = hermitized(a.adjoint() * a);
  const EigenSystem msys = eigh(m);
  const double lam_max = msys.values(d - 1);
  const double lam_min = msys.values(0);

  // Fast path: the unconstrained norm is attained by a feasible vector iff the
  // minimal H-expectation over the top eigenspace of M fits the budget.
  {
    Matrix basis = top_eigenspace(msys, 1e-12);
    EigenSystem hc = eigh(compress(h.mat(), basis));
    if (hc.values(0) <= budget + 1e-12) {
      PureState witness = PureState::normalized(basis * hc.vectors.col(0));
      const double primal = quad(m, witness.vec());
      return {std::sqrt(std::max(0.0, lam_max)), 0.0, witness, lam_max, lam_max - primal};
    }
  }

  const double gap_e = budget - h.ground_energy();
  if (gap_e <= 1e-12) {
    // Budget pinned at the ground energy: feasible vectors live in the ground
    // eigenspace of H, where the problem is an unconstrained eigenproblem.
    EigenSystem hsys = eigh(h.mat());
    const double cut =
        h.ground_energy() + 1e-9 * std::max(1.0, std::abs(h.ground_energy()));
    int count = 0;
    while (count < d && hsys.values(count) <= cut) ++count;
    Matrix basis = hsys.vectors.leftCols(count);
    EigenSystem mc = eigh(compress(m, basis));
    PureState witness = PureState::normalized(basis * mc.vectors.col(count - 1));
    const double primal = quad(m, witness.vec());
    const double dual = mc.values(count - 1);
    return {std::sqrt(std::max(0.0, primal)), 0.0, witness, dual, dual - primal};
  }

  // Dual descent: g(mu) = lambda_max(M - mu H) + mu E is convex on mu >= 0 and
  // increasing beyond mu_max, minimized by golden section.
  const auto g = [&](double mu) {
    return eigh(hermitized(m - mu * h.mat())).values(d - 1) + mu * budget;
  };
  const double mu_cap = (lam_max - lam_min) / gap_e;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = std::max(mu_cap, tol.mu);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  double best_mu = f1 <= f2 ? x1 : x2;
  double best_g = std::min(f1, f2);
  while (hi - lo > tol.mu) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = g(x2);
    }
    if (f1 < best_g) best_g = f1, best_mu = x1;
    if (f2 < best_g) best_g = f2, best_mu = x2;
  }
  const double mu_star = best_mu;
  const double dual = best_g;

  // Witness recovery: best feasible vector among the ground state, the
  // min-energy top eigenvector at mu_star, the in-eigenspace energy chord, and
  // a chord between eigenvectors bracketing the budget along mu.
  const auto energy_of = [&](const Vector& v) { return quad(h.mat(), v); };
  Vector best_w = h.ground_state().vec();
  double best_val = quad(m, best_w);
  const auto consider = [&](const Vector& w) {
    if (energy_of(w) > budget + 1e-9) return;
    const double val = quad(m, w);
    if (val > best_val) {
      best_val = val;
      best_w = w;
    }
  };

  {
    EigenSystem sys = eigh(hermitized(m - mu_star * h.mat()));
    Matrix basis = top_eigenspace(sys, 1e-12);
    EigenSystem hc = eigh(compress(h.mat(), basis));
    const int n = static_cast<int>(basis.cols());
    Vector wmin = basis * hc.vectors.col(0);
    consider(wmin);
    if (n > 1) {
      Vector wmax = basis * hc.vectors.col(n - 1);
      if (energy_of(wmin) < budget && energy_of(wmax) > budget) {
        consider(max_form_at_energy(PureState::normalized(wmin), PureState::normalized(wmax), h, m,
                                    budget)
                     .vec());
      }
    }
  }

  {
    // e(mu) = <H> of the min-energy top eigenvector decreases in mu; bracket
    // the budget and combine the two sides on the energy-E circle.
    double mu_lo = 0.0;  // infeasible side (fast path failed)
    double mu_hi = mu_star;
    Vector w_hi = top_vector_min_energy(m, h, mu_hi);
    int expand = 0;
    while (energy_of(w_hi) > budget && expand++ < 60) {
      mu_lo = mu_hi;
      mu_hi = std::max(2.0 * mu_hi, 1.0);
      w_hi = top_vector_min_energy(m, h, mu_hi);
    }
    if (energy_of(w_hi) <= budget) {
      consider(w_hi);
      Vector w_lo = top_vector_min_energy(m, h, mu_lo);
      for (int it = 0; it < 100 && mu_hi - mu_lo > 1e-12 * std::max(1.0, mu_hi); ++it) {
        const double mid = (mu_lo + mu_hi) / 2.0;
        Vector w = top_vector_min_energy(m, h, mid);
        if (energy_of(w) > budget) {
          mu_lo = mid;
          w_lo = w;
        } else {
          mu_hi = mid;
          w_hi = w;
        }
      }
      consider(w_hi);
      try {
        consider(best_in_span(w_lo, w_hi, h, m, budget).vec());
      } catch (const Error&) {
        // bracket collapsed onto one vector; w_hi already considered
      }
    }
  }

  PureState witness = PureState::normalized(best_w);
  const double primal = quad(m, witness.vec());
  return {std::sqrt(std::max(0.0, primal)), mu_star, witness, dual, dual - primal};
}

namespace {

// Pull an infeasible unit vector back to the energy-E circle of its span with
// the ground state.
PureState restore_at_most(const PureState& phi, const PureState& ground,
                          const EnergyObservable& h, double budget) {
  if (energy(phi, h) <= budget) return phi;
  return pure_state_at_energy(phi, ground, h, budget);
}

}  // namespace

PrimalAscentResult enorm_primal_oracle(const Matrix& a, const EnergyObservable& h, double budget,
                                       int n_starts, std::uint64_t seed) {
  require_operator(a, h);
  require_feasible(h, budget);
  const int d = h.dim();
  const Matrix m = hermitized(a.adjoint() * a);
  const PureState ground = h.ground_state();
  const EigenSystem msys = eigh(m);

  const auto value_of = [&](const PureState& phi) { return quad(m, phi.vec()); };

  PrimalAscentResult best{value_of(ground), ground};
  std::mt19937_64 eng(seed);

  // Deterministic spectral seeds: the constrained maximizer is a top
  // eigenvector of M - mu H for some multiplier in [0, mu_max], so seeding a
  // start from each grid point puts at least one start in its basin.
  std::vector<PureState> inits;
  if (n_starts > 0) {
    const double espan = budget - h.ground_energy();
    const double mu_max = (msys.values(d - 1) - msys.values(0)) / std::max(espan, 1e-12);
    for (int k = 0; k < 8; ++k) {
      const Matrix shifted = hermitized(m - (mu_max * k / 7.0) * h.mat());
      inits.push_back(PureState::normalized(eigh(shifted).vectors.col(d - 1)));
    }
  }
  for (int s = 0; s < n_starts; ++s) inits.push_back(random_pure(d, eng()));

  for (const PureState& init : inits) {
    PureState phi = restore_at_most(init, ground, h, budget);
    double fval = value_of(phi);

    double eta = 0.1;
    for (int it = 0; it < 200; ++it) {
      Vector grad = 2.0 * (m * phi.vec() - fval * phi.vec());
      const double e = energy(phi, h);
      if (e >= budget - 1e-12) {
        Vector n = h.mat() * phi.vec() - e * phi.vec();
        const double nn = n.squaredNorm();
        const double push = (grad.adjoint() * n)(0).real();
        if (nn > 1e-20 && push > 0.0) grad -= (push / nn) * n;
      }
      const double gnorm = grad.norm();
      if (gnorm < 1e-10) break;

      bool moved = false;
      for (int ls = 0; ls < 25; ++ls) {
        Vector step = phi.vec() + eta * grad;
        PureState cand = restore_at_most(PureState::normalized(step), ground, h, budget);
        const double cval = value_of(cand);
        if (cval > fval + 1e-14) {
          phi = cand;
          fval = cval;
          eta *= 1.3;
          moved = true;
          break;
        }
        eta /= 2.0;
      }
      if (!moved) break;
    }

    // Polish: exact maximization over two-dimensional spans. Partners are the
    // eigenvectors of M and, when the energy bound is active, of M - mu H at
    // the multiplier estimated from the current iterate (the stationarity
    // residual is aligned with the constraint normal at an optimum).
    for (int sweep = 0; sweep < 12; ++sweep) {
      bool improved = false;
      Matrix partners = msys.vectors;
      const double e = energy(phi, h);
      if (e >= budget - 1e-10) {
        const Vector residual = m * phi.vec() - fval * phi.vec();
        const Vector normal = h.mat() * phi.vec() - e * phi.vec();
        const double nn = normal.squaredNorm();
        if (nn > 1e-20) {
          const double mu_hat = std::max(0.0, (residual.adjoint() * normal)(0).real() / nn);
          const EigenSystem ssys = eigh(hermitized(m - mu_hat * h.mat()));
          partners.conservativeResize(d, 2 * d);
          partners.rightCols(d) = ssys.vectors;
          if (d >= 2) {
            // Chord across the near-degenerate top pair of M - mu H: at the
            // optimum the maximizer lives in this two-dimensional eigenspace,
            // so iterating the estimate converges where axis polishing stalls.
            try {
              PureState cand = best_in_span(ssys.vectors.col(d - 1), ssys.vectors.col(d - 2), h, m,
                                            budget);
              const double cval = value_of(cand);
              if (cval > fval + 1e-13) {
                phi = cand;
                fval = cval;
                improved = true;
              }
            } catch (const Error&) {
            }
          }
        }
      }
      for (Eigen::Index k = 0; k < partners.cols(); ++k) {
        try {
          PureState cand = best_in_span(phi.vec(), partners.col(k), h, m, budget);
          const double cval = value_of(cand);
          if (cval > fval + 1e-13) {
            phi = cand;
            fval = cval;
            improved = true;
          }
        } catch (const Error&) {
        }
      }
      if (!improved) break;
    }

    if (fval > best.value) best = {fval, phi};
  }

  best.value = std::sqrt(std::max(0.0, best.value));
  return best;
}

double enorm_mixed_oracle(const Matrix& a, const EnergyObservable& h, double budget, int n_samples,
                          std::uint64_t seed) {
  require_operator(a, h);
  require_feasible(h, budget);
  const int d = h.dim();
  const Matrix m = hermitized(a.adjoint() * a);
  const Matrix gproj = h.ground_state().projector();
  const double ground = h.ground_energy();

  const auto value_of = [&](const Matrix& rho) {
    return std::sqrt(std::max(0.0, (m * rho).trace().real()));
  };

  double best = value_of(gproj);
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> rank_pick(1, d);
  for (int i = 0; i < n_samples; ++i) {
    const int rank = rank_pick(eng);
    Matrix rho = random_density(d, rank, eng()).mat();
    const double e = (h.mat() * rho).trace().real();
    if (e > budget) {
      const double t = (e - budget) / (e - ground);
      rho = (1.0 - t) * rho + t * gproj;
    }
    best = std::max(best, value_of(rho));
  }
  return best;
}

namespace {

struct EntropyObjective {
  const KrausChannel& channel;
  const EnergyObservable& h;
  double budget;
  BudgetMode mode;
  PureState ground;
  PureState top;

  PureState restore(const PureState& phi) const {
    const double e = energy(phi, h);
    if (mode == BudgetMode::AtMost) {
      if (e <= budget) return phi;
      return pure_state_at_energy(phi, ground, h, budget);
    }
    if (std::abs(e - budget) <= 1e-12) return phi;
    try {
      return pure_state_at_energy(phi, e > budget ? ground : top, h, budget);
    } catch (const DependentVectors&) {
      return pure_state_at_energy(phi, e > budget ? top : ground, h, budget);
    }
  }

  double entropy_of(const PureState& phi) const {
    Matrix out = Matrix::Zero(channel.dim_out(), channel.dim_out());
    for (const Matrix& k : channel.kraus()) {
      Vector kv = k * phi.vec();
      out += kv * kv.adjoint();
    }
    const double tr = out.trace().real();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitized(out / tr), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < out.rows(); ++i) {
      const double lam = es.eigenvalues()(i);
      if (lam > tol.entropy_floor) s -= lam * std::log(lam);
    }
    return std::max(0.0, s);
  }

  // Objective over the unconstrained real parametrization.
  double eval(const Eigen::VectorXd& x, PureState* out = nullptr) const {
    const int d = h.dim();
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = Complex(x(i), x(d + i));
    if (v.norm() < 1e-8) return std::numeric_limits<double>::infinity();
    try {
      PureState phi = restore(PureState::normalized(v));
      if (out) *out = phi;
      return entropy_of(phi);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }
};

}  // namespace

MinEntropyResult min_output_entropy(const KrausChannel& phi, const EnergyObservable& h,
                                    double budget, BudgetMode mode, int n_starts,
                                    std::uint64_t seed) {
  if (phi.dim_in() != h.dim()) {
    throw DimensionMismatch("channel input dim " + std::to_string(phi.dim_in()) +
                            ", observable dim " + std::to_string(h.dim()));
  }
  require_feasible(h, budget);
  if (mode == BudgetMode::Exact && budget > h.max_energy() + tol.active) {
    throw InfeasibleBudget("exact budget " + std::to_string(budget) + " above top energy " +
                           std::to_string(h.max_energy()));
  }
  const int d = h.dim();
  const EigenSystem hsys = eigh(h.mat());
  EntropyObjective obj{phi,
                       h,
                       budget,
                       mode,
                       h.ground_state(),
                       PureState::normalized(hsys.vectors.col(d - 1))};

  const auto pack = [&](const PureState& p) {
    Eigen::VectorXd x(2 * d);
    for (int i = 0; i < d; ++i) {
      x(i) = p.vec()(i).real();
      x(d + i) = p.vec()(i).imag();
    }
    return x;
  };

  PureState best_phi = obj.restore(obj.ground);
  double best_val = obj.entropy_of(best_phi);
  int restarts_used = 0;

  std::mt19937_64 eng(seed);
  for (int s = 0; s < n_starts && best_val > tol.entropy_floor; ++s) {
    ++restarts_used;
    Eigen::VectorXd x;
    try {
      x = pack(obj.restore(random_pure(d, eng())));
    } catch (const Error&) {
      continue;
    }
    PureState cur = obj.ground;
    double fval = obj.eval(x, &cur);
    if (!std::isfinite(fval)) continue;

    double eta = 0.1;
    const double step = tol.fd_step;
    for (int it = 0; it < 250; ++it) {
      Eigen::VectorXd grad(2 * d);
      for (int k = 0; k < 2 * d; ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += step;
        xm(k) -= step;
        grad(k) = (obj.eval(xp) - obj.eval(xm)) / (2.0 * step);
      }
      const double gnorm = grad.norm();
      if (gnorm < 1e-10 || !std::isfinite(gnorm)) break;

      bool moved = false;
      for (int ls = 0; ls < 25; ++ls) {
        Eigen::VectorXd xc = x - eta * grad;
        PureState cand = cur;
        const double cval = obj.eval(xc, &cand);
        if (cval < fval - 1e-14) {
          x = pack(cand);
          cur = cand;
          fval = cval;
          eta *= 1.3;
          moved = true;
          break;
        }
        eta /= 2.0;
      }
      if (!moved || fval <= tol.entropy_floor) break;
    }

    if (fval < best_val) {
      best_val = fval;
      best_phi = cur;
    }
  }

  const double value = von_neumann_entropy(
      apply_channel(phi, DensityMatrix(HermitianMatrix(best_phi.projector()))));
  return {value, best_phi, mode, restarts_used};
}

TransferReport convexity_transfer_check(const std::function<double(const DensityMatrix&)>& f,
                                        TransferDirection direction, const EnergyObservable& h,
                                        double budget, int n_mixed, int n_pure,
                                        std::uint64_t seed) {
  require_feasible(h, budget);
  const int d = h.dim();
  const PureState ground = h.ground_state();
  const Matrix gproj = ground.projector();
  const double ground_e = h.ground_energy();

  std::vector<DensityMatrix> mixed;
  std::vector<DensityMatrix> pure;
  std::mt19937_64 eng(seed);
  std::uniform_int_distribution<int> rank_pick(1, d);

  for (int i = 0; i < n_pure; ++i) {
    PureState p = restore_at_most(random_pure(d, eng()), ground, h, budget);
    pure.emplace_back(HermitianMatrix(p.projector()));
  }

  for (int i = 0; i < n_mixed; ++i) {
    const int rank = rank_pick(eng);
    Matrix rho = random_density(d, rank, eng()).mat();
    const double e = (h.mat() * rho).trace().real();
    if (e > budget) {
      const double t = (e - budget) / (e - ground_e);
      rho = hermitized((1.0 - t) * rho + t * gproj);
    }
    DensityMatrix member{HermitianMatrix(rho)};
    // The matching pure witnesses: an equal-energy decomposition of each mixed
    // sample is feasible component by component.
    DecompositionCertificate cert = equal_energy_decomposition(member, h);
    for (const Ensemble::Component& c : cert.ensemble.components) {
      pure.emplace_back(HermitianMatrix(c.state.projector()));
    }
    mixed.push_back(std::move(member));
  }

  TransferReport report;
  report.n_mixed = static_cast<int>(mixed.size());
  report.n_pure = static_cast<int>(pure.size());
  const bool sup = direction == TransferDirection::SupConvex;
  double mix_ext = sup ? -std::numeric_limits<double>::infinity()
                       : std::numeric_limits<double>::infinity();
  double pure_ext = mix_ext;
  for (const DensityMatrix& rho : mixed) {
    mix_ext = sup ? std::max(mix_ext, f(rho)) : std::min(mix_ext, f(rho));
  }
  for (const DensityMatrix& rho : pure) {
    pure_ext = sup ? std::max(pure_ext, f(rho)) : std::min(pure_ext, f(rho));
  }
  if (mixed.empty()) mix_ext = sup ? -1e300 : 1e300;
  if (pure.empty()) pure_ext = sup ? -1e300 : 1e300;
  report.mixed_extremum = mix_ext;
  report.pure_extremum = pure_ext;
  report.passed = sup ? pure_ext >= mix_ext - 1e-6 : pure_ext <= mix_ext + 1e-6;
  return report;
}

KrausChannel random_channel(int dim_in, int dim_out, int n_kraus, std::uint64_t seed) {
  if (dim_in < 1 || dim_out < 1 || n_kraus < 1) {
    throw InvalidParameter("channel dimensions must be positive");
  }
  if (dim_out * n_kraus < dim_in) {
    throw InvalidParameter("no isometry into " + std::to_string(dim_out * n_kraus) +
                           " dimensions from " + std::to_string(dim_in));
  }
  std::mt19937_64 eng(seed);
  Matrix g = gaussian_matrix(dim_out * n_kraus, dim_in, eng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim_out * n_kraus, dim_in);
  std::vector<Matrix> kraus;
  kraus.reserve(n_kraus);
  for (int i = 0; i < n_kraus; ++i) kraus.push_back(q.block(i * dim_out, 0, dim_out, dim_in));
  return KrausChannel(std::move(kraus));
}

}  // namespace ecstates
