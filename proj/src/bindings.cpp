#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ecstates/constrained_opt.hpp"
#include "ecstates/decomposition.hpp"
#include "ecstates/extremality.hpp"
#include "ecstates/states.hpp"

namespace py = pybind11;
using namespace ecstates;

namespace {

DensityMatrix as_density(const Matrix& m) { return DensityMatrix(HermitianMatrix(m)); }

EnergyObservable as_observable(const Matrix& m) { return EnergyObservable(HermitianMatrix(m)); }

BudgetMode mode_of(const std::string& name) {
  if (name == "exact") return BudgetMode::Exact;
  if (name == "at-most") return BudgetMode::AtMost;
  throw InvalidParameter("mode must be \"at-most\" or \"exact\", got " + name);
}

py::dict report_dict(const ExtremalityReport& r) {
  py::dict d;
  d["is_extreme"] = r.is_extreme;
  d["method"] = r.method == DecisionMethod::Theorem ? "theorem" : "oracle";
  d["perturbation_dim"] = r.perturbation_dim;
  d["energy_active"] = r.energy_active;
  d["witness"] = r.witness ? py::cast(r.witness->mat()) : py::none();
  return d;
}

py::dict certificate_dict(const DecompositionCertificate& cert) {
  py::dict d;
  py::list weights, states, energies;
  for (std::size_t i = 0; i < cert.ensemble.components.size(); ++i) {
    weights.append(cert.ensemble.components[i].weight);
    states.append(py::cast(Vector(cert.ensemble.components[i].state.vec())));
    energies.append(cert.component_energies[i]);
  }
  d["weights"] = weights;
  d["states"] = states;
  d["energies"] = energies;
  d["reconstruction_error"] = cert.reconstruction_error;
  d["mode"] = cert.mode == BudgetMode::Exact ? "exact" : "at-most";
  d["budget"] = cert.budget;
  d["merges"] = cert.merges;
  d["verified"] = verify_certificate(cert);
  return d;
}

KrausChannel as_channel(const std::vector<Matrix>& kraus) { return KrausChannel(kraus); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-constrained quantum state toolkit";

  py::register_exception<Error>(m, "ToolkitError");

  m.def(
      "energy", [](const Matrix& rho, const Matrix& h) { return energy(as_density(rho), as_observable(h)); },
      py::arg("rho"), py::arg("h"), "Tr(H rho) after validating both operators");

  m.def(
      "ground_state",
      [](const Matrix& h) { return Vector(as_observable(h).ground_state().vec()); }, py::arg("h"));

  m.def(
      "oscillator_observable", [](int d) { return Matrix(oscillator_observable(d).mat()); },
      py::arg("d"));

  m.def(
      "gibbs_state",
      [](const Matrix& h, double beta) { return Matrix(gibbs_state(as_observable(h), beta).mat()); },
      py::arg("h"), py::arg("beta"));

  m.def(
      "random_density",
      [](int d, int rank, std::uint64_t seed) { return Matrix(random_density(d, rank, seed).mat()); },
      py::arg("d"), py::arg("rank"), py::arg("seed"));

  m.def(
      "random_pure", [](int d, std::uint64_t seed) { return Vector(random_pure(d, seed).vec()); },
      py::arg("d"), py::arg("seed"));

  m.def(
      "is_extreme_state",
      [](const Matrix& rho, const Matrix& h, double budget) {
        return report_dict(is_extreme_state(as_density(rho), as_observable(h), budget));
      },
      py::arg("rho"), py::arg("h"), py::arg("budget"),
      "Extremality of rho in the states with Tr(H rho) <= budget");

  m.def(
      "is_extreme_subnormalized",
      [](const Matrix& t, const Matrix& h, double budget) {
        return report_dict(
            is_extreme_subnormalized(SubnormalizedOperator(HermitianMatrix(t)), as_observable(h), budget));
      },
      py::arg("t"), py::arg("h"), py::arg("budget"));

  m.def(
      "equal_energy_decomposition",
      [](const Matrix& rho, const Matrix& h) {
        return certificate_dict(equal_energy_decomposition(as_density(rho), as_observable(h)));
      },
      py::arg("rho"), py::arg("h"),
      "Pure-state ensemble with every component at energy Tr(H rho)");

  m.def(
      "bounded_energy_decomposition",
      [](const Matrix& rho, const Matrix& h, double budget) {
        return certificate_dict(
            bounded_energy_decomposition(as_density(rho), as_observable(h), budget));
      },
      py::arg("rho"), py::arg("h"), py::arg("budget"));

  m.def(
      "finite_rank_approximation",
      [](const Matrix& rho, const Matrix& h, int n) {
        DensityMatrix state = as_density(rho);
        EnergyObservable obs = as_observable(h);
        // Full eigenbasis, zero weights included, so n may reach dim - 1.
        std::vector<std::pair<double, PureState>> weights;
        weights.reserve(state.dim());
        for (int i = 0; i < state.dim(); ++i) {
          weights.emplace_back(state.eigenvalues()(i),
                               PureState::normalized(state.eigenvectors().col(i)));
        }
        auto [rho_n, report] = finite_rank_approximation(weights, obs, n);
        py::dict d;
        d["state"] = Matrix(rho_n.mat());
        d["tail_weight"] = report.tail_weight;
        d["tail_energy_bound"] = report.tail_energy_bound;
        d["tau_energy"] = report.tau_energy;
        d["trace_distance"] = report.trace_distance;
        return d;
      },
      py::arg("rho"), py::arg("h"), py::arg("n"),
      "Keep the n largest spectral components, dump the tail onto the ground state");

  m.def(
      "enorm",
      [](const Matrix& a, const Matrix& h, double budget) {
        ENormResult r = enorm(a, as_observable(h), budget);
        py::dict d;
        d["value"] = r.value;
        d["mu_star"] = r.mu_star;
        d["witness"] = Vector(r.witness.vec());
        d["dual_value"] = r.dual_value;
        d["gap"] = r.gap;
        return d;
      },
      py::arg("a"), py::arg("h"), py::arg("budget"),
      "Energy-constrained operator norm via the eigenvalue dual");

  m.def(
      "enorm_primal_oracle",
      [](const Matrix& a, const Matrix& h, double budget, int n_starts, std::uint64_t seed) {
        PrimalAscentResult r = enorm_primal_oracle(a, as_observable(h), budget, n_starts, seed);
        return py::make_tuple(r.value, Vector(r.phi.vec()));
      },
      py::arg("a"), py::arg("h"), py::arg("budget"), py::arg("n_starts") = 32,
      py::arg("seed") = 1);

  m.def(
      "enorm_mixed_oracle",
      [](const Matrix& a, const Matrix& h, double budget, int n_samples, std::uint64_t seed) {
        return enorm_mixed_oracle(a, as_observable(h), budget, n_samples, seed);
      },
      py::arg("a"), py::arg("h"), py::arg("budget"), py::arg("n_samples") = 200,
      py::arg("seed") = 1);

  m.def(
      "apply_channel",
      [](const std::vector<Matrix>& kraus, const Matrix& rho) {
        return Matrix(apply_channel(as_channel(kraus), as_density(rho)).mat());
      },
      py::arg("kraus"), py::arg("rho"));

  m.def(
      "complementary_channel",
      [](const std::vector<Matrix>& kraus) { return complementary_channel(as_channel(kraus)).kraus(); },
      py::arg("kraus"));

  m.def(
      "von_neumann_entropy", [](const Matrix& rho) { return von_neumann_entropy(as_density(rho)); },
      py::arg("rho"), "Entropy in nats");

  m.def(
      "min_output_entropy",
      [](const std::vector<Matrix>& kraus, const Matrix& h, double budget, const std::string& mode,
         int n_starts, std::uint64_t seed) {
        MinEntropyResult r =
            min_output_entropy(as_channel(kraus), as_observable(h), budget, mode_of(mode), n_starts, seed);
        py::dict d;
        d["value"] = r.value;
        d["argmin"] = Vector(r.argmin.vec());
        d["mode"] = r.mode == BudgetMode::Exact ? "exact" : "at-most";
        d["restarts_used"] = r.restarts_used;
        return d;
      },
      py::arg("kraus"), py::arg("h"), py::arg("budget"), py::arg("mode") = "at-most",
      py::arg("n_starts") = 64, py::arg("seed") = 1);

  m.def(
      "convexity_transfer_check",
      [](const std::function<double(const Matrix&)>& f, const std::string& direction,
         const Matrix& h, double budget, int n_mixed, int n_pure, std::uint64_t seed) {
        if (direction != "sup-convex" && direction != "inf-concave") {
          throw InvalidParameter("direction must be \"sup-convex\" or \"inf-concave\"");
        }
        TransferReport r = convexity_transfer_check(
            [&f](const DensityMatrix& rho) { return f(rho.mat()); },
            direction == "sup-convex" ? TransferDirection::SupConvex
                                      : TransferDirection::InfConcave,
            as_observable(h), budget, n_mixed, n_pure, seed);
        py::dict d;
        d["pure_extremum"] = r.pure_extremum;
        d["mixed_extremum"] = r.mixed_extremum;
        d["passed"] = r.passed;
        d["n_mixed"] = r.n_mixed;
        d["n_pure"] = r.n_pure;
        return d;
      },
      py::arg("f"), py::arg("direction"), py::arg("h"), py::arg("budget"), py::arg("n_mixed") = 20,
      py::arg("n_pure") = 20, py::arg("seed") = 1);

  m.def(
      "random_channel",
      [](int dim_in, int dim_out, int n_kraus, std::uint64_t seed) {
        return random_channel(dim_in, dim_out, n_kraus, seed).kraus();
      },
      py::arg("dim_in"), py::arg("dim_out"), py::arg("n_kraus"), py::arg("seed"));
}
