#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecstates/constrained_opt.hpp"
#include "ecstates/decomposition.hpp"
#include "ecstates/document.hpp"
#include "ecstates/extremality.hpp"
#include "ecstates/states.hpp"

namespace {

using namespace ecstates;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

DensityMatrix load_state(const std::string& path) {
  return DensityMatrix(HermitianMatrix(matrix_from_document(load_document(path))));
}

SubnormalizedOperator load_subnormalized(const std::string& path) {
  return SubnormalizedOperator(HermitianMatrix(matrix_from_document(load_document(path))));
}

EnergyObservable load_observable(const std::string& path) {
  return EnergyObservable(HermitianMatrix(matrix_from_document(load_document(path))));
}

Json entries_of_vector(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

Json entries_of_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_document(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

int cmd_energy(const std::string& state_path, const std::string& observable_path) {
  const DensityMatrix rho = load_state(state_path);
  const EnergyObservable h = load_observable(observable_path);
  std::cout << fmt(energy(rho, h)) << "\n";
  return 0;
}

int cmd_extreme(const std::string& state_path, const std::string& observable_path, double budget,
                bool subnormalized, bool oracle) {
  const EnergyObservable h = load_observable(observable_path);
  ExtremalityReport report{false, DecisionMethod::Oracle, 0, false, std::nullopt};
  if (subnormalized) {
    const SubnormalizedOperator t = load_subnormalized(state_path);
    report = oracle ? extreme_oracle(t, h, budget, SetKind::Subnormalized)
                    : is_extreme_subnormalized(t, h, budget);
  } else {
    const DensityMatrix rho = load_state(state_path);
    report = oracle ? extreme_oracle(SubnormalizedOperator(rho), h, budget, SetKind::States)
                    : is_extreme_state(rho, h, budget);
  }
  Json body;
  body["is_extreme"] = report.is_extreme;
  body["method"] = report.method == DecisionMethod::Theorem ? "theorem" : "oracle";
  body["perturbation_dim"] = report.perturbation_dim;
  body["energy_active"] = report.energy_active;
  if (report.witness) body["witness"] = entries_of_matrix(report.witness->mat());
  print_document(report_document("extremality", std::move(body)));
  return report.is_extreme ? 0 : 1;
}

int cmd_decompose(const std::string& state_path, const std::string& observable_path,
                  const std::string& mode, bool budget_set, double budget,
                  const std::string& out_path) {
  const DensityMatrix rho = load_state(state_path);
  const EnergyObservable h = load_observable(observable_path);
  DecompositionCertificate cert = [&] {
    if (mode == "exact") {
      const double e0 = energy(rho, h);
      if (budget_set && std::abs(budget - e0) > tol.active) {
        throw NotMember("exact-mode components sit at the state energy " + std::to_string(e0) +
                        ", not " + std::to_string(budget));
      }
      return equal_energy_decomposition(rho, h);
    }
    if (mode != "at-most") throw InvalidParameter("mode must be at-most or exact, got " + mode);
    if (!budget_set) throw InvalidParameter("at-most mode needs --budget");
    return bounded_energy_decomposition(rho, h, budget);
  }();
  const Json doc = certificate_document(cert);
  print_document(doc);
  if (!out_path.empty()) save_document(doc, out_path);
  return verify_certificate(cert) ? 0 : 1;
}

int cmd_enorm(const std::string& operator_path, const std::string& observable_path, double budget,
              int curve_points, bool emax_set, double emax) {
  const Matrix a = matrix_from_document(load_document(operator_path));
  const EnergyObservable h = load_observable(observable_path);
  if (curve_points > 0) {
    if (!emax_set) throw InvalidParameter("--curve needs --emax");
    const double lo = h.ground_energy();
    std::cout << "E,value\n";
    for (int k = 0; k < curve_points; ++k) {
      const double e =
          curve_points == 1 ? emax : lo + (emax - lo) * static_cast<double>(k) / (curve_points - 1);
      std::cout << fmt(e) << "," << fmt(enorm(a, h, e).value) << "\n";
    }
    return 0;
  }
  const ENormResult result = enorm(a, h, budget);
  std::cout << fmt(result.value) << "\n";
  Json body;
  body["value"] = result.value;
  body["mu_star"] = result.mu_star;
  body["dual_value"] = result.dual_value;
  body["gap"] = result.gap;
  body["witness"] = entries_of_vector(result.witness.vec());
  body["witness_energy"] = energy(result.witness, h);
  print_document(report_document("enorm", std::move(body)));
  return 0;
}

int cmd_minent(const std::string& channel_path, const std::string& observable_path, double budget,
               const std::string& mode, int starts, std::uint64_t seed) {
  const KrausChannel channel = channel_from_document(load_document(channel_path));
  const EnergyObservable h = load_observable(observable_path);
  const BudgetMode budget_mode = [&] {
    if (mode == "exact") return BudgetMode::Exact;
    if (mode == "at-most") return BudgetMode::AtMost;
    throw InvalidParameter("mode must be at-most or exact, got " + mode);
  }();
  const MinEntropyResult result = min_output_entropy(channel, h, budget, budget_mode, starts, seed);
  std::cout << fmt(result.value) << "\n";
  Json body;
  body["value_nats"] = result.value;
  body["value_bits"] = result.value / std::log(2.0);
  body["mode"] = mode;
  body["restarts_used"] = result.restarts_used;
  body["argmin"] = entries_of_vector(result.argmin.vec());
  body["argmin_energy"] = energy(result.argmin, h);
  print_document(report_document("min-output-entropy", std::move(body)));
  return 0;
}

int cmd_approx(const std::string& state_path, const std::string& observable_path,
               const std::vector<int>& ranks) {
  if (ranks.empty()) throw InvalidParameter("no ranks given");
  const DensityMatrix rho = load_state(state_path);
  const EnergyObservable h = load_observable(observable_path);
  std::vector<std::pair<double, PureState>> components;
  components.reserve(rho.dim());
  for (int i = 0; i < rho.dim(); ++i) {
    components.emplace_back(rho.eigenvalues()(i),
                            PureState::normalized(rho.eigenvectors().col(i)));
  }
  std::cout << "n,trace_distance,energy\n";
  Json rows = Json::array();
  for (const int n : ranks) {
    const auto [rho_n, report] = finite_rank_approximation(components, h, n);
    const double e_n = energy(rho_n, h);
    std::cout << n << "," << fmt(report.trace_distance) << "," << fmt(e_n) << "\n";
    Json row;
    row["n"] = n;
    row["trace_distance"] = report.trace_distance;
    row["tail_weight"] = report.tail_weight;
    row["energy"] = e_n;
    rows.push_back(std::move(row));
  }
  Json body;
  body["rows"] = std::move(rows);
  print_document(report_document("finite-rank-approximation", std::move(body)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-constrained quantum state toolkit"};
  app.require_subcommand(1);

  std::string state_path, observable_path, operator_path, channel_path, out_path;
  std::string mode = "exact";
  std::string minent_mode = "at-most";
  double budget = 0.0, emax = 0.0;
  bool subnormalized = false, oracle = false;
  int curve_points = 0, starts = 64;
  std::uint64_t seed = 1;
  std::vector<int> ranks;

  CLI::App* energy_cmd = app.add_subcommand("energy", "Print Tr(H rho)");
  energy_cmd->add_option("--state", state_path)->required();
  energy_cmd->add_option("--observable", observable_path)->required();

  CLI::App* extreme_cmd =
      app.add_subcommand("extreme", "Extremality in the bounded-energy state set");
  extreme_cmd->add_option("--state", state_path)->required();
  extreme_cmd->add_option("--observable", observable_path)->required();
  extreme_cmd->add_option("--budget", budget)->required();
  extreme_cmd->add_flag("--subnormalized", subnormalized,
                        "Test in the subnormalized set (trace <= 1)");
  extreme_cmd->add_flag("--oracle", oracle, "Force the perturbation-space oracle");

  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "Pure-state decomposition with energy control");
  decompose_cmd->add_option("--state", state_path)->required();
  decompose_cmd->add_option("--observable", observable_path)->required();
  CLI::Option* budget_opt = decompose_cmd->add_option("--budget", budget);
  decompose_cmd->add_option("--mode", mode, "exact (default) or at-most");
  decompose_cmd->add_option("--out", out_path, "Also write the certificate to this file");

  CLI::App* enorm_cmd = app.add_subcommand("enorm", "Energy-constrained operator norm");
  enorm_cmd->add_option("--operator", operator_path)->required();
  enorm_cmd->add_option("--observable", observable_path)->required();
  enorm_cmd->add_option("--budget", budget)->required();
  enorm_cmd->add_option("--curve", curve_points, "Emit a CSV curve with this many points");
  CLI::Option* emax_opt = enorm_cmd->add_option("--emax", emax, "Upper end of the curve grid");

  CLI::App* minent_cmd = app.add_subcommand("minent", "Constrained minimal output entropy");
  minent_cmd->add_option("--channel", channel_path)->required();
  minent_cmd->add_option("--observable", observable_path)->required();
  minent_cmd->add_option("--budget", budget)->required();
  minent_cmd->add_option("--mode", minent_mode, "at-most (default) or exact");
  minent_cmd->add_option("--starts", starts);
  minent_cmd->add_option("--seed", seed);

  CLI::App* approx_cmd = app.add_subcommand("approx", "Finite-rank approximation demo");
  approx_cmd->add_option("--state", state_path)->required();
  approx_cmd->add_option("--observable", observable_path)->required();
  approx_cmd->add_option("--ranks", ranks, "Comma-separated ranks")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*energy_cmd) return cmd_energy(state_path, observable_path);
    if (*extreme_cmd)
      return cmd_extreme(state_path, observable_path, budget, subnormalized, oracle);
    if (*decompose_cmd)
      return cmd_decompose(state_path, observable_path, mode, budget_opt->count() > 0, budget,
                           out_path);
    if (*enorm_cmd)
      return cmd_enorm(operator_path, observable_path, budget, curve_points, emax_opt->count() > 0,
                       emax);
    if (*minent_cmd)
      return cmd_minent(channel_path, observable_path, budget, minent_mode, starts, seed);
    if (*approx_cmd) return cmd_approx(state_path, observable_path, ranks);
  } catch (const Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
