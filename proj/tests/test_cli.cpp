#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "ecstates/constrained_opt.hpp"
#include "ecstates/document.hpp"
#include "test_helpers.hpp"

using namespace ecstates;
using namespace ecstates::testing;

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ecstates_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path err_path = work_dir() / ("stderr_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(ECSTATES_CLI_PATH) + " " + args + " 2>" + err_path.string();
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  std::ifstream err_in(err_path);
  std::stringstream err;
  err << err_in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err.str()};
}

std::string write_doc(const std::string& name, const Json& doc) {
  const fs::path path = work_dir() / name;
  save_document(doc, path.string());
  return path.string();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// Report document printed after the value line.
Json trailing_document(const std::string& text, std::size_t skip_lines) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < skip_lines; ++i) pos = text.find('\n', pos) + 1;
  return Json::parse(text.substr(pos));
}

struct Fixtures {
  std::string half = write_doc("half.json", matrix_document(diag2(0.5, 0.5)));
  std::string pure0 = write_doc("pure0.json", matrix_document(diag2(1, 0)));
  std::string number2 = write_doc("number2.json", matrix_document(diag2(0, 1)));
  std::string number3 = write_doc("number3.json", matrix_document(diag3(0, 1, 2)));
  std::string a12 = write_doc("a12.json", matrix_document(diag2(1, 2)));
  std::string bad_state = write_doc("bad_state.json", matrix_document(diag2(1.1, -0.1)));
};

const Fixtures& fixtures() {
  static const Fixtures f;
  return f;
}

}  // namespace

TEST_CASE("energy command") {
  const Fixtures& f = fixtures();
  SUBCASE("prints the trace pairing at fixed width") {
    const RunResult r = run_cli("energy --state " + f.half + " --observable " + f.number2);
    CHECK(r.exit_code == 0);
    CHECK(first_line(r.out) == "0.500000000000");
  }
  SUBCASE("dimension mismatch exits 2 with the error name") {
    const RunResult r = run_cli("energy --state " + f.half + " --observable " + f.number3);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("DimensionMismatch") != std::string::npos);
  }
  SUBCASE("invalid state exits 2 with the error name") {
    const RunResult r = run_cli("energy --state " + f.bad_state + " --observable " + f.number2);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("NotPositive") != std::string::npos);
  }
}

TEST_CASE("extreme command") {
  const Fixtures& f = fixtures();
  SUBCASE("pure feasible state exits 0") {
    const RunResult r =
        run_cli("extreme --state " + f.pure0 + " --observable " + f.number2 + " --budget 0.5");
    CHECK(r.exit_code == 0);
    const Json doc = trailing_document(r.out, 0);
    CHECK(doc.at("kind") == "report");
    CHECK(doc.at("body").at("is_extreme") == true);
  }
  SUBCASE("mixed state exits 1 and reports a witness") {
    const RunResult r =
        run_cli("extreme --state " + f.half + " --observable " + f.number2 + " --budget 0.5");
    CHECK(r.exit_code == 1);
    const Json doc = trailing_document(r.out, 0);
    CHECK(doc.at("body").at("is_extreme") == false);
    CHECK(doc.at("body").contains("witness"));
    CHECK(doc.at("body").at("perturbation_dim").get<int>() > 0);
  }
  SUBCASE("oracle flag switches the method") {
    const RunResult r = run_cli("extreme --state " + f.pure0 + " --observable " + f.number2 +
                                " --budget 0.5 --oracle");
    CHECK(r.exit_code == 0);
    CHECK(trailing_document(r.out, 0).at("body").at("method") == "oracle");
  }
  SUBCASE("subnormalized flag accepts trace below one") {
    const std::string t = write_doc("sub.json", matrix_document(diag2(0.3, 0.3)));
    const RunResult r = run_cli("extreme --state " + t + " --observable " + f.number2 +
                                " --budget 1.0 --subnormalized");
    CHECK(r.exit_code == 1);
  }
  SUBCASE("infeasible state exits 2") {
    const RunResult r =
        run_cli("extreme --state " + f.half + " --observable " + f.number2 + " --budget 0.4");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("NotMember") != std::string::npos);
  }
}

TEST_CASE("decompose command") {
  const Fixtures& f = fixtures();
  SUBCASE("maximally mixed qubit yields two components at the mean energy") {
    const RunResult r = run_cli("decompose --state " + f.half + " --observable " + f.number2);
    CHECK(r.exit_code == 0);
    const Json doc = trailing_document(r.out, 0);
    CHECK(doc.at("kind") == "certificate");
    CHECK(doc.at("mode") == "exact");
    REQUIRE(doc.at("components").size() == 2);
    for (const Json& c : doc.at("components")) {
      CHECK(c.at("energy").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
  SUBCASE("pure state yields a singleton certificate") {
    const RunResult r = run_cli("decompose --state " + f.pure0 + " --observable " + f.number2);
    CHECK(r.exit_code == 0);
    CHECK(trailing_document(r.out, 0).at("components").size() == 1);
  }
  SUBCASE("certificate file round-trips through the document loader") {
    const std::string out_path = (work_dir() / "cert_out.json").string();
    const RunResult r = run_cli("decompose --state " + f.half + " --observable " + f.number2 +
                                " --out " + out_path);
    CHECK(r.exit_code == 0);
    CHECK(verify_certificate(certificate_from_document(load_document(out_path))));
  }
  SUBCASE("at-most mode below the state energy exits 2") {
    const RunResult r = run_cli("decompose --state " + f.half + " --observable " + f.number2 +
                                " --mode at-most --budget 0.4");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("NotMember") != std::string::npos);
  }
}

TEST_CASE("enorm command") {
  const Fixtures& f = fixtures();
  SUBCASE("single value with a witness report") {
    const RunResult r =
        run_cli("enorm --operator " + f.a12 + " --observable " + f.number2 + " --budget 0.5");
    CHECK(r.exit_code == 0);
    CHECK(first_line(r.out) == "1.581138830084");
    const Json doc = trailing_document(r.out, 1);
    CHECK(doc.at("subtype") == "enorm");
    CHECK(doc.at("body").at("witness_energy").get<double>() <= 0.5 + 1e-8);
    CHECK(doc.at("body").at("gap").get<double>() <= 1e-6);
  }
  SUBCASE("curve emits a CSV grid, nondecreasing, saturating at the norm") {
    const RunResult r = run_cli("enorm --operator " + f.a12 + " --observable " + f.number2 +
                                " --budget 0 --curve 11 --emax 1");
    CHECK(r.exit_code == 0);
    std::stringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "E,value");
    double last = 0.0;
    int rows = 0;
    while (std::getline(lines, line)) {
      const auto comma = line.find(',');
      REQUIRE(comma != std::string::npos);
      const double value = std::stod(line.substr(comma + 1));
      CHECK(value >= last - 1e-9);
      last = value;
      ++rows;
    }
    CHECK(rows == 11);
    CHECK(last == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("budget below the spectrum exits 2") {
    const RunResult r =
        run_cli("enorm --operator " + f.a12 + " --observable " + f.number2 + " --budget -1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("InfeasibleBudget") != std::string::npos);
  }
}

TEST_CASE("minent command") {
  const Fixtures& f = fixtures();
  const std::string identity =
      write_doc("chan_id.json", channel_document(KrausChannel({Matrix::Identity(2, 2)})));
  const std::string dephasing = [&] {
    const double s = std::sqrt(0.5);
    return write_doc("chan_deph.json", channel_document(KrausChannel(
                                           {s * Matrix::Identity(2, 2), s * diag2(1, -1)})));
  }();
  SUBCASE("identity channel reaches zero entropy") {
    const RunResult r = run_cli("minent --channel " + identity + " --observable " + f.number2 +
                                " --budget 0.3");
    CHECK(r.exit_code == 0);
    CHECK(first_line(r.out) == "0.000000000000");
  }
  SUBCASE("exact-energy dephasing lands on the binary entropy") {
    const RunResult r = run_cli("minent --channel " + dephasing + " --observable " + f.number2 +
                                " --budget 0.2 --mode exact --starts 32 --seed 1");
    CHECK(r.exit_code == 0);
    const double value = std::stod(first_line(r.out));
    CHECK(value == doctest::Approx(0.5004024235381879).epsilon(1e-6));
    const Json doc = trailing_document(r.out, 1);
    CHECK(doc.at("body").at("value_bits").get<double>() ==
          doctest::Approx(value / std::log(2.0)).epsilon(1e-12));
    CHECK(doc.at("body").at("argmin_energy").get<double>() ==
          doctest::Approx(0.2).epsilon(1e-8));
  }
  SUBCASE("identical flags produce identical bytes") {
    const std::string cmd = "minent --channel " + dephasing + " --observable " + f.number2 +
                            " --budget 0.4 --starts 12 --seed 5";
    const RunResult a = run_cli(cmd), b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
  SUBCASE("bad channel file exits 2") {
    const std::string broken =
        write_doc("chan_bad.json", channel_document(KrausChannel({Matrix::Identity(2, 2)})));
    Json doc = load_document(broken);
    doc["kraus"][0][0][0] = Json::array({0.5, 0.0});
    const std::string path = write_doc("chan_bad2.json", doc);
    const RunResult r =
        run_cli("minent --channel " + path + " --observable " + f.number2 + " --budget 0.3");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("InvalidParameter") != std::string::npos);
  }
}

TEST_CASE("approx command") {
  const Fixtures& f = fixtures();
  const EnergyObservable h = oscillator_observable(64);
  const std::string gibbs = write_doc("gibbs64.json", matrix_document(gibbs_state(h, 1.0).mat()));
  const std::string osc = write_doc("osc64.json", matrix_document(h.mat()));
  SUBCASE("trace distances decrease along the rank schedule") {
    const RunResult r =
        run_cli("approx --state " + gibbs + " --observable " + osc + " --ranks 2,4,8,16");
    CHECK(r.exit_code == 0);
    std::stringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,trace_distance,energy");
    double last = 3.0;
    for (int i = 0; i < 4; ++i) {
      REQUIRE(std::getline(lines, line));
      const auto c1 = line.find(','), c2 = line.rfind(',');
      const double dist = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      CHECK(dist < last);
      last = dist;
    }
  }
  SUBCASE("keeping at least the actual rank reports zero distance") {
    const std::string rank2 = write_doc("rank2.json", matrix_document(diag3(0.7, 0.3, 0)));
    const RunResult r =
        run_cli("approx --state " + rank2 + " --observable " + f.number3 + " --ranks 2");
    CHECK(r.exit_code == 0);
    std::stringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    REQUIRE(std::getline(lines, line));
    CHECK(line.substr(0, 16) == "2,0.000000000000");
  }
  SUBCASE("empty rank list exits 2") {
    const RunResult r = run_cli("approx --state " + f.half + " --observable " + f.number2);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("InvalidParameter") != std::string::npos);
  }
}
