#include "ecstates/document.hpp"

#include <fstream>

namespace ecstates {

namespace {

Json complex_entry(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidParameter("complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json entries_of(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix entries_to_matrix(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidParameter("matrix entries must be rows");
  const auto nrows = rows.size();
  const auto ncols = rows[0].size();
  if (ncols == 0) throw InvalidParameter("matrix rows must be nonempty");
  Matrix m(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw InvalidParameter("matrix rows have mixed lengths");
    }
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = complex_from(rows[i][j]);
  }
  return m;
}

Json entries_of_vector(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_entry(v(i)));
  return out;
}

Vector entries_to_vector(const Json& arr) {
  if (!arr.is_array() || arr.empty()) throw InvalidParameter("vector entries must be nonempty");
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v(i) = complex_from(arr[i]);
  return v;
}

Json base_document(const std::string& kind) {
  Json doc;
  doc["schema_version"] = "1";
  doc["kind"] = kind;
  return doc;
}

void require_kind(const Json& doc, const std::string& kind) {
  if (!doc.is_object() || !doc.contains("schema_version") || doc["schema_version"] != "1") {
    throw InvalidParameter("document needs schema_version \"1\"");
  }
  if (!doc.contains("kind") || doc["kind"] != kind) {
    throw InvalidParameter("expected a " + kind + " document");
  }
}

std::string mode_name(BudgetMode mode) {
  return mode == BudgetMode::Exact ? "exact" : "at-most";
}

BudgetMode mode_from(const std::string& name) {
  if (name == "exact") return BudgetMode::Exact;
  if (name == "at-most") return BudgetMode::AtMost;
  throw InvalidParameter("mode must be exact or at-most, got " + name);
}

}  // namespace

Json matrix_document(const Matrix& m) {
  Json doc = base_document("matrix");
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  doc["entries"] = entries_of(m);
  return doc;
}

Matrix matrix_from_document(const Json& doc) {
  require_kind(doc, "matrix");
  try {
    Matrix m = entries_to_matrix(doc.at("entries"));
    if (doc.contains("rows") && (m.rows() != doc["rows"].get<Eigen::Index>() ||
                                 m.cols() != doc["cols"].get<Eigen::Index>())) {
      throw InvalidParameter("matrix shape disagrees with its entries");
    }
    return m;
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed matrix document: ") + e.what());
  }
}

Json vector_document(const Vector& v) {
  Json doc = base_document("vector");
  doc["dim"] = v.size();
  doc["entries"] = entries_of_vector(v);
  return doc;
}

Vector vector_from_document(const Json& doc) {
  require_kind(doc, "vector");
  try {
    return entries_to_vector(doc.at("entries"));
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed vector document: ") + e.what());
  }
}

Json ensemble_document(const Ensemble& ensemble) {
  Json doc = base_document("ensemble");
  Json comps = Json::array();
  for (const Ensemble::Component& c : ensemble.components) {
    Json item;
    item["weight"] = c.weight;
    item["state"] = entries_of_vector(c.state.vec());
    comps.push_back(std::move(item));
  }
  doc["components"] = std::move(comps);
  return doc;
}

Ensemble ensemble_from_document(const Json& doc) {
  require_kind(doc, "ensemble");
  try {
    std::vector<Ensemble::Component> comps;
    for (const Json& item : doc.at("components")) {
      comps.push_back({item.at("weight").get<double>(),
                       PureState(entries_to_vector(item.at("state")))});
    }
    return Ensemble::validated(std::move(comps));
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed ensemble document: ") + e.what());
  }
}

Json channel_document(const KrausChannel& phi) {
  Json doc = base_document("channel");
  doc["dim_in"] = phi.dim_in();
  doc["dim_out"] = phi.dim_out();
  Json kraus = Json::array();
  for (const Matrix& k : phi.kraus()) kraus.push_back(entries_of(k));
  doc["kraus"] = std::move(kraus);
  return doc;
}

KrausChannel channel_from_document(const Json& doc) {
  require_kind(doc, "channel");
  try {
    std::vector<Matrix> kraus;
    for (const Json& item : doc.at("kraus")) kraus.push_back(entries_to_matrix(item));
    return KrausChannel(std::move(kraus));
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed channel document: ") + e.what());
  }
}

Json certificate_document(const DecompositionCertificate& cert) {
  Json doc = base_document("certificate");
  doc["target"] = entries_of(cert.target.mat());
  doc["observable"] = entries_of(cert.observable.mat());
  doc["mode"] = mode_name(cert.mode);
  doc["budget"] = cert.budget;
  doc["reconstruction_error"] = cert.reconstruction_error;
  doc["merges"] = cert.merges;
  Json comps = Json::array();
  for (std::size_t i = 0; i < cert.ensemble.components.size(); ++i) {
    const Ensemble::Component& c = cert.ensemble.components[i];
    Json item;
    item["weight"] = c.weight;
    item["energy"] = cert.component_energies[i];
    item["state"] = entries_of_vector(c.state.vec());
    comps.push_back(std::move(item));
  }
  doc["components"] = std::move(comps);
  return doc;
}

DecompositionCertificate certificate_from_document(const Json& doc) {
  require_kind(doc, "certificate");
  try {
    DensityMatrix target(HermitianMatrix(entries_to_matrix(doc.at("target"))));
    EnergyObservable observable{HermitianMatrix(entries_to_matrix(doc.at("observable")))};
    std::vector<Ensemble::Component> comps;
    std::vector<double> energies;
    for (const Json& item : doc.at("components")) {
      comps.push_back({item.at("weight").get<double>(),
                       PureState(entries_to_vector(item.at("state")))});
      energies.push_back(item.at("energy").get<double>());
    }
    return DecompositionCertificate{std::move(target),
                                    std::move(observable),
                                    Ensemble::validated(std::move(comps)),
                                    std::move(energies),
                                    doc.at("reconstruction_error").get<double>(),
                                    mode_from(doc.at("mode").get<std::string>()),
                                    doc.at("budget").get<double>(),
                                    doc.at("merges").get<int>()};
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("malformed certificate document: ") + e.what());
  }
}

Json report_document(const std::string& subtype, Json body) {
  Json doc = base_document("report");
  doc["subtype"] = subtype;
  doc["body"] = std::move(body);
  return doc;
}

Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidParameter("cannot parse " + path + ": " + e.what());
  }
}

void save_document(const Json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot open " + path + " for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw InvalidParameter("failed writing " + path);
}

}  // namespace ecstates
