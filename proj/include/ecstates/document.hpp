#pragma once

#include <string>

#include <json.hpp>

#include "ecstates/constrained_opt.hpp"
#include "ecstates/decomposition.hpp"
#include "ecstates/states.hpp"

namespace ecstates {

// Text document format shared by the CLI and the files it reads and writes.
// Every document is a JSON object with schema_version "1" and a kind from
// {matrix, vector, ensemble, channel, certificate, report}; complex numbers
// are [re, im] pairs and matrices are dim rows of dim pairs, row-major.
// Round-trips are lossless at full double precision.
using Json = nlohmann::json;

Json matrix_document(const Matrix& m);
Matrix matrix_from_document(const Json& doc);

Json vector_document(const Vector& v);
Vector vector_from_document(const Json& doc);

Json ensemble_document(const Ensemble& ensemble);
Ensemble ensemble_from_document(const Json& doc);

Json channel_document(const KrausChannel& phi);
KrausChannel channel_from_document(const Json& doc);

Json certificate_document(const DecompositionCertificate& cert);
DecompositionCertificate certificate_from_document(const Json& doc);

// Free-form result document; body carries the command-specific fields.
Json report_document(const std::string& subtype, Json body);

Json load_document(const std::string& path);
void save_document(const Json& doc, const std::string& path);

}  // namespace ecstates
