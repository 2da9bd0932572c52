#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pcop/certificates.hpp"
#include "pcop/operators.hpp"
#include "pcop/symbols.hpp"

namespace pcop {

using json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

json to_json(const Estimate& e);
json to_json(const ConstantsLedger& L);
json to_json(const CertificateReport& r);
json to_json(const SpectralDiagnostics& d);
json to_json(const NormBound& b);
json to_json(const Example3Tuning& t);

/// Flat object {name: {value, provenance}}; provenance defaults to
/// user-supplied when absent.
ConstantsLedger ledger_from_json(const json& j);
ConstantsLedger read_ledger_file(const std::string& path);

/// Row-major "re,im" pairs, one matrix row per line.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& A);

struct RunReport {
  std::string command;
  json argv = json::array();
  json config = json::object();
  json results = json::object();
  double wall_time_s = 0.0;

  json to_json() const;
};

}  // namespace pcop
