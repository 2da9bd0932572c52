#include "pcop/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace pcop {
namespace {

// JSON has no infinities; they are written as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json point(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json to_json(const Estimate& e) {
  json j{{"value", number(e.value)}, {"provenance", to_string(e.provenance)}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

json to_json(const ConstantsLedger& L) {
  json j = json::object();
  for (const auto& [k, v] : L.entries()) j[k] = to_json(v);
  return j;
}

json to_json(const CertificateReport& r) {
  json margins = json::array();
  for (const auto& m : r.margins)
    margins.push_back({{"id", m.id}, {"min_margin", number(m.min_margin)}, {"argmin", point(m.argmin)}});
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = number(v);
  return {{"condition", r.condition},
          {"verdict", to_string(r.verdict)},
          {"margins", margins},
          {"sup_mu", number(r.sup_mu)},
          {"hypothesis_ok", r.hypothesis_ok},
          {"grid", r.grid},
          {"ledger", to_json(r.ledger)},
          {"rigor", r.rigor},
          {"notes", r.notes},
          {"values", values}};
}

json to_json(const SpectralDiagnostics& d) {
  return {{"sigma_min", number(d.sigma_min)},
          {"sigma_max", number(d.sigma_max)},
          {"cond", number(d.cond)},
          {"sigma_min_half", number(d.sigma_min_half)},
          {"trend", number(d.trend)},
          {"drifting", d.drifting}};
}

json to_json(const NormBound& b) {
  return {{"b1", number(b.b1)},
          {"b2", number(b.b2)},
          {"norm_upper", number(b.norm_upper)},
          {"inverse_norm_upper", number(b.inverse_norm_upper)},
          {"unbounded_evidence", b.unbounded_evidence}};
}

json to_json(const Example3Tuning& t) {
  return {{"delta_a", t.params.delta_a}, {"delta", t.params.delta},
          {"delta_b", t.params.delta_b}, {"I_re", t.I_re},
          {"I_im", t.I_im},              {"I_re_check", t.I_re_check},
          {"I_im_check", t.I_im_check},  {"J1", t.J1},
          {"J2", t.J2}};
}

ConstantsLedger ledger_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("ledger file must hold a JSON object");
  ConstantsLedger L;
  for (const auto& [k, v] : j.items()) {
    Estimate e;
    if (v.is_number()) {
      e.value = v.get<double>();
      e.provenance = Provenance::user_supplied;
    } else if (v.is_object() && v.contains("value") && v.at("value").is_number()) {
      e.value = v.at("value").get<double>();
      try {
        e.provenance = v.contains("provenance")
                           ? provenance_from_string(v.at("provenance").get<std::string>())
                           : Provenance::user_supplied;
        if (v.contains("note")) e.note = v.at("note").get<std::string>();
      } catch (const json::exception&) {
        throw ParameterError("ledger entry " + k + ": provenance and note must be strings");
      }
    } else {
      throw ParameterError("ledger entry " + k + " needs a value");
    }
    L.set(k, e);
  }
  return L;
}

ConstantsLedger read_ledger_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open ledger file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParameterError("ledger file " + path + ": " + e.what());
  }
  return ledger_from_json(j);
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& A) {
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j) os << ',';
      os << A(i, j).real() << ',' << A(i, j).imag();
    }
    os << '\n';
  }
}

json RunReport::to_json() const {
  return {{"schema_version", kReportSchemaVersion},
          {"tool", "pcop"},
          {"version", PCOP_VERSION},
          {"command", command},
          {"argv", argv},
          {"config", config},
          {"results", results},
          {"wall_time_s", wall_time_s}};
}

}  // namespace pcop
