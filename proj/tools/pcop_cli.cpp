#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcop/bergman.hpp"
#include "pcop/certificates.hpp"
#include "pcop/operators.hpp"
#include "pcop/report.hpp"
#include "pcop/symbols.hpp"
#include "pcop/weights.hpp"

using namespace pcop;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string weight = "standard:0";
  std::string symbol;
  double p = 2.0;
  int basis = 64;
  std::string grid = "256x1024";
  double delta = kDefaultDelta;
  int bidegree = 10;
  std::string out;
  std::string format = "json";
  std::string ledger;
  int example = 0;
  int rows = 0;
  double radius = 0.5;
  bool delta_set = false;
};

struct Outcome {
  json results;
  int code;
};

json config_json(const Options& o) {
  json c{{"weight", o.weight}, {"N", o.basis},       {"grid", o.grid},
         {"p", o.p},           {"delta", o.delta},   {"bidegree", o.bidegree}};
  c["symbol"] = o.symbol.empty() ? json(nullptr) : json(o.symbol);
  if (!o.ledger.empty()) c["ledger_file"] = o.ledger;
  return c;
}

LedgerOptions ledger_options(const Options& o) {
  LedgerOptions opt;
  opt.p = o.p;
  opt.N = o.basis;
  opt.bidegree = o.bidegree;
  opt.delta = o.delta;
  opt.grid = parse_grid(o.grid);
  return opt;
}

// Tall section: 4N rows, N columns. Square sections of non-diagonal symbols
// lose the part of K_phi e_m that lands above degree N.
SpectralDiagnostics section_sigma(const Symbol& s, const Weight& w, int N, const GridSpec& grid,
                                  int row_factor = 4) {
  const BasisTable B = BasisTable::build(w, row_factor * N);
  const OperatorMatrix K = assemble_K(s, B, default_rule(w, s, grid), AssemblyPath::fast, N);
  return spectral_diagnostics(K.A);
}

json section_json(const Symbol& s, const Weight& w, int N, const GridSpec& grid) {
  json j = to_json(section_sigma(s, w, N, grid));
  j["N"] = N;
  j["rows"] = 4 * N;
  return j;
}

// Runs every certificate that applies to (p, symbol); missing ledger entries
// make a certificate not-applicable rather than an error.
json certificates(const Symbol& s, const Weight& w, double p, const ConstantsLedger& L,
                  Verdict& overall) {
  json out = json::object();
  auto missing = [&](const std::string& cond, const IncompleteLedgerError& e) {
    CertificateReport r;
    r.condition = cond;
    r.ledger = L;
    r.notes.push_back(std::string(e.what()) + "; supply it with --ledger");
    return r;
  };

  CertificateReport bb;
  if (p != 2.0) {
    bb.condition = "beltrami_bound";
    bb.ledger = L;
    bb.notes.push_back("needs p = 2");
  } else {
    try {
      bb = check_beltrami_bound(s, w, L);
    } catch (const IncompleteLedgerError& e) {
      bb = missing("beltrami_bound", e);
    }
  }
  CertificateReport ac;
  try {
    ac = check_annulus_conformal(s, w, p, L);
  } catch (const IncompleteLedgerError& e) {
    ac = missing("annulus_conformal", e);
  }
  out["beltrami_bound"] = to_json(bb);
  out["annulus_conformal"] = to_json(ac);
  if (p == 2.0) {
    const CertificateReport th = check_example_thresholds(s, L);
    if (th.verdict != Verdict::not_applicable) out["example_threshold"] = to_json(th);
  }

  if (bb.passed() || ac.passed()) {
    overall = Verdict::pass;
  } else if (bb.verdict == Verdict::not_applicable && ac.verdict == Verdict::not_applicable) {
    overall = Verdict::not_applicable;
  } else if (bb.verdict == Verdict::fail || ac.verdict == Verdict::fail) {
    overall = Verdict::fail;
  } else {
    overall = Verdict::hypothesis_failure;
  }
  return out;
}

Outcome cmd_certify(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const Symbol s = parse_symbol(o.symbol);
  ConstantsLedger L = build_ledger(w, s, ledger_options(o));
  if (!o.ledger.empty()) L.merge(read_ledger_file(o.ledger));

  Verdict overall = Verdict::not_applicable;
  json results;
  results["certificates"] = certificates(s, w, o.p, L, overall);
  results["ledger"] = to_json(L);
  results["verdict"] = to_string(overall);
  const std::string rigor =
      rigor_label(L, {"d_P", "d_LP", "d_M", "d_phi", "d_psi", "beta_infty", "beta_phi", "delta"});
  results["rigor"] = rigor;
  if (o.p == 2.0) results["spectral"] = section_json(s, w, std::min(o.basis, 32), parse_grid(o.grid));
  return {results, overall == Verdict::pass ? kExitPass : kExitNegative};
}

Outcome cmd_constants(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const LedgerOptions opt = ledger_options(o);
  ConstantsLedger L;
  if (o.symbol.empty()) {
    L = weight_ledger(w, opt);
  } else {
    L = build_ledger(w, parse_symbol(o.symbol), opt);
  }
  if (!o.ledger.empty()) L.merge(read_ledger_file(o.ledger));
  json results;
  results["ledger"] = to_json(L);
  if (!o.symbol.empty()) {
    const SymbolConstants c = symbol_constants(parse_symbol(o.symbol), w, opt);
    results["norm_bound"] = to_json(c.bound);
  }
  return {results, kExitPass};
}

Outcome cmd_assemble(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const Symbol s = parse_symbol(o.symbol);
  if (o.p != 2.0) throw ParameterError("assemble needs p = 2");
  const int rows = o.rows > 0 ? o.rows : o.basis;
  if (rows < o.basis) throw ParameterError("--rows must be at least --basis");
  const BasisTable B = BasisTable::build(w, rows);
  const OperatorMatrix K = assemble_K(s, B, default_rule(w, s, parse_grid(o.grid)),
                                      AssemblyPath::fast, o.basis);
  json results;
  results["rows"] = K.A.rows();
  results["cols"] = K.A.cols();
  results["diagnostics"] = to_json(spectral_diagnostics(K.A));
  if (o.format == "json") {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < K.A.rows(); ++i) {
      json rr = json::array(), ri = json::array();
      for (Eigen::Index j = 0; j < K.A.cols(); ++j) {
        rr.push_back(K.A(i, j).real());
        ri.push_back(K.A(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    results["matrix"] = {{"re", re}, {"im", im}};
  } else if (o.out.empty()) {
    write_matrix_csv(std::cout, K.A);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ParameterError("cannot write " + o.out);
    write_matrix_csv(f, K.A);
  }
  return {results, kExitPass};
}

Outcome repro_twist(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const LedgerOptions opt = ledger_options(o);
  const GridSpec grid = parse_grid(o.grid);
  const ConstantsLedger base = weight_ledger(w, opt);
  json sweep = json::array();
  std::optional<double> largest;
  bool identity_pass = false;
  for (int k = 0; k <= 15; ++k) {
    const double C = 0.1 * k;
    const Symbol s = make_twist_poly(C);
    ConstantsLedger L = base;
    L.merge(symbol_ledger(s, w, opt));
    const CertificateReport bb = check_beltrami_bound(s, w, L);
    const CertificateReport th = check_example_thresholds(s, L);
    const SpectralDiagnostics sd = section_sigma(s, w, 32, grid, 1);
    if (bb.passed()) largest = C;
    if (k == 0) identity_pass = bb.passed();
    sweep.push_back({{"C", C},
                     {"beltrami_bound", to_string(bb.verdict)},
                     {"example_threshold", to_string(th.verdict)},
                     {"threshold_C", th.values.at("C")},
                     {"sup_mu", bb.sup_mu},
                     {"sigma_min_N32", sd.sigma_min}});
  }
  json results{{"example", 1}, {"sweep", sweep}, {"ledger", to_json(base)}};
  results["largest_C_pass"] = largest ? json(*largest) : json(nullptr);
  results["identity_passes"] = identity_pass;
  return {results, identity_pass ? kExitPass : kExitNegative};
}

Outcome repro_stretch(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const LedgerOptions opt = ledger_options(o);
  const GridSpec grid = parse_grid(o.grid);
  const ConstantsLedger base = weight_ledger(w, opt);
  const double R = o.radius;
  json sweep = json::array();
  std::optional<double> upper, lower;
  for (double a : {0.3, 0.5, 0.7, 0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25, 1.5, 2.0, 3.0}) {
    const Symbol s = make_radial_stretch(a, R);
    ConstantsLedger L = base;
    L.merge(symbol_ledger(s, w, opt));
    const CertificateReport bb = check_beltrami_bound(s, w, L);
    const CertificateReport th = check_example_thresholds(s, L);
    const double s16 = section_sigma(s, w, 16, grid).sigma_min;
    const double s32 = section_sigma(s, w, 32, grid).sigma_min;
    if (th.passed()) {
      if (a >= 1.0) upper = a;
      if (a <= 1.0 && !lower) lower = a;
    }
    sweep.push_back({{"a", a},
                     {"beltrami_bound", to_string(bb.verdict)},
                     {"example_threshold", to_string(th.verdict)},
                     {"a_upper", th.values.at("a_upper")},
                     {"a_lower", th.values.at("a_lower")},
                     {"mu", th.sup_mu},
                     {"d_phi", L.value("d_phi")},
                     {"sigma_min_N16", s16},
                     {"sigma_min_N32", s32}});
  }
  json results{{"example", 2}, {"R", R}, {"sweep", sweep}, {"ledger", to_json(base)}};
  results["largest_a_pass"] = upper ? json(*upper) : json(nullptr);
  results["smallest_a_pass"] = lower ? json(*lower) : json(nullptr);
  return {results, kExitPass};
}

Outcome repro_example3(const Options& o) {
  const Weight w = parse_weight(o.weight);
  const GridSpec grid = parse_grid(o.grid);
  const double R = example3_R();
  json results{{"example", 3}, {"R", R}, {"R_prime", example3_R_prime()}};
  results["step_moment"] = example3_step_moment(R);
  results["step_moment_minus"] = example3_step_moment(R - 0.01);
  results["step_moment_plus"] = example3_step_moment(R + 0.01);

  Example3Tuning t;
  try {
    t = tune_example3(o.delta_set ? o.delta : 0.008);
  } catch (const TuningError& e) {
    results["tuning_error"] = e.what();
    throw;
  }
  results["tuning"] = to_json(t);
  results["abs_I_re"] = std::abs(t.I_re);
  results["abs_I_im"] = std::abs(t.I_im);

  const Symbol s = make_example3(t.params);
  const ValidationReport v = validate(s);
  results["sup_mu"] = v.sup_mu;
  const int N = std::min(o.basis, 32);
  const BasisTable B = BasisTable::build(w, N);
  const OperatorMatrix K = assemble_K(s, B, default_rule(w, s, grid));
  results["N"] = N;
  results["column1_norm"] = K.A.col(1).norm();
  const SpectralDiagnostics sd = spectral_diagnostics(K.A);
  results["spectral"] = to_json(sd);

  const bool ok = std::abs(example3_step_moment(R)) <= 1e-14 && std::abs(t.I_re) <= 1e-8 &&
                  std::abs(t.I_im) <= 1e-8 && sd.sigma_min <= 1e-6;
  results["non_invertibility_evidence"] = ok;
  return {results, ok ? kExitPass : kExitNegative};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected composition operators on weighted Bergman spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PCOP_VERSION);
  Options o;

  auto common = [&](CLI::App* c, bool needs_symbol) {
    c->add_option("--weight", o.weight, "standard:<alpha> or exp:<a>:<b>")->capture_default_str();
    auto* sym = c->add_option("--symbol", o.symbol,
                              "id, mobius:<re>,<im>, twist:poly:<C>, stretch:<a>:<R>, "
                              "example3:auto or example3:<da>:<d>:<db>");
    if (needs_symbol) sym->required();
    c->add_option("--p", o.p, "Lebesgue exponent")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--basis", o.basis, "basis size N")->capture_default_str()->check(CLI::Range(1, 4096));
    c->add_option("--grid", o.grid, "quadrature grid <n_r>x<n_theta>")->capture_default_str();
    c->add_option("--delta", o.delta, "free parameter in (0, 1/sqrt 2)")->capture_default_str();
    c->add_option("--bidegree", o.bidegree, "bidegree for d_M")->capture_default_str()->check(CLI::Range(0, 64));
    c->add_option("--out", o.out, "output path (stdout when absent)");
    c->add_option("--format", o.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--ledger", o.ledger, "JSON file of constants overriding computed ones");
  };

  auto* certify = app.add_subcommand("certify", "run the invertibility certificates");
  common(certify, true);
  auto* constants = app.add_subcommand("constants", "emit the constants ledger");
  common(constants, false);
  auto* assemble = app.add_subcommand("assemble", "assemble the truncated K_phi matrix");
  common(assemble, true);
  assemble->add_option("--rows", o.rows, "matrix rows (default: basis size)");
  auto* repro = app.add_subcommand("repro", "reproduce an example (1 twist, 2 stretch, 3 non-invertible)");
  common(repro, false);
  repro->add_option("example", o.example, "example number")->required()->check(CLI::Range(1, 3));
  repro->add_option("--radius", o.radius, "stretch radius R for example 2")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  o.delta_set = !repro->get_option("--delta")->empty();

  RunReport report;
  for (int i = 1; i < argc; ++i) report.argv.push_back(argv[i]);
  report.config = config_json(o);
  const auto t0 = std::chrono::steady_clock::now();
  Outcome res;
  try {
    if (o.format == "csv" && !assemble->parsed())
      throw ParameterError("--format csv is only available for assemble");
    if (certify->parsed()) {
      report.command = "certify";
      res = cmd_certify(o);
    } else if (constants->parsed()) {
      report.command = "constants";
      res = cmd_constants(o);
    } else if (assemble->parsed()) {
      report.command = "assemble";
      res = cmd_assemble(o);
    } else {
      report.command = "repro";
      report.config["example"] = o.example;
      res = o.example == 1 ? repro_twist(o) : o.example == 2 ? repro_stretch(o) : repro_example3(o);
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  report.results = res.results;
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool csv_to_stdout = o.format == "csv" && o.out.empty();
  if (!csv_to_stdout) {
    const std::string text = report.to_json().dump(2) + "\n";
    if (o.out.empty() || o.format == "csv") {
      std::cout << text;
    } else {
      std::ofstream f(o.out);
      if (!f) {
        std::cerr << "error: cannot write " << o.out << '\n';
        return kExitUsage;
      }
      f << text;
    }
  }
  return res.code;
}
