#include "pcop/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcop/bergman.hpp"
#include "pcop/dbar.hpp"

namespace pcop {

void ConstantsLedger::set(const std::string& key, Estimate e) {
  if (!(e.value > 0.0) || !std::isfinite(e.value))
    throw ParameterError("ledger entry " + key + " must be finite and positive");
  if (key == "delta" && !(e.value < 1.0 / std::sqrt(2.0)))
    throw ParameterError("delta must lie in (0, 1/sqrt(2))");
  entries_[key] = std::move(e);
}

const Estimate& ConstantsLedger::at(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw IncompleteLedgerError("ledger has no entry " + key);
  return it->second;
}

void ConstantsLedger::merge(const ConstantsLedger& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

ConstantsLedger weight_ledger(const Weight& w, const LedgerOptions& opt) {
  ConstantsLedger L;
  L.set("delta", {opt.delta, Provenance::user_supplied, "free parameter in (0, 1/sqrt 2)"});
  if (opt.p == 2.0) {
    L.set("d_P", {1.0, Provenance::exact, "orthogonal projection"});
  } else {
    const BasisTable Bp = BasisTable::build(w, std::min(opt.N, 9), opt.p);
    const QuadratureRule rule = QuadratureRule::with_breakpoints(w.radial_breakpoints(), 128, 128);
    L.set("d_P", d_P(Bp, opt.p, rule));
    return L;
  }
  const BasisTable B = BasisTable::build(w, opt.N, 2.0);
  const LittlewoodPaley lp = d_LP(B);
  std::ostringstream note;
  note.precision(10);
  note << "max over n < " << opt.N << "; g_(N-1) = " << lp.g_last << ", g_(N/2) = " << lp.g_half;
  L.set("d_LP", {lp.value, Provenance::estimated_lower_bound, note.str()});
  L.set("d_M", estimate_d_M(w, opt.bidegree));
  const BetaInfty bi = beta_infty(B);
  L.set("beta_infty", {bi.value, Provenance::estimated_lower_bound,
                       "kernel diagonals truncated at N = " + std::to_string(bi.N)});
  return L;
}

double beta_phi(const Symbol& s, int n_r, int n_theta) {
  double best = 1.0;
  for (int i = 0; i <= n_r; ++i) {
    const double r = i < n_r ? 0.5 * (i + 0.5) / n_r : 0.5;
    for (int j = 0; j < n_theta; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * (j + 0.5) / n_theta);
      const Wirtinger d = s.wirtinger(z);
      const Wirtinger di = s.inverse_wirtinger(z);
      best = std::max({best, std::abs(d.dz) + std::abs(d.dzbar),
                       std::abs(di.dz) + std::abs(di.dzbar)});
    }
  }
  return best;
}

SymbolConstants symbol_constants(const Symbol& s, const Weight& w, const LedgerOptions& opt) {
  SymbolConstants c;
  c.bound = c_phi_norm_bound(s, w, default_rule(w, s, opt.grid), opt.p);
  c.beta_phi = beta_phi(s);
  return c;
}

ConstantsLedger symbol_ledger(const Symbol& s, const Weight& w, const LedgerOptions& opt) {
  ConstantsLedger L;
  const SymbolConstants c = symbol_constants(s, w, opt);
  const std::string grid = std::to_string(opt.grid.n_r) + "x" + std::to_string(opt.grid.n_theta);
  const std::string flag = c.bound.unbounded_evidence ? "; unbounded evidence" : "";
  L.set("d_phi", {c.bound.norm_upper, Provenance::estimated_upper_bound,
                  "change-of-variables sup on grid " + grid + flag});
  L.set("d_psi", {c.bound.inverse_norm_upper, Provenance::estimated_upper_bound,
                  "change-of-variables sup on grid " + grid + flag});
  L.set("beta_phi", {c.beta_phi, Provenance::estimated_lower_bound, "grid sup over |z| <= 1/2"});
  return L;
}

ConstantsLedger build_ledger(const Weight& w, const Symbol& s, const LedgerOptions& opt) {
  ConstantsLedger L = weight_ledger(w, opt);
  L.merge(symbol_ledger(s, w, opt));
  return L;
}

Gammas gamma_constants(const ConstantsLedger& L) {
  const double base = L.value("delta") / (L.value("d_LP") * L.value("d_M"));
  return {base / L.value("d_psi"), base / L.value("d_phi")};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::hypothesis_failure: return "hypothesis-failure";
    case Verdict::not_applicable: return "not-applicable";
  }
  return "unknown";
}

std::string rigor_label(const ConstantsLedger& L, const std::vector<std::string>& keys) {
  std::string estimated;
  for (const auto& k : keys) {
    if (!L.has(k)) continue;
    const Provenance p = L.at(k).provenance;
    if (p == Provenance::exact || p == Provenance::user_supplied) continue;
    estimated += (estimated.empty() ? "" : ", ") + k + " (" + to_string(p) + ")";
  }
  if (estimated.empty()) return "proof-grade";
  return "evidence-grade; estimated: " + estimated;
}

namespace {

std::vector<double> certificate_radii(const Symbol& s, const CertificateGrid& grid) {
  std::vector<double> radii;
  for (int i = 0; i < grid.n_r; ++i) {
    const double t = 1.0 - (i + 0.5) / grid.n_r;
    radii.push_back(1.0 - t * t);
  }
  for (double r : s.kinks())
    if (r > 0.0 && r < 1.0) radii.push_back(r);
  for (double r : s.features())
    if (r > 0.0 && r < 1.0) radii.push_back(r);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

std::string grid_label(const CertificateGrid& g) {
  return std::to_string(g.n_r) + "x" + std::to_string(g.n_theta) + " (graded radii + symbol radii)";
}

bool gate_ok(double sup_mu) { return sup_mu < kMuGate - kMuGateTol; }

void note_unbounded(const ConstantsLedger& L, CertificateReport& rep) {
  for (const char* k : {"d_phi", "d_psi"})
    if (L.has(k) && L.at(k).note.find("unbounded") != std::string::npos) {
      rep.notes.push_back(std::string(k) +
                          " is grid-limited: the change-of-variables ratio grows toward a "
                          "singular point, so the boundedness hypothesis is doubtful");
      return;
    }
}

}  // namespace

CertificateReport check_beltrami_bound(const Symbol& s, const Weight& w, const ConstantsLedger& L,
                                       const CertificateGrid& grid) {
  CertificateReport rep;
  rep.condition = "beltrami_bound";
  rep.ledger = L;
  rep.grid = grid_label(grid);
  const Gammas g = gamma_constants(L);
  rep.values["gamma_psi"] = g.gamma_psi;
  rep.values["gamma_phi"] = g.gamma_phi;
  rep.rigor = rigor_label(L, {"d_LP", "d_M", "d_phi", "d_psi", "delta"});
  note_unbounded(L, rep);

  const double half_alpha = w.is_standard() ? 0.5 * w.alpha() : 0.0;
  // log of the weight factor multiplying gamma, at z with image point u.
  auto log_rhs = [&](double rz, double ru) {
    if (w.is_standard())
      return (1.0 + half_alpha) * std::log1p(-ru * ru) - half_alpha * std::log1p(-rz * rz);
    return std::log(w.R(ru)) + 0.5 * (w.log_omega(ru) - w.log_omega(rz));
  };

  MarginSummary m1{"psi_condition", std::numeric_limits<double>::infinity(), 0.0};
  MarginSummary m2{"phi_condition", std::numeric_limits<double>::infinity(), 0.0};
  for (double r : certificate_radii(s, grid)) {
    for (int j = 0; j < grid.n_theta; ++j) {
      const cplx z = std::polar(r, 2.0 * kPi * j / grid.n_theta);
      const double mu_phi = std::abs(beltrami(s, z));
      const cplx u = s(z);
      const cplx v = s.inverse(z);
      const double mu_psi = std::abs(beltrami(s, v));
      rep.sup_mu = std::max(rep.sup_mu, mu_phi);
      const double a1 = g.gamma_psi * std::exp(log_rhs(r, std::abs(u))) - mu_phi;
      const double a2 = g.gamma_phi * std::exp(log_rhs(r, std::abs(v))) - mu_psi;
      if (a1 < m1.min_margin) m1 = {m1.id, a1, z};
      if (a2 < m2.min_margin) m2 = {m2.id, a2, z};
    }
  }
  rep.margins = {m1, m2};
  rep.hypothesis_ok = gate_ok(rep.sup_mu);
  if (!rep.hypothesis_ok) {
    rep.verdict = Verdict::hypothesis_failure;
    rep.notes.push_back("sup |mu| on the grid is not below 1/2");
  } else {
    rep.verdict = (m1.min_margin > 0.0 && m2.min_margin > 0.0) ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

CertificateReport check_annulus_conformal(const Symbol& s, const Weight& w, double p,
                                          const ConstantsLedger& L,
                                          std::optional<double> R_conformal) {
  (void)w;
  CertificateReport rep;
  rep.condition = "annulus_conformal";
  rep.ledger = L;
  rep.grid = "beta_phi on 200x256 over |z| <= 1/2";
  rep.rigor = rigor_label(L, {"beta_phi", "beta_infty", "d_P", "d_M", "d_phi", "d_psi"});
  note_unbounded(L, rep);
  if (!(p > 1.0 && p <= 2.0)) {
    rep.verdict = Verdict::not_applicable;
    rep.notes.push_back("needs p in (1, 2]");
    return rep;
  }
  if (std::abs(s(0.0)) > 1e-14) {
    rep.hypothesis_ok = false;
    rep.verdict = Verdict::hypothesis_failure;
    rep.notes.push_back("phi(0) != 0");
    rep.values["abs_phi_0"] = std::abs(s(0.0));
    return rep;
  }
  const std::optional<double> Rc = R_conformal ? R_conformal : s.conformal_radius();
  if (!Rc) {
    rep.verdict = Verdict::not_applicable;
    rep.notes.push_back("symbol has no known conformality radius");
    return rep;
  }
  const double bphi = L.value("beta_phi");
  const double core = L.value("beta_infty") * L.value("d_P") * L.value("d_M") *
                      std::max(L.value("d_phi"), L.value("d_psi"));
  const double delta = std::min(
      1.0 / (2.0 * bphi),
      1.0 / (std::sqrt(kPi) * std::pow(bphi, 1.0 + p / 2.0) * std::pow(core, p / 2.0)));
  rep.values["delta_conformal"] = delta;
  rep.values["beta_phi"] = bphi;
  rep.values["R_conformal"] = *Rc;
  rep.margins = {{"radius", delta - *Rc, cplx(*Rc, 0.0)}};
  rep.verdict = *Rc < delta ? Verdict::pass : Verdict::fail;
  return rep;
}

CertificateReport check_example_thresholds(const Symbol& s, const ConstantsLedger& L,
                                           const CertificateGrid& grid) {
  CertificateReport rep;
  rep.condition = "example_threshold";
  rep.ledger = L;
  rep.grid = grid_label(grid);
  rep.rigor = rigor_label(L, {"d_LP", "d_M", "d_phi", "d_psi", "delta"});
  const Gammas g = gamma_constants(L);
  rep.values["gamma_psi"] = g.gamma_psi;
  rep.values["gamma_phi"] = g.gamma_phi;
  const double m = std::min(g.gamma_psi, g.gamma_phi);

  const bool twist_like =
      s.family() == SymbolFamily::radial_twist || s.family() == SymbolFamily::identity;
  if (twist_like) {
    const RadialProfile& prof = *s.profile();
    const double C = std::min(1.0, m);
    rep.values["C"] = C;
    MarginSummary ms{"twist_derivative", std::numeric_limits<double>::infinity(), 0.0};
    for (double r : certificate_radii(s, grid)) {
      const double margin = C * (1.0 - r * r) - std::abs(prof.d_angle(r));
      if (margin < ms.min_margin) ms = {ms.id, margin, cplx(r, 0.0)};
      rep.sup_mu = std::max(rep.sup_mu, std::abs(beltrami(s, cplx(r, 0.0))));
    }
    rep.margins = {ms};
  } else if (s.family() == SymbolFamily::radial_stretch) {
    const double a = s.parameters().at(0);
    const double R = s.parameters().at(1);
    const double x = m * (1.0 - R * R);
    rep.sup_mu = std::abs(a - 1.0) / (a + 1.0);
    rep.values["a_upper"] = x < 1.0 ? (1.0 + x) / (1.0 - x) : std::numeric_limits<double>::infinity();
    rep.values["a_lower"] = (1.0 - x) / (1.0 + x);
    rep.margins = {{"stretch_threshold", x - rep.sup_mu, cplx(R, 0.0)}};
  } else {
    rep.verdict = Verdict::not_applicable;
    rep.notes.push_back("no closed-form threshold for family " + to_string(s.family()));
    return rep;
  }
  rep.hypothesis_ok = gate_ok(rep.sup_mu);
  if (!rep.hypothesis_ok) {
    rep.verdict = Verdict::hypothesis_failure;
    rep.notes.push_back("sup |mu| is not below 1/2");
  } else {
    rep.verdict = rep.margins[0].min_margin > 0.0 ? Verdict::pass : Verdict::fail;
  }
  return rep;
}

}  // namespace pcop
