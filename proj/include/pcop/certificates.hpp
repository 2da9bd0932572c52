#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcop/common.hpp"
#include "pcop/operators.hpp"
#include "pcop/quadrature.hpp"
#include "pcop/symbols.hpp"
#include "pcop/weights.hpp"

namespace pcop {

/// Named constants with provenance. Keys: d_P, d_LP, d_M, d_phi, d_psi,
/// beta_infty, beta_phi, delta.
class ConstantsLedger {
 public:
  void set(const std::string& key, Estimate e);
  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  /// IncompleteLedgerError when missing.
  const Estimate& at(const std::string& key) const;
  double value(const std::string& key) const { return at(key).value; }
  const std::map<std::string, Estimate>& entries() const { return entries_; }

  /// Entries of `other` replace those here.
  void merge(const ConstantsLedger& other);

 private:
  std::map<std::string, Estimate> entries_;
};

inline constexpr double kDefaultDelta = 0.7;

struct LedgerOptions {
  double p = 2.0;
  int N = 64;
  int bidegree = 10;
  double delta = kDefaultDelta;
  GridSpec grid{};
};

/// Weight constants: d_P, d_LP, d_M and beta_infty (the last three only for
/// p = 2), plus delta as user-supplied.
ConstantsLedger weight_ledger(const Weight& w, const LedgerOptions& opt = {});

struct SymbolConstants {
  NormBound bound;
  double beta_phi;
};

/// Symbol constants d_phi, d_psi (change-of-variables bound on the grid) and
/// beta_phi (grid sup of |grad phi|, |grad psi| over |z| <= 1/2).
SymbolConstants symbol_constants(const Symbol& s, const Weight& w, const LedgerOptions& opt = {});

/// d_phi, d_psi and beta_phi only.
ConstantsLedger symbol_ledger(const Symbol& s, const Weight& w, const LedgerOptions& opt = {});

/// The full ledger for a weight and symbol.
ConstantsLedger build_ledger(const Weight& w, const Symbol& s, const LedgerOptions& opt = {});

/// grid sup over |z| <= 1/2 of max(1, |grad phi|, |grad psi|), with
/// |grad f| = |df| + |dbar f|.
double beta_phi(const Symbol& s, int n_r = 200, int n_theta = 256);

struct Gammas {
  double gamma_psi;
  double gamma_phi;
};

/// gamma_psi = delta / (d_LP d_M d_psi), gamma_phi = delta / (d_LP d_M d_phi).
Gammas gamma_constants(const ConstantsLedger& L);

enum class Verdict { pass, fail, hypothesis_failure, not_applicable };

std::string to_string(Verdict v);

struct MarginSummary {
  std::string id;
  double min_margin;
  cplx argmin;
};

struct CertificateReport {
  std::string condition;
  Verdict verdict = Verdict::not_applicable;
  std::vector<MarginSummary> margins;
  double sup_mu = 0.0;
  bool hypothesis_ok = true;
  std::string grid;
  ConstantsLedger ledger;
  std::string rigor;
  std::vector<std::string> notes;
  std::map<std::string, double> values;

  bool passed() const { return verdict == Verdict::pass; }
};

/// Evaluation grid: radii 1 - (1 - (i + 1/2)/n_r)^2 plus the symbol's kinks
/// and features, times n_theta uniform angles.
struct CertificateGrid {
  int n_r = 400;
  int n_theta = 256;
};

/// Hypothesis |mu| <= 1/2 is enforced with a 1e-12 tolerance.
inline constexpr double kMuGate = 0.5;
inline constexpr double kMuGateTol = 1e-12;

/// Pointwise Beltrami-coefficient conditions for invertibility. Standard
/// weights use gamma (1 - |phi|^2)^(1 + alpha/2) / (1 - |z|^2)^(alpha/2) and the
/// same with psi and gamma_phi; W_A weights use
/// gamma R(|phi|) (omega(phi) / omega(z))^(1/2). In the psi condition mu is the
/// Beltrami coefficient of psi at z, of modulus |mu_phi(psi(z))|.
CertificateReport check_beltrami_bound(const Symbol& s, const Weight& w, const ConstantsLedger& L,
                                       const CertificateGrid& grid = {});

/// Symbols conformal outside a small disc: passes iff the conformality radius
/// is below delta = min(1/(2 beta_phi), ...).
CertificateReport check_annulus_conformal(const Symbol& s, const Weight& w, double p,
                                          const ConstantsLedger& L,
                                          std::optional<double> R_conformal = std::nullopt);

/// Closed-form family thresholds: twist |angle'| < C (1 - r^2) with
/// C = min(1, gamma_psi, gamma_phi); stretch |a - 1|/(a + 1) < m (1 - R^2) with
/// m = min(gamma_psi, gamma_phi). Both also need the |mu| <= 1/2 gate.
CertificateReport check_example_thresholds(const Symbol& s, const ConstantsLedger& L,
                                           const CertificateGrid& grid = {});

/// "proof-grade" when every listed entry is exact or user-supplied, otherwise
/// "evidence-grade" with the estimated entries named.
std::string rigor_label(const ConstantsLedger& L, const std::vector<std::string>& keys);

}  // namespace pcop
