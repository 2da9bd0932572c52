#include <gtest/gtest.h>

#include <cmath>

#include "pcop/certificates.hpp"

using namespace pcop;

namespace {

const Weight kW0 = Weight::standard(0.0);

LedgerOptions fast_options() {
  LedgerOptions opt;
  opt.N = 32;
  opt.bidegree = 6;
  opt.grid = {96, 256};
  return opt;
}

const ConstantsLedger& base_ledger() {
  static const ConstantsLedger L = weight_ledger(kW0, fast_options());
  return L;
}

ConstantsLedger ledger_for(const Symbol& s) {
  ConstantsLedger L = base_ledger();
  L.merge(symbol_ledger(s, kW0, fast_options()));
  return L;
}

// Every constant user-supplied so that gamma_psi = gamma_phi = g exactly.
ConstantsLedger flat_ledger(double g) {
  ConstantsLedger L;
  L.set("delta", {g, Provenance::user_supplied, ""});
  for (const char* k : {"d_LP", "d_M", "d_phi", "d_psi", "d_P", "beta_infty", "beta_phi"})
    L.set(k, {1.0, Provenance::user_supplied, ""});
  return L;
}

}  // namespace

TEST(Ledger, Validation) {
  ConstantsLedger L;
  EXPECT_THROW(L.set("d_M", {0.0, Provenance::exact, ""}), ParameterError);
  EXPECT_THROW(L.set("d_M", {-1.0, Provenance::exact, ""}), ParameterError);
  EXPECT_THROW(L.set("d_M", {INFINITY, Provenance::exact, ""}), ParameterError);
  EXPECT_THROW(L.set("delta", {0.71, Provenance::user_supplied, ""}), ParameterError);
  EXPECT_NO_THROW(L.set("delta", {0.7, Provenance::user_supplied, ""}));
  EXPECT_THROW(L.at("d_LP"), IncompleteLedgerError);
  EXPECT_FALSE(L.has("d_LP"));

  ConstantsLedger M;
  M.set("delta", {0.5, Provenance::user_supplied, "override"});
  M.set("d_LP", {1.2, Provenance::estimated_lower_bound, ""});
  L.merge(M);
  EXPECT_EQ(L.value("delta"), 0.5);
  EXPECT_EQ(L.at("delta").note, "override");
  EXPECT_EQ(L.entries().size(), 2u);
}

TEST(Ledger, StandardWeightEntries) {
  const ConstantsLedger& L = base_ledger();
  EXPECT_EQ(L.value("d_P"), 1.0);
  EXPECT_EQ(L.at("d_P").provenance, Provenance::exact);
  EXPECT_NEAR(L.value("d_LP") * L.value("d_LP"), 2.0 * 31 / 33.0, 1e-12);
  EXPECT_EQ(L.at("d_LP").provenance, Provenance::estimated_lower_bound);
  EXPECT_EQ(L.at("d_M").provenance, Provenance::estimated_lower_bound);
  EXPECT_NEAR(L.value("beta_infty"), std::sqrt(256.0 / 27.0), 1e-6);
  EXPECT_EQ(L.at("delta").provenance, Provenance::user_supplied);
  EXPECT_EQ(L.value("delta"), kDefaultDelta);
}

TEST(Ledger, IdentitySymbolConstants) {
  const ConstantsLedger L = ledger_for(make_identity());
  EXPECT_NEAR(L.value("d_phi"), 1.0, 1e-14);
  EXPECT_NEAR(L.value("d_psi"), 1.0, 1e-14);
  EXPECT_EQ(L.value("beta_phi"), 1.0);
  EXPECT_EQ(L.at("d_phi").provenance, Provenance::estimated_upper_bound);
}

TEST(Ledger, NonHilbertExponent) {
  LedgerOptions opt = fast_options();
  opt.p = 1.5;
  const ConstantsLedger L = weight_ledger(kW0, opt);
  EXPECT_EQ(L.at("d_P").provenance, Provenance::estimated_lower_bound);
  EXPECT_GE(L.value("d_P"), 1.0);
  EXPECT_FALSE(L.has("d_M"));
  EXPECT_FALSE(L.has("beta_infty"));
  ConstantsLedger full = L;
  full.merge(symbol_ledger(make_identity(), kW0, opt));
  EXPECT_THROW(check_annulus_conformal(make_identity(), kW0, 1.5, full), IncompleteLedgerError);
}

TEST(Gammas, Formula) {
  ConstantsLedger L = flat_ledger(0.6);
  L.set("d_LP", {2.0, Provenance::user_supplied, ""});
  L.set("d_psi", {3.0, Provenance::user_supplied, ""});
  const Gammas g = gamma_constants(L);
  EXPECT_DOUBLE_EQ(g.gamma_psi, 0.6 / 6.0);
  EXPECT_DOUBLE_EQ(g.gamma_phi, 0.6 / 2.0);
}

TEST(Rigor, Labels) {
  EXPECT_EQ(rigor_label(flat_ledger(0.5), {"d_LP", "d_M"}), "proof-grade");
  const std::string r = rigor_label(base_ledger(), {"d_P", "d_LP", "delta"});
  EXPECT_EQ(r.rfind("evidence-grade", 0), 0u);
  EXPECT_NE(r.find("d_LP"), std::string::npos);
  EXPECT_EQ(r.find("d_P "), std::string::npos);
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::pass), "pass");
  EXPECT_EQ(to_string(Verdict::fail), "fail");
  EXPECT_EQ(to_string(Verdict::hypothesis_failure), "hypothesis-failure");
  EXPECT_EQ(to_string(Verdict::not_applicable), "not-applicable");
}

TEST(Beltrami, IdentityPasses) {
  const ConstantsLedger L = ledger_for(make_identity());
  const CertificateReport r = check_beltrami_bound(make_identity(), kW0, L);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(r.hypothesis_ok);
  EXPECT_EQ(r.sup_mu, 0.0);
  ASSERT_EQ(r.margins.size(), 2u);
  EXPECT_EQ(r.margins[0].id, "psi_condition");
  EXPECT_EQ(r.margins[1].id, "phi_condition");
  EXPECT_GT(r.margins[0].min_margin, 0.0);
  EXPECT_EQ(r.rigor.rfind("evidence-grade", 0), 0u);
}

TEST(Beltrami, LargeMuTriggersGate) {
  const Symbol s = make_radial_stretch(3.0, 0.5);
  const ConstantsLedger L = ledger_for(s);
  const CertificateReport b = check_beltrami_bound(s, kW0, L);
  const CertificateReport t = check_example_thresholds(s, L);
  EXPECT_EQ(b.verdict, Verdict::hypothesis_failure);
  EXPECT_EQ(t.verdict, Verdict::hypothesis_failure);
  EXPECT_FALSE(b.hypothesis_ok);
  EXPECT_NEAR(b.sup_mu, 0.5, 1e-9);
}

TEST(Beltrami, Example3FailsGate) {
  const Symbol s = make_example3(tune_example3().params);
  const ConstantsLedger L = ledger_for(s);
  const CertificateReport r = check_beltrami_bound(s, kW0, L);
  EXPECT_EQ(r.verdict, Verdict::hypothesis_failure);
  EXPECT_GT(r.sup_mu, 0.9);
  const CertificateReport a = check_annulus_conformal(s, kW0, 2.0, L);
  EXPECT_EQ(a.verdict, Verdict::fail);
  EXPECT_EQ(check_example_thresholds(s, L).verdict, Verdict::not_applicable);
}

TEST(Beltrami, GateIsStrict) {
  // |mu| = 1/2 exactly is not accepted, just below is.
  const double a_edge = 3.0;
  const Symbol edge = make_radial_stretch(a_edge, 0.5);
  EXPECT_FALSE(check_example_thresholds(edge, flat_ledger(0.7)).hypothesis_ok);
  const Symbol inside = make_radial_stretch(2.99, 0.5);
  EXPECT_TRUE(check_example_thresholds(inside, flat_ledger(0.7)).hypothesis_ok);
}

TEST(Thresholds, TwistAtExactlyCIsFail) {
  const ConstantsLedger L = flat_ledger(0.5);
  const CertificateReport at = check_example_thresholds(make_twist_poly(0.5), L);
  EXPECT_EQ(at.verdict, Verdict::fail);
  EXPECT_EQ(at.margins[0].min_margin, 0.0);
  EXPECT_EQ(check_example_thresholds(make_twist_poly(0.4999), L).verdict, Verdict::pass);
  EXPECT_EQ(check_example_thresholds(make_twist_poly(-0.4999), L).verdict, Verdict::pass);
  EXPECT_EQ(at.values.at("C"), 0.5);
}

TEST(Thresholds, TwistCapAtOne) {
  // With gamma > 1 the threshold constant is still 1.
  ConstantsLedger L = flat_ledger(0.7);
  L.set("d_M", {0.5, Provenance::user_supplied, ""});
  const CertificateReport r = check_example_thresholds(make_twist_poly(0.99), L);
  EXPECT_EQ(r.values.at("C"), 1.0);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(check_example_thresholds(make_twist_poly(1.01), L).verdict, Verdict::fail);
}

TEST(Thresholds, StretchBoundsBracketVerdict) {
  const ConstantsLedger L = flat_ledger(0.3);
  const double R = 0.5;
  const CertificateReport probe = check_example_thresholds(make_radial_stretch(1.0, R), L);
  const double au = probe.values.at("a_upper"), al = probe.values.at("a_lower");
  EXPECT_NEAR(au * al, 1.0, 1e-14);
  EXPECT_NEAR((au - 1) / (au + 1), 0.3 * (1 - R * R), 1e-14);
  EXPECT_EQ(check_example_thresholds(make_radial_stretch(au * (1 - 1e-6), R), L).verdict, Verdict::pass);
  EXPECT_EQ(check_example_thresholds(make_radial_stretch(au * (1 + 1e-6), R), L).verdict, Verdict::fail);
  EXPECT_EQ(check_example_thresholds(make_radial_stretch(al * (1 + 1e-6), R), L).verdict, Verdict::pass);
  EXPECT_EQ(check_example_thresholds(make_radial_stretch(al * (1 - 1e-6), R), L).verdict, Verdict::fail);
}

TEST(Thresholds, OtherFamiliesNotApplicable) {
  const CertificateReport r = check_example_thresholds(make_mobius({0.3, 0.0}), flat_ledger(0.5));
  EXPECT_EQ(r.verdict, Verdict::not_applicable);
  EXPECT_FALSE(r.notes.empty());
}

// Shrinking gamma (a larger constant anywhere in the denominator) can only
// lower margins, so a fail never turns into a pass.
TEST(Coherence, LedgerMonotonicity) {
  for (const Symbol& s : {make_twist_poly(0.3), make_twist_poly(0.9), make_radial_stretch(1.05, 0.5),
                          make_radial_stretch(0.9, 0.5)}) {
    const ConstantsLedger L = ledger_for(s);
    double prev_b = INFINITY, prev_t = INFINITY;
    bool failed = false;
    for (double scale : {1.0, 1.5, 2.0, 4.0}) {
      ConstantsLedger M = L;
      M.set("d_LP", {L.value("d_LP") * scale, Provenance::user_supplied, ""});
      const CertificateReport b = check_beltrami_bound(s, kW0, M);
      const CertificateReport t = check_example_thresholds(s, M);
      const double mb = std::min(b.margins[0].min_margin, b.margins[1].min_margin);
      EXPECT_LE(mb, prev_b + 1e-15) << s.spec();
      EXPECT_LE(t.margins[0].min_margin, prev_t + 1e-15) << s.spec();
      if (failed) EXPECT_NE(b.verdict, Verdict::pass) << s.spec();
      failed = failed || b.verdict != Verdict::pass;
      prev_b = mb;
      prev_t = t.margins[0].min_margin;
    }
  }
}

TEST(Coherence, ThresholdAndBeltramiAgree) {
  for (const Symbol& s : {make_twist_poly(0.0), make_twist_poly(0.3), make_twist_poly(1.5),
                          make_twist_poly(3.0), make_radial_stretch(0.9, 0.5),
                          make_radial_stretch(1.05, 0.5), make_radial_stretch(1.5, 0.5),
                          make_radial_stretch(3.0, 0.5)}) {
    const ConstantsLedger L = ledger_for(s);
    EXPECT_EQ(check_beltrami_bound(s, kW0, L).verdict, check_example_thresholds(s, L).verdict)
        << s.spec();
  }
}

TEST(Annulus, Cases) {
  const ConstantsLedger Lid = ledger_for(make_identity());
  const CertificateReport id = check_annulus_conformal(make_identity(), kW0, 2.0, Lid);
  EXPECT_EQ(id.verdict, Verdict::pass);
  EXPECT_GT(id.values.at("delta_conformal"), 0.0);
  EXPECT_LE(id.values.at("delta_conformal"), 0.5);

  const Symbol mob = make_mobius({0.3, 0.0});
  EXPECT_EQ(check_annulus_conformal(mob, kW0, 2.0, ledger_for(mob)).verdict, Verdict::hypothesis_failure);
  EXPECT_EQ(check_annulus_conformal(make_identity(), kW0, 2.5, Lid).verdict, Verdict::not_applicable);
  EXPECT_EQ(check_annulus_conformal(make_identity(), kW0, 1.0, Lid).verdict, Verdict::not_applicable);
  const Symbol tw = make_twist_poly(0.3);
  EXPECT_EQ(check_annulus_conformal(tw, kW0, 2.0, ledger_for(tw)).verdict, Verdict::not_applicable);
  // A stretch conformal outside a small radius passes, outside a large one fails.
  const CertificateReport small = check_annulus_conformal(make_identity(), kW0, 2.0, Lid, 1e-4);
  const CertificateReport large = check_annulus_conformal(make_identity(), kW0, 2.0, Lid, 0.9);
  EXPECT_EQ(small.verdict, Verdict::pass);
  EXPECT_EQ(large.verdict, Verdict::fail);
}

TEST(Beltrami, ExponentialWeightRuns) {
  const Weight w = Weight::exponential(1.0, 1.0);
  LedgerOptions opt = fast_options();
  const ConstantsLedger L = build_ledger(w, make_identity(), opt);
  EXPECT_EQ(check_beltrami_bound(make_identity(), w, L).verdict, Verdict::pass);
  const Symbol tw = make_twist_poly(0.3);
  const CertificateReport r = check_beltrami_bound(tw, w, build_ledger(w, tw, opt));
  // R(r) decays faster than 1 - r^2 at the boundary, so the twist fails there.
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_GT(std::abs(r.margins[0].argmin), 0.9);
}
