#include "allee/export.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace allee {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string multiplier(const std::complex<double>& z) {
  if (z.imag() == 0.0) return short_num(z.real());
  return short_num(z.real()) + (z.imag() < 0.0 ? "-" : "+") + short_num(std::abs(z.imag())) + "i";
}

void write_orbit_line(std::ostream& os, const PeriodicOrbit& o) {
  os << "  " << o.label << ": (" << short_num(o.initial_state.n) << ", "
     << short_num(o.initial_state.p) << ") multipliers " << multiplier(o.multipliers[0]) << ", "
     << multiplier(o.multipliers[1]) << " " << to_string(o.stability)
     << " residual " << short_num(o.residual) << '\n';
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  if (sweep.allee_kind == AlleeKind::Strong) {
    os << "param,lambda1m,lambda1p,lambda2m,lambda2p,case\n";
    for (const auto& s : sweep.samples) {
      os << num(s.value) << ',' << num(s.lambda1_minus) << ',' << num(s.lambda1_plus) << ','
         << num(s.lambda2_minus) << ',' << num(s.lambda2_plus) << ','
         << (s.case_label ? to_string(*s.case_label) : std::string_view{}) << '\n';
    }
    return;
  }
  os << "param,R0,verdict\n";
  for (const auto& s : sweep.samples) {
    std::string verdict;
    if (s.R0) verdict = *s.R0 > 1.0 ? "persistence" : (*s.R0 < 1.0 ? "extinction" : "threshold");
    os << num(s.value) << ',' << num(s.R0) << ',' << verdict << '\n';
  }
}

void write_thresholds(std::ostream& os, const SweepResult& sweep) {
  os << "thresholds " << sweep.parameter_path << '\n';
  for (const auto& t : sweep.thresholds) os << t.crossing << ' ' << num(t.value) << '\n';
  int failed = 0;
  for (const auto& s : sweep.samples) failed += s.ok() ? 0 : 1;
  if (failed > 0) os << "# " << failed << " sample(s) failed\n";
}

void write_index_ledger(std::ostream& os, const IndexLedger& ledger) {
  os << "index ledger (" << ledger.assumption << ")\n";
  for (const auto& e : ledger.fixed_points) {
    os << "  " << e.label << " [" << to_string(e.location) << "] index " << e.index << " x"
       << e.weight << '\n';
  }
  os << "  total " << ledger.total << (ledger.consistent() ? " (consistent)" : " (expected 1)")
     << '\n';
}

void write_regime_text(std::ostream& os, const RegimeReport& r) {
  os << "family: " << to_string(r.family) << '\n';
  os << "allee: " << (r.allee_kind == AlleeKind::Strong ? "strong" : "weak") << '\n';
  if (r.R0) os << "R0: " << num(*r.R0) << '\n';
  if (r.multipliers) {
    os << "lambda1-: " << num(r.multipliers->lambda1_minus) << '\n'
       << "lambda1+: " << num(r.multipliers->lambda1_plus) << '\n'
       << "lambda2-: " << num(r.multipliers->lambda2_minus) << '\n'
       << "lambda2+: " << num(r.multipliers->lambda2_plus) << '\n'
       << "formula/monodromy gap: " << short_num(r.multipliers->crosscheck_error) << '\n';
  }
  if (r.case_label) os << "case: " << to_string(*r.case_label) << '\n';
  if (r.conjecture) os << "conjecture: predator extinction (open problem)\n";
  if (r.lg) {
    os << "prey-axis lambda2: " << num(r.lg->lambda2_prey_axis) << '\n'
       << "predator-axis lambda1: " << num(r.lg->lambda1_predator_axis) << '\n'
       << "predator-axis lambda2: " << num(r.lg->lambda2_predator_axis) << '\n'
       << "predator-axis formulas: " << (r.lg->triangular ? "triangular" : "monodromy fallback")
       << '\n';
  }
  os << "verdict: " << r.verdict << '\n';
  os << "invariant box: N <= " << short_num(r.box.n_max) << ", P <= " << short_num(r.box.p_max)
     << " (eps " << short_num(r.box.epsilon) << ", r_bar " << short_num(r.box.r_bar) << ")\n";
  os << "boundary orbits:\n";
  for (const auto& o : r.boundary_orbits) write_orbit_line(os, o);
  os << "interior orbits: " << r.interior_orbits.size() << '\n';
  for (const auto& io : r.interior_orbits) {
    write_orbit_line(os, io.orbit);
    os << "    alpha " << num(io.alpha) << '\n';
  }
  os << "stable " << r.stable_interior << ", unstable " << r.unstable_interior << "; "
     << r.bound_note << (r.bound_holds ? " holds" : " violated") << '\n';
  if (r.ledger) write_index_ledger(os, *r.ledger);
  if (!r.ledger_note.empty()) os << "index ledger unavailable: " << r.ledger_note << '\n';
}

void write_hypothesis_report(std::ostream& os, const HypothesisReport& report) {
  for (const auto& c : report.checks) {
    const char* status = c.status == CheckStatus::Pass      ? "pass"
                         : c.status == CheckStatus::Warning ? "warn"
                                                            : "FAIL";
    os << status << ' ' << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  if (report.f0_relative_error) {
    os << "f0 relative error: " << short_num(*report.f0_relative_error) << '\n';
  }
  os << (report.passed() ? "all checks passed\n" : "hypothesis check failed\n");
}

}  // namespace allee
