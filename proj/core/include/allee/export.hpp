#pragma once

#include <iosfwd>

#include "allee/hypotheses.hpp"
#include "allee/orbits.hpp"
#include "allee/regime.hpp"

namespace allee {

/// Strong case: `param,lambda1m,lambda1p,lambda2m,lambda2p,case`.
/// Weak case: `param,R0,verdict`. Failed samples carry empty fields.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

/// One `thresholds` block listing every located crossing.
void write_thresholds(std::ostream& os, const SweepResult& sweep);

void write_index_ledger(std::ostream& os, const IndexLedger& ledger);

/// Human-readable regime report.
void write_regime_text(std::ostream& os, const RegimeReport& report);

void write_hypothesis_report(std::ostream& os, const HypothesisReport& report);

}  // namespace allee
