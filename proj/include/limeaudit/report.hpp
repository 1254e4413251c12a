#pragma once

#include <ostream>
#include <string>

#include "limeaudit/audit.hpp"

namespace limeaudit {

/// Flat table: feature,selection_probability,scale,target_id.
/// A single report contributes one row per feature; a sweep contributes
/// features x scales rows.
void write_report_csv(std::ostream& out, const AuditReport& report);
void write_sweep_csv(std::ostream& out, const ProximitySweep& sweep);

/// Bar chart of selection probabilities on [0,1]: one bar per feature,
/// informative features tinted red. Grouped bars per scale for sweeps,
/// non-default scales drawn with a stripe pattern and a legend.
std::string render_report_svg(const AuditReport& report);
std::string render_sweep_svg(const ProximitySweep& sweep);

}  // namespace limeaudit
