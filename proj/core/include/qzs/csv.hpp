#pragma once

#include <string>
#include <vector>

#include "qzs/diagnostics.hpp"
#include "qzs/experiments.hpp"

namespace qzs {

inline constexpr const char* kDiagnosticsHeader = "t,mass,energy,rm,rh,q_defect,fp_iters";
inline constexpr const char* kReportHeader = "axis,stages,level,param,e,n,rate_e,rate_n";

/// Header plus one row per record; reals with 17 significant digits, q_defect
/// left empty when not tracked.
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

/// One row per level; rate columns are empty on the first level.
void write_report_csv(const ConvergenceReport& report, const std::string& path);

/// Plain two-column-or-more table of reals, used for snapshot fields.
void write_table_csv(const std::string& header, const std::vector<std::vector<double>>& columns,
                     const std::string& path);

std::string format_real(double x);

}  // namespace qzs
