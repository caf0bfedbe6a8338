#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "plap/experiments.hpp"

namespace plap {

/// Reals are written with 6 significant digits ("%.6g").
std::string format_real(double v);

/// Header "dim,h,best_error,eoc,p_star".
void write_table_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_table_csv(std::istream& is);

/// Header "p,error".
void write_sweep_csv(std::ostream& os, const SweepCurve& curve);
SweepCurve read_sweep_csv(std::istream& is);

}  // namespace plap
