#pragma once

#include <string>
#include <vector>

#include "fluorep/optimizer.hpp"

namespace fluorep {

// Minimal CSV surface: comma separated, LF line endings, header row first.
// Values containing comma, quote, CR or LF are double-quoted with quotes
// doubled. Numeric cells are printed with 9 significant digits; the byte
// output is part of the tool contract.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// %.9g formatting used for every numeric cell and report line.
std::string format_g9(double v);

std::string to_csv(const CsvTable& table);

// Fixed column order:
// distance_km, rate_new_single_hz, rate_new_dual_hz, rate_ref_dlcz_hz,
// rate_ref_dual_hz, ratio_single, ratio_dual, then per scheme
// opt_segments_*, opt_q_* in the same scheme order.
CsvTable sweep_to_csv(const SweepTable& table);

}  // namespace fluorep
