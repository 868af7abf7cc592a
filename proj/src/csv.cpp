#include "fluorep/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace fluorep {

std::string format_g9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

std::string escape_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += escape_cell(row[i]);
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::invalid_argument("to_csv: row arity does not match header");
    append_row(out, row);
  }
  return out;
}

CsvTable sweep_to_csv(const SweepTable& table) {
  CsvTable csv;
  csv.header = {"distance_km",
                "rate_new_single_hz",
                "rate_new_dual_hz",
                "rate_ref_dlcz_hz",
                "rate_ref_dual_hz",
                "ratio_single",
                "ratio_dual",
                "opt_segments_new_single",
                "opt_q_new_single",
                "opt_segments_new_dual",
                "opt_q_new_dual",
                "opt_segments_ref_dlcz",
                "opt_q_ref_dlcz",
                "opt_segments_ref_dual",
                "opt_q_ref_dual"};
  for (const SweepRow& row : table.rows) {
    std::vector<std::string> cells;
    cells.push_back(format_g9(row.distance_km));
    cells.push_back(format_g9(row.new_single.rate_hz));
    cells.push_back(format_g9(row.new_dual.rate_hz));
    cells.push_back(format_g9(row.ref_dlcz.rate_hz));
    cells.push_back(format_g9(row.ref_dual.rate_hz));
    cells.push_back(format_g9(row.ratio_single));
    cells.push_back(format_g9(row.ratio_dual));
    for (const SchemePoint* point :
         {&row.new_single, &row.new_dual, &row.ref_dlcz, &row.ref_dual}) {
      cells.push_back(std::to_string(point->segments));
      cells.push_back(format_g9(point->q));
    }
    csv.rows.push_back(std::move(cells));
  }
  return csv;
}

}  // namespace fluorep
