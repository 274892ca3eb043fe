#pragma once

#include <string>
#include <vector>

#include "surro/panel.hpp"

namespace surro {

/// Long-format panel schema: header subject_id,time,arm,outcome,surrogate
/// plus zero or more x_-prefixed covariate columns (constant within
/// subject). Empty cells are missing; duplicate (subject, time) rows are
/// rejected.
Panel ingest_csv(const std::string& path);

void write_panel_csv(const Panel& panel, const std::string& path);

/// One plot-ready table: stable column names, one row per grid entry,
/// floats at 17 significant digits, flagged-undefined values left empty.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  void add_row(std::vector<std::string> row);
};

std::string format_double(double v);
void write_csv(const CsvTable& table, const std::string& path);

}  // namespace surro
