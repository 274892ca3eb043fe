#include "surro/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "surro/errors.hpp"

namespace surro {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_optional_double(const std::string& s, const char* what, long line_no) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError(std::string("csv line ") + std::to_string(line_no) + ": bad " + what +
                    " value '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw DataError(std::string("csv line ") + std::to_string(line_no) + ": bad " + what +
                    " value '" + s + "'");
  return v;
}

}  // namespace

Panel ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty file '" + path + "'");

  const std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, int> col;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (col.count(header[k])) throw DataError("csv: duplicate column '" + header[k] + "'");
    col[header[k]] = static_cast<int>(k);
  }
  for (const char* required : {"subject_id", "time", "arm", "outcome", "surrogate"})
    if (!col.count(required)) throw DataError(std::string("csv: missing column '") + required + "'");

  std::vector<std::string> covariate_names;
  std::vector<int> covariate_cols;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k].rfind("x_", 0) == 0) {
      covariate_names.push_back(header[k].substr(2));
      covariate_cols.push_back(static_cast<int>(k));
    }
  }

  struct Row {
    std::string id;
    int time, arm;
    double outcome, surrogate;
    std::vector<double> covariates;
    long line_no;
  };
  std::vector<Row> rows;
  std::set<std::pair<std::string, int>> seen;
  long line_no = 1;
  int t_max = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    Row r;
    r.line_no = line_no;
    r.id = fields[static_cast<std::size_t>(col["subject_id"])];
    if (r.id.empty()) throw DataError("csv line " + std::to_string(line_no) + ": empty subject_id");
    const std::string& time_s = fields[static_cast<std::size_t>(col["time"])];
    try {
      std::size_t used = 0;
      r.time = std::stoi(time_s, &used);
      if (used != time_s.size()) throw std::invalid_argument(time_s);
    } catch (const std::exception&) {
      throw DataError("csv line " + std::to_string(line_no) + ": bad time '" + time_s + "'");
    }
    if (r.time < 0) throw DataError("csv line " + std::to_string(line_no) + ": negative time");
    const std::string& arm_s = fields[static_cast<std::size_t>(col["arm"])];
    if (arm_s != "0" && arm_s != "1")
      throw DataError("csv line " + std::to_string(line_no) + ": arm must be 0 or 1, got '" +
                      arm_s + "'");
    r.arm = arm_s == "1" ? 1 : 0;
    r.outcome = parse_optional_double(fields[static_cast<std::size_t>(col["outcome"])], "outcome", line_no);
    r.surrogate =
        parse_optional_double(fields[static_cast<std::size_t>(col["surrogate"])], "surrogate", line_no);
    for (int c : covariate_cols) {
      const std::string& v = fields[static_cast<std::size_t>(c)];
      if (v.empty())
        throw DataError("csv line " + std::to_string(line_no) + ": empty covariate cell");
      r.covariates.push_back(parse_optional_double(v, "covariate", line_no));
    }
    if (!seen.insert({r.id, r.time}).second)
      throw DataError("csv line " + std::to_string(line_no) + ": duplicate (subject, time) = (" +
                      r.id + ", " + std::to_string(r.time) + ")");
    t_max = std::max(t_max, r.time);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DataError("csv: no data rows in '" + path + "'");

  // Assemble subjects; arm and covariates must be constant within subject.
  std::map<std::string, Subject> subjects;
  for (const auto& r : rows) {
    auto it = subjects.find(r.id);
    if (it == subjects.end()) {
      subjects.emplace(r.id, Subject{r.id, r.arm, r.covariates});
    } else {
      if (it->second.arm != r.arm)
        throw DataError("csv line " + std::to_string(r.line_no) + ": arm varies within subject '" +
                        r.id + "'");
      if (it->second.covariates != r.covariates)
        throw DataError("csv line " + std::to_string(r.line_no) +
                        ": covariates vary within subject '" + r.id + "'");
    }
  }
  std::vector<Subject> subject_list;
  subject_list.reserve(subjects.size());
  for (auto& [id, s] : subjects) subject_list.push_back(std::move(s));

  Panel panel(std::move(subject_list), t_max, std::move(covariate_names));
  for (const auto& r : rows) {
    int i = panel.find_subject(r.id);
    if (std::isfinite(r.outcome)) panel.set_outcome(i, r.time, r.outcome);
    if (std::isfinite(r.surrogate)) panel.set_surrogate(i, r.time, r.surrogate);
  }
  return panel;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_panel_csv(const Panel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "subject_id,time,arm,outcome,surrogate";
  for (const auto& name : panel.covariate_names()) out << ",x_" << name;
  out << "\n";
  for (int i = 0; i < panel.n_subjects(); ++i) {
    const Subject& s = panel.subject(i);
    for (int t = 0; t <= panel.t_max(); ++t) {
      if (!panel.has_outcome(i, t) && !panel.has_surrogate(i, t)) continue;
      out << s.id << ',' << t << ',' << s.arm << ',';
      if (panel.has_outcome(i, t)) out << format_double(panel.outcome(i, t));
      out << ',';
      if (panel.has_surrogate(i, t)) out << format_double(panel.surrogate(i, t));
      for (double x : s.covariates) out << ',' << format_double(x);
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw ConfigError("csv table: row width mismatch");
  rows.push_back(std::move(row));
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (std::size_t k = 0; k < table.columns.size(); ++k)
    out << (k ? "," : "") << table.columns[k];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace surro
