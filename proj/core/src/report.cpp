#include "nashstream/report.hpp"

#include <sstream>

#include "nashstream/numeric.hpp"

namespace nashstream {

const char* const kReportHeader =
    "instance_id,generator_params,algorithm,seed_or_k,algorithm_nw,offline_nw,"
    "fw_gap,competitive_ratio,lambda_star,mu_star,bound_value,bound_satisfied,"
    "wall_time_ms";

std::string csv_escape(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

void append_cell(std::string& row, const std::optional<double>& v) {
  row += ',';
  if (v) row += format_double(*v);
}

}  // namespace

std::string report_row_to_csv(const ReportRow& row) {
  std::string out = csv_escape(row.instance_id);
  out += ',';
  out += csv_escape(row.generator_params);
  out += ',';
  out += csv_escape(row.algorithm);
  out += ',';
  out += csv_escape(row.seed_or_k);
  append_cell(out, row.algorithm_nw);
  append_cell(out, row.offline_nw);
  append_cell(out, row.fw_gap);
  append_cell(out, row.competitive_ratio);
  append_cell(out, row.lambda_star);
  append_cell(out, row.mu_star);
  append_cell(out, row.bound_value);
  out += ',';
  out += csv_escape(row.bound_satisfied);
  append_cell(out, row.wall_time_ms);
  return out;
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  for (const ReportRow& row : rows) out << report_row_to_csv(row) << '\n';
}

}  // namespace nashstream
