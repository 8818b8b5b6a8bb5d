#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nashstream {

// One benchmark cell. Optional fields print as empty CSV cells; doubles use
// shortest-round-trip formatting, so a row's bytes are stable across runs.
// Wall time is only populated when timing is requested, keeping default
// reports byte-identical run to run.
struct ReportRow {
  std::string instance_id;
  std::string generator_params;
  std::string algorithm;
  std::string seed_or_k;  // "seed=7", "k=3", "mixture", "expected-lb", or ""
  std::optional<double> algorithm_nw;
  std::optional<double> offline_nw;
  std::optional<double> fw_gap;
  std::optional<double> competitive_ratio;
  std::optional<double> lambda_star;
  std::optional<double> mu_star;
  std::optional<double> bound_value;
  // "yes"/"no" literal comparison recorded for the row's bound; empty when the
  // row has no bound.
  std::string bound_satisfied;
  std::optional<double> wall_time_ms;
};

extern const char* const kReportHeader;

// RFC 4180: fields containing comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_escape(const std::string& field);
std::string report_row_to_csv(const ReportRow& row);
void write_report(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace nashstream
