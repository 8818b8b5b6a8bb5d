#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "nashstream/report.hpp"

using namespace nashstream;

TEST_CASE("header names every column") {
  CHECK(std::string(kReportHeader) ==
        "instance_id,generator_params,algorithm,seed_or_k,algorithm_nw,"
        "offline_nw,fw_gap,competitive_ratio,lambda_star,mu_star,bound_value,"
        "bound_satisfied,wall_time_ms");
}

TEST_CASE("csv escaping follows rfc 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("") == "");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("he said \"hi\"") == "\"he said \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("cr\rhere") == "\"cr\rhere\"");
}

TEST_CASE("row serialization golden") {
  ReportRow row;
  row.instance_id = "hard-table2(n=3)";
  row.generator_params = "n=3";
  row.algorithm = "myopic";
  row.seed_or_k = "";
  row.algorithm_nw = 46.541066738689885;
  row.offline_nw = 81.0;
  row.fw_gap = 0.0;
  row.competitive_ratio = 1.7403984411183298;
  row.lambda_star = 91.0;
  row.mu_star = 81.0;
  CHECK(report_row_to_csv(row) ==
        "hard-table2(n=3),n=3,myopic,,46.541066738689885,81,0,"
        "1.7403984411183298,91,81,,,");

  // Optional cells stay empty, including wall time unless timing was requested.
  ReportRow sparse;
  sparse.instance_id = "x";
  sparse.algorithm = "myopic";
  CHECK(report_row_to_csv(sparse) == "x,,myopic,,,,,,,,,,");

  // Fields with commas are quoted.
  ReportRow quoted;
  quoted.instance_id = "random-balanced(agents=2,seed=7)";
  quoted.algorithm = "half-and-half";
  quoted.seed_or_k = "lambda=2";
  CHECK(report_row_to_csv(quoted) ==
        "\"random-balanced(agents=2,seed=7)\",,half-and-half,lambda=2,,,,,,,,,");
}

TEST_CASE("report writing is deterministic") {
  ReportRow row;
  row.instance_id = "a";
  row.algorithm = "myopic";
  row.algorithm_nw = 2.5;
  std::ostringstream first, second;
  write_report(first, {row, row});
  write_report(second, {row, row});
  CHECK(first.str() == second.str());
  CHECK(first.str() == std::string(kReportHeader) + "\n" +
                           "a,,myopic,,2.5,,,,,,,,\n" + "a,,myopic,,2.5,,,,,,,,\n");

  std::ostringstream empty;
  write_report(empty, {});
  CHECK(empty.str() == std::string(kReportHeader) + "\n");
}
