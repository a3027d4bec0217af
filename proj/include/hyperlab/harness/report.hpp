// Copyright 2026 The Hyperlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Experiment reports: one row per checked quantity, CSV and JSON forms.
//
// Every row carries the enclosure [lower, upper], the bound and the kind of
// check, so its verdict can be recomputed from the row alone:
//   le      upper <= bound              margin = bound - upper
//   ge      lower >= bound              margin = lower - bound
//   abs_le  [lower, upper] meets [-bound, bound]
//                                       margin = bound - dist(0, [lower, upper])
//   info    no check                    margin = nan, pass

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlab/error.hpp"
#include "hyperlab/interval.hpp"
#include "json.hpp"

namespace hyperlab {

enum class Check { Le, Ge, AbsLe, Info };

inline std::string to_string(Check c) {
  switch (c) {
    case Check::Le:
      return "le";
    case Check::Ge:
      return "ge";
    case Check::AbsLe:
      return "abs_le";
    case Check::Info:
      return "info";
  }
  return "?";
}

inline Check parse_check(const std::string& s) {
  for (Check c : {Check::Le, Check::Ge, Check::AbsLe, Check::Info}) {
    if (to_string(c) == s) {
      return c;
    }
  }
  throw ConfigError("unknown check '" + s + "'");
}

struct ReportRow {
  std::string experiment;
  std::string op;
  std::string model;
  std::string input;
  Check check = Check::Info;
  double lower = 0;
  double upper = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;

  bool operator==(const ReportRow& o) const {
    auto same = [](double x, double y) { return x == y || (std::isnan(x) && std::isnan(y)); };
    return experiment == o.experiment && op == o.op && model == o.model && input == o.input &&
           check == o.check && same(lower, o.lower) && same(upper, o.upper) &&
           same(bound, o.bound) && same(margin, o.margin) && pass == o.pass;
  }
};

inline double check_margin(Check c, double lower, double upper, double bound) {
  switch (c) {
    case Check::Le:
      return bound - upper;
    case Check::Ge:
      return lower - bound;
    case Check::AbsLe: {
      double dist = lower > 0 ? lower : (upper < 0 ? -upper : 0.0);
      return bound - dist;
    }
    case Check::Info:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline ReportRow make_row(std::string experiment, std::string op, std::string model,
                          std::string input, Check check, double lower, double upper,
                          double bound = std::numeric_limits<double>::quiet_NaN()) {
  ReportRow r{std::move(experiment), std::move(op), std::move(model), std::move(input), check,
              lower, upper, bound};
  r.margin = check_margin(check, lower, upper, bound);
  r.pass = check == Check::Info || r.margin >= 0;
  return r;
}

inline ReportRow make_row(std::string experiment, std::string op, std::string model,
                          std::string input, Check check, const IntervalValue& v,
                          double bound = std::numeric_limits<double>::quiet_NaN()) {
  return make_row(std::move(experiment), std::move(op), std::move(model), std::move(input), check,
                  v.lower, v.upper, bound);
}

struct Report {
  std::vector<ReportRow> rows;

  std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& r : rows) {
      n += r.pass ? 1 : 0;
    }
    return n;
  }
  std::size_t failed() const { return rows.size() - passed(); }
  bool all_pass() const { return failed() == 0; }

  void append(const std::vector<ReportRow>& more) {
    rows.insert(rows.end(), more.begin(), more.end());
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

inline const char* kCsvHeader = "experiment,op,model,input,check,lower,upper,bound,margin,pass";

inline std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.experiment) << ',' << csv_field(r.op) << ',' << csv_field(r.model) << ','
        << csv_field(r.input) << ',' << to_string(r.check) << ',' << format_number(r.lower) << ','
        << format_number(r.upper) << ',' << format_number(r.bound) << ','
        << format_number(r.margin) << ',' << (r.pass ? 1 : 0) << "\n";
  }
  return out.str();
}

namespace detail {

inline nlohmann::json number_json(double v) {
  if (std::isnan(v)) {
    return nullptr;
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return v;
}

inline double json_number(const nlohmann::json& j) {
  if (j.is_null()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (j.is_string()) {
    return j.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::json to_json(const Report& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"experiment", r.experiment},
                    {"op", r.op},
                    {"model", r.model},
                    {"input", r.input},
                    {"check", to_string(r.check)},
                    {"lower", detail::number_json(r.lower)},
                    {"upper", detail::number_json(r.upper)},
                    {"bound", detail::number_json(r.bound)},
                    {"margin", detail::number_json(r.margin)},
                    {"pass", r.pass}});
  }
  return {{"rows", rows},
          {"summary",
           {{"rows", report.rows.size()}, {"passed", report.passed()}, {"failed", report.failed()}}}};
}

inline Report report_from_json(const nlohmann::json& j) {
  Report report;
  for (const auto& r : j.at("rows")) {
    ReportRow row;
    row.experiment = r.at("experiment").get<std::string>();
    row.op = r.at("op").get<std::string>();
    row.model = r.at("model").get<std::string>();
    row.input = r.at("input").get<std::string>();
    row.check = parse_check(r.at("check").get<std::string>());
    row.lower = detail::json_number(r.at("lower"));
    row.upper = detail::json_number(r.at("upper"));
    row.bound = detail::json_number(r.at("bound"));
    row.margin = detail::json_number(r.at("margin"));
    row.pass = r.at("pass").get<bool>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw ConfigError("cannot write " + path.string());
  }
}

// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
inline void emit_report(const Report& report, const std::filesystem::path& dir,
                        const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  write_file(dir / (stem + ".csv"), to_csv(report));
  write_file(dir / (stem + ".json"), to_json(report).dump(2) + "\n");
}

}  // namespace hyperlab
