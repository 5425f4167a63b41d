#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cp3o/io.hpp"
#include "cp3o/search.hpp"

using namespace cp3o;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            ("cp3o_io_test_" + std::to_string(++counter) + ".csv"))
               .string();
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv header auto-detection is reported") {
  TempFile with_header("time,value\n1,2.5\n2,3.5\n");
  const auto t1 = read_csv(with_header.path, HeaderMode::Auto);
  CHECK(t1.header_detected);
  CHECK(t1.columns == std::vector<std::string>{"time", "value"});
  REQUIRE(t1.rows.size() == 2);
  CHECK(t1.rows[1][1] == 3.5);

  TempFile headerless("1,2.5\n2,3.5\n");
  const auto t2 = read_csv(headerless.path, HeaderMode::Auto);
  CHECK_FALSE(t2.header_detected);
  CHECK(t2.columns == std::vector<std::string>{"col1", "col2"});
  CHECK(t2.rows.size() == 2);

  // numeric-looking first row can still be forced to a header
  const auto t3 = read_csv(headerless.path, HeaderMode::Yes);
  CHECK(t3.header_detected);
  CHECK(t3.rows.size() == 1);
}

TEST_CASE("csv errors name the offending cell") {
  TempFile bad("1,2\n3,oops\n");
  CHECK_THROWS_WITH(read_csv(bad.path, HeaderMode::No),
                    Catch::Contains("row 2") && Catch::Contains("column 2"));
  TempFile ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged.path, HeaderMode::No), InputError);
  CHECK_THROWS_AS(read_csv("/nonexistent/nowhere.csv", HeaderMode::Auto),
                  InputError);
}

TEST_CASE("column selection by name and 1-based index") {
  TempFile f("a,b,c\n1,2,3\n4,5,6\n");
  const auto table = read_csv(f.path, HeaderMode::Auto);
  CHECK(resolve_columns(table, "") == std::vector<int>{0, 1, 2});
  CHECK(resolve_columns(table, "b") == std::vector<int>{1});
  CHECK(resolve_columns(table, "3,1") == std::vector<int>{2, 0});
  CHECK_THROWS_AS(resolve_columns(table, "nope"), InputError);
  CHECK_THROWS_AS(resolve_columns(table, "4"), InputError);

  const auto series = table_to_series(table, {2, 0});
  CHECK(series.rows() == 2);
  CHECK(series.dim() == 2);
  CHECK(series.value(0, 0) == 3);
  CHECK(series.value(1, 1) == 4);
}

TEST_CASE("transforms apply in order and report diff count") {
  TimeSeries s({1.0, std::exp(1.0), std::exp(3.0)});
  int diffs = 0;
  const auto out = apply_transforms(s, {"log", "diff"}, &diffs);
  CHECK(diffs == 1);
  REQUIRE(out.rows() == 2);
  CHECK(out.value(0, 0) == Approx(1.0));
  CHECK(out.value(1, 0) == Approx(2.0));

  TimeSeries with_zero({1.0, 0.0, 2.0});
  CHECK_THROWS_WITH(apply_log(with_zero), Catch::Contains("row 2"));
  CHECK_THROWS_AS(apply_transforms(s, {"sqrt"}, nullptr), ConfigError);
  TimeSeries single(std::vector<double>{1.0});
  CHECK_THROWS_AS(apply_diff(single), InputError);
}

TEST_CASE("detection JSON round-trips field for field") {
  std::vector<double> v(80, 0.0);
  for (int t = 40; t < 80; ++t) v[t] = 5.0 + 0.01 * t;
  Cp3oConfig cfg;
  cfg.max_changes = 3;
  cfg.min_size = 10;
  cfg.metric = {MetricKind::EnergyIncomplete, 1.0, std::nullopt};
  const auto res = run_cp3o(TimeSeries(std::move(v)), cfg);

  json echo;
  echo["series_length"] = 80;
  echo["k_capped"] = res.k_capped;
  echo["knee_fallback"] = res.knee_fallback;
  std::vector<int> rows = res.change_points.change_points;
  const json doc = detection_to_json(res, echo, rows);

  // stable schema keys
  for (const char* key :
       {"config", "index_base", "change_points", "original_row_map",
        "selected_k", "gof_curve", "segmentations", "degenerate_flag",
        "runtime_s"})
    CHECK(doc.contains(key));
  CHECK(doc["index_base"] == 1);

  const auto reparsed = json::parse(doc.dump(2));
  const auto back = detection_from_json(reparsed);
  CHECK(back.same_detection(res));
  CHECK(back.runtime_s == res.runtime_s);
}

TEST_CASE("prune size matrix serializes every time index") {
  std::vector<double> v(60, 0.0);
  for (int t = 30; t < 60; ++t) v[t] = 3.0;
  Cp3oConfig cfg;
  cfg.max_changes = 3;
  cfg.min_size = 10;
  cfg.metric = {MetricKind::EnergyIncomplete, 1.0, std::nullopt};
  const auto res = run_cp3o(TimeSeries(std::move(v)), cfg);
  const auto csv = prune_sizes_csv(res);
  // header plus one row per time index
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
  CHECK(csv.substr(0, 9) == "t,S1,S2,S");
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 12345.6789, -2.5e-9}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
