#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cflow/flow.hpp"
#include "cflow/geometry.hpp"

namespace cflow {

enum class CurveFormat { json, csv };

// Format from the file extension (.json or .csv); throws ParseError otherwise.
CurveFormat format_for(const std::filesystem::path& path);

// Shortest text that reads back to the same double (17 significant digits).
std::string format_number(double v);

// JSON: {"orientation":"ccw","vertices":[[x,y],...]}. CSV: one "x,y" row per
// vertex; a first row that is not numeric is taken as a header.
// Both throw ParseError with line/field context on malformed input and
// InvalidCurveError carrying the validation summary for a non-Jordan polygon.
ClosedCurve parse_curve(std::string_view text, CurveFormat format);
std::string serialize_curve(const ClosedCurve& curve, CurveFormat format);

ClosedCurve read_curve(const std::filesystem::path& path);
ClosedCurve read_curve(const std::filesystem::path& path, CurveFormat format);
void write_curve(const ClosedCurve& curve, const std::filesystem::path& path);
void write_curve(const ClosedCurve& curve, const std::filesystem::path& path, CurveFormat format);

struct CurveStyle {
  std::string stroke = "#1f77b4";
  double width = 1.0;  // in pixels of the 800 px wide canvas
  bool dashed = false;
};

// One closed path per curve, view box fitted to all curves with a 5% margin.
std::string render_svg(const std::vector<std::pair<ClosedCurve, CurveStyle>>& curves);
void write_svg(const std::vector<std::pair<ClosedCurve, CurveStyle>>& curves,
               const std::filesystem::path& path);

// Writes to a temporary file in the same directory, then renames it over
// `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// Files produced by one command. Nothing reaches the output directory until
// commit(), and each file appears atomically.
class OutputBatch {
 public:
  void add(std::string name, std::string content);
  void commit(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct RunConfig {
  FlowConfig flow;
  double metric_tolerance = 1e-9;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  std::string corpus = "circles";
};

// Flat "key = value" lines; '#' starts a comment. Keys:
//   flow.scheme (semi_implicit | explicit_cfl), flow.dt, flow.cfl,
//   flow.target_vertex_spacing, flow.min_vertices, flow.tangential_redistribution,
//   flow.extinction_area, flow.extinction_length, flow.max_steps,
//   flow.simplicity_check_interval, metric_tolerance, output_dir, seed, corpus
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string serialize_run_config(const RunConfig& cfg);

// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cflow
