#include "cflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cflow/error.hpp"

namespace cflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  // strtod accepts forms from_chars does not (leading '+'), and the reverse
  // for nothing we need; keep strtod for leniency on hand-written files.
  const std::string tmp(s);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size();
}

ClosedCurve checked(std::vector<Point2> v, std::string_view source) {
  ClosedCurve c(std::move(v));
  const ValidationReport report = validate(c);
  if (!report.ok()) {
    throw InvalidCurveError(std::string(source) + ": not a Jordan polygon: " + report.summary());
  }
  return c;
}

ClosedCurve parse_json_curve(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("curve JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("curve JSON: top level must be an object");
  if (!doc.contains("vertices")) throw ParseError("curve JSON: missing \"vertices\"");
  const json& vs = doc["vertices"];
  if (!vs.is_array()) throw ParseError("curve JSON: \"vertices\" must be an array");
  std::vector<Point2> v;
  v.reserve(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json& p = vs[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("curve JSON: vertices[" + std::to_string(i) + "] must be [x, y]");
    }
    v.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  ClosedCurve c = checked(std::move(v), "curve JSON");
  if (doc.contains("orientation")) {
    const json& o = doc["orientation"];
    if (!o.is_string() || (o != "ccw" && o != "cw")) {
      throw ParseError("curve JSON: \"orientation\" must be \"ccw\" or \"cw\"");
    }
    const Orientation declared = o == "ccw" ? Orientation::counterclockwise : Orientation::clockwise;
    if (declared != c.orientation()) {
      throw InvalidCurveError("curve JSON: declared orientation " + o.get<std::string>() +
                              " contradicts the signed area");
    }
  }
  return c;
}

ClosedCurve parse_csv_curve(std::string_view text) {
  std::vector<Point2> v;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = trim(text.substr(pos, nl == std::string_view::npos ? nl : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("curve CSV line " + std::to_string(line_no) + ": expected two fields \"x,y\"");
    }
    double x = 0.0, y = 0.0;
    const bool okx = parse_double(line.substr(0, comma), x);
    const bool oky = parse_double(line.substr(comma + 1), y);
    if (!okx || !oky) {
      if (v.empty() && !okx && !oky) continue;  // header row
      throw ParseError("curve CSV line " + std::to_string(line_no) + ": field " +
                       (okx ? "y" : "x") + " is not a number");
    }
    v.push_back({x, y});
  }
  return checked(std::move(v), "curve CSV");
}

}  // namespace

CurveFormat format_for(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".json") return CurveFormat::json;
  if (ext == ".csv") return CurveFormat::csv;
  throw ParseError("cannot infer curve format from extension '" + ext + "' (use .json or .csv)");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ClosedCurve parse_curve(std::string_view text, CurveFormat format) {
  return format == CurveFormat::json ? parse_json_curve(text) : parse_csv_curve(text);
}

std::string serialize_curve(const ClosedCurve& curve, CurveFormat format) {
  std::string out;
  if (format == CurveFormat::json) {
    out = "{\"orientation\":\"";
    out += curve.orientation() == Orientation::counterclockwise ? "ccw" : "cw";
    out += "\",\"vertices\":[";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i) out += ',';
      out += '[' + format_number(curve[i].x) + ',' + format_number(curve[i].y) + ']';
    }
    out += "]}\n";
  } else {
    out = "x,y\n";
    for (const Point2& p : curve.vertices()) out += format_number(p.x) + ',' + format_number(p.y) + '\n';
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ClosedCurve read_curve(const fs::path& path) { return read_curve(path, format_for(path)); }

ClosedCurve read_curve(const fs::path& path, CurveFormat format) {
  try {
    return parse_curve(read_file(path), format);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvalidCurveError& e) {
    throw InvalidCurveError(path.string() + ": " + e.what());
  }
}

void write_curve(const ClosedCurve& curve, const fs::path& path) {
  write_curve(curve, path, format_for(path));
}

void write_curve(const ClosedCurve& curve, const fs::path& path, CurveFormat format) {
  require_valid(curve, "write_curve");
  write_file_atomic(path, serialize_curve(curve, format));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write to '" + path.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename into '" + path.string() + "'");
  }
}

void OutputBatch::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

void OutputBatch::commit(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "'");
  // Stage everything first so a failure leaves no new file behind.
  std::vector<fs::path> staged;
  try {
    for (const auto& [name, content] : files_) {
      const fs::path tmp = dir / ("." + name + ".staged");
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      staged.push_back(tmp);
      if (!out) throw Error("cannot write '" + (dir / name).string() + "'");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out.flush()) throw Error("write to '" + (dir / name).string() + "' failed");
    }
  } catch (...) {
    for (const fs::path& p : staged) fs::remove(p, ec);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    fs::rename(staged[i], dir / files_[i].first, ec);
    if (ec) throw Error("cannot rename into '" + (dir / files_[i].first).string() + "'");
  }
}

std::string render_svg(const std::vector<std::pair<ClosedCurve, CurveStyle>>& curves) {
  if (curves.empty()) throw PreconditionError("write_svg: no curves");
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  for (const auto& [c, style] : curves) {
    for (const Point2& p : c.vertices()) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  }
  const double w = std::max(x1 - x0, 1e-12);
  const double h = std::max(y1 - y0, 1e-12);
  const double margin = 0.05 * std::max(w, h);
  const double vx = x0 - margin, vw = w + 2 * margin;
  const double vy = y0 - margin, vh = h + 2 * margin;
  const double px = vw / 800.0;  // plane units per pixel

  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"" +
         num(std::round(800.0 * vh / vw)) + "\" viewBox=\"" + num(vx) + ' ' + num(-(vy + vh)) + ' ' +
         num(vw) + ' ' + num(vh) + "\">\n";
  // The y axis is flipped so the picture is in the usual mathematical orientation.
  for (const auto& [c, style] : curves) {
    out += "<path fill=\"none\" stroke=\"" + style.stroke + "\" stroke-width=\"" +
           num(style.width * px) + '"';
    if (style.dashed) out += " stroke-dasharray=\"" + num(6 * px) + ' ' + num(4 * px) + '"';
    out += " d=\"";
    for (std::size_t i = 0; i < c.size(); ++i) {
      out += (i == 0 ? "M" : " L") + num(c[i].x) + ' ' + num(-c[i].y);
    }
    out += " Z\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::vector<std::pair<ClosedCurve, CurveStyle>>& curves, const fs::path& path) {
  write_file_atomic(path, render_svg(curves));
}

namespace {

bool parse_bool(std::string_view v, bool& out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return out = true, true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return out = false, true;
  return false;
}

bool parse_count(std::string_view v, std::uint64_t& out) {
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  return r.ec == std::errc() && r.ptr == v.data() + v.size();
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  double dt = SemiImplicit{}.dt;
  double cfl = ExplicitCfl{}.c;
  std::string scheme = "semi_implicit";
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    auto bad = [&] { return ParseError(where + ": invalid value for '" + key + "'"); };
    double d = 0.0;
    std::uint64_t u = 0;
    bool b = false;
    if (key == "flow.scheme") {
      if (value != "semi_implicit" && value != "explicit_cfl") throw bad();
      scheme = value;
    } else if (key == "flow.dt") {
      if (!parse_double(value, dt)) throw bad();
    } else if (key == "flow.cfl") {
      if (!parse_double(value, cfl)) throw bad();
    } else if (key == "flow.target_vertex_spacing") {
      if (!parse_double(value, d)) throw bad();
      cfg.flow.target_vertex_spacing = d;
    } else if (key == "flow.min_vertices") {
      if (!parse_count(value, u)) throw bad();
      cfg.flow.min_vertices = u;
    } else if (key == "flow.tangential_redistribution") {
      if (!parse_bool(value, b)) throw bad();
      cfg.flow.tangential_redistribution = b;
    } else if (key == "flow.extinction_area") {
      if (!parse_double(value, d)) throw bad();
      cfg.flow.extinction_area = d;
    } else if (key == "flow.extinction_length") {
      if (!parse_double(value, d)) throw bad();
      cfg.flow.extinction_length = d;
    } else if (key == "flow.max_steps") {
      if (!parse_count(value, u)) throw bad();
      cfg.flow.max_steps = u;
    } else if (key == "flow.simplicity_check_interval") {
      if (!parse_count(value, u)) throw bad();
      cfg.flow.simplicity_check_interval = u;
    } else if (key == "metric_tolerance") {
      if (!parse_double(value, d) || !(d >= 0.0)) throw bad();
      cfg.metric_tolerance = d;
    } else if (key == "output_dir") {
      cfg.output_dir = std::string(value);
    } else if (key == "seed") {
      if (!parse_count(value, u)) throw bad();
      cfg.seed = u;
    } else if (key == "corpus") {
      cfg.corpus = std::string(value);
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  if (scheme == "explicit_cfl") cfg.flow.dt_rule = ExplicitCfl{cfl};
  else cfg.flow.dt_rule = SemiImplicit{dt};
  try {
    cfg.flow.check();
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  try {
    return parse_run_config(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) { out += std::string(k) + " = " + v + '\n'; };
  if (const auto* e = std::get_if<ExplicitCfl>(&cfg.flow.dt_rule)) {
    put("flow.scheme", "explicit_cfl");
    put("flow.cfl", format_number(e->c));
  } else {
    put("flow.scheme", "semi_implicit");
    put("flow.dt", format_number(std::get<SemiImplicit>(cfg.flow.dt_rule).dt));
  }
  put("flow.target_vertex_spacing", format_number(cfg.flow.target_vertex_spacing));
  put("flow.min_vertices", std::to_string(cfg.flow.min_vertices));
  put("flow.tangential_redistribution", cfg.flow.tangential_redistribution ? "true" : "false");
  put("flow.extinction_area", format_number(cfg.flow.extinction_area));
  put("flow.extinction_length", format_number(cfg.flow.extinction_length));
  put("flow.max_steps", std::to_string(cfg.flow.max_steps));
  put("flow.simplicity_check_interval", std::to_string(cfg.flow.simplicity_check_interval));
  put("metric_tolerance", format_number(cfg.metric_tolerance));
  put("output_dir", cfg.output_dir.string());
  put("seed", std::to_string(cfg.seed));
  put("corpus", cfg.corpus);
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw PreconditionError("CsvTable: row width differs from header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace cflow
