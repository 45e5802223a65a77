#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/family.hpp"
#include "cflow/flow.hpp"
#include "cflow/intersect.hpp"
#include "cflow/io.hpp"
#include "cflow/levelset.hpp"
#include "cflow/metrics.hpp"
#include "cflow/verify.hpp"

using namespace cflow;
using nlohmann::json;

namespace {

const std::string kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

const std::string& color(std::size_t i) { return kPalette[i % std::size(kPalette)]; }

std::string num(double v) { return format_number(v); }

// A curve argument is a .json/.csv path or "corpus:<set>/<curve>".
ClosedCurve load_input(const std::string& arg, std::uint64_t seed) {
  const std::string prefix = "corpus:";
  if (arg.rfind(prefix, 0) == 0) {
    const std::string rest = arg.substr(prefix.size());
    const auto slash = rest.find('/');
    if (slash == std::string::npos) throw ParseError("corpus reference must look like corpus:<set>/<curve>");
    const std::string set = rest.substr(0, slash), name = rest.substr(slash + 1);
    for (NamedCurve& c : generate_corpus(set, seed)) {
      if (c.name == name) return std::move(c.curve);
    }
    throw PreconditionError("no curve '" + name + "' in corpus '" + set + "'");
  }
  return read_curve(arg);
}

// "a:b:step" or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ParseError("time grid: '" + s + "' is not a number");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ParseError("time grid: expected start:stop:step");
    const double a = to_double(parts[0]), b = to_double(parts[1]), h = to_double(parts[2]);
    if (!(h > 0.0) || !(b >= a)) throw ParseError("time grid: need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(a + h * static_cast<double>(i));
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  return out;
}

Point2 parse_point(const std::string& text) {
  const std::vector<double> v = parse_grid(text);
  if (v.size() != 2) throw ParseError("point must be given as x,y");
  return {v[0], v[1]};
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json report_json(const DistanceReport& r) {
  json j;
  j["value"] = r.value;
  j["slack"] = r.slack;
  if (r.witness) j["witness"] = {point_json(r.witness->first), point_json(r.witness->second)};
  if (r.alignment) j["alignment"] = {{"shift", r.alignment->shift}, {"reversed", r.alignment->reversed}};
  return j;
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  RunConfig run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve shortening flow experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--seed", g.seed, "random seed (overrides the config)");
  app.add_option("--out", g.out, "output directory (overrides the config)");

  OutputBatch batch;
  int status = 0;

  // evolve
  auto* evolve_cmd = app.add_subcommand("evolve", "Run curvature flow and write SVG frames and a CSV series");
  std::string ev_input;
  double ev_t = 0.1;
  double ev_snap = 0.0;
  evolve_cmd->add_option("input", ev_input, "curve file or corpus:<set>/<curve>")->required();
  evolve_cmd->add_option("--t", ev_t, "final time")->check(CLI::NonNegativeNumber);
  evolve_cmd->add_option("--snapshot-every", ev_snap, "time between SVG frames (0: first and last only)")
      ->check(CLI::NonNegativeNumber);
  evolve_cmd->callback([&] {
    const ClosedCurve gamma = load_input(ev_input, g.run.seed);
    std::vector<double> times;
    if (ev_snap > 0.0) {
      for (double t = 0.0; t < ev_t; t += ev_snap) times.push_back(t);
    } else {
      times.push_back(0.0);
    }
    times.push_back(ev_t);
    CsvTable series({"time[t]", "length[L]", "area[L^2]", "vertices[count]"});
    FlowState s = FlowState::start(gamma);
    std::size_t frame = 0;
    std::vector<std::pair<ClosedCurve, CurveStyle>> overlay;
    for (double t : times) {
      s = advance(std::move(s), t, g.run.flow);
      if (!s.alive()) break;
      series.row({num(s.time), num(length(s.curve)), num(signed_area(s.curve)), std::to_string(s.curve.size())});
      char name[32];
      std::snprintf(name, sizeof name, "frame_%04zu.svg", frame++);
      batch.add(name, render_svg({{s.curve, {}}}));
      overlay.push_back({s.curve, {color(overlay.size()), 1.0, false}});
    }
    batch.add("series.csv", series.str());
    batch.add("overlay.svg", render_svg(overlay));
    if (s.alive()) {
      batch.add("final.json", serialize_curve(s.curve, CurveFormat::json));
      std::cout << "alive at t=" << num(s.time) << " after " << s.step_count << " steps\n";
    } else {
      std::cout << "extinct at t=" << num(s.extinction->time) << " near (" << num(s.extinction->point.x) << ", "
                << num(s.extinction->point.y) << ")\n";
    }
  });

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Hausdorff and Frechet distances of two curves as JSON");
  std::string m_a, m_b;
  bool m_coarse = false;
  metrics_cmd->add_option("a", m_a)->required();
  metrics_cmd->add_option("b", m_b)->required();
  metrics_cmd->add_flag("--coarse-to-fine", m_coarse, "faster shift search for large inputs");
  metrics_cmd->callback([&] {
    const ClosedCurve a = load_input(m_a, g.run.seed), b = load_input(m_b, g.run.seed);
    FrechetOptions fo;
    if (m_coarse) fo.search = ShiftSearch::coarse_to_fine;
    json j;
    j["hausdorff"] = report_json(hausdorff(a, b));
    j["frechet"] = report_json(frechet_closed(a, b, fo));
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    batch.add("metrics.json", text);
  });

  // intersect
  auto* inter_cmd = app.add_subcommand("intersect", "Intersection counts of two evolving curves");
  std::string i_a, i_b, i_grid = "0:0.4:0.02", i_track;
  inter_cmd->add_option("a", i_a)->required();
  inter_cmd->add_option("b", i_b)->required();
  inter_cmd->add_option("--t-grid", i_grid, "start:stop:step or comma list");
  inter_cmd->add_option("--track", i_track, "seed point x,y of a trajectory to follow to the last grid time");
  inter_cmd->callback([&] {
    const ClosedCurve a = load_input(i_a, g.run.seed), b = load_input(i_b, g.run.seed);
    const std::vector<double> grid = parse_grid(i_grid);
    const CountSeries series = count_over_time(a, b, grid, g.run.flow);
    CsvTable t({"time[t]", "count[points]", "tangential[points]", "overlap[bool]"});
    for (const CountSample& s : series.samples) {
      t.row({num(s.time), std::to_string(s.count), std::to_string(s.tangential), s.overlap ? "1" : "0"});
    }
    std::cout << t.str();
    if (series.extinction_time) std::cout << "# extinct at t=" << num(*series.extinction_time) << "\n";
    batch.add("counts.csv", t.str());
    if (!i_track.empty()) {
      const Trajectory tr = track_intersection(a, b, parse_point(i_track), grid.empty() ? 0.0 : grid.back(),
                                               g.run.flow);
      CsvTable tt({"time[t]", "x[L]", "y[L]"});
      for (const TrajectorySample& s : tr.samples) tt.row({num(s.time), num(s.point.x), num(s.point.y)});
      batch.add("trajectory.csv", tt.str());
      std::cout << "# trajectory " << to_string(tr.end);
      if (tr.merge_time) std::cout << " at t=" << num(*tr.merge_time);
      std::cout << "\n";
    }
  });

  // levelset
  auto* ls_cmd = app.add_subcommand("levelset", "Nested-annuli approximation of the flow");
  std::string l_input;
  double l_t = 0.1, l_delta0 = 0.2;
  std::size_t l_K = 4;
  bool l_svg = false;
  ls_cmd->add_option("input", l_input)->required();
  ls_cmd->add_option("--t", l_t)->check(CLI::NonNegativeNumber);
  ls_cmd->add_option("--K", l_K);
  ls_cmd->add_option("--delta0", l_delta0);
  ls_cmd->add_flag("--svg", l_svg, "also write an overlay of all members");
  ls_cmd->callback([&] {
    const ClosedCurve gamma = load_input(l_input, g.run.seed);
    const LevelSetResult r = levelset_evolve(gamma, l_t, l_K, l_delta0, g.run.flow);
    CsvTable t({"k[level]", "delta[L]", "width[L]"});
    for (std::size_t k = 0; k < r.per_k_widths.size(); ++k) {
      t.row({std::to_string(k + 1), num(r.evolved.offsets[k]), num(r.per_k_widths[k])});
    }
    std::cout << t.str();
    batch.add("widths.csv", t.str());
    batch.add("representative.json", serialize_curve(r.representative, CurveFormat::json));
    if (l_svg) {
      std::vector<std::pair<ClosedCurve, CurveStyle>> curves;
      for (std::size_t k = 0; k < r.evolved.levels(); ++k) {
        curves.push_back({r.evolved.inner[k], {color(1), 0.75, true}});
        curves.push_back({r.evolved.outer[k], {color(2), 0.75, true}});
      }
      curves.push_back({r.representative, {color(0), 1.5, false}});
      batch.add("levelset.svg", render_svg(curves));
    }
  });

  // family
  auto* fam_cmd = app.add_subcommand("family", "Two-point family experiments");
  std::string f_input = "corpus:circles/circle_r1.0";
  std::size_t f_anchor = 0;
  std::optional<double> f_s, f_tinf;
  bool f_find = false, f_common = false, f_cont = false;
  std::string f_hit;
  double f_tol = kDefaultTolS;
  fam_cmd->add_option("input", f_input, "star-shaped curve");
  fam_cmd->add_option("--anchor-index", f_anchor, "vertex of gamma used as the anchor x");
  fam_cmd->add_option("--s", f_s, "build and classify eta(x, s)");
  fam_cmd->add_option("--t-inf", f_tinf, "classification time (default 0.75 of the horizon)");
  fam_cmd->add_option("--tol-s", f_tol, "bisection tolerance in s");
  fam_cmd->add_flag("--find-nus", f_find, "locate the class boundaries nu1, nu2 and nu0");
  fam_cmd->add_option("--hit-target", f_hit, "point z = x,y on the evolved curve to reach");
  fam_cmd->add_flag("--common-arc", f_common, "run the common-arc experiment on the stadium pair");
  fam_cmd->add_flag("--continuity", f_cont, "run the continuity experiment on the input");
  fam_cmd->callback([&] {
    if (f_common) {
      const auto [inner, outer] = stadium_pair();
      std::vector<double> grid = parse_grid("0:0.25:0.0125");
      const CommonArcReport r = common_arc_experiment(inner, outer, grid, g.run.flow);
      CsvTable t({"time[t]", "count[points]", "overlap[bool]", "nested[bool]"});
      for (const CommonArcSample& s : r.samples) {
        t.row({num(s.time), std::to_string(s.count), s.overlap ? "1" : "0", s.nested ? "1" : "0"});
      }
      std::cout << t.str() << "# shared vertices " << r.shared_vertices << ", disjoint after start: "
                << (r.disjoint_after_start() ? "yes" : "no") << ", nesting preserved: "
                << (r.nesting_preserved() ? "yes" : "no") << "\n";
      batch.add("common_arc.csv", t.str());
      return;
    }
    const ClosedCurve gamma = load_input(f_input, g.run.seed);
    if (f_cont) {
      const double t_inf = f_tinf.value_or(0.3);
      std::vector<double> eps;
      for (int k = 0; k <= 5; ++k) eps.push_back(0.2 / std::pow(2.0, k));
      const ContinuityTable table = continuity_experiment(gamma, t_inf, eps, 3, g.run.flow);
      CsvTable t({"epsilon[L]", "t_k[t]", "frechet[L]", "hausdorff[L]", "error"});
      for (const ContinuityRow& r : table.rows) {
        t.row({num(r.amplitude), num(r.time), r.ok() ? num(r.frechet) : "", r.ok() ? num(r.hausdorff) : "", r.error});
      }
      std::cout << t.str();
      batch.add("continuity.csv", t.str());
      return;
    }
    if (f_anchor >= gamma.size()) throw PreconditionError("anchor index out of range");
    const double T = family_horizon(gamma, g.run.flow);
    const double t_inf = f_tinf.value_or(0.75 * T);
    EtaParams p = make_eta_params(gamma, gamma[f_anchor], f_s.value_or(0.5), T);
    std::cout << "horizon T=" << num(T) << " t_inf=" << num(t_inf) << " E_radius=" << num(p.E_radius) << "\n";
    if (!f_hit.empty()) {
      const HitResult h = hit_target(gamma, parse_point(f_hit), t_inf, p, g.run.flow);
      std::cout << "anchor (" << num(h.x.x) << ", " << num(h.x.y) << ") misses z by " << num(h.miss) << " after "
                << h.evaluations << " evaluations\n";
      CsvTable t({"time[t]", "x[L]", "y[L]"});
      for (const TrajectorySample& s : h.trajectory.samples) t.row({num(s.time), num(s.point.x), num(s.point.y)});
      batch.add("hit_trajectory.csv", t.str());
      batch.add("hit_eta.json", serialize_curve(h.eta.curve, CurveFormat::json));
      return;
    }
    const FamilyProbe probe(gamma, t_inf, g.run.flow);
    if (f_find) {
      const NuTriple nus = find_nus(probe, p, f_tol);
      CsvTable t({"s[param]", "class"});
      for (const LabelledS& l : nus.probes) t.row({num(l.s), std::string(to_string(l.label))});
      std::cout << "nu1=" << num(nus.nu1) << " nu0=" << num(nus.nu0) << " nu2=" << num(nus.nu2) << "\n";
      batch.add("nus_probes.csv", t.str());
      p.s = nus.nu0;
    }
    const EtaCurve eta = build_eta(gamma, p);
    const ClosedCurve evolved_eta = probe.evolve_member(eta.curve);
    const ClassLabel label = probe.classify(eta.curve);
    const IntersectionRecord r = clustered_intersections(evolved_eta, probe.evolved_gamma());
    std::cout << "s=" << num(p.s) << " class " << to_string(label) << ", " << r.count()
              << " clustered intersection(s) at t_inf\n";
    batch.add("eta.json", serialize_curve(eta.curve, CurveFormat::json));
    batch.add("family.svg", render_svg({{gamma, {color(0), 1.0, false}},
                                        {eta.curve, {color(1), 1.0, false}},
                                        {probe.evolved_gamma(), {color(0), 1.0, true}},
                                        {evolved_eta, {color(1), 1.0, true}}}));
  });

  // continuity
  auto* cont_cmd = app.add_subcommand("continuity", "Frechet distances of perturbed, time-shifted evolutions");
  std::string c_input = "corpus:perturbed_family/ellipse_1.5";
  double c_tinf = 0.3, c_eps0 = 0.2;
  std::size_t c_levels = 6, c_modes = 3;
  cont_cmd->add_option("input", c_input);
  cont_cmd->add_option("--t-inf", c_tinf);
  cont_cmd->add_option("--eps0", c_eps0, "first amplitude; later ones halve");
  cont_cmd->add_option("--levels", c_levels);
  cont_cmd->add_option("--modes", c_modes);
  cont_cmd->callback([&] {
    const ClosedCurve gamma = load_input(c_input, g.run.seed);
    std::vector<double> eps;
    for (std::size_t k = 0; k < c_levels; ++k) eps.push_back(c_eps0 / std::pow(2.0, static_cast<double>(k)));
    const ContinuityTable table = continuity_experiment(gamma, c_tinf, eps, c_modes, g.run.flow);
    CsvTable t({"epsilon[L]", "t_k[t]", "frechet[L]", "hausdorff[L]", "error"});
    for (const ContinuityRow& r : table.rows) {
      t.row({num(r.amplitude), num(r.time), r.ok() ? num(r.frechet) : "", r.ok() ? num(r.hausdorff) : "", r.error});
    }
    std::cout << t.str();
    batch.add("continuity.csv", t.str());
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run the property suite and print a pass/fail table");
  verify_cmd->callback([&] {
    const auto results = run_property_suite(g.run.seed, g.run.flow);
    const std::string table = format_property_table(results);
    std::cout << table;
    batch.add("verify.txt", table);
    for (const auto& r : results) {
      if (!r.passed) status = 2;
    }
  });

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Write a named test set as curve files");
  std::string k_name;
  std::string k_format = "json";
  corpus_cmd->add_option("name", k_name, "circles, ellipses, stars, stadium_pairs or perturbed_family");
  corpus_cmd->add_option("--format", k_format)->check(CLI::IsMember({"json", "csv"}));
  corpus_cmd->callback([&] {
    const std::string name = k_name.empty() ? g.run.corpus : k_name;
    const auto curves = generate_corpus(name, g.run.seed);
    const CurveFormat f = k_format == "csv" ? CurveFormat::csv : CurveFormat::json;
    std::vector<std::pair<ClosedCurve, CurveStyle>> overlay;
    for (const NamedCurve& c : curves) {
      batch.add(c.name + "." + k_format, serialize_curve(c.curve, f));
      overlay.push_back({c.curve, {color(overlay.size()), 1.0, false}});
      std::cout << c.name << ": " << c.curve.size() << " vertices, area " << num(signed_area(c.curve)) << "\n";
    }
    batch.add(name + ".svg", render_svg(overlay));
  });

  // Globals are resolved before any subcommand callback runs.
  app.parse_complete_callback([&] {
    if (!g.config.empty()) g.run = load_run_config(g.config);
    if (g.seed) g.run.seed = *g.seed;
    if (!g.out.empty()) g.run.output_dir = g.out;
  });

  try {
    app.parse(argc, argv);
    batch.commit(g.run.output_dir);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
