#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "cflow/corpus.hpp"
#include "cflow/error.hpp"
#include "cflow/io.hpp"
#include "generators.hpp"

using namespace cflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path d = fs::temp_directory_path() / (std::string("cflow_test_") + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("curve round trip through both formats is exact") {
  gen::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ClosedCurve c = gen::any_star(rng);
    for (CurveFormat f : {CurveFormat::json, CurveFormat::csv}) {
      const ClosedCurve back = parse_curve(serialize_curve(c, f), f);
      REQUIRE(back.size() == c.size());
      for (std::size_t i = 0; i < c.size(); ++i) CHECK(distance(back[i], c[i]) <= 1e-12);
      CHECK(back.orientation() == c.orientation());
    }
  }
}

TEST_CASE("format_for and format_number") {
  CHECK(format_for("a/b.json") == CurveFormat::json);
  CHECK(format_for("x.csv") == CurveFormat::csv);
  CHECK_THROWS_AS(format_for("x.txt"), ParseError);
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(format_number(2.0) == "2");
}

TEST_CASE("malformed CSV names the line and field") {
  const std::string text = "x,y\n0,0\n1,0\n1,oops\n";
  CHECK_THROWS_WITH_AS(parse_curve(text, CurveFormat::csv), doctest::Contains("line 4"), ParseError);
  CHECK_THROWS_WITH_AS(parse_curve(text, CurveFormat::csv), doctest::Contains("field y"), ParseError);
}

TEST_CASE("malformed JSON") {
  CHECK_THROWS_WITH_AS(parse_curve(R"({"orientation":"ccw"})", CurveFormat::json),
                       doctest::Contains("vertices"), ParseError);
  CHECK_THROWS_AS(parse_curve("{not json", CurveFormat::json), ParseError);
}

TEST_CASE("a self-intersecting polygon is rejected with its validation summary") {
  std::string text = "x,y\n";
  for (int i = 0; i < 16; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 16.0;
    text += format_number(std::sin(t)) + "," + format_number(std::sin(t) * std::cos(t)) + "\n";
  }
  CHECK_THROWS_AS(parse_curve(text, CurveFormat::csv), InvalidCurveError);
}

TEST_CASE("files round trip and writes are atomic") {
  const fs::path d = scratch_dir("files");
  const ClosedCurve c = gen::ngon(32, 1.5);
  write_curve(c, d / "c.json");
  write_curve(c, d / "c.csv");
  CHECK(read_curve(d / "c.json") == read_curve(d / "c.csv"));
  write_file_atomic(d / "note.txt", "first");
  write_file_atomic(d / "note.txt", "second");
  CHECK(read_file(d / "note.txt") == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++entries;
  CHECK(entries == 3);
  CHECK_THROWS_AS(read_file(d / "missing.json"), Error);
  fs::remove_all(d);
}

TEST_CASE("output batch writes nothing before commit") {
  const fs::path d = scratch_dir("batch");
  OutputBatch b;
  b.add("a.txt", "A");
  b.add("b.txt", "B");
  CHECK(fs::is_empty(d));
  b.commit(d / "run");
  CHECK(read_file(d / "run" / "a.txt") == "A");
  CHECK(read_file(d / "run" / "b.txt") == "B");
  fs::remove_all(d);
}

TEST_CASE("svg rendering is deterministic with one path per curve") {
  const std::vector<std::pair<ClosedCurve, CurveStyle>> curves = {
      {gen::ngon(64, 1.0), CurveStyle{}}, {gen::ngon(64, 2.0), CurveStyle{"#d62728", 2.0, true}}};
  const std::string a = render_svg(curves), b = render_svg(curves);
  CHECK(a == b);
  CHECK(count_of(a, "<path") == 2);
  CHECK(count_of(a, "Z") == 2);
  CHECK(a.find("stroke-dasharray") != std::string::npos);
  CHECK_THROWS_AS(render_svg({}), PreconditionError);
}

TEST_CASE("run config parsing") {
  const RunConfig c = parse_run_config(
      "# comment\nflow.scheme = explicit_cfl\nflow.cfl = 0.3\nmetric_tolerance = 1e-6\nseed = 7\n"
      "corpus = stars\noutput_dir = results\n");
  REQUIRE(std::holds_alternative<ExplicitCfl>(c.flow.dt_rule));
  CHECK(std::get<ExplicitCfl>(c.flow.dt_rule).c == 0.3);
  CHECK(c.metric_tolerance == 1e-6);
  CHECK(c.seed == 7);
  CHECK(c.corpus == "stars");
  CHECK(c.output_dir == "results");
  CHECK(parse_run_config(serialize_run_config(c)).seed == 7);
  CHECK_THROWS_AS(parse_run_config("flow.bogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_run_config("flow.dt = fast\n"), ParseError);
  CHECK_THROWS_AS(parse_run_config("flow.scheme = explicit_cfl\nflow.cfl = 0.9\n"), ParseError);
}

TEST_CASE("csv table") {
  CsvTable t({"time[t]", "count"});
  t.row({"0", "2"}).row({"0.1", "2"});
  CHECK(t.str() == "time[t],count\n0,2\n0.1,2\n");
}

TEST_CASE("circles corpus areas match the polygon closed form") {
  const std::vector<NamedCurve> set = generate_corpus("circles", 0);
  REQUIRE(set.size() == 3);
  const double radii[] = {0.5, 1.0, 2.0};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t n = set[i].curve.size();
    const double oracle = 0.5 * static_cast<double>(n) * std::sin(2.0 * std::numbers::pi / static_cast<double>(n)) *
                          radii[i] * radii[i];
    CHECK(signed_area(set[i].curve) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(signed_area(set[i].curve) - std::numbers::pi * radii[i] * radii[i]) <=
          0.01 * std::numbers::pi * radii[i] * radii[i]);
  }
}

TEST_CASE("corpora are deterministic and valid") {
  for (std::string_view name : corpus_names()) {
    const auto a = generate_corpus(name, 5), b = generate_corpus(name, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      CHECK(a[i].curve == b[i].curve);
      CHECK(validate(a[i].curve).ok());
    }
  }
  const auto stars = generate_corpus("stars", 0);
  REQUIRE(stars.size() == 4);
  CHECK(stars[0].name == "star_k3_a0.2");
  CHECK_THROWS_WITH_AS(generate_corpus("nope", 0), doctest::Contains("circles"), PreconditionError);
}

TEST_CASE("random star polygons are valid and star-shaped") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ClosedCurve c = random_star_polygon(rng, 24);
    CHECK(validate(c).ok());
    for (const Point2& v : c.vertices()) {
      CHECK(norm(v) >= 0.7 - 1e-12);
      CHECK(norm(v) <= 1.3 + 1e-12);
    }
  }
}

}  // TEST_SUITE
