#include <cmath>
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "qhgeo/errors.hpp"
#include "qhgeo/io.hpp"
#include "qhgeo/rng.hpp"

using namespace qhgeo;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qhgeo_test_io_" + name)).string();
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("domain JSON parses every shape") {
  auto d = parse_domain(R"({"dimension": 2, "norm_p": 2, "shape": {"type": "half_space"},
                            "punctures": {"b": 0.5, "points": [[0, 1], [0, 4]]}})");
  CHECK(std::holds_alternative<HalfSpace>(d.shape()));
  CHECK(d.punctures().size() == 2);
  CHECK(d.punctures().b() == 0.5);
  CHECK(d.punctures().points()[1] == Point{0, 4});

  d = parse_domain(R"({"dimension": 3, "norm_p": "inf", "shape": {"type": "ball", "center": [1, 2, 3], "radius": 2}})");
  CHECK(d.dim() == 3);
  CHECK(std::isinf(d.norm().p()));
  CHECK(std::get<Ball>(d.shape()).radius == 2.0);
  CHECK_FALSE(d.has_punctures());

  d = parse_domain(R"({"dimension": 2, "shape": {"type": "box", "lo": [-1, -0.5], "hi": [1, 0.5]}})");
  CHECK(d.norm().p() == 2.0);
  CHECK(std::get<Box>(d.shape()).hi == Point{1, 0.5});

  d = parse_domain(R"({"dimension": 2, "norm_p": 1,
                       "shape": {"type": "polygon", "vertices": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}})");
  CHECK(std::get<Polygon>(d.shape()).vertices.size() == 6);
  CHECK(d.norm().p() == 1.0);
}

TEST_CASE("domain JSON round-trips") {
  std::vector<DomainSpec> ds = {
      with_punctures(DomainSpec::ball(Point{0.1, -0.3}, 10.0, 3.0), PunctureSet({Point{0.1, 0.2}, Point{4, 1.0 / 3}}, 0.75)),
      DomainSpec::half_space(3, kInfinity),
      DomainSpec::box(Point{-1, -2}, Point{1, 2}, 1.5),
      DomainSpec::polygon({Point{0, 0}, Point{1, 0}, Point{0, 1}}),
  };
  for (const auto& d : ds) {
    const std::string text = domain_to_json(d);
    const DomainSpec e = parse_domain(text);
    CHECK(domain_to_json(e) == text);
    CHECK(e.dim() == d.dim());
    CHECK(e.norm() == d.norm());
    CHECK(e.punctures().points() == d.punctures().points());
  }
}

TEST_CASE("domain JSON errors carry line and column") {
  try {
    parse_domain("{\n  \"dimension\": 2,\n  \"shape\": {\"type\": \"ball\",, }\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 28);  // the second comma
  }
  try {
    parse_domain("{\"dimension\": 2,\n \"shape\": {\"type\": \"torus\"}}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 12);
  }
  CHECK_THROWS_AS(parse_domain(R"({"dimension": 4, "shape": {"type": "half_space"}})"), ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"dimension": 2, "shape": {"type": "ball", "center": [0], "radius": 1}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"dimension": 2, "shape": {"type": "ball", "center": [0, 0], "radius": -1}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_domain(R"({"dimension": 2, "norm_p": 0.5, "shape": {"type": "half_space"}})"), ParseError);
  // A puncture outside the base.
  CHECK_THROWS_AS(parse_domain(R"({"dimension": 2, "shape": {"type": "half_space"}, "punctures": {"points": [[0, -1]]}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_domain("[1, 2]"), ParseError);
}

TEST_CASE("arc CSV has the documented layout") {
  const Arc a({Point{0, 0}, Point{3, 4}, Point{3, 5}});
  CHECK(arc_to_csv(a) == "x1,x2,s\n0,0,0\n3,4,5\n3,5,6\n");
  const Arc b({Point{0, 0, 0.5}, Point{0, 0, 1}});
  CHECK(arc_to_csv(b) == "x1,x2,x3,s\n0,0,0.5,0\n0,0,1,0.5\n");
}

TEST_CASE("arc CSV round-trip is bit exact") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = trial % 2 ? 3 : 2;
    std::vector<Point> vs;
    const int n = 1 + static_cast<int>(rng.index(20));
    for (int i = 0; i < n; ++i) {
      Point p(dim);
      // Mix of decimal-representable and arbitrary doubles across magnitudes.
      for (std::size_t k = 0; k < dim; ++k) {
        p[k] = trial % 3 == 0 ? std::round(rng.uniform(-100, 100) * 8) / 8
                              : rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-12, 12));
      }
      vs.push_back(p);
    }
    const Arc a(vs);
    const Arc back = parse_arc_csv(arc_to_csv(a));
    REQUIRE(back.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k) CHECK(bit_equal(back.vertices()[i][k], a.vertices()[i][k]));
    }
    CHECK(arc_to_csv(back) == arc_to_csv(a));
  }
}

TEST_CASE("arc CSV errors carry line and column") {
  try {
    parse_arc_csv("x1,x2,s\n0,0,0\n1,abc,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  try {
    parse_arc_csv("x1,y,s\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  try {
    parse_arc_csv("x1,x2,s\n0,0,0\n1,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_arc_csv(""), ParseError);
  CHECK_THROWS_AS(parse_arc_csv("x1,x2,s\n"), ParseError);
  CHECK_THROWS_AS(parse_arc_csv("x1,x2,s\n0,0,nan\n"), ParseError);
  // Windows line endings are accepted.
  CHECK(parse_arc_csv("x1,x2,s\r\n1,2,0\r\n").start() == Point{1, 2});
}

TEST_CASE("SVG output is deterministic") {
  const auto d = with_punctures(DomainSpec::ball(Point{0, 0}, 2.0, 3.0), PunctureSet({Point{0.5, 0.5}}));
  const std::vector<Arc> arcs = {Arc({Point{-1, 0}, Point{0, 1}, Point{1, 0}}), Arc::segment(Point{0, -1}, Point{2.5, 0})};
  const std::string a = render_svg(d, arcs);
  const std::string b = render_svg(parse_domain(domain_to_json(d)), {parse_arc_csv(arc_to_csv(arcs[0])),
                                                                    parse_arc_csv(arc_to_csv(arcs[1]))});
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("<circle") != std::string::npos);
  CHECK(a.find("#d62728") != std::string::npos);
  for (const auto& s : {DomainSpec::half_space(2), DomainSpec::box(Point{0, 0}, Point{1, 2}),
                        DomainSpec::polygon({Point{0, 0}, Point{1, 0}, Point{0, 1}})}) {
    CHECK(render_svg(s, {}) == render_svg(s, {}));
  }
}

TEST_CASE("digests, atomic writes and manifests") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(hex_digest("a") == "af63dc4c8601ec8c");
  CHECK(hex_digest("foobar") == "85944171f73967e8");

  const std::string path = temp_path("atomic.txt");
  write_file_atomic(path, "first");
  write_file_atomic(path, "second\n");
  CHECK(read_file(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_file(path), InvalidArgument);

  RunManifest m;
  m.command = "repair";
  m.parameters = {{"domain", "d.json"}, {"arc", "gamma.csv"}};
  m.seed = 7;
  m.tool_version = version();
  m.input_digests = {{"d.json", hex_digest("x")}};
  const std::string j = m.to_json();
  CHECK(j.find("\"command\": \"repair\"") != std::string::npos);
  CHECK(j.find("\"seed\": 7") != std::string::npos);
  CHECK(j == m.to_json());
}
