#include "qhgeo/io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qhgeo/errors.hpp"

namespace qhgeo {

using nlohmann::json;

namespace {

struct LineCol {
  std::size_t line = 1, column = 1;
};

LineCol locate_offset(const std::string& text, std::size_t offset) {
  LineCol lc;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

// nlohmann does not keep source positions for values, so schema errors point
// at the first occurrence of the key they concern.
[[noreturn]] void schema_error(const std::string& text, const std::string& key, const std::string& what) {
  const auto pos = text.find("\"" + key + "\"");
  const LineCol lc = pos == std::string::npos ? LineCol{} : locate_offset(text, pos);
  throw ParseError("domain file: " + what, lc.line, lc.column);
}

double number(const std::string& text, const json& j, const std::string& key) {
  if (!j.is_number()) schema_error(text, key, "\"" + key + "\" must be a number");
  return j.get<double>();
}

Point point(const std::string& text, const json& j, const std::string& key, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) {
    schema_error(text, key, "\"" + key + "\" must be an array of " + std::to_string(dim) + " numbers");
  }
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = number(text, j[i], key);
  return p;
}

const json& member(const std::string& text, const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) schema_error(text, where, "missing \"" + key + "\" in \"" + where + "\"");
  return obj.at(key);
}

json point_json(const Point& p) {
  json a = json::array();
  for (double c : p.coords()) a.push_back(c);
  return a;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_f6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000", which would make output depend on rounding direction.
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

}  // namespace

DomainSpec parse_domain(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const LineCol lc = locate_offset(text, byte);
    throw ParseError("domain file: malformed JSON", lc.line, lc.column);
  }
  if (!doc.is_object()) throw ParseError("domain file: top level must be an object", 1, 1);

  const json& jdim = member(text, doc, "dimension", "dimension");
  if (!jdim.is_number_integer() || (jdim.get<long long>() != 2 && jdim.get<long long>() != 3)) {
    schema_error(text, "dimension", "\"dimension\" must be 2 or 3");
  }
  const auto dim = static_cast<std::size_t>(jdim.get<long long>());

  double p = 2.0;
  if (doc.contains("norm_p")) {
    const json& jp = doc.at("norm_p");
    if (jp.is_string() && jp.get<std::string>() == "inf") {
      p = kInfinity;
    } else {
      p = number(text, jp, "norm_p");
    }
    if (!(p >= 1.0)) schema_error(text, "norm_p", "\"norm_p\" must be >= 1 or \"inf\"");
  }

  const json& shape = member(text, doc, "shape", "shape");
  if (!shape.is_object()) schema_error(text, "shape", "\"shape\" must be an object");
  const json& jtype = member(text, shape, "type", "shape");
  if (!jtype.is_string()) schema_error(text, "type", "\"type\" must be a string");
  const std::string type = jtype.get<std::string>();

  auto build = [&]() -> DomainSpec {
    try {
      if (type == "half_space") return DomainSpec::half_space(dim, p);
      if (type == "ball") {
        const Point c = point(text, member(text, shape, "center", "shape"), "center", dim);
        return DomainSpec::ball(c, number(text, member(text, shape, "radius", "shape"), "radius"), p);
      }
      if (type == "box") {
        const Point lo = point(text, member(text, shape, "lo", "shape"), "lo", dim);
        const Point hi = point(text, member(text, shape, "hi", "shape"), "hi", dim);
        return DomainSpec::box(lo, hi, p);
      }
      if (type == "polygon") {
        const json& jv = member(text, shape, "vertices", "shape");
        if (!jv.is_array()) schema_error(text, "vertices", "\"vertices\" must be an array");
        std::vector<Point> vs;
        for (const json& v : jv) vs.push_back(point(text, v, "vertices", 2));
        return DomainSpec::polygon(std::move(vs), p);
      }
    } catch (const InvalidArgument& e) {
      schema_error(text, "shape", e.what());
    }
    schema_error(text, "type", "unknown shape type \"" + type + "\"");
  };
  DomainSpec d = build();

  if (doc.contains("punctures")) {
    const json& jp = doc.at("punctures");
    if (!jp.is_object()) schema_error(text, "punctures", "\"punctures\" must be an object");
    const double b = jp.contains("b") ? number(text, jp.at("b"), "b") : 0.5;
    std::vector<Point> pts;
    if (jp.contains("points")) {
      const json& arr = jp.at("points");
      if (!arr.is_array()) schema_error(text, "points", "\"points\" must be an array");
      for (const json& q : arr) pts.push_back(point(text, q, "points", dim));
    }
    try {
      d = with_punctures(d, PunctureSet(std::move(pts), b));
    } catch (const InvalidArgument& e) {
      schema_error(text, "punctures", e.what());
    }
  }
  return d;
}

DomainSpec load_domain(const std::string& path) { return parse_domain(read_file(path)); }

std::string domain_to_json(const DomainSpec& d) {
  json doc;
  doc["dimension"] = d.dim();
  if (std::isinf(d.norm().p())) {
    doc["norm_p"] = "inf";
  } else {
    doc["norm_p"] = d.norm().p();
  }
  json shape;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          shape["type"] = "half_space";
        } else if constexpr (std::is_same_v<T, Ball>) {
          shape["type"] = "ball";
          shape["center"] = point_json(s.center);
          shape["radius"] = s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          shape["type"] = "box";
          shape["lo"] = point_json(s.lo);
          shape["hi"] = point_json(s.hi);
        } else {
          shape["type"] = "polygon";
          json vs = json::array();
          for (const Point& v : s.vertices) vs.push_back(point_json(v));
          shape["vertices"] = vs;
        }
      },
      d.shape());
  doc["shape"] = shape;
  if (d.has_punctures()) {
    json pts = json::array();
    for (const Point& q : d.punctures().points()) pts.push_back(point_json(q));
    doc["punctures"] = {{"b", d.punctures().b()}, {"points", pts}};
  }
  return doc.dump(2) + "\n";
}

std::string arc_to_csv(const Arc& a) {
  std::string out;
  for (std::size_t i = 0; i < a.dim(); ++i) out += "x" + std::to_string(i + 1) + ",";
  out += "s\n";
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (double c : a.vertices()[k].coords()) out += format_g17(c) + ",";
    out += format_g17(a.cumulative()[k]) + "\n";
  }
  return out;
}

Arc parse_arc_csv(const std::string& text, Norm norm) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  std::vector<Point> vertices;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::pair<std::string, std::size_t>> fields;  // text, starting column
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start), start + 1);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (dim == 0) {
      if (fields.size() < 3 || fields.size() > kMaxDim + 1) {
        throw ParseError("arc file: header must be x1,...,xn,s with n in {2, 3}", lineno, 1);
      }
      for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
        if (fields[i].first != "x" + std::to_string(i + 1)) {
          throw ParseError("arc file: expected column x" + std::to_string(i + 1), lineno, fields[i].second);
        }
      }
      if (fields.back().first != "s") throw ParseError("arc file: expected column s", lineno, fields.back().second);
      dim = fields.size() - 1;
      continue;
    }
    if (fields.size() != dim + 1) {
      throw ParseError("arc file: expected " + std::to_string(dim + 1) + " fields", lineno, 1);
    }
    Point p(dim);
    for (std::size_t i = 0; i <= dim; ++i) {
      const std::string& f = fields[i].first;
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
        throw ParseError("arc file: not a finite number \"" + f + "\"", lineno, fields[i].second);
      }
      if (i < dim) p[i] = v;
    }
    vertices.push_back(p);
  }
  if (dim == 0) throw ParseError("arc file: missing header", std::max<std::size_t>(lineno, 1), 1);
  if (vertices.empty()) throw ParseError("arc file: no vertices", lineno + 1, 1);
  return Arc(std::move(vertices), norm);
}

Arc load_arc(const std::string& path, Norm norm) { return parse_arc_csv(read_file(path), norm); }

std::string render_svg(const DomainSpec& d, const std::vector<Arc>& arcs, const SvgStyle& style) {
  auto [lo, hi] = d.sampling_window();
  for (const Arc& a : arcs) {
    for (const Point& v : a.vertices()) {
      for (std::size_t i = 0; i < 2; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
  }
  const double pad = 0.05 * std::max(hi[0] - lo[0], hi[1] - lo[1]);
  const double x0 = lo[0] - pad, y0 = lo[1] - pad;
  const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]) + 2.0 * pad;
  const double scale = std::min(style.width, style.height) / span;
  auto px = [&](double x) { return format_f6((x - x0) * scale); };
  auto py = [&](double y) { return format_f6(style.height - (y - y0) * scale); };
  auto pt = [&](const Point& p) { return px(p[0]) + "," + py(p[1]); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
      << "\" viewBox=\"0 0 " << style.width << " " << style.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  const std::string boundary = "fill=\"#f4f4f4\" stroke=\"#222222\" stroke-width=\"1.5\"";
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          out << "<rect x=\"0.000000\" y=\"0.000000\" width=\"" << style.width << "\" height=\"" << py(0.0)
              << "\" fill=\"#f4f4f4\"/>\n";
          out << "<line x1=\"0.000000\" y1=\"" << py(0.0) << "\" x2=\"" << style.width << "\" y2=\"" << py(0.0)
              << "\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
        } else if constexpr (std::is_same_v<T, Ball>) {
          // Planar section x3 = c3 of the norm sphere.
          constexpr int kSteps = 256;
          out << "<polygon " << boundary << " points=\"";
          for (int i = 0; i < kSteps; ++i) {
            const double t = 2.0 * M_PI * i / kSteps;
            Point u(d.dim());
            u[0] = std::cos(t);
            u[1] = std::sin(t);
            const double r = s.radius / d.norm()(u);
            out << (i ? " " : "") << px(s.center[0] + r * u[0]) << "," << py(s.center[1] + r * u[1]);
          }
          out << "\"/>\n";
        } else if constexpr (std::is_same_v<T, Box>) {
          out << "<rect x=\"" << px(s.lo[0]) << "\" y=\"" << py(s.hi[1]) << "\" width=\""
              << format_f6((s.hi[0] - s.lo[0]) * scale) << "\" height=\"" << format_f6((s.hi[1] - s.lo[1]) * scale)
              << "\" " << boundary << "/>\n";
        } else {
          out << "<polygon " << boundary << " points=\"";
          for (std::size_t i = 0; i < s.vertices.size(); ++i) out << (i ? " " : "") << pt(s.vertices[i]);
          out << "\"/>\n";
        }
      },
      d.shape());

  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 6] << "\" stroke-width=\"1.5\" points=\"";
    const auto& vs = arcs[k].vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) out << (i ? " " : "") << pt(vs[i]);
    out << "\"/>\n";
  }
  for (const Point& q : d.punctures().points()) {
    out << "<circle cx=\"" << px(q[0]) << "\" cy=\"" << py(q[1]) << "\" r=\"3\" fill=\"#000000\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InvalidArgument("cannot replace " + path + ": " + ec.message());
  }
}

std::string RunManifest::to_json() const {
  json doc;
  doc["command"] = command;
  doc["parameters"] = parameters;
  doc["seed"] = seed;
  doc["tool_version"] = tool_version;
  doc["input_digests"] = input_digests;
  doc["wall_time_s"] = wall_time_s;
  doc["threads"] = threads;
  return doc.dump(2) + "\n";
}

const char* version() noexcept { return "0.1.0"; }

}  // namespace qhgeo
