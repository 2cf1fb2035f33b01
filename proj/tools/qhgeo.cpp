// qhgeo: command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 validation failure,
// 3 budget exhausted. Reports are JSON on stdout (or --out); arcs are CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "qhgeo/acceptance.hpp"
#include "qhgeo/classify.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/geodesics.hpp"
#include "qhgeo/io.hpp"
#include "qhgeo/metrics.hpp"
#include "qhgeo/parallel.hpp"
#include "qhgeo/repair.hpp"

using namespace qhgeo;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kBudget = 3 };

Point parse_point(const std::string& text, std::size_t dim) {
  std::vector<double> cs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidArgument("bad coordinate \"" + item + "\" in \"" + text + "\"");
    cs.push_back(v);
  }
  if (cs.size() != dim) {
    throw InvalidArgument("point \"" + text + "\" needs " + std::to_string(dim) + " coordinates");
  }
  return Point::from_span(cs);
}

json point_json(const Point& p) {
  json a = json::array();
  for (double c : p.coords()) a.push_back(c);
  return a;
}

json bracket_json(const MetricBracket& b) {
  return {{"lower", b.lower}, {"upper", b.upper}, {"midpoint", b.midpoint()}, {"budget_exhausted", b.budget_exhausted}};
}

// Shared state of one invocation: where output goes and what the manifest records.
struct Run {
  std::string out;
  std::string manifest_path;
  std::uint64_t seed = 0;
  RunManifest manifest;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  DomainSpec domain(const std::string& path) {
    const std::string text = read_file(path);
    manifest.input_digests[path] = hex_digest(text);
    return parse_domain(text);
  }
  std::pair<Arc, std::string> arc(const std::string& path, const Norm& norm) {
    const std::string text = read_file(path);
    manifest.input_digests[path] = hex_digest(text);
    return {parse_arc_csv(text, norm), text};
  }
  void emit(const std::string& content) const {
    if (out.empty() || out == "-") {
      std::cout << content;
    } else {
      write_file_atomic(out, content);
    }
  }
  void emit(const json& report) const { emit(report.dump(2) + "\n"); }
  void finish() {
    if (manifest_path.empty()) return;
    manifest.seed = seed;
    manifest.tool_version = version();
    manifest.threads = worker_count();
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file_atomic(manifest_path, manifest.to_json());
  }
};

PsiFunction make_psi(const std::string& kind, double scale) {
  if (kind == "log1p") return PsiFunction::log1p(scale);
  if (kind == "linear") return PsiFunction::linear(scale);
  if (kind == "expm1") return PsiFunction::expm1();
  throw InvalidArgument("unknown psi kind \"" + kind + "\" (log1p, linear, expm1)");
}

// Parses argv, runs one subcommand and returns the process exit code.
int cli_dispatch(int argc, char** argv) {
  CLI::App app{"Quasihyperbolic geometry toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Run run;
  std::string domain_path, arc_path, x_text, y_text, metric = "k", kind = "john", suite = "all";
  std::string psi_kind = "log1p", transform = "none";
  std::vector<std::string> arc_paths;
  std::vector<double> ts;
  double tol = 0.01, c = kDefaultNeargeodesicC, psi_scale = 1.0;
  std::optional<double> b_override, c_hint;
  std::size_t samples = 256, pairs = 20;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out,-o", run.out, "Output file (default stdout)");
    sub->add_option("--manifest", run.manifest_path, "Write a run manifest (JSON) here");
  };
  auto need_domain = [&](CLI::App* sub) {
    sub->add_option("--domain,-d", domain_path, "Domain JSON file")->required()->check(CLI::ExistingFile);
  };

  auto* dist = app.add_subcommand("dist", "Distance bracket between two points");
  need_domain(dist);
  dist->add_option("--x", x_text, "First point, comma separated")->required();
  dist->add_option("--y", y_text, "Second point")->required();
  dist->add_option("--metric", metric, "k, j or lambda")->check(CLI::IsMember({"k", "j", "lambda"}));
  dist->add_option("--tol", tol, "Relative bracket tolerance");
  common(dist);

  auto* geo = app.add_subcommand("geodesic", "Neargeodesic arc as CSV");
  need_domain(geo);
  geo->add_option("--x", x_text)->required();
  geo->add_option("--y", y_text)->required();
  geo->add_option("--c", c, "Neargeodesic factor");
  common(geo);

  auto* cone = app.add_subcommand("cone", "Cone and uniformity constants of an arc");
  need_domain(cone);
  cone->add_option("--arc,-a", arc_path, "Arc CSV")->required()->check(CLI::ExistingFile);
  cone->add_option("--samples", samples);
  common(cone);

  auto* john = app.add_subcommand("john-estimate", "Sampled John constant");
  need_domain(john);
  john->add_option("--pairs", pairs);
  john->add_option("--seed", run.seed);
  common(john);

  auto* sep = app.add_subcommand("separation", "Quasihyperbolic separation of the punctures");
  need_domain(sep);
  sep->add_option("--b", b_override, "Separation parameter (default: the domain file's)");
  common(sep);

  auto* rep = app.add_subcommand("repair", "Repair an arc into the punctured domain");
  need_domain(rep);
  rep->add_option("--arc,-a", arc_path)->required()->check(CLI::ExistingFile);
  rep->add_option("--c-hint", c_hint, "Known cone constant of the input arc");
  std::string report_path;
  rep->add_option("--report", report_path, "Write the repair report (JSON) here");
  common(rep);

  auto* tr = app.add_subcommand("transfer", "Build a cone arc in D from arcs in G");
  need_domain(tr);
  tr->add_option("--x", x_text)->required();
  tr->add_option("--y", y_text)->required();
  tr->add_option("--kind", kind, "john or inner")->check(CLI::IsMember({"john", "inner"}));
  common(tr);

  auto* psi = app.add_subcommand("psi", "Evaluate a gauge function and its transforms");
  psi->add_option("--kind", psi_kind, "log1p, linear or expm1");
  psi->add_option("--scale", psi_scale);
  psi->add_option("--transform", transform, "none, necessity or sufficiency")
      ->check(CLI::IsMember({"none", "necessity", "sufficiency"}));
  psi->add_option("--t", ts, "Evaluation points");
  common(psi);

  auto* plot = app.add_subcommand("plot", "SVG of the domain, punctures and arcs");
  need_domain(plot);
  plot->add_option("--arc,-a", arc_paths)->check(CLI::ExistingFile);
  common(plot);

  auto* acc = app.add_subcommand("acceptance", "Run the acceptance suite");
  acc->add_option("--suite", suite, "all or a comma-separated list of criteria");
  std::uint64_t acc_seed = 1;
  acc->add_option("--seed", acc_seed, "Seed for every sampled instance (default 1)");
  common(acc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  run.manifest.command = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string value;
    for (const auto& v : opt->results()) value += (value.empty() ? "" : " ") + v;
    run.manifest.parameters[opt->get_name()] = value;
  }

  int code = kOk;
  try {
    if (sub == dist) {
      const DomainSpec d = run.domain(domain_path);
      const Point x = parse_point(x_text, d.dim()), y = parse_point(y_text, d.dim());
      json r = {{"metric", metric}, {"x", point_json(x)}, {"y", point_json(y)}};
      if (metric == "j") {
        r["value"] = j_metric(d, x, y);
      } else {
        const auto b = metric == "k" ? k_distance(d, x, y, tol) : inner_distance(d, x, y, std::min(tol, 1e-3));
        r["bracket"] = bracket_json(b);
        if (b.budget_exhausted) code = kBudget;
      }
      run.emit(r);
    } else if (sub == geo) {
      const DomainSpec d = run.domain(domain_path);
      const Point x = parse_point(x_text, d.dim()), y = parse_point(y_text, d.dim());
      try {
        run.emit(arc_to_csv(neargeodesic(d, x, y, c).arc));
      } catch (const BudgetExhausted& e) {
        run.emit(arc_to_csv(e.best().arc));
        std::cerr << "budget exhausted: " << e.what() << " (best arc written, certificate "
                  << e.best().c_certificate << ")\n";
        code = kBudget;
      }
    } else if (sub == cone) {
      const DomainSpec d = run.domain(domain_path);
      const Arc a = run.arc(arc_path, d.norm()).first;
      const auto cr = cone_constant(d, a, samples);
      const auto ur = uniform_constant(d, a, samples);
      run.emit(json{{"cone_constant", cr.cone_constant},
                    {"argmax", point_json(cr.argmax_point)},
                    {"uniform_constant", ur.value},
                    {"length_ratio", ur.length_ratio},
                    {"diam_cone_constant", diam_cone_constant(d, a, samples)},
                    {"samples", cr.sample_count}});
    } else if (sub == john) {
      const DomainSpec d = run.domain(domain_path);
      const auto jr = john_estimate(d, pairs, run.seed);
      json per = json::array();
      for (std::size_t i = 0; i < jr.pairs.size(); ++i) {
        per.push_back({{"x", point_json(jr.pairs[i].first)},
                       {"y", point_json(jr.pairs[i].second)},
                       {"cone", jr.per_pair[i]},
                       {"arc", jr.winner[i]}});
      }
      run.emit(json{{"estimate", jr.estimate}, {"pairs", per}, {"candidates", jr.candidate_family}, {"note", jr.note}});
    } else if (sub == sep) {
      const DomainSpec d = run.domain(domain_path);
      const PunctureSet p(d.punctures().points(), b_override.value_or(d.punctures().b()));
      const auto sr = separation_check(d.base(), p);
      json prs = json::array();
      for (const auto& q : sr.pairs) {
        prs.push_back({{"i", q.i}, {"j", q.j}, {"lower", q.lower}, {"upper", q.upper}, {"status", to_string(q.status)}});
      }
      run.emit(json{{"status", to_string(sr.status)}, {"b", sr.b}, {"worst_lower", sr.pairs.empty() ? json() : json(sr.worst_lower)},
                    {"pairs", prs}});
      if (sr.status == SeparationStatus::fail) code = kValidation;
      if (sr.status == SeparationStatus::indeterminate) code = kBudget;
    } else if (sub == rep) {
      const DomainSpec d = run.domain(domain_path);
      const auto [gamma, text] = run.arc(arc_path, d.norm());
      const PunctureSet p = validate_punctures(d.base(), d.punctures());
      if (p.validated() != Validation::pass) {
        std::cerr << "punctures are not separated (validation " << (p.validated() == Validation::fail ? "failed" : "inconclusive")
                  << ")\n";
        code = p.validated() == Validation::fail ? kValidation : kBudget;
      } else {
        const auto r = repair_arc(d.base(), p, gamma, c_hint);
        // A clean input is returned as it came, byte for byte.
        run.emit(r.case_taken == RepairCase::clean ? text : arc_to_csv(r.output_arc));
        auto seq = [](const std::vector<TaggedPoint>& v) {
          json a = json::array();
          for (const auto& t : v) {
            a.push_back({{"point", point_json(t.point)}, {"s", t.s}, {"role", t.role}, {"d_base", t.d_base},
                         {"d_punctured", t.d_punctured}});
          }
          return a;
        };
        const json report = {{"case", to_string(r.case_taken)},
                             {"mirrored", r.mirrored},
                             {"detail", r.detail},
                             {"length_ratio", r.length_ratio},
                             {"input_cone_constant", r.input_cone_constant},
                             {"output_cone_constant", r.output_cone_constant},
                             {"cone_bound", r.cone_bound},
                             {"min_clearance", r.min_clearance},
                             {"bounds_ok", r.bounds_ok},
                             {"y_sequence", seq(r.y_sequence)},
                             {"u_sequence", seq(r.u_sequence)},
                             {"v_sequence", seq(r.v_sequence)}};
        if (!report_path.empty()) {
          write_file_atomic(report_path, report.dump(2) + "\n");
        } else {
          std::cerr << "repair: " << to_string(r.case_taken) << ", length ratio " << r.length_ratio << "\n";
        }
        if (!r.bounds_ok) code = kValidation;
      }
    } else if (sub == tr) {
      const DomainSpec d = run.domain(domain_path);
      const Point x = parse_point(x_text, d.dim()), y = parse_point(y_text, d.dim());
      const PunctureSet p = validate_punctures(d.base(), d.punctures());
      if (p.validated() != Validation::pass) throw PreconditionError("punctures are not validated as separated");
      auto transfer_json = [](const TransferReport& t) {
        json v = json::array();
        for (const auto& q : t.beta.vertices()) v.push_back(point_json(q));
        return json{{"construction", t.construction}, {"measured_c1", t.measured_c1}, {"beta_cone", t.beta_cone},
                    {"bound", t.bound}, {"ok", t.ok}, {"beta", v}};
      };
      if (kind == "john") {
        const auto t = john_transfer(d.base(), p, x, y);
        run.emit(transfer_json(t));
        if (!t.ok) code = kValidation;
      } else {
        const auto t = inner_transfer(d.base(), p, x, y);
        run.emit(json{{"transfer", transfer_json(t.transfer)},
                      {"lambda", bracket_json(t.lambda)},
                      {"c1", t.c1},
                      {"length", t.length},
                      {"length_bound", t.length_bound},
                      {"cone_bound", t.cone_bound},
                      {"length_ok", t.length_ok},
                      {"cone_ok", t.cone_ok}});
        if (!t.length_ok || !t.cone_ok) code = kValidation;
      }
    } else if (sub == psi) {
      const PsiFunction base = make_psi(psi_kind, psi_scale);
      const bool admissible = psi_admissible(base);
      json r = {{"psi", base.description()}, {"gauge", psi_is_gauge(base)}, {"admissible", admissible}};
      if (transform != "none" && !admissible) {
        r["error"] = "psi is below log(1 + t); no transform";
        code = kValidation;
      } else {
        const PsiFunction f = transform == "necessity"     ? psi_necessity_transform(base)
                              : transform == "sufficiency" ? psi_sufficiency_transform(base)
                                                           : base;
        if (ts.empty()) ts = {0.0, 0.5, 1.0, 10.0, 100.0};
        json vals = json::array();
        for (double t : ts) vals.push_back({{"t", t}, {"value", f(t)}});
        r["function"] = f.description();
        r["values"] = vals;
      }
      run.emit(r);
    } else if (sub == plot) {
      const DomainSpec d = run.domain(domain_path);
      std::vector<Arc> arcs;
      for (const auto& path : arc_paths) arcs.push_back(run.arc(path, d.norm()).first);
      run.emit(render_svg(d, arcs));
    } else if (sub == acc) {
      run.seed = acc_seed;
      const auto report = run_acceptance(run.seed, parse_suite(suite));
      for (const auto& r : report.results) std::cerr << format_result_line(r) << "\n";
      std::cerr << "digest " << report.digest() << "\n";
      run.emit(report.to_json());
      if (!report.all_pass()) code = kValidation;
    }
    run.finish();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  return cli_dispatch(argc, argv);
}
