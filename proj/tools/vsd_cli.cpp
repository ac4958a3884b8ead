// Command-line front end: ingest price csvs, evaluate ES curves, Meyer
// representation curves, dominance thresholds, the closed-form risk
// minimiser, and the consistency falsifiers.  Output is plot-ready CSV
// (default) or JSON; every run records its configuration in the header.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <vsd/dist.hpp>
#include <vsd/falsify.hpp>
#include <vsd/optimize.hpp>
#include <vsd/orders.hpp>
#include <vsd/riskmeasures.hpp>
#include <vsd/timeseries.hpp>
#include <vsd/utility.hpp>

namespace {

using nlohmann::ordered_json;
using vsd::DiscreteDistribution;
using vsd::ThresholdUtility;

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // fold negative zero
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

// ---- output document ----------------------------------------------------

struct Table {
  std::vector<std::pair<std::string, ordered_json>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;

  void note(std::string key, ordered_json value) {
    meta.emplace_back(std::move(key), std::move(value));
  }
};

std::string csv_scalar(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return num(v.get<double>());
  return v.dump();
}

std::string csv_cell(const ordered_json& v) {
  std::string s = csv_scalar(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void render_csv(std::ostream& out, const Table& t) {
  for (const auto& [k, v] : t.meta) out << "# " << k << ": " << csv_scalar(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
}

void render_json(std::ostream& out, const Table& t) {
  ordered_json doc;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  doc["meta"] = std::move(meta);
  doc["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

// ---- shared options ------------------------------------------------------

struct Opts {
  std::string input;
  std::vector<std::string> benchmarks;
  std::string from, to, window;
  double c_min = -5.0, c_max = 5.0;
  int c_steps = 201;
  std::string utility = "cara:-1";
  std::string mode = "pratt";
  double level = 0.9;
  std::string instance = "loss";
  int resolution = 2000;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 0;
};

const std::map<std::string, std::pair<std::string, std::string>> kWindows = {
    {"2007-2009", {"2007-03-30", "2009-12-31"}},
    {"2012-2014", {"2012-01-01", "2014-12-31"}},
    {"2020-2024", {"2020-01-01", "2024-12-31"}},
};

void add_output_opts(CLI::App* sub, Opts& o) {
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", o.output, "write to file instead of stdout");
  sub->add_option("--seed", o.seed, "seed recorded in the output header");
}

void add_window_opts(CLI::App* sub, Opts& o) {
  auto* from = sub->add_option("--from", o.from, "window start (ISO date)");
  auto* to = sub->add_option("--to", o.to, "window end (ISO date)");
  sub->add_option("--window", o.window, "named study window")
      ->check(CLI::IsMember({"2007-2009", "2012-2014", "2020-2024"}))
      ->excludes(from)
      ->excludes(to);
}

void add_c_grid_opts(CLI::App* sub, Opts& o) {
  sub->add_option("--c-min", o.c_min, "curvature grid lower end");
  sub->add_option("--c-max", o.c_max, "curvature grid upper end");
  sub->add_option("--c-steps", o.c_steps, "curvature grid point count");
}

void resolve_window(Opts& o) {
  if (!o.window.empty()) {
    const auto& [f, t] = kWindows.at(o.window);
    o.from = f;
    o.to = t;
  }
  if (o.from.empty() != o.to.empty())
    vsd::detail::invalid("--from and --to must be given together");
}

ThresholdUtility parse_utility(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::vector<double> ps;
  if (colon != std::string::npos) {
    std::istringstream rest(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(rest, tok, ',')) {
      std::size_t used = 0;
      double val = 0.0;
      try {
        val = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || tok.empty())
        vsd::detail::invalid("bad utility parameter '" + tok + "' in " + spec);
      ps.push_back(val);
    }
  }
  if (name == "cara" && ps.size() == 1) return ThresholdUtility::cara(ps[0]);
  if (name == "crra" && ps.size() == 1) return ThresholdUtility::crra(ps[0]);
  if (name == "logistic" && ps.size() == 1)
    return ThresholdUtility::logistic(ps[0]);
  if (name == "sahara" && ps.size() == 3)
    return ThresholdUtility::sahara(ps[0], ps[1], ps[2]);
  if (name == "kt" && ps.size() == 3)
    return ThresholdUtility::kahneman_tversky(ps[0], ps[1], ps[2]);
  if (name == "log" && ps.empty()) return ThresholdUtility::plain_log();
  if (name == "neglogneg" && ps.empty())
    return ThresholdUtility::neg_log_neg();
  vsd::detail::invalid(
      "unknown utility spec: " + spec +
      " (expected cara:<c>, crra:<a>, logistic:<alpha>, sahara:<a>,<b>,<d>, "
      "kt:<a>,<b>,<eps>, log, or neglogneg)");
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

vsd::ReturnSeries load_returns(const std::string& path, const Opts& o) {
  std::ifstream in(path);
  if (!in) vsd::detail::invalid("cannot open input file: " + path);
  auto prices = vsd::read_price_csv(in, stem_of(path));
  if (!o.from.empty()) prices = prices.window(o.from, o.to);
  return vsd::log_returns(prices);
}

std::vector<double> c_grid(const Opts& o) {
  if (!(o.c_min < o.c_max))
    vsd::detail::invalid("curvature grid needs --c-min < --c-max");
  if (o.c_steps < 2) vsd::detail::invalid("curvature grid needs >= 2 steps");
  std::vector<double> cs(o.c_steps);
  for (int i = 0; i < o.c_steps; ++i)
    cs[i] = o.c_min + (o.c_max - o.c_min) * i / (o.c_steps - 1);
  return cs;
}

std::string atoms_of(const DiscreteDistribution& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ";";
    s += num(d.values()[i]) + ":" + num(d.probs()[i]);
  }
  return s;
}

void stamp(Table& t, const char* command, const Opts& o) {
  t.note("command", command);
  t.note("seed", o.seed);
  if (!o.from.empty()) {
    t.note("from", o.from);
    t.note("to", o.to);
  }
}

void emit(const Table& t, const Opts& o) {
  std::ostringstream buf;
  if (o.format == "json")
    render_json(buf, t);
  else
    render_csv(buf, t);
  if (o.output.empty()) {
    std::cout << buf.str();
  } else {
    std::ofstream f(o.output);
    if (!f) vsd::detail::invalid("cannot open output file: " + o.output);
    f << buf.str();
  }
}

// ---- subcommands ----------------------------------------------------------

int run_es_curve(const Opts& o) {
  auto returns = load_returns(o.input, o);
  auto curve = vsd::ESCurve(vsd::to_distribution(returns));
  Table t;
  stamp(t, "es-curve", o);
  t.note("input", returns.label());
  t.note("returns", returns.points().size());
  t.columns = {"p", "es"};
  for (double p : curve.breakpoints()) t.rows.push_back({p, curve.es(p)});
  emit(t, o);
  return 0;
}

int run_rho_curve(const Opts& o) {
  auto base = load_returns(o.input, o);
  auto x = vsd::to_distribution(base);
  std::vector<DiscreteDistribution> zs;
  std::vector<std::string> labels;
  for (const auto& path : o.benchmarks) {
    auto r = load_returns(path, o);
    zs.push_back(vsd::to_distribution(r));
    labels.push_back(r.label());
  }
  auto all = vsd::BenchmarkSet::of(zs, labels);

  Table t;
  stamp(t, "rho-curve", o);
  t.note("input", base.label());
  std::string joined;
  for (const auto& l : labels) joined += (joined.empty() ? "" : ";") + l;
  t.note("benchmarks", joined);
  t.columns = {"c", "set", "rho", "argmin"};
  for (double c : c_grid(o)) {
    auto choice = vsd::cara_meyer_choice(x, c, all);
    t.rows.push_back({c, "all", choice.value, labels[choice.index]});
    for (std::size_t i = 0; i < zs.size(); ++i) {
      auto single = vsd::BenchmarkSet::of({zs[i]}, {labels[i]});
      t.rows.push_back({c, labels[i], vsd::cara_meyer(x, c, single), labels[i]});
    }
  }
  emit(t, o);
  return 0;
}

int run_cmax(const Opts& o) {
  if (o.benchmarks.size() != 1)
    vsd::detail::invalid("cmax needs exactly one --benchmark");
  auto x = vsd::to_distribution(load_returns(o.input, o));
  auto z = vsd::to_distribution(load_returns(o.benchmarks[0], o));
  auto r = vsd::c_max(x, z, o.c_min, o.c_max);

  Table t;
  stamp(t, "cmax", o);
  t.note("input", stem_of(o.input));
  t.note("benchmark", stem_of(o.benchmarks[0]));
  t.note("bracket", num(o.c_min) + ".." + num(o.c_max));
  t.columns = {"key", "value"};
  t.rows.push_back({"c_max", r.c_star ? ordered_json(*r.c_star) : ordered_json("none")});
  t.rows.push_back({"degenerate", r.degenerate});
  if (!r.note.empty()) t.rows.push_back({"note", r.note});
  emit(t, o);
  return 0;
}

int run_riskmin(const Opts& o) {
  std::ifstream in(o.input);
  if (!in) vsd::detail::invalid("cannot open config file: " + o.input);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    vsd::detail::invalid("config parse error: " + std::string(e.what()));
  }

  try {
    auto pricing = vsd::PricingQuantile::physical();
    if (cfg.contains("pricing") && !cfg["pricing"].is_null()) {
      std::vector<vsd::StepFunction::Piece> pieces;
      for (const auto& p : cfg.at("pricing"))
        pieces.push_back({p.at("t").get<double>(), p.at("value").get<double>()});
      pricing = vsd::PricingQuantile::of(std::move(pieces));
    }
    double x0 = cfg.at("x0").get<double>();
    std::vector<vsd::GFunction> family;
    std::vector<std::string> labels;
    for (const auto& entry : cfg.at("family")) {
      labels.push_back(entry.value("label", "g" + std::to_string(family.size())));
      if (entry.contains("knots")) {
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : entry.at("knots"))
          knots.emplace_back(k.at("p").get<double>(), k.at("g").get<double>());
        family.push_back(vsd::GFunction::tabulated(std::move(knots)));
      } else {
        std::vector<vsd::Atom> atoms;
        for (const auto& a : entry.at("atoms"))
          atoms.push_back(
              {a.at("value").get<double>(), a.at("prob").get<double>()});
        family.push_back(vsd::GFunction::benchmark_es(
            DiscreteDistribution::from_atoms(std::move(atoms))));
      }
    }
    auto inst = vsd::RiskMinInstance::of(pricing, x0, family);
    auto sol = vsd::solve_family(inst);

    Table t;
    stamp(t, "riskmin", o);
    t.note("config", o.input);
    t.note("x0", x0);
    t.note("kappa_star", sol.kappa_star);
    t.note("g_star", labels[sol.g_star_index]);
    t.note("g_star_index", sol.g_star_index);
    t.note("budget_check", vsd::expectation_q(sol.l_star, pricing));
    t.columns = {"t", "value"};
    for (const auto& piece : sol.l_star.pieces())
      t.rows.push_back({piece.t, piece.value});
    emit(t, o);
    return 0;
  } catch (const nlohmann::json::exception& e) {
    vsd::detail::invalid("config error: " + std::string(e.what()));
  }
}

void witness_rows(Table& t, const vsd::Witness& w) {
  const char* kind = w.kind == vsd::Witness::Kind::translation_gap
                         ? "translation_gap"
                         : (w.kind == vsd::Witness::Kind::mps
                                ? "mps"
                                : "comonotone_infeasible");
  t.rows.push_back({"found", true});
  t.rows.push_back({"kind", kind});
  t.rows.push_back({"violation", w.violation});
  t.rows.push_back({"rho_dominated", w.rho_dominated});
  t.rows.push_back({"rho_dominating", w.rho_dominating});
  t.rows.push_back({"dominated", atoms_of(w.dominated)});
  t.rows.push_back({"dominating", atoms_of(w.dominating)});
  if (w.benchmark) {
    t.rows.push_back({"benchmark", atoms_of(*w.benchmark)});
    t.rows.push_back({"shift", w.shift});
  }
  t.rows.push_back({"note", w.note});
}

int run_falsify(const Opts& o) {
  auto v = parse_utility(o.utility);
  Table t;
  stamp(t, "falsify", o);
  t.note("utility", v.name());
  t.note("mode", o.mode);
  t.columns = {"key", "value"};

  std::optional<vsd::Witness> w;
  if (o.mode == "pratt") {
    w = vsd::pratt_witness(v);
  } else {
    if (!(o.level >= 0.0 && o.level <= 1.0))
      vsd::detail::invalid("--level must lie in [0,1]");
    t.note("level", o.level);
    double level = o.level;
    vsd::RiskFunctional rho = [level](const DiscreteDistribution& d) {
      return d.es(level);
    };
    w = vsd::mps_witness(rho, v);
  }
  if (w) {
    witness_rows(t, *w);
  } else {
    t.rows.push_back({"found", false});
    t.rows.push_back({"note", "no witness"});
  }
  emit(t, o);
  return 0;
}

int run_counterexample(const Opts& o) {
  bool loss = o.instance == "loss";
  auto alloc = loss ? vsd::negative_domain_instance()
                    : vsd::positive_domain_instance();
  auto v = loss ? ThresholdUtility::neg_log_neg()
                : ThresholdUtility::plain_log();
  std::size_t scanned = 0;
  auto imp = vsd::comonotone_improvement_search(alloc, v, o.resolution,
                                                &scanned);

  Table t;
  stamp(t, "counterexample", o);
  t.note("instance", o.instance);
  t.note("utility", v.name());
  t.note("resolution", o.resolution);
  t.note("allocation", num(alloc.x1_a) + "," + num(alloc.x1_c) + "/" +
                           num(alloc.x2_a) + "," + num(alloc.x2_c));
  t.columns = {"key", "value"};
  int hits = imp.has_value() ? 1 : 0;
  t.rows.push_back({"hits", hits});
  t.rows.push_back({"grid_points", scanned});
  t.rows.push_back(
      {"summary", std::to_string(hits) + " hits / " +
                      std::to_string(scanned) + " grid points"});
  if (imp) {
    t.rows.push_back({"a", imp->a});
    t.rows.push_back({"b", imp->b});
    t.rows.push_back({"strict", imp->strict});
    t.rows.push_back(
        {"note",
         "verified improvement: both coordinates dominate in the v-SD order" +
             std::string(imp->strict ? ", at least one strictly" : "")});
  }
  emit(t, o);
  return 0;
}

int run_summary(const Opts& o) {
  auto base = load_returns(o.input, o);
  Table t;
  stamp(t, "summary", o);
  t.note("input", base.label());
  t.columns = {"label", "n", "min", "q1", "median", "mean", "q3", "max"};
  auto row = [&](const vsd::ReturnSeries& r) {
    auto s = vsd::summary(r);
    t.rows.push_back({r.label(), r.points().size(), s.min, s.q1, s.median,
                      s.mean, s.q3, s.max});
  };
  if (o.benchmarks.empty()) {
    row(base);
  } else {
    for (const auto& path : o.benchmarks)
      row(vsd::align_and_diff(base, load_returns(path, o)));
  }
  emit(t, o);
  return 0;
}

int run_demo_intro(const Opts& o) {
  auto x1 = DiscreteDistribution::from_atoms({{0.0, 0.75}, {10.0, 0.25}});
  auto x2 = DiscreteDistribution::from_atoms({{-1.0, 0.25}, {4.0, 0.75}});
  vsd::ESCurve c1(x1), c2(x2);
  auto crossings = vsd::es_crossings(c1, c2);
  auto d12 = vsd::ssd_dominates(x1, x2);
  auto d21 = vsd::ssd_dominates(x2, x1);

  Table t;
  stamp(t, "demo-intro", o);
  t.note("x1", atoms_of(x1));
  t.note("x2", atoms_of(x2));
  t.note("crossing_count", crossings.size());
  if (!crossings.empty()) t.note("crossing_level", crossings.front());
  t.note("x1_ssd_x2", d12.dominated);
  t.note("x2_ssd_x1", d21.dominated);
  if (d12.witness_p) t.note("x1_witness_p", *d12.witness_p);
  if (d21.witness_p) t.note("x2_witness_p", *d21.witness_p);
  t.columns = {"p", "es_x1", "es_x2", "scaled_es_x1", "scaled_es_x2"};
  for (double p : vsd::merged_breakpoints(c1, c2))
    t.rows.push_back(
        {p, c1.es(p), c2.es(p), c1.scaled_es(p), c2.scaled_es(p)});
  emit(t, o);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Expected-shortfall curves, utility-anchored dominance, Meyer "
      "representation curves, and the closed-form loss minimiser on "
      "finitely supported return distributions"};
  app.require_subcommand(1);
  Opts o;

  auto* es = app.add_subcommand(
      "es-curve", "breakpoint-exact expected shortfall curve of log returns");
  es->add_option("--input", o.input, "price csv (date,open)")->required();
  add_window_opts(es, o);
  add_output_opts(es, o);

  auto* rho = app.add_subcommand(
      "rho-curve",
      "Meyer representation value against benchmark sets over a curvature grid");
  rho->add_option("--input", o.input, "price csv of the evaluated series")
      ->required();
  rho->add_option("--benchmark", o.benchmarks, "benchmark price csv (repeatable)")
      ->required();
  add_window_opts(rho, o);
  add_c_grid_opts(rho, o);
  add_output_opts(rho, o);

  auto* cm = app.add_subcommand(
      "cmax", "largest curvature at which the benchmark is still dominated");
  cm->add_option("--input", o.input, "price csv of the evaluated series")
      ->required();
  cm->add_option("--benchmark", o.benchmarks, "benchmark price csv (exactly one)")
      ->required();
  add_window_opts(cm, o);
  add_c_grid_opts(cm, o);
  add_output_opts(cm, o);

  auto* rm = app.add_subcommand(
      "riskmin", "closed-form minimiser of the shortfall ratio under a budget");
  rm->add_option("--input", o.input, "json config with x0, pricing, family")
      ->required();
  add_output_opts(rm, o);

  auto* fa = app.add_subcommand(
      "falsify", "search for a consistency witness against a threshold utility");
  fa->add_option("--utility", o.utility, "utility spec, e.g. cara:-1");
  fa->add_option("--mode", o.mode, "witness family to search")
      ->check(CLI::IsMember({"pratt", "mps"}));
  fa->add_option("--level", o.level,
                 "expected-shortfall level for --mode mps (default 0.9)");
  add_output_opts(fa, o);

  auto* ce = app.add_subcommand(
      "counterexample",
      "grid search for comonotone improvements of the frozen two-point "
      "allocations");
  ce->add_option("--instance", o.instance, "loss (default) or gain domain")
      ->check(CLI::IsMember({"loss", "gain"}));
  ce->add_option("--resolution", o.resolution, "lattice resolution per axis");
  add_output_opts(ce, o);

  auto* su = app.add_subcommand(
      "summary",
      "quartile summary of log returns, or of return differences against "
      "benchmarks");
  su->add_option("--input", o.input, "price csv")->required();
  su->add_option("--benchmark", o.benchmarks,
                 "difference against this benchmark csv (repeatable)");
  add_window_opts(su, o);
  add_output_opts(su, o);

  auto* di = app.add_subcommand(
      "demo-intro",
      "built-in two-lottery example: crossing ES curves, no SSD winner");
  add_output_opts(di, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    resolve_window(o);
    if (es->parsed()) return run_es_curve(o);
    if (rho->parsed()) return run_rho_curve(o);
    if (cm->parsed()) return run_cmax(o);
    if (rm->parsed()) return run_riskmin(o);
    if (fa->parsed()) return run_falsify(o);
    if (ce->parsed()) return run_counterexample(o);
    if (su->parsed()) return run_summary(o);
    if (di->parsed()) return run_demo_intro(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
