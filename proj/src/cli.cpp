#include "phantom/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "phantom/distributions.hpp"
#include "phantom/expr.hpp"
#include "phantom/limits.hpp"
#include "phantom/measure.hpp"

namespace phantom::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json to_json(const Phantom& z) { return Json{{"re", z.re}, {"ph", z.ph}}; }

Phantom eval_phantom(const std::string& src) {
  const expr::Ast ast = expr::parse(src);
  const expr::Value v = expr::eval(*ast);
  if (const auto* d = std::get_if<double>(&v)) return Phantom{*d};
  return std::get<Phantom>(v);
}

OrderKind parse_order(const std::string& s) {
  if (s == "lex") return OrderKind::lex();
  if (s == "real") return OrderKind::real_term();
  if (s == "abs") return OrderKind::abs_norm();
  if (s.rfind("alpha:", 0) == 0) {
    char* end = nullptr;
    const double a = std::strtod(s.c_str() + 6, &end);
    if (end != s.c_str() + 6 && *end == '\0') return OrderKind::alpha(a);
  }
  throw UsageError("unknown order '" + s + "' (lex, real, abs, alpha:<a>)");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

// ------------------------------------------------------------- distribution flags

struct DistFlags {
  std::string kind;
  std::optional<double> p_re, lambda_re;
  double p_ph = 0.0, lambda_ph = 0.0;
  double mu_re = 0.0, mu_ph = 0.0, sigma_re = 1.0, sigma_ph = 0.0;
  std::optional<int> n;
  int cutoff = kDefaultCutoff;
  std::string path = "real";
};

const std::vector<std::string> kDiscreteKinds = {"bernoulli", "binomial", "geometric", "poisson"};
const std::vector<std::string> kAllKinds = {"bernoulli",   "binomial", "geometric", "poisson",
                                            "exponential", "normal",   "stdnormal"};

void add_dist_flags(CLI::App* app, DistFlags& f, const std::string& kind_flag, const std::vector<std::string>& kinds) {
  app->add_option(kind_flag, f.kind, "distribution family")->required()->check(CLI::IsMember(kinds));
  app->add_option("--p-re", f.p_re, "real term of p");
  app->add_option("--p-ph", f.p_ph, "phantom term of p");
  app->add_option("--lambda-re", f.lambda_re, "real term of lambda");
  app->add_option("--lambda-ph", f.lambda_ph, "phantom term of lambda");
  app->add_option("--mu-re", f.mu_re, "real term of mu");
  app->add_option("--mu-ph", f.mu_ph, "phantom term of mu");
  app->add_option("--sigma-re", f.sigma_re, "real term of sigma");
  app->add_option("--sigma-ph", f.sigma_ph, "phantom term of sigma");
  app->add_option("--trials", f.n, "binomial trial count");
  app->add_option("--cutoff", f.cutoff, "support cap for geometric and poisson");
}

std::optional<Path> parse_path(const std::string& s, const Path& base) {
  if (s == "real") return std::nullopt;
  const double t0 = base.t0(), t1 = base.t1();
  double a = 0.0, b = 0.0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "shifted:%lf%c", &a, &tail) == 1) return Path::shifted_line(t0, t1, a);
  if (std::sscanf(s.c_str(), "zigzag:%lf:%lf%c", &a, &b, &tail) == 2) return Path::zigzag_line(t0, t1, a, b);
  throw UsageError("unknown path '" + s + "' (real, shifted:<b>, zigzag:<start>:<width>)");
}

DistSpec make_spec(const DistFlags& f) {
  auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw Error(ErrorKind::BadParameter, std::string("missing ") + flag);
    return *v;
  };
  if (f.kind == "bernoulli") return Bernoulli{Phantom{need(f.p_re, "--p-re"), f.p_ph}};
  if (f.kind == "binomial") {
    if (!f.n) throw Error(ErrorKind::BadParameter, "missing --trials");
    return Binomial{*f.n, Phantom{need(f.p_re, "--p-re"), f.p_ph}};
  }
  if (f.kind == "geometric") return Geometric{Phantom{need(f.p_re, "--p-re"), f.p_ph}, f.cutoff};
  if (f.kind == "poisson") return Poisson{Phantom{need(f.lambda_re, "--lambda-re"), f.lambda_ph}, f.cutoff};
  if (f.kind == "exponential") {
    Exponential d{Phantom{need(f.lambda_re, "--lambda-re"), f.lambda_ph}, std::nullopt};
    if (f.path != "real") d.path = parse_path(f.path, default_path(d));
    return d;
  }
  Normal d{Phantom{f.mu_re, f.mu_ph}, Phantom{f.sigma_re, f.sigma_ph}, std::nullopt};
  if (f.kind == "stdnormal") d = Normal{0.0, 1.0, std::nullopt};
  if (f.path != "real") d.path = parse_path(f.path, default_path(d));
  if (f.kind == "stdnormal") return StdNormal{d.path};
  return d;
}

// ------------------------------------------------------------------------- eval

int cmd_eval(const std::string& src, bool show_ast, bool json, std::ostream& out) {
  const expr::Ast ast = expr::parse(src);
  const expr::Value v = expr::eval(*ast);
  const std::string text = expr::render(v);
  if (json) {
    Json j{{"input", src}, {"ast", expr::to_string(*ast)}};
    if (const auto* d = std::get_if<double>(&v)) {
      j["kind"] = "real";
      j["value"] = *d;
    } else {
      j["kind"] = "phantom";
      j["value"] = to_json(std::get<Phantom>(v));
    }
    j["text"] = text;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  if (show_ast) out << expr::to_string(*ast) << "\n";
  out << text << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- measure

PhantomMeasure load_measure(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + file);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("document must be an object");
  if (!doc.contains("mode") || !doc["mode"].is_string()) throw SchemaError("\"mode\" must be a string");
  const std::string mode = doc["mode"];
  if (mode != "strict" && mode != "lenient") throw SchemaError("\"mode\" must be \"strict\" or \"lenient\"");
  if (!doc.contains("outcomes") || !doc["outcomes"].is_array() || doc["outcomes"].empty()) {
    throw SchemaError("\"outcomes\" must be a non-empty array");
  }
  std::vector<std::string> labels;
  std::vector<Phantom> weights;
  for (const Json& o : doc["outcomes"]) {
    if (!o.is_object()) throw SchemaError("each outcome must be an object");
    if (!o.contains("label") || !o["label"].is_string()) throw SchemaError("outcome \"label\" must be a string");
    for (const char* key : {"re", "ph"}) {
      if (!o.contains(key) || !o[key].is_number() || !std::isfinite(o[key].get<double>())) {
        throw SchemaError(std::string("outcome \"") + key + "\" must be a finite number");
      }
    }
    const std::string label = o["label"];
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
      throw SchemaError("duplicate label \"" + label + "\"");
    }
    labels.push_back(label);
    weights.emplace_back(o["re"].get<double>(), o["ph"].get<double>());
  }
  return PhantomMeasure(SampleSpace(labels), weights, mode == "strict" ? MeasureMode::Strict : MeasureMode::Lenient);
}

int cmd_measure_validate(const std::string& file, bool json, std::ostream& out) {
  const PhantomMeasure m = load_measure(file);
  const ValidationReport r = validate(m);
  const std::string mode = m.mode() == MeasureMode::Strict ? "strict" : "lenient";
  if (json) {
    Json findings = Json::array();
    for (const Finding& f : r.findings) {
      findings.push_back({{"outcome", f.outcome}, {"axiom", f.axiom}, {"message", f.message}});
    }
    out << Json{{"valid", r.valid}, {"mode", mode}, {"findings", findings}}.dump(2) << "\n";
  } else {
    out << (r.valid ? "valid" : "invalid") << " (" << mode << ")\n";
    for (const Finding& f : r.findings) {
      out << "  " << (f.outcome.empty() ? "*" : f.outcome) << ": " << f.axiom << ": " << f.message << "\n";
    }
  }
  return r.valid ? kExitOk : kExitInvalid;
}

// ------------------------------------------------------------------------- dist

struct DistArgs {
  DistFlags dist;
  std::string stat = "mean";
  std::string order = "lex";
  bool check = false;
  bool json = false;
};

CdfArg parse_cdf_arg(const std::string& s) {
  if (s == "-inf") return Sentinel::MinusInfinity;
  if (s == "inf" || s == "+inf") return Sentinel::PlusInfinity;
  return eval_phantom(s);
}

Phantom compute_stat(const PRV& x, const std::string& stat, const OrderKind& ord) {
  return std::visit(
      [&](const auto& v) -> Phantom {
        if (stat == "mean") return moment(v, 1);
        if (stat == "var") return variance(v);
        if (stat == "std") return std_dev(v);
        if (stat.rfind("mgf:", 0) == 0) return mgf(v, eval_phantom(stat.substr(4)));
        if (stat.rfind("cdf:", 0) == 0) {
          const CdfArg z = parse_cdf_arg(stat.substr(4));
          if constexpr (std::is_same_v<std::decay_t<decltype(v)>, DiscretePRV>) {
            return cdf_discrete(v, z, ord);
          } else {
            return cdf_continuous(v, z, ord);
          }
        }
        throw UsageError("unknown --stat '" + stat + "' (mean, var, std, mgf:<z>, cdf:<z>)");
      },
      x);
}

bool close_enough(const Phantom& got, const Phantom& want, double tol) {
  const double scale = std::max({1.0, std::abs(want.re), std::abs(want.reduction())});
  return std::abs(got.re - want.re) <= tol * scale && std::abs(got.reduction() - want.reduction()) <= tol * scale;
}

int cmd_dist(const DistArgs& a, std::ostream& out) {
  const DistSpec spec = make_spec(a.dist);
  const OrderKind ord = parse_order(a.order);
  const PRV x = build(spec);
  const Phantom value = compute_stat(x, a.stat, ord);

  Json check = nullptr;
  bool ok = true;
  if (a.check) {
    const ClosedFormStats cf = closed_form_stats(spec);
    const double tol = is_discrete(spec) ? 1e-8 : 1e-6;
    const Phantom mean = compute_stat(x, "mean", ord);
    const Phantom var = compute_stat(x, "var", ord);
    const bool mean_ok = close_enough(mean, cf.mean, tol);
    const bool var_ok = close_enough(var, cf.variance, tol);
    ok = mean_ok && var_ok;
    check = Json{{"tolerance", tol},
                 {"mean", {{"computed", to_json(mean)}, {"closed_form", to_json(cf.mean)}, {"ok", mean_ok}}},
                 {"variance", {{"computed", to_json(var)}, {"closed_form", to_json(cf.variance)}, {"ok", var_ok}}}};
  }

  if (a.json) {
    out << Json{{"kind", a.dist.kind}, {"stat", a.stat}, {"value", to_json(value)}, {"text", expr::render(value)},
                {"check", check}}
               .dump(2)
        << "\n";
  } else {
    out << expr::render(value) << "\n";
    if (a.check) {
      for (const char* key : {"mean", "variance"}) {
        const Json& c = check[key];
        out << "check " << key << ": " << (c["ok"].get<bool>() ? "ok" : "MISMATCH") << " (computed "
            << expr::render(Phantom{c["computed"]["re"].get<double>(), c["computed"]["ph"].get<double>()})
            << ", closed form "
            << expr::render(Phantom{c["closed_form"]["re"].get<double>(), c["closed_form"]["ph"].get<double>()})
            << ")\n";
      }
    }
  }
  return ok ? kExitOk : kExitFinding;
}

// --------------------------------------------------------------------- simulate

struct SimArgs {
  std::string law;
  DistFlags dist;
  std::int64_t n = 100000;
  int reps = 1;
  std::uint64_t seed = 0;
  std::string component = "re";
  std::string format = "csv";
  double epsilon = 0.01;
  std::string file;
};

std::uint64_t effective_seed(std::uint64_t flag) {
  const char* env = std::getenv("PHANTOM_SEED");
  if (env == nullptr || *env == '\0') return flag;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || *env == '-') throw UsageError(std::string("PHANTOM_SEED is not an unsigned integer: ") + env);
  return v;
}

void write_report(const SimArgs& a, const SimConfig& cfg, const SimReport& r, std::ostream& out) {
  if (a.format == "csv") {
    if (a.law == "clt") {
      out << "bin,empirical,target\n";
      for (const CdfBin& b : r.cdf_bins) {
        out << format_number(b.edge) << "," << format_number(b.empirical) << "," << format_number(b.target) << "\n";
      }
    } else {
      out << "n,deviation\n";
      for (const auto& [n, d] : r.per_n_curve) out << n << "," << format_number(d) << "\n";
    }
    return;
  }
  Json curve = Json::array();
  for (const auto& [n, d] : r.per_n_curve) curve.push_back({{"n", n}, {"deviation", d}});
  Json bins = Json::array();
  for (const CdfBin& b : r.cdf_bins) bins.push_back({{"bin", b.edge}, {"empirical", b.empirical}, {"target", b.target}});
  Json j{{"law", a.law},
         {"dist", a.dist.kind},
         {"component", a.component},
         {"seed", cfg.seed},
         {"rng", std::string(kRngAlgorithm)},
         {"n", cfg.n},
         {"reps", cfg.reps},
         {"empirical_mean", r.empirical_mean},
         {"target_mean", r.target_mean},
         {"deviation", r.deviation},
         {"ks_statistic", r.ks_statistic ? Json(*r.ks_statistic) : Json(nullptr)},
         {"epsilon", a.law == "slln" ? Json(cfg.epsilon) : Json(nullptr)},
         {"within_fraction", r.within_fraction ? Json(*r.within_fraction) : Json(nullptr)},
         {"per_n_curve", curve},
         {"cdf_bins", bins}};
  out << j.dump(2) << "\n";
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  const DiscretePRV x = build_discrete(make_spec(a.dist));
  SimConfig cfg;
  cfg.seed = effective_seed(a.seed);
  cfg.n = a.n;
  cfg.reps = a.reps;
  cfg.epsilon = a.epsilon;
  cfg.selection = a.component == "re"    ? Selection::RealComponent
                  : a.component == "red" ? Selection::ReducedComponent
                                         : Selection::Midpoint;
  const SimReport r = a.law == "wlln"  ? wlln_experiment(x, cfg)
                      : a.law == "clt" ? clt_experiment(x, cfg)
                                       : slln_experiment(x, cfg);
  if (a.file.empty()) {
    write_report(a, cfg, r, out);
    return kExitOk;
  }
  std::ofstream f(a.file, std::ios::binary);
  if (!f) throw UsageError("cannot write " + a.file);
  write_report(a, cfg, r, f);
  return kExitOk;
}

// ------------------------------------------------------------------- inequality

struct IneqArgs {
  DistFlags dist;
  std::string z;
  std::optional<double> c;
  std::string variant = "abs-abs";
  std::string order = "lex";
  bool json = false;
};

int report_bound(const std::string& name, const std::string& variant, const Json& lhs, const Json& rhs,
                 const std::string& lhs_text, const std::string& rhs_text, bool holds, bool json, std::ostream& out) {
  if (json) {
    out << Json{{"inequality", name}, {"variant", variant}, {"lhs", lhs}, {"rhs", rhs}, {"holds", holds}}.dump(2)
        << "\n";
  } else {
    out << "lhs " << lhs_text << "\nrhs " << rhs_text << "\n" << (holds ? "holds" : "VIOLATED") << "\n";
  }
  return holds ? kExitOk : kExitFinding;
}

int cmd_markov(const IneqArgs& a, std::ostream& out) {
  const DiscretePRV x = build_discrete(make_spec(a.dist));
  const MarkovVariant v = a.variant == "order"       ? MarkovVariant::Order
                          : a.variant == "abs-order" ? MarkovVariant::AbsOrder
                                                     : MarkovVariant::AbsAbs;
  const BoundCheck b = markov_bound(x, eval_phantom(a.z), v, parse_order(a.order));
  if (v == MarkovVariant::AbsAbs) {
    return report_bound("markov", a.variant, b.lhs.re, b.rhs.re, format_number(b.lhs.re), format_number(b.rhs.re),
                        b.holds, a.json, out);
  }
  return report_bound("markov", a.variant, to_json(b.lhs), to_json(b.rhs), expr::render(b.lhs), expr::render(b.rhs),
                      b.holds, a.json, out);
}

int cmd_chebyshev(const IneqArgs& a, std::ostream& out) {
  const DiscretePRV x = build_discrete(make_spec(a.dist));
  if (a.z.empty() == !a.c.has_value()) throw UsageError("give exactly one of --z and --c");
  const RealBoundCheck b = a.c ? chebyshev_c_form(x, *a.c) : chebyshev_bound(x, eval_phantom(a.z));
  return report_bound("chebyshev", a.c ? "c-form" : "z-form", b.lhs, b.rhs, format_number(b.lhs),
                      format_number(b.rhs), b.holds, a.json, out);
}

CLI::App* deepest(CLI::App* app) {
  for (CLI::App* sub : app->get_subcommands()) return deepest(sub);
  return app;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phantom number arithmetic and phantom probability toolkit", "phantom"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string eval_src;
  bool eval_ast = false, eval_json = false;
  auto* eval = app.add_subcommand("eval", "evaluate a phantom expression");
  eval->add_option("expr", eval_src, "expression, e.g. (1+2*p)^3")->required();
  eval->add_flag("--ast", eval_ast, "print the parse tree first");
  eval->add_flag("--json", eval_json, "machine-readable output");
  eval->callback([&] { action = [&] { return cmd_eval(eval_src, eval_ast, eval_json, out); }; });

  std::string measure_file;
  bool measure_json = false;
  auto* measure = app.add_subcommand("measure", "phantom measure documents");
  measure->require_subcommand(1);
  auto* validate_cmd = measure->add_subcommand("validate", "check a measure document against the axioms");
  validate_cmd->add_option("file", measure_file, "JSON measure document")->required();
  validate_cmd->add_flag("--json", measure_json, "machine-readable report");
  validate_cmd->callback([&] { action = [&] { return cmd_measure_validate(measure_file, measure_json, out); }; });

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "statistics of a named distribution");
  add_dist_flags(dist, dist_args.dist, "--kind", kAllKinds);
  dist->add_option("--stat", dist_args.stat, "mean, var, std, mgf:<z> or cdf:<z|-inf|inf>");
  dist->add_option("--order", dist_args.order, "order for cdf: lex, real, abs, alpha:<a>");
  dist->add_option("--path", dist_args.dist.path, "continuous path: real, shifted:<b>, zigzag:<start>:<width>");
  dist->add_flag("--check", dist_args.check, "compare mean and variance with closed forms");
  dist->add_flag("--json", dist_args.json, "machine-readable output");
  dist->callback([&] { action = [&] { return cmd_dist(dist_args, out); }; });

  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "seeded limit theorem experiments");
  simulate->add_option("--law", sim.law, "wlln, clt or slln")->required()->check(CLI::IsMember({"wlln", "clt", "slln"}));
  add_dist_flags(simulate, sim.dist, "--dist", kDiscreteKinds);
  simulate->add_option("--n", sim.n, "sample size")->check(CLI::PositiveNumber);
  simulate->add_option("--reps", sim.reps, "replications")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "seed (PHANTOM_SEED overrides)");
  simulate->add_option("--component", sim.component, "re, red or mid")->check(CLI::IsMember({"re", "red", "mid"}));
  simulate->add_option("--out", sim.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--epsilon", sim.epsilon, "SLLN window tolerance");
  simulate->add_option("--file", sim.file, "write to this file instead of stdout");
  simulate->callback([&] { action = [&] { return cmd_simulate(sim, out); }; });

  IneqArgs ineq;
  auto* inequality = app.add_subcommand("inequality", "Markov and Chebyshev bounds");
  inequality->require_subcommand(1);
  auto* markov = inequality->add_subcommand("markov", "Markov bound");
  add_dist_flags(markov, ineq.dist, "--dist", kDiscreteKinds);
  markov->add_option("--z", ineq.z, "threshold expression")->required();
  markov->add_option("--variant", ineq.variant, "order, abs-order or abs-abs")
      ->check(CLI::IsMember({"order", "abs-order", "abs-abs"}));
  markov->add_option("--order", ineq.order, "lex, real, abs, alpha:<a>");
  markov->add_flag("--json", ineq.json, "machine-readable output");
  markov->callback([&] { action = [&] { return cmd_markov(ineq, out); }; });
  auto* chebyshev = inequality->add_subcommand("chebyshev", "Chebyshev bound");
  add_dist_flags(chebyshev, ineq.dist, "--dist", kDiscreteKinds);
  chebyshev->add_option("--z", ineq.z, "threshold expression");
  chebyshev->add_option("--c", ineq.c, "multiple of the component standard deviation");
  chebyshev->add_flag("--json", ineq.json, "machine-readable output");
  chebyshev->callback([&] { action = [&] { return cmd_chebyshev(ineq, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n" << deepest(&app)->help();
    return kExitInvalid;
  }

  try {
    return action();
  } catch (const expr::SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace phantom::cli
