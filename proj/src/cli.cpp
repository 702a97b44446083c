#include "mcomp/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <string>

#include "mcomp/suites.hpp"

namespace mcomp {

namespace {

using io::Json;

struct Globals {
  std::uint64_t seed = 42;
  std::size_t cases = 100;
  unsigned depth = 6;
  bool floating = false;
  double tol = 1e-9;
  std::string json_out;
  bool json_requested = false;
};

struct Inputs {
  std::string kind;  // compensate: cantor|atomic ; repair: functional|operator
  std::string in, f, mu, T, phi, space, triples;
  std::string eps, delta;
  std::string xi = "single";
  std::string mode = "metric";
  bool trace = false;
  std::string suite;
  std::optional<std::size_t> only_case;
};

// Writes the JSON document where --json-out asked for it, and a short text
// summary to `out` otherwise.
void emit(const Globals& g, const Json& doc, const std::string& summary, std::ostream& out) {
  if (g.json_requested && (g.json_out.empty() || g.json_out == "-")) {
    out << io::dump(doc);
    return;
  }
  if (g.json_requested) {
    std::ofstream file(g.json_out);
    if (!file) throw PreconditionError("cannot write '" + g.json_out + "'");
    file << io::dump(doc);
  }
  out << summary;
}

template <class S>
std::string weights_line(const std::vector<S>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_scalar(v[i]);
  return s;
}

template <class S>
int cmd_compensate(const Globals& g, const Inputs& in, std::ostream& out) {
  const Json doc_in = io::load_json(in.in);
  if (in.kind == "cantor") {
    const DyadicMeasure<S> mu = io::parse_dyadic<S>(doc_in);
    const DyadicMeasure<S> xi = compensate_cantor(mu);
    Json doc{{"input", io::to_json(mu)}, {"output", io::to_json(xi)}};
    if (in.trace) doc["trace"] = io::to_json(stage_trace(mu));
    emit(g, doc, "output: " + weights_line(xi.leaves()) + "\n", out);
    return kExitOk;
  }
  const AtomicMeasure<S> mu = io::parse_atomic<S>(doc_in);
  const AtomicMeasure<S> xi = compensate_single(mu);
  emit(g, Json{{"input", io::to_json(mu)}, {"output", io::to_json(xi)}}, "output: " + weights_line(xi.values()) + "\n",
       out);
  return kExitOk;
}

template <class S>
int cmd_repair(const Globals& g, const Inputs& in, std::ostream& out) {
  const S eps = parse_scalar<S>(in.eps);
  const GridFunction<S> f = io::parse_function<S>(io::load_json(in.f));
  const AtomicMeasure<S> mu = io::parse_atomic<S>(io::load_json(in.mu));
  if (in.kind == "functional") {
    const FunctionalRepair<S> r =
        in.delta.empty() ? bpb_repair_functional(f, mu, eps) : bpb_repair_functional(f, mu, eps, parse_scalar<S>(in.delta));
    const bool ok = r.certified(eps);
    emit(g, io::to_json(r, eps),
         "f0: " + weights_line(r.f0.values()) + "\nmu0: " + weights_line(r.mu0.values()) +
             "\npairing: " + format_scalar(r.pairing_value) + "\n|f - f0|: " + format_scalar(r.function_distance) +
             "\n|mu - mu0|: " + format_scalar(r.measure_distance) + "\ncertified: " + (ok ? "yes" : "no") + "\n",
         out);
    return ok ? kExitOk : kExitInvariant;
  }
  const OperatorTable<S> T = io::parse_operator<S>(io::load_json(in.T));
  const OperatorRepair<S> r = bpb_repair_operator(T, f, mu, eps);
  const bool ok = r.certified(eps);
  emit(g, io::to_json(r, eps),
       "nu(T0): " + format_scalar(r.radius) + "\npairing: " + format_scalar(r.pairing_value) +
           "\n|T - T0|: " + format_scalar(r.operator_distance) + "\n|f - f0|: " + format_scalar(r.function_distance) +
           "\n|mu - mu0|: " + format_scalar(r.measure_distance) + "\ncertified: " + (ok ? "yes" : "no") + "\n",
       out);
  return ok ? kExitOk : kExitInvariant;
}

template <class S>
int cmd_transfer(const Globals& g, const Inputs& in, std::ostream& out) {
  const QuotientSpec<S> q = io::parse_quotient<S>(io::load_json(in.phi));
  const RaoReport rao = validate_rao(q);
  if (!rao.ok()) {
    std::string all;
    for (const auto& v : rao.violations) all += "\n  " + v;
    throw PreconditionError("invalid quotient:" + all);
  }
  const AtomicMeasure<S> mu = io::parse_atomic<S>(io::load_json(in.in));
  CompensationProcedure<S> xi;
  if (in.xi == "cantor") {
    xi = cantor_procedure<S>();
  } else {
    xi = [](const AtomicMeasure<S>& m) { return compensate_single(m); };
  }
  const AtomicMeasure<S> result = transfer_compensation(q, xi, mu);
  const auto defect = compensation_defect(mu, result);
  Json doc{{"input", io::to_json(mu)}, {"xi", in.xi}, {"output", io::to_json(result)},
           {"is_compensation", !defect.has_value()}};
  emit(g, doc, "output: " + weights_line(result.values()) + "\n", out);
  if (defect) throw InvariantError("transferred value is not a compensation: " + *defect);
  return kExitOk;
}

template <class S>
int cmd_closeness(const Globals& g, const Inputs& in, std::ostream& out) {
  const Json space_doc = io::load_json(in.space);
  const Json triples_doc = io::load_json(in.triples);
  PointSet points;
  ClosenessEvaluator<S> c;
  std::optional<MetricSpaceSample<S>> metric;
  CompensationProcedure<S> xi;
  std::optional<unsigned> cantor_depth;

  if (in.mode == "metric") {
    metric = io::parse_metric<S>(space_doc);
    points = metric->points();
    c = [&](std::size_t x, std::size_t y, std::size_t z) { return metric_closeness(*metric, x, y, z); };
  } else if (space_doc.is_object() && space_doc.contains("depth")) {
    const Json& d = space_doc["depth"];
    if (!d.is_number_unsigned() || d.get<unsigned long long>() > 16) {
      throw ParseError("space: depth must be an integer in [0, 16]");
    }
    cantor_depth = d.get<unsigned>();
    points = leaf_labels(*cantor_depth);
    xi = cantor_procedure<S>();
  } else {
    if (!space_doc.is_object() || !space_doc.contains("points")) throw ParseError("space: missing \"points\"");
    for (const auto& p : space_doc["points"]) {
      if (!p.is_string()) throw ParseError("space: point labels must be strings");
      points.push_back(p.get<std::string>());
    }
    check_distinct_labels(points);
    xi = [](const AtomicMeasure<S>& m) { return compensate_single(m); };
  }
  if (!c) {
    c = [&](std::size_t x, std::size_t y, std::size_t z) { return closeness_from_compensation(xi, points, x, y, z); };
  }

  const std::vector<Triple> triples = io::parse_triples(triples_doc, points);
  Json values = Json::array();
  std::string text;
  for (const auto& t : triples) {
    if (t[1] == t[2]) {
      values.push_back({{"x", points[t[0]]}, {"y", points[t[1]]}, {"z", points[t[2]]}, {"c", nullptr}});
      continue;
    }
    const S v = c(t[0], t[1], t[2]);
    values.push_back({{"x", points[t[0]]}, {"y", points[t[1]]}, {"z", points[t[2]]}, {"c", format_scalar(v)}});
    text += "c(" + points[t[0]] + "," + points[t[1]] + "," + points[t[2]] + ") = " + format_scalar(v) + "\n";
  }
  const AxiomsReport axioms = axioms_check(c, points, triples);
  Json doc{{"mode", in.mode}, {"values", values}, {"axioms", {{"triples", axioms.triples}, {"violations", axioms.violations}}}};
  bool ok = axioms.ok();
  if (cantor_depth && *cantor_depth >= 1) {
    const ContinuitySample cs = cantor_closeness_continuity(*cantor_depth, triples);
    doc["continuity"] = {{"sampled_only", cs.sampled_only}, {"probes", cs.probes}, {"violations", cs.violations}};
    ok = ok && cs.ok();
  }
  for (const auto& v : axioms.violations) text += "violation: " + v + "\n";
  emit(g, doc, text, out);
  return ok ? kExitOk : kExitInvariant;
}

template <class S>
int cmd_agamma(const Globals& g, const Inputs& in, std::ostream& out) {
  const FiniteField<S> F = io::parse_field<S>(io::load_json(in.in));
  const FieldCompensation<S> xi = agamma_compensate(F);
  const TailReport tail = continuity_along_tail(F, xi, default_probes(F));
  Json doc = io::to_json(xi);
  doc["tail_check"] = {{"probes", tail.probes}, {"violations", tail.violations}};
  std::string text = "inf: " + io::sparse_json(xi.xi_infinity)["atoms"].dump() + "\n";
  for (const auto& [t, v] : xi.xi_exceptions) text += "g" + std::to_string(t) + ": " + io::sparse_json(v)["atoms"].dump() + "\n";
  text += "tail: " + io::sparse_json(xi.xi_tail)["atoms"].dump() + "\n";
  for (const auto& v : tail.violations) text += "violation: " + v + "\n";
  emit(g, doc, text, out);
  return tail.ok() ? kExitOk : kExitInvariant;
}

int cmd_verify(const Globals& g, const Inputs& in, std::ostream& out) {
  SuiteOptions opt;
  opt.name = in.suite;
  opt.cases = g.cases;
  opt.seed = g.seed;
  opt.depth = g.depth;
  opt.floating = g.floating;
  opt.only_case = in.only_case;
  const SuiteReport report = run_suite(opt);
  std::string text = report.suite + ": " + std::to_string(report.cases_run) + " cases, " +
                     std::to_string(report.checks) + " checks, " + std::to_string(report.failures.size()) +
                     " failures\n";
  for (const auto& f : report.failures) {
    text += "  [" + f.suite + " case " + std::to_string(f.case_index) + "] " + f.check +
            (f.detail.empty() ? "" : ": " + f.detail) + "\n";
  }
  emit(g, to_json(report), text, out);
  return report.ok() ? kExitOk : kExitInvariant;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measure compensation toolkit", "mcomp"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  Inputs in;

  app.add_option("--seed", g.seed, "Base seed for generated instances");
  app.add_option("--cases", g.cases, "Number of generated cases");
  app.add_option("--depth", g.depth, "Maximal dyadic depth for generated instances");
  app.add_flag("--float", g.floating, "Use double arithmetic instead of exact rationals");
  app.add_option("--tol", g.tol, "Comparison tolerance in --float mode");
  auto* json_opt = app.add_option("--json-out", g.json_out, "Write the JSON report to a file ('-' or no value: stdout)")
                       ->expected(0, 1);

  auto* compensate = app.add_subcommand("compensate", "Compensate a measure");
  compensate->add_option("kind", in.kind, "cantor or atomic")->required()->check(CLI::IsMember({"cantor", "atomic"}));
  compensate->add_option("--in", in.in, "Measure JSON (file or inline)")->required();
  compensate->add_flag("--trace", in.trace, "Include the stage table (cantor)");

  auto* repair = app.add_subcommand("repair", "Repair a near-attaining functional or operator");
  repair->add_option("kind", in.kind, "functional or operator")->required()->check(CLI::IsMember({"functional", "operator"}));
  repair->add_option("--f", in.f, "Function JSON")->required();
  repair->add_option("--mu", in.mu, "Measure JSON")->required();
  repair->add_option("--T", in.T, "Operator JSON (operator repair)");
  repair->add_option("--eps", in.eps, "epsilon in (0, 1)")->required();
  repair->add_option("--delta", in.delta, "Rounding delta in (eps, 1) (functional repair)");

  auto* transfer = app.add_subcommand("transfer", "Transfer a compensation through a quotient");
  transfer->add_option("--phi", in.phi, "Quotient JSON")->required();
  transfer->add_option("--in", in.in, "Measure on the target points")->required();
  transfer->add_option("--xi", in.xi, "Source procedure")->check(CLI::IsMember({"single", "cantor"}));

  auto* closeness = app.add_subcommand("closeness", "Evaluate closeness functions on triples");
  closeness->add_option("--mode", in.mode, "metric or derived")->check(CLI::IsMember({"metric", "derived"}));
  closeness->add_option("--space", in.space, "Space JSON")->required();
  closeness->add_option("--triples", in.triples, "Triples JSON")->required();

  auto* agamma = app.add_subcommand("agamma", "Fields on A(Gamma)");
  auto* agamma_comp = agamma->add_subcommand("compensate", "Compensate a finite field");
  agamma_comp->add_option("--in", in.in, "Field JSON")->required();
  agamma->require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run a property suite");
  std::string suite_help = "all";
  for (const auto& s : suite_names()) suite_help += ", " + s;
  verify->add_option("suite", in.suite, suite_help)->required();
  std::size_t case_index = 0;
  auto* case_opt = verify->add_option("--case", case_index, "Replay a single case");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }
  g.json_requested = json_opt->count() > 0;
  if (case_opt->count() > 0) in.only_case = case_index;

  try {
    set_float_tolerance(g.tol);
    const bool fp = g.floating;
    if (*compensate) return fp ? cmd_compensate<double>(g, in, out) : cmd_compensate<Rational>(g, in, out);
    if (*repair) {
      if (in.kind == "operator" && in.T.empty()) throw CLI::RequiredError("--T");
      return fp ? cmd_repair<double>(g, in, out) : cmd_repair<Rational>(g, in, out);
    }
    if (*transfer) return fp ? cmd_transfer<double>(g, in, out) : cmd_transfer<Rational>(g, in, out);
    if (*closeness) return fp ? cmd_closeness<double>(g, in, out) : cmd_closeness<Rational>(g, in, out);
    if (*agamma_comp) return fp ? cmd_agamma<double>(g, in, out) : cmd_agamma<Rational>(g, in, out);
    if (*verify) {
      if (in.suite != "all") {
        const auto& names = suite_names();
        if (std::find(names.begin(), names.end(), in.suite) == names.end()) {
          throw PreconditionError("unknown suite '" + in.suite + "'");
        }
      }
      return cmd_verify(g, in, out);
    }
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << " is required\n";
    return kExitParse;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace mcomp
