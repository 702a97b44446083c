#include "mcomp/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mcomp::io {

Json load_json(const std::string& path_or_inline) {
  std::size_t first = path_or_inline.find_first_not_of(" \t\r\n");
  std::string text;
  if (first != std::string::npos && (path_or_inline[first] == '{' || path_or_inline[first] == '[')) {
    text = path_or_inline;
  } else {
    std::ifstream in(path_or_inline);
    if (!in) throw ParseError("cannot open '" + path_or_inline + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const Json& a = field(j, key, where);
  if (!a.is_array()) throw ParseError(where + ": \"" + key + "\" must be an array");
  return a;
}

std::string label_of(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError(where + ": point labels must be strings");
}

PointSet parse_points(const Json& j, const std::string& where) {
  PointSet points;
  for (const auto& p : array_field(j, "points", where)) points.push_back(label_of(p, where));
  check_distinct_labels(points);
  return points;
}

template <class S>
std::vector<S> parse_weights(const Json& a, const std::string& where) {
  if (!a.is_array()) throw ParseError(where + ": expected an array of weights");
  std::vector<S> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse_weight<S>(a[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class S>
Json weights_json(const std::vector<S>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(weight_json(x));
  return a;
}

std::string type_of(const Json& j, const std::string& fallback) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto it = j.find("type");
  if (it == j.end()) return fallback;
  if (!it->is_string()) throw ParseError("\"type\" must be a string");
  return it->get<std::string>();
}

// Runs `body`, reporting constructor precondition failures as parse errors.
template <class F>
auto as_parse(const std::string& what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PreconditionError& e) {
    throw ParseError(what + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

template <class S>
SparseMeasure<S> parse_sparse(const Json& j, const std::string& where, long& max_label) {
  const Json& atoms = field(j, "atoms", where);
  if (!atoms.is_object()) throw ParseError(where + ": \"atoms\" must be an object");
  SparseMeasure<S> mu;
  for (const auto& [label, w] : atoms.items()) {
    const long p = parse_agamma_label(label);
    if (!mu.emplace(p, parse_weight<S>(w, where + "." + label)).second) {
      throw ParseError(where + ": atom " + label + " given twice");
    }
    max_label = std::max(max_label, p);
  }
  return mu;
}

}  // namespace

template <class S>
S parse_weight(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
    if (j.is_number_integer()) return parse_scalar<S>(j.dump());
    if (j.is_number_float()) return parse_scalar<S>(j.dump());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a number or a fraction string");
}

template <class S>
Json weight_json(const S& x) {
  return format_scalar(x);
}

template <class S>
AtomicMeasure<S> parse_atomic(const Json& j) {
  return as_parse("measure", [&]() -> AtomicMeasure<S> {
    const std::string type = type_of(j, "atomic");
    if (type == "dyadic") return to_atomic(parse_dyadic<S>(j));
    if (type != "atomic") throw ParseError("measure: unknown type \"" + type + "\"");
    PointSet points = parse_points(j, "measure");
    std::vector<S> w = parse_weights<S>(array_field(j, "weights", "measure"), "measure.weights");
    if (w.size() != points.size()) throw ParseError("measure: points and weights differ in length");
    return AtomicMeasure<S>(std::move(points), std::move(w));
  });
}

template <class S>
DyadicMeasure<S> parse_dyadic(const Json& j) {
  return as_parse("dyadic measure", [&]() -> DyadicMeasure<S> {
    const std::string type = type_of(j, "dyadic");
    if (type == "atomic") return from_atomic(parse_atomic<S>(j));
    if (type != "dyadic") throw ParseError("dyadic measure: unknown type \"" + type + "\"");
    const Json& d = field(j, "depth", "dyadic measure");
    if (!d.is_number_unsigned()) throw ParseError("dyadic measure: depth must be a non-negative integer");
    const auto depth = d.get<unsigned long long>();
    if (depth > kMaxDyadicDepth) throw ParseError("dyadic measure: depth above " + std::to_string(kMaxDyadicDepth));
    std::vector<S> leaves = parse_weights<S>(array_field(j, "leaves", "dyadic measure"), "leaves");
    if (leaves.size() != (std::size_t{1} << depth)) {
      throw ParseError("dyadic measure: depth " + std::to_string(depth) + " needs " +
                       std::to_string(std::size_t{1} << depth) + " leaves, got " + std::to_string(leaves.size()));
    }
    return DyadicMeasure<S>(static_cast<unsigned>(depth), std::move(leaves));
  });
}

template <class S>
GridFunction<S> parse_function(const Json& j) {
  return as_parse("function", [&]() {
    const std::string type = type_of(j, "function");
    if (type != "function") throw ParseError("function: unknown type \"" + type + "\"");
    PointSet points = parse_points(j, "function");
    std::vector<S> v = parse_weights<S>(array_field(j, "values", "function"), "function.values");
    if (v.size() != points.size()) throw ParseError("function: points and values differ in length");
    return GridFunction<S>(std::move(points), std::move(v));
  });
}

template <class S>
OperatorTable<S> parse_operator(const Json& j) {
  return as_parse("operator", [&]() {
    const std::string type = type_of(j, "operator");
    if (type != "operator") throw ParseError("operator: unknown type \"" + type + "\"");
    PointSet points = parse_points(j, "operator");
    const Json& rows_json = array_field(j, "rows", "operator");
    if (rows_json.size() != points.size()) throw ParseError("operator: need one row per point");
    std::vector<AtomicMeasure<S>> rows;
    for (std::size_t t = 0; t < rows_json.size(); ++t) {
      std::vector<S> w = parse_weights<S>(rows_json[t], "operator.rows[" + std::to_string(t) + "]");
      if (w.size() != points.size()) throw ParseError("operator: row " + std::to_string(t) + " has the wrong length");
      rows.emplace_back(points, std::move(w));
    }
    return OperatorTable<S>(std::move(points), std::move(rows));
  });
}

template <class S>
QuotientSpec<S> parse_quotient(const Json& j) {
  return as_parse("quotient", [&]() {
    const Json& phi = field(j, "phi", "quotient");
    const Json& weights = field(j, "weights", "quotient");
    if (!phi.is_object() || !weights.is_object()) throw ParseError("quotient: phi and weights must be objects");
    QuotientSpec<S> q;
    std::vector<std::string> images;
    for (const auto& [src, img] : phi.items()) {
      q.source_points.push_back(src);
      images.push_back(label_of(img, "quotient.phi"));
    }
    check_distinct_labels(q.source_points);

    if (auto it = j.find("targets"); it != j.end()) {
      for (const auto& t : *it) q.target_points.push_back(label_of(t, "quotient.targets"));
    } else {
      std::set<std::string> seen;
      for (const auto& [tgt, w] : weights.items()) {
        if (seen.insert(tgt).second) q.target_points.push_back(tgt);
      }
      for (const auto& img : images) {
        if (seen.insert(img).second) q.target_points.push_back(img);
      }
    }
    check_distinct_labels(q.target_points);
    auto target_index = [&](const std::string& label) {
      for (std::size_t l = 0; l < q.target_points.size(); ++l) {
        if (q.target_points[l] == label) return l;
      }
      throw ParseError("quotient: unknown target point '" + label + "'");
    };
    auto source_index = [&](const std::string& label) {
      for (std::size_t t = 0; t < q.source_points.size(); ++t) {
        if (q.source_points[t] == label) return t;
      }
      throw ParseError("quotient: unknown source point '" + label + "'");
    };
    for (const auto& img : images) q.phi.push_back(target_index(img));
    q.weights.resize(q.target_points.size());
    for (const auto& [tgt, fiber] : weights.items()) {
      if (!fiber.is_object()) throw ParseError("quotient: weights of '" + tgt + "' must be an object");
      auto& w = q.weights[target_index(tgt)];
      for (const auto& [src, x] : fiber.items()) {
        w[source_index(src)] = parse_weight<S>(x, "quotient.weights." + tgt + "." + src);
      }
    }
    return q;
  });
}

template <class S>
FiniteField<S> parse_field(const Json& j) {
  return as_parse("field", [&]() {
    FiniteField<S> F;
    long max_label = -1;
    F.f_infinity = parse_sparse<S>(field(j, "f_infinity", "field"), "f_infinity", max_label);
    if (auto it = j.find("exceptions"); it != j.end()) {
      if (!it->is_object()) throw ParseError("field: exceptions must be an object");
      for (const auto& [key, value] : it->items()) {
        const long t = parse_agamma_label(key);
        if (t == kInfinity) throw ParseError("field: the value at inf is f_infinity, not an exception");
        if (F.exceptions.count(t)) throw ParseError("field: exception " + key + " given twice");
        F.exceptions[t] = parse_sparse<S>(value, "exceptions." + key, max_label);
        max_label = std::max(max_label, t);
      }
    }
    if (auto it = j.find("window"); it != j.end()) {
      if (!it->is_number_integer() || it->get<long>() < 0) {
        throw ParseError("field: window must be a non-negative integer");
      }
      F.window = it->get<long>();
    } else {
      F.window = max_label + 1;
    }
    normalise_field(F);
    return F;
  });
}

template <class S>
MetricSpaceSample<S> parse_metric(const Json& j) {
  return as_parse("space", [&]() {
    PointSet points = parse_points(j, "space");
    if (auto it = j.find("coords"); it != j.end()) {
      return MetricSpaceSample<S>::on_line(std::move(points), parse_weights<S>(*it, "space.coords"));
    }
    const Json& rho_json = array_field(j, "rho", "space");
    std::vector<std::vector<S>> rho;
    for (std::size_t a = 0; a < rho_json.size(); ++a) rho.push_back(parse_weights<S>(rho_json[a], "space.rho"));
    return MetricSpaceSample<S>(std::move(points), std::move(rho));
  });
}

std::vector<Triple> parse_triples(const Json& j, const PointSet& points) {
  if (!j.is_array()) throw ParseError("triples: expected an array");
  std::vector<Triple> out;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw ParseError("triples: each entry must list three points");
    Triple tr{};
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string label = label_of(t[i], "triples");
      std::size_t k = 0;
      while (k < points.size() && points[k] != label) ++k;
      if (k == points.size()) throw ParseError("triples: unknown point '" + label + "'");
      tr[i] = k;
    }
    out.push_back(tr);
  }
  return out;
}

template <class S>
Json to_json(const AtomicMeasure<S>& mu) {
  return Json{{"type", "atomic"}, {"points", mu.points()}, {"weights", weights_json(mu.values())}};
}

template <class S>
Json to_json(const DyadicMeasure<S>& mu) {
  return Json{{"type", "dyadic"}, {"depth", mu.depth()}, {"leaves", weights_json(mu.leaves())}};
}

template <class S>
Json to_json(const GridFunction<S>& f) {
  return Json{{"type", "function"}, {"points", f.points()}, {"values", weights_json(f.values())}};
}

template <class S>
Json to_json(const OperatorTable<S>& T) {
  Json rows = Json::array();
  for (const auto& r : T.rows()) rows.push_back(weights_json(r.values()));
  return Json{{"type", "operator"}, {"points", T.points()}, {"rows", rows}};
}

template <class S>
Json to_json(const QuotientSpec<S>& q) {
  Json phi = Json::object();
  for (std::size_t t = 0; t < q.source_points.size(); ++t) phi[q.source_points[t]] = q.target_points.at(q.phi.at(t));
  Json weights = Json::object();
  for (std::size_t l = 0; l < q.target_points.size(); ++l) {
    Json fiber = Json::object();
    for (const auto& [t, w] : q.weights.at(l)) fiber[q.source_points.at(t)] = weight_json(w);
    weights[q.target_points[l]] = fiber;
  }
  return Json{{"phi", phi}, {"targets", q.target_points}, {"weights", weights}};
}

template <class S>
Json sparse_json(const SparseMeasure<S>& mu) {
  Json atoms = Json::object();
  // Γ atoms in increasing order, ∞ last.
  for (const auto& [p, w] : mu) {
    if (p != kInfinity) atoms[agamma_label(p)] = weight_json(w);
  }
  if (auto it = mu.find(kInfinity); it != mu.end()) atoms["inf"] = weight_json(it->second);
  return Json{{"atoms", atoms}};
}

template <class S>
Json to_json(const FiniteField<S>& F) {
  Json exceptions = Json::object();
  for (const auto& [t, mu] : F.exceptions) exceptions[std::to_string(t)] = sparse_json(mu);
  return Json{{"window", F.window}, {"f_infinity", sparse_json(F.f_infinity)}, {"exceptions", exceptions}};
}

template <class S>
Json to_json(const MetricSpaceSample<S>& m) {
  Json rho = Json::array();
  for (const auto& row : m.matrix()) rho.push_back(weights_json(row));
  return Json{{"points", m.points()}, {"rho", rho}};
}

template <class S>
Json to_json(const CompensationTrace<S>& trace) {
  Json stages = Json::array();
  for (const auto& s : trace.stages) stages.push_back(weights_json(s));
  Json sums = Json::array();
  for (const auto& level : trace.sibling_sums) {
    Json row = Json::array();
    for (const auto& [s0, s1] : level) row.push_back(Json::array({weight_json(s0), weight_json(s1)}));
    sums.push_back(row);
  }
  return Json{{"depth", trace.depth}, {"stages", stages}, {"sibling_sums", sums}};
}

template <class S>
Json to_json(const FunctionalRepair<S>& r, const S& eps) {
  return Json{{"f0", to_json(r.f0)},
              {"mu0", to_json(r.mu0)},
              {"certificates",
               {{"eps", weight_json(eps)},
                {"pairing", weight_json(r.pairing_value)},
                {"f0_norm", weight_json(r.f0_norm)},
                {"mu0_norm", weight_json(r.mu0_norm)},
                {"function_distance", weight_json(r.function_distance)},
                {"measure_distance", weight_json(r.measure_distance)},
                {"certified", r.certified(eps)}}}};
}

template <class S>
Json to_json(const OperatorRepair<S>& r, const S& eps) {
  return Json{{"T0", to_json(r.T0)},
              {"f0", to_json(r.f0)},
              {"mu0", to_json(r.mu0)},
              {"certificates",
               {{"eps", weight_json(eps)},
                {"radius", weight_json(r.radius)},
                {"pairing", weight_json(r.pairing_value)},
                {"operator_distance", weight_json(r.operator_distance)},
                {"function_distance", weight_json(r.function_distance)},
                {"measure_distance", weight_json(r.measure_distance)},
                {"f0_norm", weight_json(r.f0_norm)},
                {"mu0_norm", weight_json(r.mu0_norm)},
                {"max_blended_row_norm", weight_json(r.max_blended_row_norm)},
                {"certified", r.certified(eps)}}}};
}

Json to_json(const FieldSets& sets) {
  auto labels = [](const std::vector<long>& v) {
    Json a = Json::array();
    for (long t : v) a.push_back(agamma_label(t));
    return a;
  };
  Json bs = Json::object();
  for (const auto& [s, v] : sets.B_s) bs[agamma_label(s)] = labels(v);
  Json b = labels(sets.B);
  b.push_back("inf");
  return Json{{"A", labels(sets.A)},     {"gamma0", labels(sets.gamma0)},
              {"B_s", bs},               {"B", b},
              {"C", labels(sets.C_exceptions)}, {"branch4", labels(sets.branch4)},
              {"tail_in_C", sets.tail_in_C}};
}

template <class S>
Json to_json(const FieldCompensation<S>& xi) {
  Json ex = Json::object();
  for (const auto& [t, mu] : xi.xi_exceptions) ex[std::to_string(t)] = sparse_json(mu);
  Json out{{"xi_infinity", sparse_json(xi.xi_infinity)}, {"xi_exceptions", ex}, {"xi_tail", sparse_json(xi.xi_tail)}};
  if (xi.sets) out["sets"] = to_json(*xi.sets);
  return out;
}

#define MCOMP_INSTANTIATE_IO(S)                                                   \
  template S parse_weight<S>(const Json&, const std::string&);                   \
  template Json weight_json(const S&);                                           \
  template AtomicMeasure<S> parse_atomic<S>(const Json&);                        \
  template DyadicMeasure<S> parse_dyadic<S>(const Json&);                        \
  template GridFunction<S> parse_function<S>(const Json&);                       \
  template OperatorTable<S> parse_operator<S>(const Json&);                      \
  template QuotientSpec<S> parse_quotient<S>(const Json&);                       \
  template FiniteField<S> parse_field<S>(const Json&);                           \
  template MetricSpaceSample<S> parse_metric<S>(const Json&);                    \
  template Json to_json(const AtomicMeasure<S>&);                                \
  template Json to_json(const DyadicMeasure<S>&);                                \
  template Json to_json(const GridFunction<S>&);                                 \
  template Json to_json(const OperatorTable<S>&);                                \
  template Json to_json(const QuotientSpec<S>&);                                 \
  template Json to_json(const FiniteField<S>&);                                  \
  template Json to_json(const MetricSpaceSample<S>&);                            \
  template Json to_json(const CompensationTrace<S>&);                            \
  template Json to_json(const FunctionalRepair<S>&, const S&);                   \
  template Json to_json(const OperatorRepair<S>&, const S&);                     \
  template Json to_json(const FieldCompensation<S>&);                            \
  template Json sparse_json(const SparseMeasure<S>&);

MCOMP_INSTANTIATE_IO(Rational)
MCOMP_INSTANTIATE_IO(double)

}  // namespace mcomp::io
