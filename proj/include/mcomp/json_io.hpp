#pragma once

// JSON schemas for every typed value. Weights are written as exact strings
// ("-3/10"); on input strings, integers and decimals are all accepted.
// Object key order is preserved so point order survives a round trip.

#include <string>
#include <vector>

#include <json.hpp>

#include "mcomp/agamma.hpp"
#include "mcomp/bpb_operator.hpp"
#include "mcomp/cantor.hpp"
#include "mcomp/closeness.hpp"
#include "mcomp/quotient.hpp"

namespace mcomp::io {

using Json = nlohmann::ordered_json;

/// Inline JSON when the text starts with '{' or '[', a file path otherwise.
/// Throws ParseError.
Json load_json(const std::string& path_or_inline);

template <class S> S parse_weight(const Json& j, const std::string& where);
template <class S> Json weight_json(const S& x);

/// Accepts "atomic" and "dyadic" documents.
template <class S> AtomicMeasure<S> parse_atomic(const Json& j);
/// Accepts "dyadic" documents and atomic ones labelled by binary words.
template <class S> DyadicMeasure<S> parse_dyadic(const Json& j);
template <class S> GridFunction<S> parse_function(const Json& j);
template <class S> OperatorTable<S> parse_operator(const Json& j);
template <class S> QuotientSpec<S> parse_quotient(const Json& j);
template <class S> FiniteField<S> parse_field(const Json& j);
template <class S> MetricSpaceSample<S> parse_metric(const Json& j);
std::vector<Triple> parse_triples(const Json& j, const PointSet& points);

template <class S> Json to_json(const AtomicMeasure<S>& mu);
template <class S> Json to_json(const DyadicMeasure<S>& mu);
template <class S> Json to_json(const GridFunction<S>& f);
template <class S> Json to_json(const OperatorTable<S>& T);
template <class S> Json to_json(const QuotientSpec<S>& q);
template <class S> Json to_json(const FiniteField<S>& F);
template <class S> Json to_json(const MetricSpaceSample<S>& m);
template <class S> Json to_json(const CompensationTrace<S>& trace);
template <class S> Json to_json(const FunctionalRepair<S>& r, const S& eps);
template <class S> Json to_json(const OperatorRepair<S>& r, const S& eps);
template <class S> Json to_json(const FieldCompensation<S>& xi);
template <class S> Json sparse_json(const SparseMeasure<S>& mu);
Json to_json(const FieldSets& sets);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace mcomp::io
