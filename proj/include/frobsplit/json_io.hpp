#pragma once

// JSON encodings of field elements, points, fibers, hypertoric data and
// certificates.  Field elements are written as {"p", "k", "coeffs"}; on input
// an integer, a bare coefficient list, or that object are all accepted.

#include "json.hpp"

#include "frobsplit/cover.hpp"
#include "frobsplit/equivariant.hpp"
#include "frobsplit/fq.hpp"
#include "frobsplit/hypertoric.hpp"
#include "frobsplit/weyl.hpp"

namespace frobsplit::io {

using nlohmann::json;

json element_to_json(const fq::Field& field, fq::Raw a);
json element_to_json(const fq::FieldElement& x);
/// Reads an element of `field`.  An object naming a subfield is embedded.
fq::Raw element_from_json(const json& j, const fq::FieldPtr& field);
json field_to_json(const fq::Field& field);
json elements_to_json(const fq::Field& field, const std::vector<fq::Raw>& v);
std::vector<fq::Raw> elements_from_json(const json& j, const fq::FieldPtr& field);

json to_json(const weyl::PointTriple& pt);
/// Requires "p", "k", "b", "omega_p", "c"; "n" optional but checked when present.
weyl::PointTriple point_from_json(const json& j);

json to_json(const weyl::AzumayaCertificate& cert);
json to_json(const weyl::EulerBlockReport& report);

/// {"base": {...}, "field": {p, k, modulus}, "points": [[element, ...], ...]}
json to_json(const cover::EtaleFiber& fiber);
json to_json(const cover::CartesianReport& report, const fq::Field& field);

/// {"n", "B", "alpha", "p", "field_k", "lambda", "lambda_lift"}; on input
/// "lambda_lift" is optional and "field_k" defaults to 1.
json to_json(const hypertoric::HypertoricData& data);
hypertoric::HypertoricData data_from_json(const json& j);

/// Coordinate indices in subsets are written 1-based.
json subset_to_json(const hypertoric::Subset& s);
json to_json(const hypertoric::PhasePoint& pt);
json to_json(const hypertoric::Arrangement& a);
json to_json(const hypertoric::ArrangementClass& c);
json to_json(const hypertoric::Circuit& c, const fq::Field& field);
json to_json(const hypertoric::FreenessReport& r, const fq::Field& field);
json to_json(const hypertoric::PolytopeReport& r);

json to_json(const equivariant::InvariantDims& d);
/// {data, point, lambda, dims: [d1, d2, d3], rank, pass, closed_orbit_mode, ...}
json to_json(const equivariant::HypertoricAzumayaCertificate& cert);

}  // namespace frobsplit::io
