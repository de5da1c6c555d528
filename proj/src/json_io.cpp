#include "frobsplit/json_io.hpp"

#include <stdexcept>

namespace frobsplit::io {

json element_to_json(const fq::Field& field, fq::Raw a) {
  return json{{"p", field.characteristic()}, {"k", field.degree()}, {"coeffs", field.coeffs(a)}};
}

json element_to_json(const fq::FieldElement& x) { return element_to_json(*x.field(), x.raw()); }

fq::Raw element_from_json(const json& j, const fq::FieldPtr& field) {
  if (j.is_number_integer()) return field->from_int(j.get<std::int64_t>());
  if (j.is_array()) return field->from_coeffs(j.get<std::vector<std::int64_t>>());
  if (j.is_object()) {
    const auto p = j.at("p").get<std::int64_t>();
    const auto k = j.at("k").get<int>();
    if (p != field->characteristic()) throw std::invalid_argument("element characteristic does not match the field");
    const auto src = fq::make_field(p, k);
    const fq::Raw raw = src->from_coeffs(j.at("coeffs").get<std::vector<std::int64_t>>());
    if (k == field->degree()) return raw;
    return fq::Embedding(src, field).map_raw(raw);
  }
  throw std::invalid_argument("field element must be an integer, a coefficient list, or {p, k, coeffs}");
}

json field_to_json(const fq::Field& field) {
  return json{{"p", field.characteristic()}, {"k", field.degree()}, {"modulus", field.modulus()}};
}

json elements_to_json(const fq::Field& field, const std::vector<fq::Raw>& v) {
  json out = json::array();
  for (auto a : v) out.push_back(element_to_json(field, a));
  return out;
}

std::vector<fq::Raw> elements_from_json(const json& j, const fq::FieldPtr& field) {
  if (!j.is_array()) throw std::invalid_argument("expected a list of field elements");
  std::vector<fq::Raw> out;
  for (const auto& e : j) out.push_back(element_from_json(e, field));
  return out;
}

json to_json(const weyl::PointTriple& pt) {
  const auto& f = *pt.field;
  return json{{"p", f.characteristic()},
              {"k", f.degree()},
              {"n", pt.n},
              {"b", elements_to_json(f, pt.b)},
              {"omega_p", elements_to_json(f, pt.omega_p)},
              {"c", elements_to_json(f, pt.c)}};
}

weyl::PointTriple point_from_json(const json& j) {
  const auto field = fq::make_field(j.at("p").get<std::int64_t>(), j.value("k", 1));
  auto b = elements_from_json(j.at("b"), field);
  auto w = elements_from_json(j.at("omega_p"), field);
  auto c = elements_from_json(j.at("c"), field);
  if (j.contains("n") && j.at("n").get<std::size_t>() != b.size())
    throw std::invalid_argument("point: n does not match the coordinate count");
  return weyl::PointTriple::make(field, std::move(b), std::move(w), std::move(c));
}

json to_json(const weyl::AzumayaCertificate& cert) {
  return json{{"point", to_json(cert.point)},
              {"ranks", {{"action", cert.action_rank}, {"bmr", cert.bmr_rank}, {"expected", cert.expected_rank}}},
              {"dims",
               {{"delta", cert.delta_dim}, {"d_eta", cert.d_eta_dim}, {"joint_kernel", cert.joint_kernel_dim}}},
              {"pass", cert.pass}};
}

json to_json(const weyl::EulerBlockReport& r) {
  return json{{"k", r.k + 1},
              {"tau", element_to_json(*r.block.field(), r.tau)},
              {"char_poly", r.char_poly.to_string("L")},
              {"expected_char_poly", r.expected_char_poly.to_string("L")},
              {"min_poly", r.min_poly.to_string("L")},
              {"expected_min_poly", r.expected_min_poly.to_string("L")},
              {"block_char_poly", r.block_char_poly.to_string("L")},
              {"pass", r.pass()}};
}

json to_json(const cover::EtaleFiber& fiber) {
  json pts = json::array();
  for (const auto& c : fiber.points) pts.push_back(elements_to_json(*fiber.field, c));
  return json{{"base",
               {{"field", field_to_json(*fiber.base)},
                {"b", elements_to_json(*fiber.base, fiber.b)},
                {"omega_p", elements_to_json(*fiber.base, fiber.omega_p)}}},
              {"field", field_to_json(*fiber.field)},
              {"points", pts}};
}

json to_json(const cover::CartesianReport& r, const fq::Field& field) {
  json missing = json::array(), extra = json::array();
  for (const auto& c : r.missing) missing.push_back(elements_to_json(field, c));
  for (const auto& c : r.extra) extra.push_back(elements_to_json(field, c));
  return json{{"pass", r.pass},
              {"fiber_size", r.fiber_size},
              {"preimage_size", r.preimage_size},
              {"missing", missing},
              {"extra", extra}};
}

json to_json(const hypertoric::HypertoricData& d) {
  const auto& F = *d.field;
  return json{{"n", d.torus.n},
              {"B", d.torus.B.to_int64()},
              {"alpha", d.alpha},
              {"p", F.characteristic()},
              {"field_k", F.degree()},
              {"lambda", elements_to_json(F, d.lambda)},
              {"lambda_lift", elements_to_json(F, d.lambda_lift)}};
}

hypertoric::HypertoricData data_from_json(const json& j) {
  const auto n = j.at("n").get<int>();
  const auto rows = j.at("B").get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& r : rows)
    if (r.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("B: every row needs n entries");
  auto torus = hypertoric::build_torus_data(linalg::IntMatrix::from_rows(rows, static_cast<std::size_t>(n)), n);
  const auto field = fq::make_field(j.at("p").get<std::int64_t>(), j.value("field_k", 1));
  auto alpha = j.at("alpha").get<std::vector<std::int64_t>>();
  auto lambda = elements_from_json(j.at("lambda"), field);
  std::optional<std::vector<fq::Raw>> lift;
  if (j.contains("lambda_lift") && !j.at("lambda_lift").is_null()) lift = elements_from_json(j.at("lambda_lift"), field);
  return hypertoric::make_data(std::move(torus), std::move(alpha), field, std::move(lambda), std::move(lift));
}

json subset_to_json(const hypertoric::Subset& s) {
  json out = json::array();
  for (auto i : s) out.push_back(i + 1);
  return out;
}

namespace {

json subsets_to_json(const std::vector<hypertoric::Subset>& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(subset_to_json(s));
  return out;
}

}  // namespace

json to_json(const hypertoric::PhasePoint& pt) {
  return json{{"field", field_to_json(*pt.field)},
              {"z", elements_to_json(*pt.field, pt.z)},
              {"w", elements_to_json(*pt.field, pt.w)}};
}

json to_json(const hypertoric::Arrangement& a) {
  json hs = json::array();
  for (const auto& h : a.hyperplanes)
    hs.push_back({{"normal", elements_to_json(*a.field, h.normal)}, {"offset", element_to_json(*a.field, h.offset)}});
  return json{{"h", a.h}, {"hyperplanes", hs}};
}

json to_json(const hypertoric::ArrangementClass& c) {
  json out{{"simple", c.simple}, {"smooth", c.smooth}};
  out["meeting"] = c.meeting ? subset_to_json(*c.meeting) : json(nullptr);
  out["non_basis"] = c.non_basis ? subset_to_json(*c.non_basis) : json(nullptr);
  return out;
}

json to_json(const hypertoric::Circuit& c, const fq::Field& field) {
  json wall = json::array();
  for (const auto& v : c.wall) wall.push_back(elements_to_json(field, v));
  return json{{"I", subset_to_json(c.I)}, {"normal", c.normal}, {"sign_from_alpha", c.sign_from_alpha}, {"wall", wall}};
}

json to_json(const hypertoric::FreenessReport& r, const fq::Field& field) {
  json circuits = json::array(), witnesses = json::array();
  for (const auto& c : r.circuits) circuits.push_back(to_json(c, field));
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  return json{{"finite_stabilizers", r.finite_stabilizers},
              {"free", r.free},
              {"circuits", circuits},
              {"violating_walls", subsets_to_json(r.violating_walls)},
              {"q_alpha_lambda", subsets_to_json(r.q_alpha_lambda)},
              {"non_basis", subsets_to_json(r.non_basis)},
              {"witnesses", witnesses},
              {"interference", subsets_to_json(r.interference)}};
}

json to_json(const hypertoric::PolytopeReport& r) {
  json P = json::array();
  for (const auto& q : r.P) P.push_back({{"normal", q.normal}, {"bound", q.bound}});
  return json{{"circuits", subsets_to_json(r.circuits)}, {"N_I", r.N_I}, {"N", r.N}, {"P", P}, {"exceeds_p", r.exceeds_p}};
}

json to_json(const equivariant::InvariantDims& d) {
  return json{{"dims", {d.zeta, d.nu, d.eta}},
              {"expected_dims", {d.expected_zeta, d.expected_nu, d.expected_eta}},
              {"eta_total", d.eta_total},
              {"pass", d.pass()}};
}

json to_json(const equivariant::HypertoricAzumayaCertificate& c) {
  return json{{"data", to_json(c.data)},
              {"point", to_json(c.point)},
              {"lambda", elements_to_json(*c.point.field, c.lambda)},
              {"dims", {c.dims.zeta, c.dims.nu, c.dims.eta}},
              {"expected_dims", {c.dims.expected_zeta, c.dims.expected_nu, c.dims.expected_eta}},
              {"rank", c.rank},
              {"expected_rank", c.expected_rank},
              {"generators_act_trivially", c.generators_act_trivially},
              {"closed_orbit_mode", equivariant::to_string(c.mode)},
              {"pass", c.pass}};
}

}  // namespace frobsplit::io
