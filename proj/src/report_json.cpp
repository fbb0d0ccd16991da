#include "finsheaf/report_json.hpp"

#include <sstream>

namespace finsheaf {

namespace {

json integer_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

json labels(const FinPoset& X, const std::vector<int>& s) {
  json a = json::array();
  for (int x : s) a.push_back(X.label(x));
  return a;
}

json phi_json(const FinPoset& X, const CodimFunction& phi) {
  json o = json::object();
  for (int x = 0; x < X.size(); ++x) o[X.label(x)] = phi[x];
  return o;
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_string()) {
    out << prefix << ": " << j.get<std::string>() << "\n";
  } else {
    out << prefix << ": " << j.dump() << "\n";
  }
}

}  // namespace

json to_json(const FgGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion()) t.push_back(integer_json(d));
  return {{"rank", g.rank()}, {"torsion", t}};
}

json to_json(const GradedGroups& g) {
  json o = json::object();
  for (const auto& [n, grp] : g.items()) o[std::to_string(n)] = to_json(grp);
  return o;
}

json stalks_json(const FinPoset& X, const std::vector<GradedGroups>& stalks) {
  json o = json::object();
  for (int x = 0; x < X.size(); ++x) o[X.label(x)] = to_json(stalks[x]);
  return o;
}

json stalks_json(const PresentedSheaf& F) {
  json o = json::object();
  for (int x = 0; x < F.base->size(); ++x) o[F.base->label(x)] = to_json(F.stalk(x));
  return o;
}

json to_json(const FinPoset& X, const CmWitness& w) {
  json o = {{"degree", w.degree}, {"group", to_json(w.group)}, {"what", w.what}};
  o["point"] = w.point >= 0 ? json(X.label(w.point)) : json(nullptr);
  return o;
}

json to_json(const FinPoset& X, const StructureReport& r) {
  return {{"size", X.size()},
          {"dim", r.dim},
          {"pure", r.is_pure},
          {"catenary", r.is_catenary},
          {"local", r.is_local},
          {"irreducible", r.is_irreducible},
          {"connected", r.is_connected},
          {"closed_points", labels(X, r.closed_points)},
          {"generic_points", labels(X, r.generic_points)}};
}

json to_json(const FinPoset& X, const DualizabilityReport& r) {
  json o = {{"catenary", r.is_catenary},
            {"all_spheres", r.all_spheres},
            {"locally_dualizable", r.is_locally_dualizable}};
  if (!r.is_locally_dualizable) o["reason"] = r.reason();
  json iv = json::array();
  for (const auto& v : r.intervals)
    iv.push_back({{"x", X.label(v.x)},
                  {"y", X.label(v.y)},
                  {"dim", v.dim},
                  {"sphere", v.sphere},
                  {"homology", to_json(v.homology)}});
  o["intervals"] = iv;
  if (r.witness)
    o["witness"] = {{"x", X.label(r.witness->x)},
                    {"y", X.label(r.witness->y)},
                    {"homology", to_json(r.witness->homology)}};
  return o;
}

json to_json(const FinPoset& X, const CanonicalDescriptor& c) {
  const char* kind = "none";
  switch (c.kind) {
    case CanonicalDescriptor::Kind::LocalModel: kind = "local-model"; break;
    case CanonicalDescriptor::Kind::GenericSkyscraper: kind = "generic-skyscraper"; break;
    case CanonicalDescriptor::Kind::LocallyDualizableOnly: kind = "locally-dualizable-only"; break;
    case CanonicalDescriptor::Kind::None: break;
  }
  json o = {{"kind", kind}, {"locally_dualizable", c.report.is_locally_dualizable}};
  if (c.phi) o["phi"] = phi_json(X, *c.phi);
  if (c.local_phi) o["local_phi"] = phi_json(X, *c.local_phi);
  if (c.omega) o["stalk_cohomology"] = stalks_json(X, stalk_cohomology(*c.omega));
  if (!c.report.is_locally_dualizable) o["reason"] = c.report.reason();
  return o;
}

json to_json(const FinPoset& X, const CmSpaceVerdict& v) {
  json o = {{"cm", v.is_cm},
            {"local", v.is_local},
            {"locally_dualizable", v.gate.is_locally_dualizable},
            {"homologically_cm", v.homologically_cm}};
  if (!v.is_cm) o["reason"] = v.reason();
  if (v.witness) o["witness"] = to_json(X, *v.witness);
  return o;
}

json to_json(const FinPoset& X, const CmVerdict& v) {
  json o = {{"cm", v.is_cm}, {"path", to_string(v.path)}};
  if (v.is_cm) o["shift"] = v.shift;
  if (v.dual) o["dual_stalks"] = stalks_json(*v.dual);
  if (v.witness) o["witness"] = to_json(X, *v.witness);
  if (!v.reason.empty()) o["reason"] = v.reason;
  return o;
}

json to_json(const FinPoset& X, const CmClosedVerdict& v) {
  json o = {{"cm", v.is_cm}, {"sheaf_verdict", v.sheaf_verdict}, {"space_verdict", v.space_verdict}, {"codim", v.codim}};
  if (!v.ext_stalks.empty()) o["ext_stalks"] = stalks_json(X, v.ext_stalks);
  if (v.ext_concentrated) o["ext_concentrated"] = *v.ext_concentrated;
  if (v.omega_matches) o["omega_matches"] = *v.omega_matches;
  return o;
}

json to_json(const OmegaReport& r) {
  json seq = json::array();
  for (const auto& s : r.sequences)
    seq.push_back({{"degree", s.degree},
                   {"ext1", to_json(s.left)},
                   {"ext", to_json(s.middle)},
                   {"hom", to_json(s.right)},
                   {"ok", s.ok}});
  json o = {{"dim", r.dim},
            {"sequences", seq},
            {"sequences_ok", r.sequences_ok},
            {"punctured_stalks_ok", r.punctured_stalks_ok},
            {"punctured_duality_ok", r.punctured_duality_ok}};
  if (r.gysin)
    o["gysin"] = {{"codim", r.gysin->codim},
                  {"local_cohomology", to_json(r.gysin->lhs)},
                  {"shifted_cohomology", to_json(r.gysin->rhs)},
                  {"ok", r.gysin->ok},
                  {"concentrated", r.gysin->concentrated}};
  return o;
}

json to_json(const FinPoset& X, const BaclawskiReport& r) {
  json o = {{"a", r.a},
            {"b", r.b},
            {"c", r.c},
            {"d", r.d},
            {"cm_baclawski", r.is_cm_baclawski},
            {"acm", r.is_acm},
            {"cm", r.is_cm_ours}};
  if (r.failed) o["failed"] = std::string(1, r.failed);
  if (r.witness) o["witness"] = to_json(X, *r.witness);
  return o;
}

json to_json(const SimplicialComplex& K, const ReisnerVerdict& v) {
  json o = {{"holds", v.holds}};
  if (v.face) o["witness"] = {{"face", K.face_label(*v.face)}, {"degree", v.degree}, {"group", to_json(v.group)}};
  return o;
}

json to_json(const ProductCheck& c) {
  return {{"x", c.x}, {"y", c.y}, {"product", c.product}, {"holds", c.holds}};
}

json to_json(const BarycentricCheck& c) {
  return {{"x", c.x}, {"x_op", c.x_op}, {"barycentric", c.beta}, {"holds", c.holds}};
}

std::string json_to_text(const json& j) {
  std::ostringstream out;
  flatten(j, "", out);
  return out.str();
}

}  // namespace finsheaf
