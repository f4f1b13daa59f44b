#include "cmv/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cmv/errors.hpp"

namespace cmv {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void write(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(2 * (indent + 1), ' ');
  const std::string close(2 * indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(key).dump() << ": ";
        write(os, value, indent + 1);
      }
      os << '\n' << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && is_scalar(e);
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent + 1);
      }
      os << '\n' << close << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

constexpr const char* kAxes = "xyz";

}  // namespace

std::string dump(const Json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << '\n';
  return os.str();
}

Json to_json(const Point& p) { return Json::array({p.x, p.y, p.z}); }
Json to_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json to_json(const Mat3& m) {
  Json out = Json::array();
  for (int r = 0; r < 3; ++r) out.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return out;
}

Json to_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Json to_json(const CompatReport& r) {
  Json j;
  j["is_compatible"] = r.is_compatible;
  j["failed_predicates"] = r.failed_predicates;
  j["k_fit"] = r.k_fit;
  j["k_min"] = r.k_min;
  j["k_max"] = r.k_max;
  j["k_constant"] = r.k_constant;
  Json pts = Json::array();
  for (const CompatPoint& p : r.points) {
    Json e;
    e["point"] = to_json(p.point);
    e["reeb"] = to_json(p.reeb);
    e["alpha_sharp"] = to_json(p.alpha_sharp);
    e["alpha_sharp_norm"] = p.alpha_sharp_norm;
    e["unit_normal_defect"] = p.unit_normal_defect;
    e["unit_normal"] = p.unit_normal;
    e["e2"] = to_json(p.e2);
    e["e3"] = to_json(p.e3);
    e["k"] = p.k;
    e["J"] = to_json(Mat2(p.J));
    e["j_squared_defect"] = p.j_squared_defect;
    e["calibration_defect"] = p.calibration_defect;
    e["geodesic_defect"] = p.geodesic_defect;
    e["mean_curvature"] = p.mean_curvature;
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const LemmaResidualReport& r) {
  const LemmaScalars& s = r.scalars;
  Json j;
  j["point"] = to_json(r.point);
  j["pass"] = r.pass;
  j["max_residual"] = r.max_residual;
  Json sc;
  sc["lambda"] = s.lambda;
  sc["k"] = s.k;
  sc["X_lambda"] = s.X_lambda;
  sc["Y_lambda"] = s.Y_lambda;
  sc["N_lambda"] = s.N_lambda;
  sc["cXXY"] = s.cXXY;
  sc["cYYX"] = s.cYYX;
  sc["cNXY"] = s.cNXY;
  sc["webster_K"] = s.webster_K;
  sc["X_of_cYYX"] = s.X_of_cYYX;
  sc["Y_of_cXXY"] = s.Y_of_cXXY;
  sc["bracket_XY_N"] = s.bracket_XY_N;
  sc["bracket_NY_X"] = s.bracket_NY_X;
  j["scalars"] = std::move(sc);
  j["frame"] = {{"X", to_json(s.frame.X)}, {"Y", to_json(s.frame.Y)}, {"N", to_json(s.frame.N)}};
  j["ordering"] = std::string(to_string(r.lemma.ordering));
  j["direct"] = to_json(r.direct.m);
  j["lemma"] = to_json(r.lemma.m);
  j["residual"] = to_json(r.residual);
  j["webster_K_formula"] = r.webster_K_formula;
  j["webster_K_from_direct"] = r.webster_K_from_direct;
  j["webster_K_gap"] = r.webster_K_gap;
  j["n_lambda_significant"] = r.n_lambda_significant;
  return j;
}

namespace {

constexpr const char* kBivectors[3] = {"e1^e2", "e1^e3", "e2^e3"};

Json mismatch_json(const MismatchEntry& m) {
  return {{"row", m.row + 1},
          {"col", m.col + 1},
          {"max_residual", m.max_residual},
          {"worst_point", to_json(m.worst_point)}};
}

}  // namespace

Json to_json(const VerdictReport& r) {
  Json j;
  j["params"] = {{"A", r.params.A}, {"B", r.params.B}, {"AB", r.params.A * r.params.B},
                 {"k", r.params.k()}};
  j["radius"] = r.radius;
  j["grid"] = r.grid;
  j["seed"] = r.seed;
  j["point_count"] = r.points.size();
  j["random_planes_per_point"] = kRandomPlanesPerPoint;

  Json sum;
  sum["all_sectional_negative_everywhere"] = r.all_sectional_negative_everywhere;
  sum["matrix_negative_definite_everywhere"] = r.matrix_negative_definite_everywhere;
  sum["min_sectional"] = r.min_sectional;
  sum["max_sectional"] = r.max_sectional;
  Json offenders = Json::array();
  for (const CounterexamplePoint& c : r.counterexample_points)
    offenders.push_back({{"point", to_json(c.point)}, {"plane", c.plane}, {"value", c.value}});
  sum["counterexample_points"] = std::move(offenders);

  Json cmp;
  cmp["bivectors"] = Json::array({kBivectors[0], kBivectors[1], kBivectors[2]});
  cmp["max_residual"] = r.max_residual;
  cmp["tolerance"] = kClosedFormTol;
  cmp["matches"] = r.closed_form_matches;
  Json mism = Json::array();
  for (const MismatchEntry& m : r.mismatches) mism.push_back(mismatch_json(m));
  cmp["mismatches"] = std::move(mism);
  cmp["closed_form_negative_definite_everywhere"] = r.closed_form_negative_definite_everywhere;

  const Relabeling& b = r.best_relabeling;
  Json rel;
  Json names = Json::array();
  for (int a = 0; a < 3; ++a)
    names.push_back(std::string(b.signs[a] < 0 ? "-" : "") + kBivectors[b.order[a]]);
  rel["bivectors"] = std::move(names);
  rel["max_residual"] = b.max_residual;
  Json rmism = Json::array();
  for (const MismatchEntry& m : b.mismatches) rmism.push_back(mismatch_json(m));
  rel["mismatches"] = std::move(rmism);
  cmp["best_relabeling"] = std::move(rel);
  sum["closed_form_comparison"] = std::move(cmp);
  j["summary"] = std::move(sum);

  Json pts = Json::array();
  for (const VerdictPoint& vp : r.points) {
    Json e;
    e["point"] = to_json(vp.point);
    e["frame_sectional"] = {{kBivectors[0], vp.frame_sectional[0]},
                            {kBivectors[1], vp.frame_sectional[1]},
                            {kBivectors[2], vp.frame_sectional[2]}};
    double rmin = INFINITY, rmax = -INFINITY;
    for (const SectionalSample& s : vp.random_sectional) {
      rmin = std::min(rmin, s.value);
      rmax = std::max(rmax, s.value);
    }
    e["random_sectional"] = {{"min", rmin}, {"max", rmax}};
    e["min_sectional"] = vp.min_sectional;
    e["max_sectional"] = vp.max_sectional;
    e["direct"] = to_json(vp.direct);
    e["direct_eigenvalues"] = to_json(vp.direct_eigenvalues);
    e["matrix_negative_definite"] = vp.matrix_negative_definite;
    e["closed_form"] = to_json(vp.closed_form);
    e["closed_form_max_residual"] = vp.max_residual;
    e["closed_form_negative_definite"] = vp.closed_form_negative_definite;
    pts.push_back(std::move(e));
  }
  j["points"] = std::move(pts);
  return j;
}

Json to_json(const UmbilicScan& s) {
  Json j;
  j["evaluated"] = s.evaluated;
  j["umbilic_count"] = s.umbilic_points.size();
  j["min_lambda"] = s.min_lambda;
  j["max_lambda"] = s.max_lambda;
  Json pts = Json::array();
  for (const Point& p : s.umbilic_points) pts.push_back(to_json(p));
  j["umbilic_points"] = std::move(pts);
  Json skipped = Json::array();
  for (const auto& [p, why] : s.skipped) skipped.push_back({{"point", to_json(p)}, {"reason", why}});
  j["skipped"] = std::move(skipped);
  return j;
}

Json curvature_dump(const MetricField& g, const Point& p, const ParamTable& params) {
  const MetricJet mj = metric_jet(g, p, params);
  const Christoffel ch = christoffel(mj);
  const RiemannTensor rt = riemann_tensor(mj);
  Json j;
  j["point"] = to_json(p);
  j["metric"] = to_json(mj.g);
  Json gamma = Json::array();
  for (int l = 0; l < 3; ++l) gamma.push_back(to_json(ch.upper[l]));
  j["christoffel"] = std::move(gamma);  // [l][i][j] = Γ^l_ij
  Json riem = Json::array();
  for (int a = 0; a < 3; ++a) {
    Json ra = Json::array();
    for (int b = 0; b < 3; ++b) {
      Mat3 m;
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) m(c, d) = rt(a, b, c, d);
      ra.push_back(to_json(m));
    }
    riem.push_back(std::move(ra));
  }
  j["riemann"] = std::move(riem);  // [i][j][k][l] = ⟨R(∂i,∂j)∂k,∂l⟩
  Mat3 ric = Mat3::Zero();
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c)
      for (int a = 0; a < 3; ++a)
        for (int d = 0; d < 3; ++d) ric(b, c) += mj.g_inv(a, d) * rt(a, b, c, d);
  j["ricci"] = to_json(ric);
  j["scalar"] = (mj.g_inv.cwiseProduct(ric)).sum();
  Json sec;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      sec[std::string{kAxes[a], kAxes[b]}] =
          sectional_curvature(mj, rt, Vec3::Unit(a), Vec3::Unit(b));
  j["sectional"] = std::move(sec);
  return j;
}

namespace {

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string out;
  bool first = true;
  for (const std::string& c : cells) {
    if (!first) out += ',';
    first = false;
    out += c;
  }
  return out + '\n';
}

std::string f(double v) { return format_double(v); }
std::string b(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string compat_csv(const CompatReport& r) {
  std::string out =
      "x,y,z,k,unit_normal_defect,j_squared_defect,calibration_defect,geodesic_defect,"
      "mean_curvature\n";
  for (const CompatPoint& p : r.points)
    out += csv_row({f(p.point.x), f(p.point.y), f(p.point.z), f(p.k), f(p.unit_normal_defect),
                    f(p.j_squared_defect), f(p.calibration_defect), f(p.geodesic_defect),
                    f(p.mean_curvature)});
  return out;
}

std::string lemma_csv(const std::vector<LemmaResidualReport>& rows) {
  std::string out =
      "x,y,z,lambda,k,N_lambda,webster_K_formula,webster_K_from_direct,max_residual,pass\n";
  for (const LemmaResidualReport& r : rows)
    out += csv_row({f(r.point.x), f(r.point.y), f(r.point.z), f(r.scalars.lambda),
                    f(r.scalars.k), f(r.scalars.N_lambda), f(r.webster_K_formula),
                    f(r.webster_K_from_direct), f(r.max_residual), b(r.pass)});
  return out;
}

std::string verdict_csv(const VerdictReport& r) {
  std::string out =
      "x,y,z,K_e1e2,K_e1e3,K_e2e3,min_sectional,max_sectional,max_eigenvalue,"
      "matrix_negative_definite,closed_form_max_residual\n";
  for (const VerdictPoint& vp : r.points)
    out += csv_row({f(vp.point.x), f(vp.point.y), f(vp.point.z), f(vp.frame_sectional[0]),
                    f(vp.frame_sectional[1]), f(vp.frame_sectional[2]), f(vp.min_sectional),
                    f(vp.max_sectional), f(vp.direct_eigenvalues.maxCoeff()),
                    b(vp.matrix_negative_definite), f(vp.max_residual)});
  return out;
}

std::string umbilic_csv(const UmbilicScan& s) {
  std::string out = "x,y,z,lambda,umbilic\n";
  for (const UmbilicSample& u : s.samples) {
    const Point& p = u.point;
    out += csv_row({f(p.x), f(p.y), f(p.z), u.evaluated ? f(u.lambda) : "",
                    u.evaluated ? (u.umbilic ? "true" : "false") : "skipped"});
  }
  return out;
}

namespace {

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }

Vec3 read_vec3(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) schema(what + " must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) schema(what + " must be an array of 3 numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

}  // namespace

Pair parse_pair_spec(std::string_view text, const ParamTable& overrides) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("pair spec must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "name" && key != "parameters" && key != "metric" && key != "alpha" &&
        key != "domain")
      schema("unknown key '" + key + "'");
  }

  Pair pair;
  if (!doc.contains("name") || !doc["name"].is_string()) schema("'name' must be a string");
  pair.name = doc["name"].get<std::string>();

  ParamNames names;
  if (doc.contains("parameters")) {
    const Json& ps = doc["parameters"];
    if (!ps.is_object()) schema("'parameters' must be an object");
    for (const auto& [key, value] : ps.items()) {
      if (!value.is_number()) schema("parameter '" + key + "' must be a number");
      pair.params[key] = value.get<double>();
      names.insert(key);
    }
  }
  for (const auto& [key, value] : overrides) {
    if (!names.count(key)) schema("pair '" + pair.name + "' has no parameter '" + key + "'");
    pair.params[key] = value;
  }

  if (!doc.contains("metric")) schema("missing 'metric'");
  const Json& m = doc["metric"];
  if (!m.is_array() || m.size() != 3) schema("'metric' must be a 3x3 array");
  for (const Json& row : m)
    if (!row.is_array() || row.size() != 3) schema("'metric' must be a 3x3 array");
  std::array<std::array<ScalarFieldExpr, 3>, 3> entries;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const Json& upper = m[i][j];
      const Json& lower = m[j][i];
      const std::string where = "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      for (const Json* e : {&upper, &lower})
        if (!e->is_null() && !e->is_string()) schema(where + " must be a string or null");
      if (upper.is_null() && lower.is_null()) schema(where + " and its mirror are both missing");
      const Json& given = upper.is_null() ? lower : upper;
      entries[i][j] = parse(given.get<std::string>(), names);
      if (i != j && !upper.is_null() && !lower.is_null() &&
          upper.get<std::string>() != lower.get<std::string>() &&
          !structurally_equal(entries[i][j], parse(lower.get<std::string>(), names)))
        schema(where + " differs from its mirror");
    }
  pair.metric = MetricField(entries);

  if (!doc.contains("alpha")) schema("missing 'alpha'");
  const Json& a = doc["alpha"];
  if (!a.is_array() || a.size() != 3) schema("'alpha' must be an array of 3 strings");
  std::array<ScalarFieldExpr, 3> comps;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_string()) schema("'alpha' must be an array of 3 strings");
    comps[i] = parse(a[i].get<std::string>(), names);
  }
  pair.alpha = OneFormField(comps);

  if (!doc.contains("domain") || !doc["domain"].is_object()) schema("missing 'domain' object");
  const Json& d = doc["domain"];
  if (!d.contains("min") || !d.contains("max")) schema("'domain' needs 'min' and 'max'");
  pair.domain = {read_vec3(d["min"], "domain.min"), read_vec3(d["max"], "domain.max")};
  if (!pair.domain.valid()) schema("'domain' is empty");
  return pair;
}

}  // namespace cmv
