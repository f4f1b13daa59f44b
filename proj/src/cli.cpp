#include "cmv/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cmv/errors.hpp"
#include "cmv/report.hpp"

namespace cmv {

namespace {

struct Options {
  std::string input;
  std::string gallery;
  std::vector<std::string> params;
  std::size_t points = 50;
  std::uint64_t seed = 42;
  double tol = kLemmaTol;
  double radius = 0.25;
  int grid = 9;
  std::string format = "json";
  std::string box;
  std::string csv_out;
  std::string at;
};

// Raised for bad command-line values; becomes exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw UsageError("invalid number '" + s + "' for " + what);
  return v;
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, what));
  if (out.size() != n || (!s.empty() && s.back() == ','))
    throw UsageError(what + " needs " + std::to_string(n) + " comma-separated numbers");
  return out;
}

ParamTable parse_overrides(const std::vector<std::string>& items) {
  ParamTable out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("-P expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "-P " + item.substr(0, eq));
  }
  return out;
}

Pair load_pair(const Options& o) {
  const ParamTable overrides = parse_overrides(o.params);
  if (o.input.empty() == o.gallery.empty())
    throw UsageError("exactly one of --input and --gallery is required");
  if (!o.gallery.empty()) return gallery_pair(o.gallery, overrides);
  std::ifstream in(o.input, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + o.input + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_pair_spec(text.str(), overrides);
}

Json header(const std::string& command, const Pair* pair) {
  Json j;
  j["tool_version"] = std::string(kToolVersion);
  j["command"] = command;
  if (pair) {
    j["pair"] = pair->name;
    Json ps = Json::object();
    for (const auto& [k, v] : pair->params) ps[k] = v;
    j["parameters"] = std::move(ps);
  }
  return j;
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

void require_json(const Options& o, const char* command) {
  if (o.format != "json")
    throw UsageError(std::string("--format csv is not available for ") + command);
}

CliResult cmd_check(const Options& o) {
  const Pair pair = load_pair(o);
  const auto pts = uniform_points(o.seed, pair.domain, o.points);
  Json j = header("check", &pair);
  j["seed"] = o.seed;
  j["sample_count"] = pts.size();
  CliResult res;
  try {
    const CompatReport rep = compatibility_check(pair.metric, pair.alpha, pts, pair.params);
    res.code = rep.is_compatible ? kExitOk : kExitCheckFailed;
    if (!rep.is_compatible) {
      std::string names;
      for (const auto& n : rep.failed_predicates) names += (names.empty() ? "" : ", ") + n;
      res.err = "not compatible: " + names + "\n";
    }
    if (o.format == "csv") {
      res.out = compat_csv(rep);
      return res;
    }
    merge(j, to_json(rep));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotContact) throw;
    res.code = kExitCheckFailed;
    res.err = std::string("not compatible: ") + e.what() + "\n";
    if (o.format == "csv") return res;
    j["is_compatible"] = false;
    j["failed_predicates"] = Json::array({"contact"});
    j["error"] = e.what();
  }
  res.out = dump(j);
  return res;
}

CliResult cmd_lemma_verify(const Options& o) {
  const Pair pair = load_pair(o);
  const auto pts = uniform_points(o.seed, pair.domain, o.points);
  std::vector<LemmaResidualReport> rows;
  std::vector<Point> umbilic;
  double max_residual = 0.0, max_gap = 0.0;
  std::size_t n_lambda_flags = 0;
  for (const Point& p : pts) {
    const ContactGeometry cg = contact_geometry(pair.metric, pair.alpha, p, pair.params);
    if (shape_data(cg).umbilic) {
      umbilic.push_back(p);
      continue;
    }
    if (!unit_normal_holds(cg)) {
      CliResult res;
      res.code = kExitCheckFailed;
      res.err = "not compatible at (" + format_double(p.x) + ", " + format_double(p.y) + ", " +
                format_double(p.z) + "): the identity needs a compatible pair\n";
      return res;
    }
    rows.push_back(lemma_consistency_check(pair.metric, pair.alpha, p, pair.params, o.tol));
    max_residual = std::max(max_residual, rows.back().max_residual);
    max_gap = std::max(max_gap, rows.back().webster_K_gap);
    n_lambda_flags += rows.back().n_lambda_significant;
  }

  CliResult res;
  const bool pass = !rows.empty() && max_residual < o.tol;
  res.code = rows.empty() ? kExitDegenerate : pass ? kExitOk : kExitCheckFailed;
  if (rows.empty()) res.err = "every sampled point is umbilic\n";
  else if (!pass) res.err = "max residual " + format_double(max_residual) + " exceeds tolerance\n";
  if (o.format == "csv") {
    res.out = lemma_csv(rows);
    return res;
  }
  Json j = header("lemma-verify", &pair);
  j["seed"] = o.seed;
  j["tol"] = o.tol;
  j["sample_count"] = pts.size();
  j["evaluated"] = rows.size();
  j["umbilic_skipped"] = umbilic.size();
  j["max_residual"] = max_residual;
  j["pass"] = pass;
  j["max_webster_K_gap"] = max_gap;
  j["n_lambda_significant_points"] = n_lambda_flags;
  Json list = Json::array();
  for (const auto& r : rows) list.push_back(to_json(r));
  j["points"] = std::move(list);
  Json um = Json::array();
  for (const Point& p : umbilic) um.push_back(to_json(p));
  j["umbilic_points"] = std::move(um);
  res.out = dump(j);
  return res;
}

CliResult cmd_verdict(const Options& o) {
  CounterexampleParams cp;
  for (const auto& [k, v] : parse_overrides(o.params)) {
    if (k == "A") cp.A = v;
    else if (k == "B") cp.B = v;
    else throw UsageError("verdict takes parameters A and B, got '" + k + "'");
  }
  if (!(o.radius > 0.0)) throw UsageError("--radius must be positive");
  if (o.grid < 1) throw UsageError("--grid must be at least 1");
  const VerdictReport rep = section4_verdict(cp, o.radius, o.grid, o.seed);
  CliResult res;
  if (o.format == "csv") {
    res.out = verdict_csv(rep);
    return res;
  }
  Json j = header("verdict", nullptr);
  merge(j, to_json(rep));
  res.out = dump(j);
  if (!o.csv_out.empty()) {
    std::ofstream csv(o.csv_out, std::ios::binary);
    if (!csv) throw UsageError("cannot write '" + o.csv_out + "'");
    csv << verdict_csv(rep);
  }
  return res;
}

CliResult cmd_scan_umbilic(const Options& o) {
  const Pair pair = load_pair(o);
  Box box = pair.domain;
  if (!o.box.empty()) {
    const auto v = parse_list(o.box, 6, "--box");
    box = {Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
    if (!box.valid()) throw UsageError("--box is empty");
  }
  if (o.grid < 1) throw UsageError("--grid must be at least 1");
  const UmbilicScan scan = umbilic_scan(pair.metric, pair.alpha, box, o.grid, pair.params);
  if (scan.evaluated == 0 && !scan.skipped.empty())
    throw UsageError("no grid point could be evaluated: " + scan.skipped.front().second);
  CliResult res;
  if (o.format == "csv") {
    res.out = umbilic_csv(scan);
    return res;
  }
  Json j = header("scan-umbilic", &pair);
  j["box"] = {{"min", to_json(box.min)}, {"max", to_json(box.max)}};
  j["grid"] = o.grid;
  merge(j, to_json(scan));
  // At a compatible umbilic point Ric(N, N) is forced to k²/2 > 0.
  Json forced = Json::array();
  for (const Point& p : scan.umbilic_points) {
    const ContactGeometry cg = contact_geometry(pair.metric, pair.alpha, p, pair.params);
    if (unit_normal_holds(cg) && cg.k != 0.0)
      forced.push_back({{"point", to_json(p)}, {"k", cg.k}, {"ricci_NN", umbilic_obstruction(cg.k)}});
  }
  j["forced_positive_ricci"] = std::move(forced);
  res.out = dump(j);
  return res;
}

CliResult cmd_gallery(const Options& o) {
  require_json(o, "gallery");
  Json j = header("gallery", nullptr);
  Json list = Json::array();
  for (const GalleryEntry& e : gallery_entries()) {
    const Pair p = gallery_pair(e.name);
    list.push_back({{"name", std::string(e.name)},
                    {"description", std::string(e.description)},
                    {"parameters", std::string(e.parameters)},
                    {"domain", {{"min", to_json(p.domain.min)}, {"max", to_json(p.domain.max)}}}});
  }
  j["entries"] = std::move(list);
  return {kExitOk, dump(j), ""};
}

CliResult cmd_curvature(const Options& o) {
  require_json(o, "curvature");
  const Pair pair = load_pair(o);
  if (o.at.empty()) throw UsageError("curvature needs --at x,y,z");
  const auto v = parse_list(o.at, 3, "--at");
  Json j = header("curvature", &pair);
  merge(j, curvature_dump(pair.metric, {v[0], v[1], v[2]}, pair.params));
  return {kExitOk, dump(j), ""};
}

void add_source(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "PairSpec JSON file");
  sub->add_option("--gallery", o.gallery, "built-in pair name");
  sub->add_option("-P", o.params, "parameter override key=value (repeatable)");
}

void add_format(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Contact metric curvature checks", "cmv"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "compatibility of a metric with a contact form");
  add_source(check, o);
  add_format(check, o);
  check->add_option("--points", o.points, "number of random samples");
  check->add_option("--seed", o.seed, "random seed");

  auto* lemma = app.add_subcommand("lemma-verify", "principal-frame curvature identity");
  add_source(lemma, o);
  add_format(lemma, o);
  lemma->add_option("--points", o.points, "number of random samples");
  lemma->add_option("--seed", o.seed, "random seed");
  lemma->add_option("--tol", o.tol, "residual tolerance");

  auto* verdict = app.add_subcommand("verdict", "sign of curvature for the counterexample family");
  verdict->add_option("-P", o.params, "A=value or B=value");
  add_format(verdict, o);
  verdict->add_option("--radius", o.radius, "ball radius");
  verdict->add_option("--grid", o.grid, "grid points per axis");
  verdict->add_option("--seed", o.seed, "random seed for the random planes");
  verdict->add_option("--csv-out", o.csv_out, "also write per-point CSV here");

  auto* scan = app.add_subcommand("scan-umbilic", "grid search for umbilic points");
  add_source(scan, o);
  add_format(scan, o);
  scan->add_option("--box", o.box, "xmin,ymin,zmin,xmax,ymax,zmax (default: pair domain)");
  scan->add_option("--grid", o.grid, "grid points per axis");

  auto* gallery = app.add_subcommand("gallery", "list built-in pairs");
  add_format(gallery, o);

  auto* curv = app.add_subcommand("curvature", "Christoffel symbols and curvature at a point");
  add_source(curv, o);
  add_format(curv, o);
  curv->add_option("--at", o.at, "x,y,z");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  CliResult res;
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    res.code = app.exit(e, out, err) == 0 ? kExitOk : kExitBadInput;
    res.out = out.str();
    res.err = err.str();
    return res;
  }

  try {
    if (check->parsed()) return cmd_check(o);
    if (lemma->parsed()) return cmd_lemma_verify(o);
    if (verdict->parsed()) return cmd_verdict(o);
    if (scan->parsed()) return cmd_scan_umbilic(o);
    if (gallery->parsed()) return cmd_gallery(o);
    return cmd_curvature(o);
  } catch (const UsageError& e) {
    res.err = std::string("error: ") + e.what() + "\n";
  } catch (const Error& e) {
    res.err = "error [" + std::string(to_string(e.kind())) + "]: " + e.what() + "\n";
  }
  res.code = kExitBadInput;
  return res;
}

}  // namespace cmv
