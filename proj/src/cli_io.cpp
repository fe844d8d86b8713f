#include "metcomp/cli_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace metcomp {

using nlohmann::json;

namespace {

// ------------------------------------------------------------ JSON helpers

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError("expected an object", path);
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw InputError("unknown field '" + key + "'", path + "/" + key);
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing field '" + key + "'", path);
  return *it;
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw InputError("expected a string", path);
  return v.get<std::string>();
}

Rational rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (!v.is_string()) throw InputError("expected a rational as \"p/q\" text", path);
  Rational r;
  if (!Rational::try_parse(v.get<std::string>(), r)) {
    throw InputError("malformed rational '" + v.get<std::string>() + "' (only p/q or integer accepted)", path);
  }
  return r;
}

bool flag(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw InputError("expected a boolean", path + "/" + key);
  return it->get<bool>();
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw InputError("expected an array of strings", path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(text(v[i], path + "/" + std::to_string(i)));
  return out;
}

BaseSpace parse_base(const json& b) {
  const std::string path = "/base";
  const std::string kind = text(field(b, "kind", path), path + "/kind");
  if (kind == "finite") {
    reject_unknown(b, path, {"kind", "points", "basis"});
    auto points = string_list(field(b, "points", path), path + "/points");
    const json& basis_json = field(b, "basis", path);
    if (!basis_json.is_array()) throw InputError("expected an array of point lists", path + "/basis");
    std::vector<std::vector<std::string>> basis;
    for (std::size_t k = 0; k < basis_json.size(); ++k) {
      basis.push_back(string_list(basis_json[k], path + "/basis/" + std::to_string(k)));
    }
    return FiniteBase::make(std::move(points), std::move(basis));
  }
  if (kind == "one_point") {
    reject_unknown(b, path, {"kind", "point"});
    const auto it = b.find("point");
    return EnumeratedBase::one_point(it == b.end() ? "*" : text(*it, path + "/point"));
  }
  if (kind == "rational_order") {
    reject_unknown(b, path, {"kind"});
    return EnumeratedBase::rational_order();
  }
  throw InputError("unknown base kind '" + kind + "'", path + "/kind");
}

Carrier parse_carrier(const json& c) {
  const std::string path = "/carrier";
  const std::string kind = text(field(c, "kind", path), path + "/kind");
  if (kind == "finite") {
    reject_unknown(c, path, {"kind", "points"});
    return Carrier::finite(string_list(field(c, "points", path), path + "/points"));
  }
  if (kind == "rational_interval") {
    reject_unknown(c, path, {"kind", "lo", "hi", "lo_open", "hi_open"});
    return Carrier::rational_interval(rational(field(c, "lo", path), path + "/lo"),
                                      rational(field(c, "hi", path), path + "/hi"), flag(c, "lo_open", path),
                                      flag(c, "hi_open", path));
  }
  if (kind == "rational_grid") {
    reject_unknown(c, path, {"kind", "step", "lo", "hi"});
    return Carrier::rational_grid(rational(field(c, "step", path), path + "/step"),
                                  rational(field(c, "lo", path), path + "/lo"),
                                  rational(field(c, "hi", path), path + "/hi"));
  }
  throw InputError("unknown carrier kind '" + kind + "'", path + "/kind");
}

BasePoint base_point_from_text(const BaseSpace& base, const std::string& s, const std::string& path) {
  BasePoint y;
  if (const auto* e = base.enumerated(); e && e->kind() == EnumeratedKind::rational_order) {
    Rational r;
    if (!Rational::try_parse(s, r)) throw InputError("malformed rational base point '" + s + "'", path);
    y = r;
  } else {
    y = s;
  }
  if (!base.has_point(y)) throw InputError("unknown base point '" + s + "'", path);
  return y;
}

}  // namespace

// -------------------------------------------------------------- documents

Instance parse_instance(const std::string& doc) {
  json root;
  try {
    root = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), "/");
  }
  reject_unknown(root, "", {"base", "carrier", "fiber_map", "distance"});
  BaseSpace base = parse_base(field(root, "base", ""));
  Carrier carrier = parse_carrier(field(root, "carrier", ""));

  // Fiber map.
  const json& fj = field(root, "fiber_map", "");
  const std::string fpath = "/fiber_map";
  const std::string fkind = text(field(fj, "kind", fpath), fpath + "/kind");
  FiberFn fiber;
  std::optional<BasePoint> constant;
  std::vector<std::string> fiber_ids;  // finite carriers with a table
  if (fkind == "table") {
    reject_unknown(fj, fpath, {"kind", "table"});
    if (!carrier.is_finite()) throw InputError("table fiber map needs a finite carrier", fpath);
    const json& table = field(fj, "table", fpath);
    if (!table.is_object()) throw InputError("expected an object mapping carrier ids to base points", fpath + "/table");
    for (const auto& [key, value] : table.items()) {
      if (!carrier.index_of(key)) throw InputError("unknown carrier point '" + key + "'", fpath + "/table/" + key);
    }
    std::vector<BasePoint> targets;
    for (const auto& id : carrier.ids()) {
      const auto it = table.find(id);
      if (it == table.end()) throw InputError("no fiber given for carrier point '" + id + "'", fpath + "/table");
      const std::string p = fpath + "/table/" + id;
      targets.push_back(base_point_from_text(base, text(*it, p), p));
      fiber_ids.push_back(to_string(targets.back()));
    }
    auto ids = carrier.ids();
    fiber = [ids, targets](const CarrierPoint& x) -> BasePoint {
      const auto& id = std::get<std::string>(x);
      return targets[static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin())];
    };
  } else if (fkind == "constant") {
    reject_unknown(fj, fpath, {"kind", "point"});
    const std::string p = fpath + "/point";
    constant = base_point_from_text(base, text(field(fj, "point", fpath), p), p);
    fiber = fiber_constant(*constant);
  } else if (fkind == "identity") {
    reject_unknown(fj, fpath, {"kind"});
    const auto* e = base.enumerated();
    if (!e || e->kind() != EnumeratedKind::rational_order || carrier.kind() != CarrierKind::rational_interval) {
      throw InputError("identity fiber map needs a rational_interval carrier over a rational_order base", fpath);
    }
    fiber = fiber_identity();
  } else {
    throw InputError("unknown fiber_map kind '" + fkind + "'", fpath + "/kind");
  }
  if (const auto* e = base.enumerated(); e && e->kind() == EnumeratedKind::one_point && !constant) {
    constant = BasePoint{e->point_name()};
  }

  // Distance.
  const json& dj = field(root, "distance", "");
  const std::string dpath = "/distance";
  const std::string dkind = text(field(dj, "kind", dpath), dpath + "/kind");
  DistFn dist;
  std::vector<std::vector<Rational>> matrix;
  if (dkind == "table") {
    reject_unknown(dj, dpath, {"kind", "matrix"});
    if (!carrier.is_finite()) throw InputError("table distance needs a finite carrier", dpath);
    const json& mj = field(dj, "matrix", dpath);
    const std::size_t n = carrier.ids().size();
    if (!mj.is_array() || mj.size() != n) {
      throw InputError("expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix", dpath + "/matrix");
    }
    matrix.assign(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::string rpath = dpath + "/matrix/" + std::to_string(i);
      if (!mj[i].is_array() || mj[i].size() != n) throw InputError("row must have " + std::to_string(n) + " entries", rpath);
      for (std::size_t j = 0; j < n; ++j) {
        const std::string epath = rpath + "/" + std::to_string(j);
        matrix[i][j] = rational(mj[i][j], epath);
        if (matrix[i][j].sign() < 0) throw InputError("negative distance " + matrix[i][j].str(), epath);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!(matrix[i][j] == matrix[j][i])) {
          throw InputError("distance table is not symmetric: " + matrix[i][j].str() + " vs " + matrix[j][i].str(),
                           dpath + "/matrix/" + std::to_string(i) + "/" + std::to_string(j));
        }
      }
    }
    dist = dist_table(carrier.ids(), matrix);
  } else if (dkind == "abs_diff") {
    reject_unknown(dj, dpath, {"kind"});
    if (carrier.kind() != CarrierKind::rational_interval) {
      throw InputError("abs_diff needs a rational_interval carrier", dpath);
    }
    dist = dist_abs_diff();
  } else if (dkind == "max_metric") {
    reject_unknown(dj, dpath, {"kind"});
    if (carrier.is_finite()) throw InputError("max_metric needs a rational carrier", dpath);
    dist = dist_max_metric();
  } else {
    throw InputError("unknown distance kind '" + dkind + "'", dpath + "/kind");
  }

  Instance out;
  if (carrier.is_finite() && base.is_finite() && dkind == "table" && fkind == "table") {
    auto m = MetricMapping::finite(*base.finite(), carrier.ids(), fiber_ids, matrix);
    out.mapping = std::make_shared<const MetricMapping>(std::move(m));
    out.finite = FiniteInstance::from_mapping(*out.mapping);
  } else {
    out.mapping = std::make_shared<const MetricMapping>(std::move(carrier), std::move(base), std::move(fiber),
                                                        std::move(dist), constant);
    if (out.mapping->carrier().is_finite() && out.mapping->base().is_finite()) {
      out.finite = FiniteInstance::from_mapping(*out.mapping);
    }
  }
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string to_document(const FiniteInstance& m) {
  using ordered = nlohmann::ordered_json;
  ordered doc;
  doc["base"] = {{"kind", "finite"}, {"points", m.base.points}, {"basis", m.base.basis}};
  doc["carrier"] = {{"kind", "finite"}, {"points", m.points}};
  ordered table = ordered::object();
  for (std::size_t i = 0; i < m.size(); ++i) table[m.points[i]] = m.fiber_id(i);
  doc["fiber_map"] = {{"kind", "table"}, {"table", table}};
  ordered matrix = ordered::array();
  for (const auto& row : m.dist) {
    ordered r = ordered::array();
    for (const auto& v : row) r.push_back(v.str());
    matrix.push_back(r);
  }
  doc["distance"] = {{"kind", "table"}, {"matrix", matrix}};
  return doc.dump(2) + "\n";
}

// ------------------------------------------------------------- point specs

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

/// Splits at `sep` outside parentheses.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (const char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

}  // namespace

PointSpec parse_point_spec(const std::string& raw) {
  const std::string s = trim(raw);
  const auto open = s.find('(');
  if (open == std::string::npos) throw InputError("point spec '" + s + "' needs a constructor call");
  const std::string ctor = trim(s.substr(0, open));
  int depth = 0;
  std::size_t close = std::string::npos;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string::npos) throw InputError("point spec '" + s + "' has unbalanced parentheses");
  const std::string body = s.substr(open + 1, close - open - 1);
  const std::string rest = trim(s.substr(close + 1));

  PointSpec spec;
  if (!rest.empty()) {
    if (rest[0] != '@' || trim(rest.substr(1)).empty()) {
      throw InputError("unexpected text '" + rest + "' after point spec (expected @<basepoint>)");
    }
    spec.target = trim(rest.substr(1));
  }
  if (ctor == "const") {
    spec.kind = PointKind::constant;
    spec.args = {trim(body)};
    if (spec.args[0].empty()) throw InputError("const() needs a point");
  } else if (ctor == "newton_sqrt") {
    spec.kind = PointKind::newton_sqrt;
    spec.args = {trim(body)};
    Rational r;
    if (!Rational::try_parse(spec.args[0], r)) throw InputError("newton_sqrt needs a rational, got '" + spec.args[0] + "'");
  } else if (ctor == "table") {
    spec.kind = PointKind::table;
    const auto parts = split_top(body, ';');
    if (parts.size() != 2 || parts[1].rfind("tail=", 0) != 0) {
      throw InputError("table spec must read table(<p1>,...;tail=<point>)");
    }
    if (!parts[0].empty()) spec.args = split_top(parts[0], ',');
    spec.tail = trim(parts[1].substr(5));
    if (spec.tail.empty()) throw InputError("table spec needs a tail point");
  } else {
    throw InputError("unknown point constructor '" + ctor + "'");
  }
  return spec;
}

CarrierPoint parse_carrier_point(const MetricMapping& m, const std::string& raw) {
  const std::string s = trim(raw);
  CarrierPoint x;
  switch (m.carrier().kind()) {
    case CarrierKind::finite:
      x = s;
      break;
    case CarrierKind::rational_interval: {
      Rational r;
      if (!Rational::try_parse(s, r)) throw InputError("malformed rational point '" + s + "'");
      x = r;
      break;
    }
    case CarrierKind::rational_grid: {
      if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw InputError("grid point must read (a,b): '" + s + "'");
      const auto parts = split_top(s.substr(1, s.size() - 2), ',');
      Rational a, b;
      if (parts.size() != 2 || !Rational::try_parse(parts[0], a) || !Rational::try_parse(parts[1], b)) {
        throw InputError("grid point must read (a,b): '" + s + "'");
      }
      x = RationalPair{a, b};
      break;
    }
  }
  if (!m.carrier().contains(x)) throw InputError("point '" + s + "' is not in the carrier");
  return x;
}

BasePoint parse_base_point(const MetricMapping& m, const std::string& s) {
  return base_point_from_text(m.base(), trim(s), "");
}

CompletionPoint resolve_point(const PointSpec& spec, const MappingPtr& m) {
  std::optional<BasePoint> target;
  if (spec.target) target = parse_base_point(*m, *spec.target);
  switch (spec.kind) {
    case PointKind::constant: {
      const CarrierPoint x = parse_carrier_point(*m, spec.args[0]);
      if (!target) return embed(m, x);
      return CompletionPoint{table_seq(m, {}, x, target)};
    }
    case PointKind::newton_sqrt:
      return CompletionPoint{newton_sqrt_seq(m, Rational::parse(spec.args[0]), target)};
    case PointKind::table: {
      std::vector<CarrierPoint> prefix;
      for (const auto& a : spec.args) prefix.push_back(parse_carrier_point(*m, a));
      return CompletionPoint{table_seq(m, std::move(prefix), parse_carrier_point(*m, spec.tail), target)};
    }
  }
  throw InputError("unsupported point spec");
}

// ------------------------------------------------------------------ report

void Report::add(const std::string& name, bool pass, const std::string& detail) {
  std::string line = "PROP " + name + (pass ? " PASS" : " FAIL");
  if (!detail.empty()) line += " " + detail;
  lines_.push_back(std::move(line));
  if (pass) ++passed_;
}

std::string Report::render() const {
  std::string out;
  for (const auto& l : lines_) out += l + "\n";
  out += "SUMMARY " + std::to_string(passed_) + "/" + std::to_string(lines_.size()) + "\n";
  return out;
}

// ---------------------------------------------------------------- commands

namespace {

struct Options {
  std::string file;
  std::vector<std::string> points;
  std::string eps = "1/1000000";
  Index depth = 64;
  std::uint64_t seed = 1;
  std::size_t count = 200;
  std::size_t maxx = 6;
  std::size_t maxy = 3;
  std::size_t open = 0;
  std::string out_path;
};

Rational eps_of(const Options& o) {
  Rational r;
  if (!Rational::try_parse(o.eps, r) || r.sign() <= 0) {
    throw InputError("--eps must be a positive rational p/q, got '" + o.eps + "'");
  }
  return r;
}

const FiniteInstance& require_finite(const Instance& inst) {
  if (!inst.finite) throw InputError("this command needs a finite carrier and a finite base");
  return *inst.finite;
}

void add_point_checks(Report& r, const std::string& name, const CompletionPoint& p, Index depth) {
  const auto reg = check_regularity(p.rep, std::max<Index>(depth, 2));
  r.add("regular[" + name + "]", reg.ok(), "depth=" + std::to_string(depth) + " " + reg.summary());
  const auto tie = check_tying(p.rep, depth);
  r.add("tied[" + name + "]", tie.ok(), "y=" + to_string(p.y()) + " " + tie.summary());
}

int cmd_validate(const Options& o, Report& r) {
  const Instance inst = load_instance(o.file);
  if (const auto* fb = inst.mapping->base().finite()) {
    const auto rep = validate_basis(*fb);
    r.add("basis", rep.ok(), rep.summary());
  }
  const auto pm = validate_pseudometric(*inst.mapping, o.depth);
  r.add("pseudometric", pm.ok(), pm.summary());
  const auto fm = validate_fiberwise_metric(*inst.mapping, o.depth);
  r.add("fiberwise_metric", fm.ok(), fm.summary());
  return 0;
}

int cmd_dstar(const Options& o, Report& r) {
  if (o.points.size() != 2) throw InputError("dstar needs exactly two --point specs");
  const Instance inst = load_instance(o.file);
  const Rational eps = eps_of(o);
  const auto p = resolve_point(parse_point_spec(o.points[0]), inst.mapping);
  const auto q = resolve_point(parse_point_spec(o.points[1]), inst.mapping);
  add_point_checks(r, "p", p, o.depth);
  add_point_checks(r, "q", q, o.depth);
  const Rational d = dstar_approx(p, q, eps);
  r.add("dstar", true,
        "value=" + d.str() + " radius=" + eps.str() + " approx=" + d.decimal(18) + " n=" + std::to_string(dstar_index(eps)));
  return 0;
}

int cmd_density(const Options& o, Report& r) {
  if (o.points.size() != 1) throw InputError("density needs exactly one --point spec");
  const Instance inst = load_instance(o.file);
  const Rational eps = eps_of(o);
  const auto p = resolve_point(parse_point_spec(o.points[0]), inst.mapping);
  const auto opens = inst.mapping->base().neighborhood_basis(p.y(), std::max<Index>(o.depth, o.open + 1));
  if (o.open >= opens.size()) {
    throw InputError("--open " + std::to_string(o.open) + " out of range (" + std::to_string(opens.size()) +
                     " basic neighborhoods of " + to_string(p.y()) + ")");
  }
  const BasicOpen& v = opens[o.open];
  const CarrierPoint x = density_witness(p, eps, v);
  const Rational quarter = eps / Rational(4);
  const Rational d = dstar_approx(p, embed(inst.mapping, x), quarter);
  const Rational bound = eps + quarter;
  const BasePoint fx = inst.mapping->fiber(x);
  r.add("density", d <= bound && contains(v, fx),
        "witness=" + to_string(x) + " fiber=" + to_string(fx) + " open=" + to_string(v) + " dstar=" + d.str() +
            " bound=" + bound.str() + " margin=" + (bound - d).str());
  return 0;
}

int cmd_complete_check(const Options& o, Report& r) {
  const Instance inst = load_instance(o.file);
  const auto& m = require_finite(inst);
  const auto valid = m.validate();
  r.add("valid", valid.ok(), valid.summary());
  if (!valid.ok()) return 0;
  const auto byfilter = is_complete_filter(m);
  const auto bynet = is_complete_net(m);
  r.add("complete_filter", byfilter.holds, byfilter.certificate ? "certificate=" + byfilter.certificate->str() : "");
  r.add("complete_net", bynet.holds, bynet.certificate ? "certificate=" + bynet.certificate->str() : "");
  r.add("theorem3_agree", byfilter.holds == bynet.holds);
  return 0;
}

template <typename Check>
int seeded_suite(const Options& o, Report& r, const std::string& name, Check&& check) {
  if (o.maxx > 64) throw InputError("--maxx must be at most 64");
  for (std::size_t i = 0; i < o.count; ++i) {
    const std::uint64_t seed = o.seed + i;
    const FiniteInstance m = random_instance(seed, o.maxx, o.maxy);
    std::string detail;
    const bool pass = check(m, detail);
    r.add(name + "[seed=" + std::to_string(seed) + "]", pass,
          "|X|=" + std::to_string(m.size()) + " |Y|=" + std::to_string(m.base.points.size()) + " " + detail);
  }
  return 0;
}

int cmd_theorem3(const Options& o, Report& r) {
  return seeded_suite(o, r, "theorem3", [](const FiniteInstance& m, std::string& detail) {
    const auto f = is_complete_filter(m);
    const auto n = is_complete_net(m);
    detail = std::string("filter=") + (f.holds ? "complete" : "incomplete") +
             " net=" + (n.holds ? "complete" : "incomplete");
    return f.holds == n.holds;
  });
}

int cmd_lemma2(const Options& o, Report& r) {
  return seeded_suite(o, r, "lemma2", [](const FiniteInstance& m, std::string& detail) {
    const auto v = lemma2_check(m);
    detail = v.certificate ? "counterexample=" + v.certificate->str() : "holds";
    return v.holds;
  });
}

int cmd_complete_construct(const Options& o, Report& r, std::ostream& out, bool& report_to_err) {
  const Instance inst = load_instance(o.file);
  const auto& m = require_finite(inst);
  const auto valid = m.validate();
  if (!valid.ok()) throw InputError("instance fails validation: " + valid.summary());
  const auto c = finite_completion(m);
  const std::string doc = to_document(c.completed);
  if (o.out_path.empty()) {
    out << doc;
    report_to_err = true;
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw InputError("cannot write '" + o.out_path + "'");
    f << doc;
  }
  r.add("completion", true, "points=" + std::to_string(c.completed.size()));
  const auto complete = is_complete_filter(c.completed);
  r.add("completion_complete", complete.holds, complete.certificate ? complete.certificate->str() : "");
  r.add("embedding_isometric", embedding_is_isometric(m, c));
  r.add("embedding_dense", embedding_is_dense(c));
  return 0;
}

int cmd_limit_demo(const Options& o, Report& r) {
  if (o.points.size() != 1) throw InputError("limit-demo needs exactly one --point spec");
  const Instance inst = load_instance(o.file);
  const auto p = resolve_point(parse_point_spec(o.points[0]), inst.mapping);
  const auto psi = embedded_sequence(p.rep);
  const auto limit = limit_point(psi);
  const Index last = std::min<Index>(o.depth, 20);
  for (Index k = 1; k <= last; ++k) {
    const Rational eps = reciprocal(checked_mul(4, k));
    const Rational d = dstar_approx(psi.at(k), limit, eps);
    const Rational bound = reciprocal(k) + eps;
    r.add("converges[k=" + std::to_string(k) + "]", d <= bound, "dstar=" + d.str() + " bound=" + bound.str());
  }
  const Rational eps = eps_of(o);
  const Rational gap = dstar_approx(limit, p, eps);
  r.add("limit_equals_point", gap <= eps, "dstar=" + gap.str() + " eps=" + eps.str());
  r.add("limit_fstar", fstar(limit) == fstar(p), "y=" + to_string(fstar(limit)));
  const auto tie = check_tying(limit.rep, std::min<Index>(o.depth, 16));
  r.add("limit_tied", tie.ok(), tie.summary());
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Completion of metric mappings: certified d* evaluation and finite oracles", "metcomp"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "instance JSON document")->required(); };
  auto add_points = [&](CLI::App* sub) {
    sub->add_option("--point", o.points, "point spec, e.g. const(x) or newton_sqrt(2)")->required();
  };
  auto add_eps = [&](CLI::App* sub) { sub->add_option("--eps", o.eps, "precision as p/q"); };
  auto add_depth = [&](CLI::App* sub) { sub->add_option("--depth", o.depth, "check depth / sample budget"); };
  auto add_suite = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "first seed");
    sub->add_option("--count", o.count, "number of seeded instances");
    sub->add_option("--maxx", o.maxx, "max carrier size");
    sub->add_option("--maxy", o.maxy, "max base size");
  };

  auto* validate = app.add_subcommand("validate", "run all validators on an instance");
  add_file(validate);
  add_depth(validate);
  auto* dstar = app.add_subcommand("dstar", "certified d* between two completion points");
  add_file(dstar);
  add_points(dstar);
  add_eps(dstar);
  add_depth(dstar);
  auto* density = app.add_subcommand("density", "density witness for a completion point");
  add_file(density);
  add_points(density);
  add_eps(density);
  add_depth(density);
  density->add_option("--open", o.open, "index among the basic neighborhoods of f*(p)");
  auto* check = app.add_subcommand("complete-check", "decide completeness of a finite instance");
  add_file(check);
  auto* theorem3 = app.add_subcommand("theorem3", "filter vs net completeness on seeded instances");
  add_suite(theorem3);
  auto* lemma2 = app.add_subcommand("lemma2", "cluster/limit agreement on seeded instances");
  add_suite(lemma2);
  auto* construct = app.add_subcommand("complete-construct", "emit the finite completion as a document");
  add_file(construct);
  construct->add_option("--out", o.out_path, "write the document here and the report to stdout");
  auto* limit = app.add_subcommand("limit-demo", "diagonal limit of the embedded terms of a point");
  add_file(limit);
  add_points(limit);
  add_eps(limit);
  add_depth(limit);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ERROR " << e.what() << "\n";
    return 2;
  }

  Report report;
  bool report_to_err = false;
  try {
    if (*validate) cmd_validate(o, report);
    if (*dstar) cmd_dstar(o, report);
    if (*density) cmd_density(o, report);
    if (*check) cmd_complete_check(o, report);
    if (*theorem3) cmd_theorem3(o, report);
    if (*lemma2) cmd_lemma2(o, report);
    if (*construct) cmd_complete_construct(o, report, out, report_to_err);
    if (*limit) cmd_limit_demo(o, report);
  } catch (const InputError& e) {
    err << "ERROR " << e.what() << "\n";
    return 2;
  } catch (const EvaluatorError& e) {
    err << "ERROR evaluator: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "ERROR " << e.what() << "\n";
    return 2;
  }
  (report_to_err ? err : out) << report.render();
  return report.all_pass() ? 0 : 1;
}

}  // namespace metcomp
