#include "tilt/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tilt {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(where, std::string("malformed JSON: ") + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

int need_int(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) fail(where, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string need_string(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Field parse_field(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j.get<std::string>() == "rational") return Field::rational();
    fail(where, "unknown field '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("prime")) {
    const json& p = j.at("prime");
    if (!p.is_number_integer()) fail(where, "prime must be an integer");
    auto v = p.get<std::int64_t>();
    if (!is_prime_number(v)) fail(where, std::to_string(v) + " is not prime");
    return Field::prime(v);
  }
  fail(where, "field must be \"rational\" or {\"prime\": p}");
}

Scalar scalar_of(const json& j, const Field& f, const std::string& where) {
  if (j.is_number_integer()) return f.from_int(j.get<long>());
  if (j.is_string()) return parse_scalar(j.get<std::string>(), f);
  fail(where, "coefficient must be an integer or a string \"a/b\"");
}

int vertex_of(const json& j, const char* key, int vertices, const std::string& where) {
  int v = need_int(j, key, where);
  if (v < 1 || v > vertices) fail(where, "vertex " + std::to_string(v) + " out of range 1.." + std::to_string(vertices));
  return v - 1;
}

SummandKind kind_of(const std::string& s, const std::string& where) {
  if (s == "P") return SummandKind::P;
  if (s == "I") return SummandKind::I;
  if (s == "S") return SummandKind::S;
  fail(where, "module must be \"P\", \"I\" or \"S\"");
}

int shift_of(const json& j, const std::string& where) {
  if (!j.contains("shift")) return 0;
  if (!j.at("shift").is_number_integer()) fail(where, "shift must be an integer");
  return j.at("shift").get<int>();
}

int degree_key(const std::string& k, const std::string& where) {
  try {
    std::size_t used = 0;
    int v = std::stoi(k, &used);
    if (used != k.size()) throw std::invalid_argument(k);
    return v;
  } catch (const std::exception&) {
    fail(where, "degree key '" + k + "' is not an integer");
  }
}

Complex parse_object(const json& j, const AlgebraPtr& a, const std::string& where, std::string& name) {
  if (!j.is_object()) fail(where, "collection entries must be objects");
  int s = shift_of(j, where);
  if (j.contains("module")) {
    SummandKind k = kind_of(need_string(j, "module", where), where);
    int v = vertex_of(j, "vertex", a->vertices(), where);
    Summand sm = make_summand(a, k, v);
    name = sm.name() + (s ? "[" + std::to_string(s) + "]" : "");
    return Complex::stalk(sm, -s);
  }
  const json& terms = need(j, "terms", where);
  if (!terms.is_object() || terms.empty()) fail(where, "'terms' must be a nonempty object keyed by degree");
  std::map<int, std::vector<Summand>> by_degree;
  for (const auto& [key, list] : terms.items()) {
    int deg = degree_key(key, where);
    if (!list.is_array()) fail(where, "terms of degree " + key + " must be a list");
    std::vector<Summand> ss;
    for (const auto& e : list) {
      SummandKind k = kind_of(need_string(e, "module", where), where);
      ss.push_back(make_summand(a, k, vertex_of(e, "vertex", a->vertices(), where)));
    }
    by_degree[deg] = std::move(ss);
  }
  int lo = by_degree.begin()->first, hi = by_degree.rbegin()->first;
  std::vector<std::vector<Summand>> tv;
  std::vector<std::size_t> dims;
  for (int n = lo; n <= hi; ++n) {
    auto it = by_degree.find(n);
    tv.push_back(it == by_degree.end() ? std::vector<Summand>{} : it->second);
    std::size_t d = 0;
    for (const auto& sm : tv.back()) d += sm.module.dim();
    dims.push_back(d);
  }
  std::map<int, json> diffs;
  if (j.contains("differentials")) {
    const json& dj = j.at("differentials");
    if (!dj.is_object()) fail(where, "'differentials' must be an object keyed by degree");
    for (const auto& [key, m] : dj.items()) diffs[degree_key(key, where)] = m;
  }
  const Field& f = a->field();
  std::vector<Mat> mats;
  for (int n = lo; n < hi; ++n) {
    std::size_t r = dims[static_cast<std::size_t>(n - lo)], c = dims[static_cast<std::size_t>(n - lo + 1)];
    Mat m(f, r, c);
    auto it = diffs.find(n);
    if (it != diffs.end()) {
      const json& rows = it->second;
      if (!rows.is_array() || rows.size() != r)
        fail(where, "d^" + std::to_string(n) + " must have " + std::to_string(r) + " rows");
      for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c)
          fail(where, "d^" + std::to_string(n) + " must have " + std::to_string(c) + " columns");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = scalar_of(rows[i][k], f, where);
      }
      diffs.erase(it);
    }
    mats.push_back(std::move(m));
  }
  if (!diffs.empty()) fail(where, "differential d^" + std::to_string(diffs.begin()->first) + " is outside the support");
  Complex x;
  try {
    x = Complex(a, lo, std::move(tv), std::move(mats));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  std::string why = x.check();
  if (!why.empty()) fail(where, "invalid complex: " + why);
  if (s) x = shift(x, s);
  name = x.describe();
  return x;
}

std::vector<Complex> collection_from(const json& j, const AlgebraPtr& a, std::vector<std::string>* names,
                                     const std::string& where) {
  std::vector<Complex> xs;
  std::vector<std::string> ns;
  auto simples_with = [&](const std::vector<int>& shifts) {
    for (int v = 0; v < a->vertices(); ++v) {
      int s = shifts[static_cast<std::size_t>(v)];
      xs.push_back(Complex::stalk(make_summand(a, SummandKind::S, v), -s));
      ns.push_back("S" + std::to_string(v + 1) + (s ? "[" + std::to_string(s) + "]" : ""));
    }
  };
  if (j.is_string() || (j.is_object() && j.contains("preset"))) {
    std::string preset = j.is_string() ? j.get<std::string>() : need_string(j, "preset", where);
    if (preset == "simples") {
      simples_with(std::vector<int>(static_cast<std::size_t>(a->vertices()), 0));
    } else if (preset == "shifted") {
      if (!j.is_object()) fail(where, "preset \"shifted\" needs a 'shifts' list");
      const json& sh = need(j, "shifts", where);
      if (!sh.is_array() || static_cast<int>(sh.size()) != a->vertices())
        fail(where, "'shifts' must list one integer per vertex");
      std::vector<int> shifts;
      for (const auto& v : sh) {
        if (!v.is_number_integer()) fail(where, "shifts must be integers");
        shifts.push_back(v.get<int>());
      }
      simples_with(shifts);
    } else {
      fail(where, "unknown preset '" + preset + "'");
    }
  } else if (j.is_array()) {
    if (j.empty()) fail(where, "empty collection");
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::string nm;
      xs.push_back(parse_object(j[i], a, where + ": object " + std::to_string(i + 1), nm));
      ns.push_back(nm);
    }
  } else {
    fail(where, "collection must be a preset or a list of objects");
  }
  if (names) *names = ns;
  return xs;
}

AlgebraPtr algebra_from(const json& j, std::string* name, const std::string& where) {
  if (!j.is_object()) fail(where, "algebra must be an object");
  Field f = parse_field(need(j, "field", where), where);
  const json& q = need(j, "quiver", where);
  Quiver quiver;
  quiver.vertices = need_int(q, "vertices", where);
  if (quiver.vertices < 1) fail(where, "quiver needs at least one vertex");
  std::set<std::string> labels;
  if (q.contains("arrows")) {
    if (!q.at("arrows").is_array()) fail(where, "'arrows' must be a list");
    for (const auto& a : q.at("arrows")) {
      Arrow arr;
      arr.from = vertex_of(a, "from", quiver.vertices, where);
      arr.to = vertex_of(a, "to", quiver.vertices, where);
      arr.label = need_string(a, "label", where);
      if (arr.label.empty()) fail(where, "empty arrow label");
      if (!labels.insert(arr.label).second) fail(where, "duplicate arrow label '" + arr.label + "'");
      quiver.arrows.push_back(arr);
    }
  }
  std::vector<Relation> rels;
  if (j.contains("relations")) {
    if (!j.at("relations").is_array()) fail(where, "'relations' must be a list");
    for (const auto& r : j.at("relations")) {
      const json& terms = need(r, "terms", where);
      if (!terms.is_array() || terms.empty()) fail(where, "relation terms must be a nonempty list");
      Relation rel;
      for (const auto& t : terms) {
        PathTerm pt;
        pt.coeff = scalar_of(need(t, "coeff", where), f, where);
        const json& path = need(t, "path", where);
        if (!path.is_array() || path.empty()) fail(where, "relation path must be a nonempty list of labels");
        for (const auto& l : path) {
          if (!l.is_string() || !labels.count(l.get<std::string>())) fail(where, "unknown arrow in relation path");
          pt.path.push_back(l.get<std::string>());
        }
        rel.push_back(std::move(pt));
      }
      rels.push_back(std::move(rel));
    }
  }
  if (name) *name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  try {
    return algebra_from_quiver(quiver, rels, f);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

int positive_param(const json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

std::string to_string(Policy p) { return p == Policy::Proceed ? "proceed" : "strict"; }

Policy parse_policy(const std::string& s) {
  if (s == "proceed") return Policy::Proceed;
  if (s == "strict") return Policy::Strict;
  throw ParseError("policy must be \"proceed\" or \"strict\", got '" + s + "'");
}

Scalar parse_scalar(const std::string& s, const Field& f) {
  std::string t = s;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  auto valid_int = [](const std::string& x) {
    std::size_t i = (!x.empty() && x[0] == '-') ? 1 : 0;
    if (i >= x.size()) return false;
    for (; i < x.size(); ++i)
      if (x[i] < '0' || x[i] > '9') return false;
    return true;
  };
  auto slash = t.find('/');
  std::string num = t.substr(0, slash), den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-') throw ParseError("invalid coefficient '" + s + "'");
  mpz_class n(num), d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  try {
    return f.reduce(Scalar(n, d));
  } catch (const LinalgError& e) {
    throw ParseError("coefficient '" + s + "': " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlgebraPtr parse_algebra_text(const std::string& text, std::string* name) {
  return algebra_from(parse_json(text, "algebra"), name, "algebra");
}

AlgebraPtr load_algebra(const std::filesystem::path& path, std::string* name) {
  return algebra_from(parse_json(read_file(path), path.string()), name, path.string());
}

std::vector<Complex> parse_collection_text(const std::string& text, const AlgebraPtr& a,
                                           std::vector<std::string>* names) {
  return collection_from(parse_json(text, "collection"), a, names, "collection");
}

JobSpec parse_job_text(const std::string& text, const std::filesystem::path& base_dir) {
  const std::string where = "job";
  json j = parse_json(text, where);
  if (!j.is_object()) fail(where, "job must be an object");
  JobSpec job;
  job.name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "job";
  const json& alg = need(j, "algebra", where);
  if (alg.is_string()) {
    auto p = base_dir / alg.get<std::string>();
    job.algebra = load_algebra(p, &job.algebra_name);
    if (job.algebra_name.empty()) job.algebra_name = p.stem().string();
  } else {
    job.algebra = algebra_from(alg, &job.algebra_name, where + ": algebra");
  }
  job.collection = collection_from(need(j, "collection", where), job.algebra, &job.collection_names, where);
  job.window = positive_param(j, "window", job.window, where);
  job.budget = positive_param(j, "budget", job.budget, where);
  job.length = positive_param(j, "length", job.length, where);
  job.arity_cap = positive_param(j, "arity_cap", job.arity_cap, where);
  if (j.contains("policy")) {
    if (!j.at("policy").is_string()) fail(where, "'policy' must be a string");
    job.policy = parse_policy(j.at("policy").get<std::string>());
  }
  validate_job(job);
  return job;
}

JobSpec load_job(const std::filesystem::path& path) {
  JobSpec job;
  try {
    job = parse_job_text(read_file(path), path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  job.source = path;
  return job;
}

void apply_overrides(JobSpec& job, const JobOverrides& o) {
  if (o.window) job.window = *o.window;
  if (o.budget) job.budget = *o.budget;
  if (o.length) job.length = *o.length;
  if (o.arity_cap) job.arity_cap = *o.arity_cap;
  if (o.policy) job.policy = *o.policy;
  validate_job(job);
}

void validate_job(const JobSpec& job) {
  if (job.window < 1) throw ParseError("window must be positive");
  if (job.budget < 1) throw ParseError("budget must be positive");
  if (job.length < 0) throw ParseError("length must be positive (0 selects the default)");
  if (job.arity_cap < 2) throw ParseError("arity cap must be at least 2");
  if (job.collection.empty()) throw ParseError("empty collection");
}

DgAlgebraPtr parse_dg_algebra_text(const std::string& text) {
  const std::string where = "dg algebra";
  json j = parse_json(text, where);
  DgAlgebra::Spec s;
  s.field = parse_field(need(j, "field", where), where);
  int r = need_int(j, "vertices", where);
  if (r < 1) fail(where, "at least one vertex is required");
  const json& basis = need(j, "basis", where);
  if (!basis.is_array()) fail(where, "'basis' must be a list");
  std::map<std::string, std::size_t> index;
  for (const auto& b : basis) {
    std::string l = need_string(b, "label", where);
    if (!index.emplace(l, s.labels.size()).second) fail(where, "duplicate basis label '" + l + "'");
    s.labels.push_back(l);
    s.degree.push_back(need_int(b, "degree", where));
    s.left_vertex.push_back(vertex_of(b, "from", r, where));
    s.right_vertex.push_back(vertex_of(b, "to", r, where));
  }
  auto lookup = [&](const json& l) {
    if (!l.is_string() || !index.count(l.get<std::string>())) fail(where, "unknown basis label");
    return index.at(l.get<std::string>());
  };
  std::size_t n = s.labels.size();
  if (j.contains("idempotents")) {
    for (const auto& l : j.at("idempotents")) s.idempotents.push_back(lookup(l));
  } else {
    for (int v = 1; v <= r; ++v) s.idempotents.push_back(lookup(json("e" + std::to_string(v))));
  }
  if (static_cast<int>(s.idempotents.size()) != r) fail(where, "one idempotent per vertex is required");
  auto vec_of = [&](const json& terms) {
    SparseVec v;
    if (!terms.is_array()) fail(where, "linear combinations must be lists of {coeff, label}");
    for (const auto& t : terms) v.emplace_back(lookup(need(t, "label", where)), scalar_of(need(t, "coeff", where), s.field, where));
    return v;
  };
  s.d = Mat(s.field, n, n);
  if (j.contains("d"))
    for (const auto& e : j.at("d")) {
      std::size_t from = lookup(need(e, "from", where));
      for (const auto& [k, c] : vec_of(need(e, "to", where))) s.d(from, k) = s.field.add(s.d(from, k), c);
    }
  s.products.assign(n, std::vector<SparseVec>(n));
  std::vector<bool> is_idem(n, false);
  for (std::size_t e : s.idempotents) is_idem[e] = true;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t v = 0; v < static_cast<std::size_t>(r); ++v) {
      std::size_t e = s.idempotents[v];
      if (s.left_vertex[x] == static_cast<int>(v)) s.products[e][x] = {{x, s.field.from_int(1)}};
      if (s.right_vertex[x] == static_cast<int>(v)) s.products[x][e] = {{x, s.field.from_int(1)}};
    }
  if (j.contains("products"))
    for (const auto& p : j.at("products")) {
      std::size_t l = lookup(need(p, "left", where)), rr = lookup(need(p, "right", where));
      if (is_idem[l] || is_idem[rr]) fail(where, "products with idempotents are implied by the vertex data");
      s.products[l][rr] = vec_of(need(p, "result", where));
    }
  DgAlgebraPtr a;
  try {
    a = DgAlgebra::create(std::move(s));
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
  std::string why = a->check();
  if (!why.empty()) fail(where, "invalid dg algebra: " + why);
  return a;
}

DgAlgebraPtr load_dg_algebra(const std::filesystem::path& path) {
  try {
    return parse_dg_algebra_text(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace tilt
