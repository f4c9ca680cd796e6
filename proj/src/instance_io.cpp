#include "helly/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "helly/error.hpp"
#include "json.hpp"

namespace helly {

namespace {

using json = nlohmann::ordered_json;

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double get_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::InvalidInput, "expected a number, got " + j.dump());
}

json vec(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Vec get_vec(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected an array, got " + j.dump());
  Vec out;
  out.reserve(j.size());
  for (const json& x : j) out.push_back(get_num(x));
  return out;
}

json idx(std::span<const std::size_t> v) { return json(std::vector<std::size_t>(v.begin(), v.end())); }

std::vector<std::size_t> get_idx(const json& j) { return j.get<std::vector<std::size_t>>(); }

json vecs(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const Vec& v : vs) a.push_back(vec(v));
  return a;
}

std::vector<Vec> get_vecs(const json& j) {
  std::vector<Vec> out;
  for (const json& v : j) out.push_back(get_vec(v));
  return out;
}

json sym(const SymMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Vec r(m.dim());
    for (std::size_t k = 0; k < m.dim(); ++k) r[k] = m(i, k);
    rows.push_back(vec(r));
  }
  return rows;
}

SymMatrix get_sym(const json& j) {
  SymMatrix m(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec r = get_vec(j[i]);
    if (r.size() != j.size()) throw Error(ErrorCode::InvalidInput, "matrix is not square");
    for (std::size_t k = i; k < r.size(); ++k) m.set(i, k, r[k]);
  }
  return m;
}

std::string mode_name(FamilyMode m) { return m == FamilyMode::Symmetric ? "symmetric" : "general"; }

FamilyMode get_mode(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == "symmetric") return FamilyMode::Symmetric;
  if (s == "general") return FamilyMode::General;
  throw Error(ErrorCode::InvalidInput, "unknown mode '" + s + "'");
}

json john_json(const JohnRecord& r) {
  json j;
  j["vectors"] = vecs(r.vectors);
  j["weights"] = vec(r.weights);
  j["sources"] = idx(r.sources);
  j["owners"] = idx(r.owners);
  j["lowner_map"] = sym(r.lowner_map);
  j["center"] = vec(r.center);
  j["residual_identity"] = num(r.residual_identity);
  j["residual_barycenter"] = num(r.residual_barycenter);
  j["residual_trace"] = num(r.residual_trace);
  j["max_unit_deviation"] = num(r.max_unit_deviation);
  j["mvee_gap"] = num(r.mvee_gap);
  j["mvee_iterations"] = r.mvee_iterations;
  return j;
}

JohnRecord get_john(const json& j) {
  JohnRecord r;
  r.vectors = get_vecs(j.at("vectors"));
  r.weights = get_vec(j.at("weights"));
  r.sources = get_idx(j.at("sources"));
  r.owners = get_idx(j.at("owners"));
  r.lowner_map = get_sym(j.at("lowner_map"));
  r.center = get_vec(j.at("center"));
  r.residual_identity = get_num(j.at("residual_identity"));
  r.residual_barycenter = get_num(j.at("residual_barycenter"));
  r.residual_trace = get_num(j.at("residual_trace"));
  r.max_unit_deviation = get_num(j.at("max_unit_deviation"));
  r.mvee_gap = get_num(j.at("mvee_gap"));
  r.mvee_iterations = j.at("mvee_iterations").get<long>();
  return r;
}

json symmetric_json(const SymmetricStage& s) {
  json j;
  j["d"] = num(s.d);
  j["gamma"] = num(s.gamma);
  j["sigma"] = idx(s.sigma);
  j["b"] = vec(s.b);
  j["lambda_min"] = num(s.lambda_min);
  j["lambda_max"] = num(s.lambda_max);
  j["barvinok_samples"] = s.barvinok_samples;
  j["barvinok_worst"] = num(s.barvinok_worst);
  return j;
}

SymmetricStage get_symmetric(const json& j) {
  SymmetricStage s;
  s.d = get_num(j.at("d"));
  s.gamma = get_num(j.at("gamma"));
  s.sigma = get_idx(j.at("sigma"));
  s.b = get_vec(j.at("b"));
  s.lambda_min = get_num(j.at("lambda_min"));
  s.lambda_max = get_num(j.at("lambda_max"));
  s.barvinok_samples = j.at("barvinok_samples").get<std::size_t>();
  s.barvinok_worst = get_num(j.at("barvinok_worst"));
  return s;
}

json general_json(const GeneralStage& g) {
  const ShiftedDecomposition& s = g.shifted;
  json sh;
  sh["d"] = num(s.d);
  sh["sigma"] = idx(s.sigma);
  sh["b"] = vec(s.b);
  sh["v"] = vec(s.v);
  sh["sum_b"] = num(s.sum_b);
  sh["barycenter_residual"] = num(s.barycenter_residual);
  sh["shift_norm_sq"] = num(s.shift_norm_sq);
  sh["shifted_min"] = num(s.shifted_min);
  sh["shifted_max"] = num(s.shifted_max);
  sh["operator_t"] = {{"t_norm", num(s.operator_t.t_norm)},
                      {"t_eigen", num(s.operator_t.t_eigen)},
                      {"t_pass", s.operator_t.t_pass},
                      {"a_min", num(s.operator_t.a_min)},
                      {"a_max", num(s.operator_t.a_max)},
                      {"a_pass", s.operator_t.a_pass},
                      {"trace_residual", num(s.operator_t.trace_residual)}};
  sh["barycenter_pass"] = s.barycenter_pass;
  sh["shift_pass"] = s.shift_pass;
  sh["sum_pass"] = s.sum_pass;
  sh["shifted_pass"] = s.shifted_pass;
  sh["trail"] = s.trail;

  const CaratheodoryWitness& c = g.caratheodory;
  json j;
  j["eps"] = num(g.eps);
  j["shifted"] = sh;
  j["w"] = vec(g.w);
  j["w_norm"] = num(g.w_norm);
  j["caratheodory"] = {{"tau", idx(c.tau)},
                       {"rho", vec(c.rho)},
                       {"target", vec(c.target)},
                       {"residual", num(c.residual)},
                       {"sum_residual", num(c.sum_residual)}};
  j["size_budget"] = g.size_budget;
  j["recenter_iterations"] = g.recenter_iterations;
  j["recenter_offset"] = num(g.recenter_offset);
  return j;
}

GeneralStage get_general(const json& j) {
  GeneralStage g;
  g.eps = get_num(j.at("eps"));
  const json& sh = j.at("shifted");
  ShiftedDecomposition& s = g.shifted;
  s.eps = g.eps;
  s.d = get_num(sh.at("d"));
  s.sigma = get_idx(sh.at("sigma"));
  s.b = get_vec(sh.at("b"));
  s.v = get_vec(sh.at("v"));
  s.sum_b = get_num(sh.at("sum_b"));
  s.barycenter_residual = get_num(sh.at("barycenter_residual"));
  s.shift_norm_sq = get_num(sh.at("shift_norm_sq"));
  s.shifted_min = get_num(sh.at("shifted_min"));
  s.shifted_max = get_num(sh.at("shifted_max"));
  const json& t = sh.at("operator_t");
  s.operator_t.t_norm = get_num(t.at("t_norm"));
  s.operator_t.t_eigen = get_num(t.at("t_eigen"));
  s.operator_t.t_pass = t.at("t_pass").get<bool>();
  s.operator_t.a_min = get_num(t.at("a_min"));
  s.operator_t.a_max = get_num(t.at("a_max"));
  s.operator_t.a_pass = t.at("a_pass").get<bool>();
  s.operator_t.trace_residual = get_num(t.at("trace_residual"));
  s.barycenter_pass = sh.at("barycenter_pass").get<bool>();
  s.shift_pass = sh.at("shift_pass").get<bool>();
  s.sum_pass = sh.at("sum_pass").get<bool>();
  s.shifted_pass = sh.at("shifted_pass").get<bool>();
  s.trail = sh.at("trail").get<std::vector<std::string>>();

  g.w = get_vec(j.at("w"));
  g.w_norm = get_num(j.at("w_norm"));
  const json& c = j.at("caratheodory");
  g.caratheodory.tau = get_idx(c.at("tau"));
  g.caratheodory.rho = get_vec(c.at("rho"));
  g.caratheodory.target = get_vec(c.at("target"));
  g.caratheodory.residual = get_num(c.at("residual"));
  g.caratheodory.sum_residual = get_num(c.at("sum_residual"));
  g.size_budget = j.at("size_budget").get<std::size_t>();
  g.recenter_iterations = j.at("recenter_iterations").get<std::size_t>();
  g.recenter_offset = get_num(j.at("recenter_offset"));
  return g;
}

json reduction_json(const ReductionRecord& r) {
  json steps = json::array();
  for (const ReductionStep& s : r.steps)
    steps.push_back({{"dropped", s.dropped},
                     {"m", s.m},
                     {"radius_before", num(s.radius_before)},
                     {"radius_after", num(s.radius_after)},
                     {"growth", num(s.growth)},
                     {"bound", num(s.bound)},
                     {"pass", s.pass}});
  json j;
  j["start"] = idx(r.start);
  j["steps"] = steps;
  j["cumulative_growth"] = num(r.cumulative_growth);
  j["binomial_bound"] = num(r.binomial_bound);
  j["diameter_ratio_start"] = num(r.diameter_ratio_start);
  j["diameter_ratio_final"] = num(r.diameter_ratio_final);
  j["alpha_start"] = num(r.alpha_start);
  return j;
}

ReductionRecord get_reduction(const json& j) {
  ReductionRecord r;
  r.start = get_idx(j.at("start"));
  for (const json& s : j.at("steps")) {
    ReductionStep st;
    st.dropped = s.at("dropped").get<std::size_t>();
    st.m = s.at("m").get<std::size_t>();
    st.radius_before = get_num(s.at("radius_before"));
    st.radius_after = get_num(s.at("radius_after"));
    st.growth = get_num(s.at("growth"));
    st.bound = get_num(s.at("bound"));
    st.pass = s.at("pass").get<bool>();
    r.steps.push_back(st);
  }
  r.cumulative_growth = get_num(j.at("cumulative_growth"));
  r.binomial_bound = get_num(j.at("binomial_bound"));
  r.diameter_ratio_start = get_num(j.at("diameter_ratio_start"));
  r.diameter_ratio_final = get_num(j.at("diameter_ratio_final"));
  r.alpha_start = get_num(j.at("alpha_start"));
  return r;
}

}  // namespace

BodyFamily instance_from_json(std::string_view text) {
  BodyFamily f;
  try {
    const json j = json::parse(text);
    f.mode = get_mode(j.at("mode"));
    f.dim = j.at("dimension").get<std::size_t>();
    for (const json& b : j.at("bodies")) {
      Body body;
      body.id = b.at("id").get<std::string>();
      for (const json& c : b.at("constraints")) body.constraints.push_back({get_vec(c.at("a")), get_num(c.at("c"))});
      f.bodies.push_back(std::move(body));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("instance: ") + e.what());
  }
  validate_family(f);
  return f;
}

std::string instance_to_json(const BodyFamily& family) {
  json bodies = json::array();
  for (const Body& b : family.bodies) {
    json cs = json::array();
    for (const Halfspace& h : b.constraints) cs.push_back({{"a", vec(h.normal)}, {"c", num(h.offset)}});
    bodies.push_back({{"id", b.id}, {"constraints", cs}});
  }
  json j;
  j["mode"] = mode_name(family.mode);
  j["dimension"] = family.dim;
  j["bodies"] = bodies;
  return j.dump(1) + "\n";
}

std::string certificate_to_json(const SelectionCertificate& c) {
  json j;
  j["tool"] = "helly_cli";
  j["version"] = kToolVersion;
  j["mode"] = mode_name(c.mode);
  j["dimension"] = c.dim;
  j["body_count"] = c.body_count;
  j["constraint_count"] = c.constraint_count;
  j["seed"] = c.seed;
  json params;
  params["tol"] = num(c.tol_john);
  if (c.symmetric) params["d"] = num(c.symmetric->d);
  if (c.general) params["eps"] = num(c.general->eps);
  j["parameters"] = params;
  j["s"] = c.selected.size();
  j["selected"] = idx(c.selected);
  j["selected_ids"] = c.selected_ids;
  j["translate"] = vec(c.translate);
  j["bound_claimed"] = num(c.bound_claimed);
  j["alpha"] = num(c.alpha);
  j["c"] = num(c.c_reported);
  j["size_bound"] = c.size_bound;
  if (c.alpha_exact) j["alpha_exact"] = num(*c.alpha_exact);
  if (c.diameter)
    j["diameter"] = {{"exact", c.diameter->exact},
                     {"diam_selected", num(c.diameter->diam_selected)},
                     {"diam_full", num(c.diameter->diam_full)},
                     {"ratio", num(c.diameter->ratio)}};
  json verdicts = json::array();
  for (const auto& [name, pass] : c.verdicts) verdicts.push_back({{"name", name}, {"pass", pass}});
  j["all_pass"] = c.all_pass();
  j["verdicts"] = verdicts;
  j["notes"] = c.notes;
  if (c.runtime_seconds) j["runtime_seconds"] = num(*c.runtime_seconds);
  j["john"] = john_json(c.john);
  if (c.symmetric) j["symmetric"] = symmetric_json(*c.symmetric);
  if (c.general) j["general"] = general_json(*c.general);
  if (c.reduction) j["reduction"] = reduction_json(*c.reduction);
  return j.dump(1) + "\n";
}

SelectionCertificate certificate_from_json(std::string_view text) {
  SelectionCertificate c;
  try {
    const json j = json::parse(text);
    c.mode = get_mode(j.at("mode"));
    c.dim = j.at("dimension").get<std::size_t>();
    c.body_count = j.at("body_count").get<std::size_t>();
    c.constraint_count = j.at("constraint_count").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.tol_john = get_num(j.at("parameters").at("tol"));
    c.selected = get_idx(j.at("selected"));
    c.selected_ids = j.at("selected_ids").get<std::vector<std::string>>();
    c.translate = get_vec(j.at("translate"));
    c.bound_claimed = get_num(j.at("bound_claimed"));
    c.alpha = get_num(j.at("alpha"));
    c.c_reported = get_num(j.at("c"));
    c.size_bound = j.at("size_bound").get<std::size_t>();
    if (j.contains("alpha_exact")) c.alpha_exact = get_num(j["alpha_exact"]);
    if (j.contains("diameter")) {
      const json& d = j["diameter"];
      c.diameter = DiameterReport{d.at("exact").get<bool>(), get_num(d.at("diam_selected")),
                                  get_num(d.at("diam_full")), get_num(d.at("ratio"))};
    }
    for (const json& v : j.at("verdicts")) c.verdicts.emplace_back(v.at("name").get<std::string>(), v.at("pass").get<bool>());
    c.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("runtime_seconds")) c.runtime_seconds = get_num(j["runtime_seconds"]);
    c.john = get_john(j.at("john"));
    if (j.contains("symmetric")) c.symmetric = get_symmetric(j["symmetric"]);
    if (j.contains("general")) c.general = get_general(j["general"]);
    if (j.contains("reduction")) c.reduction = get_reduction(j["reduction"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("certificate: ") + e.what());
  }
  if ((c.mode == FamilyMode::Symmetric) != c.symmetric.has_value() ||
      (c.mode == FamilyMode::General) != c.general.has_value())
    throw Error(ErrorCode::InvalidInput, "certificate: stage record does not match the mode");
  return c;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + path.string());
}

}  // namespace helly
