#include "tilt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

#include "tilt/ainf.hpp"
#include "tilt/derived.hpp"
#include "tilt/presentation.hpp"
#include "tilt/rickard.hpp"

#ifndef TILT_VERSION
#define TILT_VERSION "0.0.0"
#endif

namespace tilt {

std::string tool_version() { return std::string("tilt ") + TILT_VERSION; }

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Validate: return "validate";
    case Stage::Rickard: return "rickard";
    case Stage::Tilt: return "tilt";
    case Stage::Gamma: return "gamma";
    case Stage::AInf: return "ainf";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Inconclusive: return "INCONCLUSIVE";
    case Outcome::InternalError: return "INTERNAL_ERROR";
  }
  return "?";
}

void ReportSection::add(const std::string& key, const std::string& value, bool verdict, bool certified) {
  fields.push_back({key, value, verdict, certified});
}

std::string Report::render() const {
  std::ostringstream out;
  out << "tool: " << tool_version << "\n";
  for (const auto& s : sections) {
    out << "[" << s.name << "]\n";
    for (const auto& f : s.fields) out << f.key << ": " << f.value << (f.certified ? "" : "  (uncertified)") << "\n";
  }
  out << "[outcome]\n";
  out << "result: " << to_string(outcome) << "\n";
  if (!outcome_stage.empty()) out << "stage: " << outcome_stage << "\n";
  if (!outcome_reason.empty()) out << "reason: " << outcome_reason << "\n";
  out << "[timings_ms]\n";
  for (const auto& [k, v] : timings_ms) {
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(1);
    t << v;
    out << k << ": " << t.str() << "\n";
  }
  return out.str();
}

std::string Report::verdict_text() const {
  std::ostringstream out;
  for (const auto& s : sections)
    for (const auto& f : s.fields)
      if (f.verdict) out << s.name << "." << f.key << " = " << f.value << "\n";
  out << "outcome.result = " << to_string(outcome) << "\n";
  if (!outcome_stage.empty()) out << "outcome.stage = " << outcome_stage << "\n";
  return out.str();
}

std::optional<std::string> Report::value(const std::string& path) const {
  auto dot = path.find('.');
  if (dot == std::string::npos) return std::nullopt;
  std::string sec = path.substr(0, dot), key = path.substr(dot + 1);
  if (sec == "outcome" && key == "result") return to_string(outcome);
  if (sec == "outcome" && key == "stage") return outcome_stage;
  const ReportSection* s = section(sec);
  if (!s) return std::nullopt;
  for (const auto& f : s->fields)
    if (f.key == key) return f.value;
  return std::nullopt;
}

const ReportSection* Report::section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string dims_text(const std::map<int, std::size_t>& d) {
  std::string s;
  for (const auto& [m, n] : d) {
    if (!n) continue;
    if (!s.empty()) s += " ";
    s += std::to_string(m) + ":" + std::to_string(n);
  }
  return s.empty() ? "0" : s;
}

template <class T>
std::string matrix_text(const std::vector<std::vector<T>>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += (i ? ",[" : "[");
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? "," : "") + std::to_string(m[i][j]);
    s += "]";
  }
  return s + "]";
}

std::string list_text(const std::vector<std::size_t>& v, int offset = 1) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(static_cast<long>(v[i]) + offset);
  return s.empty() ? "none" : s;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string tri(const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "unknown"; }

std::string witnesses_text(const std::vector<SmoWitness>& ws) {
  std::string s;
  for (const auto& w : ws) {
    if (!s.empty()) s += " ";
    s += "(" + std::to_string(w.i + 1) + "," + std::to_string(w.j + 1) + ",m=" + std::to_string(w.m) +
         ",dim=" + std::to_string(w.dim) + ")";
  }
  return s.empty() ? "none" : s;
}

int severity(Outcome o) {
  switch (o) {
    case Outcome::Pass: return 0;
    case Outcome::Inconclusive: return 1;
    case Outcome::Fail: return 2;
    case Outcome::InternalError: return 3;
  }
  return 0;
}

struct Run {
  Report report;
  // Certified table values (m -> dim, zeros included) keyed by name; used by
  // the honesty comparison.
  std::map<std::string, std::map<int, std::size_t>> tables;

  void mark(Outcome o, Stage s, const std::string& reason) {
    if (severity(o) <= severity(report.outcome)) return;
    report.outcome = o;
    report.outcome_stage = to_string(s);
    report.outcome_reason = reason;
  }
  void time(const std::string& k, Clock::time_point t0) {
    report.timings_ms.emplace_back(k, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
};

std::string xname(std::size_t i) { return "X" + std::to_string(i + 1); }

Run run(const JobSpec& job, Stage until) {
  Run R;
  Report& rep = R.report;
  rep.tool_version = tool_version();
  const auto& xs = job.collection;
  const AlgebraPtr& a = job.algebra;
  int length = job.length > 0 ? job.length : default_length(a, xs);
  int w = job.window;

  ReportSection params{"params", {}};
  params.add("job", job.name, false);
  params.add("algebra", job.algebra_name.empty() ? "inline" : job.algebra_name, false);
  params.add("field", a->field().name(), false);
  params.add("algebra_dim", std::to_string(a->dim()), false);
  std::string coll;
  for (std::size_t i = 0; i < job.collection_names.size(); ++i) coll += (i ? ", " : "") + job.collection_names[i];
  params.add("collection", coll, false);
  params.add("window", std::to_string(w), false);
  params.add("budget", std::to_string(job.budget), false);
  params.add("length", std::to_string(length) + (job.length > 0 ? "" : " (default)"), false);
  params.add("arity_cap", std::to_string(job.arity_cap), false);
  params.add("policy", to_string(job.policy), false);
  params.add("stage", to_string(until), false);
  rep.sections.push_back(params);

  // --- validate
  auto t0 = Clock::now();
  ReportSection val{"validate", {}};
  SmoReport smo;
  try {
    smo = validate_simple_minded(xs, length, static_cast<std::size_t>(std::max(0, job.budget)) * 8);
  } catch (const std::exception& e) {
    val.add("error", e.what());
    rep.sections.push_back(val);
    R.mark(Outcome::Inconclusive, Stage::Validate, e.what());
    R.time("validate", t0);
    return R;
  }
  val.add("objects", std::to_string(smo.r));
  val.add("cond1_no_negative_homs", yes_no(smo.cond1), true, smo.certified);
  val.add("cond1_witnesses", witnesses_text(smo.cond1_witnesses), true, smo.certified);
  val.add("cond2_schurian_orthogonal", yes_no(smo.cond2), true, smo.certified);
  val.add("cond2_witnesses", witnesses_text(smo.cond2_witnesses), true, smo.certified);
  val.add("cond3_generation", to_string(smo.cond3), true, smo.certified);
  if (!smo.smith.empty()) {
    std::string s;
    for (std::size_t i = 0; i < smo.smith.size(); ++i) s += (i ? " " : "") + smo.smith[i].get_str();
    val.add("euler_smith_form", s, true, smo.certified);
  }
  if (!smo.cond3_note.empty()) val.add("cond3_note", smo.cond3_note, false);
  val.add("certified", yes_no(smo.certified));
  std::string vverdict = !smo.passes() ? "FAIL" : (smo.cond3 == Cond3::PassNecessary ? "PASS_NECESSARY" : "PASS");
  val.add("verdict", vverdict, true, smo.certified);
  // Hom tables between the objects of the collection.
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) {
      HomTable h = derived_hom(xs[i], xs[j], length);
      std::map<int, std::size_t> cert;
      for (int m = -w; m <= w; ++m)
        if (h.certified(m)) cert[m] = h.at(m);
      std::string key = "hom." + xname(i) + "." + xname(j);
      R.tables[key] = cert;
      int hi = w;
      while (hi >= -w && !h.certified(hi)) --hi;
      val.add(key, dims_text(cert), true, true);
      val.add(key + ".certified", hi >= w ? "all" : "<=" + std::to_string(hi), false);
    }
  rep.sections.push_back(val);
  R.time("validate", t0);
  if (!smo.passes()) {
    R.mark(Outcome::Fail, Stage::Validate, "the collection is not simple-minded");
    return R;
  }
  if (!smo.certified || smo.cond3 == Cond3::PassNecessary) {
    std::string why = !smo.certified ? "validation not certified at this length" : "generation only necessary condition";
    if (job.policy == Policy::Strict) {
      R.mark(Outcome::Inconclusive, Stage::Validate, why);
      return R;
    }
  }
  if (until == Stage::Validate) return R;

  // --- rickard
  t0 = Clock::now();
  ReportSection ric{"rickard", {}};
  RickardResult rr;
  try {
    rr = rickard_construct(xs, {w, job.budget, job.length});
  } catch (const std::exception& e) {
    ric.add("error", e.what());
    rep.sections.push_back(ric);
    R.mark(Outcome::Inconclusive, Stage::Rickard, e.what());
    R.time("rickard", t0);
    return R;
  }
  ric.add("length", std::to_string(rr.length), false);
  for (std::size_t i = 0; i < rr.t.size(); ++i) {
    const auto& tr = rr.trace[i];
    std::string p = "T" + std::to_string(i + 1);
    ric.add(p + ".status", to_string(tr.status) + "(" + std::to_string(tr.status_step) + ")");
    ric.add(p + ".steps", std::to_string(tr.steps.size()), false);
    ric.add(p + ".certified", yes_no(tr.certified));
    ric.add(p, rr.t[i].describe(), true, tr.certified);
    ric.add(p + ".cohomology", dims_text(cohomology_dims(rr.t[i])), true, tr.certified);
  }
  {
    DefiningCheck dc = check_defining_property(xs, rr, -w, w);
    ric.add("defining_property", (dc.ok ? "ok on " : "fails on ") + std::string("[") + std::to_string(-w) + "," +
                                     std::to_string(w) + "]",
            true, rr.all_certified());
    if (!dc.ok) {
      std::string s;
      for (const auto& v : dc.violations)
        s += (s.empty() ? "" : " ") + std::string("(T") + std::to_string(v.i + 1) + ",X" + std::to_string(v.j + 1) +
             ",m=" + std::to_string(v.m) + ",dim=" + std::to_string(v.dim) + ")";
      ric.add("defining_violations", s, true, rr.all_certified());
    }
  }
  rep.sections.push_back(ric);
  R.time("rickard", t0);
  if (until == Stage::Rickard) {
    if (!rr.all_certified()) R.mark(Outcome::Inconclusive, Stage::Rickard, "some T_i is not certified");
    return R;
  }

  // --- tilt
  t0 = Clock::now();
  ReportSection til{"tilt", {}};
  TiltingReport tr;
  try {
    tr = check_tilting(rr);
  } catch (const InternalInvariantViolation& e) {
    til.add("error", e.what());
    rep.sections.push_back(til);
    R.mark(Outcome::InternalError, Stage::Tilt, e.what());
    return R;
  } catch (const std::exception& e) {
    til.add("error", e.what());
    rep.sections.push_back(til);
    R.mark(Outcome::Inconclusive, Stage::Tilt, e.what());
    return R;
  }
  bool decided = tr.verdict != Verdict::Inconclusive;
  for (std::size_t i = 0; i < tr.nu_inv_parts.size(); ++i)
    til.add("nu_inv_T" + std::to_string(i + 1), tr.nu_inv_parts[i].describe(), true, rr.trace[i].certified);
  til.add("gamma_tilde_cohomology", dims_text(tr.gamma_tilde_dims), true, decided);
  if (decided) {
    std::map<int, std::size_t> gt;
    for (int m = -w; m <= 0; ++m) gt[m] = tr.gamma_tilde_dims.count(m) ? tr.gamma_tilde_dims.at(m) : 0;
    R.tables["gamma_tilde"] = gt;
  }
  til.add("verdict", to_string(tr.verdict), true, decided);
  til.add("witness", tr.verdict == Verdict::NotTilting ? std::to_string(tr.witness) : "none", true, decided);
  if (!tr.note.empty()) til.add("note", tr.note, false);
  // Self-injective algebras: nu-stability and T = nu^{-1}T.
  if (projective_injective_permutation(a)) {
    try {
      SelfInjectiveReport si = self_injective_check(xs, &rr);
      std::vector<std::size_t> perm = si.nu_perm;
      til.add("self_injective", "yes");
      til.add("symmetric", tri(si.symmetric));
      til.add("nu_permutation", list_text(perm));
      bool nontrivial = false;
      for (std::size_t i = 0; i < perm.size(); ++i) nontrivial |= perm[i] != i;
      til.add("nu_permutes_nontrivially", yes_no(nontrivial));
      til.add("T_iso_nu_inv_T", tri(si.t_iso_nu_inv_t), true, rr.all_certified());
    } catch (const SelfInjectiveError& e) {
      til.add("self_injective", "yes");
      til.add("nu_stable", e.code() == SelfInjectiveError::Code::NotNuStable ? "no (X" + std::to_string(e.witness() + 1) + ")" : e.what());
    }
  }
  rep.sections.push_back(til);
  R.time("tilt", t0);
  if (tr.verdict == Verdict::NotTilting)
    R.mark(Outcome::Fail, Stage::Tilt, "H^" + std::to_string(tr.witness) + "(Gamma~) != 0");
  else if (!decided)
    R.mark(Outcome::Inconclusive, Stage::Tilt, tr.note.empty() ? "tilting verdict undecided" : tr.note);
  if (until == Stage::Tilt) return R;

  // --- gamma
  t0 = Clock::now();
  ReportSection gam{"gamma", {}};
  if (tr.gamma) {
    const AlgebraPtr& g = *tr.gamma;
    gam.add("dim", std::to_string(g->dim()), true, decided);
    gam.add("vertices", std::to_string(g->vertices()), true, decided);
    gam.add("cartan", matrix_text(tr.cartan), true, decided);
    try {
      Presentation p = present_algebra(g);
      gam.add("arrows", p.describe_arrows(), true, decided);
      gam.add("relations", p.describe_relations(g->field()), true, decided);
      gam.add("presentation_verified", yes_no(p.verified), true, decided);
      gam.add("isomorphic_to_input_dims", yes_no(g->dim() == a->dim() && g->cartan() == a->cartan()), true, decided);
    } catch (const std::exception& e) {
      gam.add("presentation_error", e.what());
    }
  } else {
    gam.add("dim", "unavailable");
    if (!tr.note.empty()) gam.add("note", tr.note, false);
  }
  rep.sections.push_back(gam);
  R.time("gamma", t0);
  if (until == Stage::Gamma) return R;

  // --- A-infinity cross-check
  t0 = Clock::now();
  ReportSection ai{"ainf", {}};
  try {
    AInfAlgebra x = collection_ainf(xs, job.arity_cap, length);
    auto cap = tensor_cap_for(x, w);
    if (cap && *cap > job.arity_cap) x = collection_ainf(xs, job.arity_cap, length, *cap);
    ai.add("graded_dims", dims_text(x.graded_dims()));
    ai.add("top_arity", std::to_string(x.top_arity()));
    std::string st = x.check_stasheff(job.arity_cap);
    std::string su = x.check_strict_unit();
    ai.add("stasheff", st.empty() ? "ok up to arity " + std::to_string(job.arity_cap) : st);
    ai.add("strict_unit", su.empty() ? "ok" : su);
    ai.add("positive", "yes");
    std::size_t simple_total = 0;
    bool modules_ok = true;
    for (const auto& s : simple_ainf_modules(x)) {
      simple_total += s.dim();
      modules_ok = modules_ok && s.check_stasheff(job.arity_cap).empty() && s.check_strict_unit().empty();
    }
    ai.add("simple_modules", std::to_string(x.vertices()) + " of dim 1, " + (modules_ok ? "ok" : "FAILED") +
                                 (simple_total == x.graded_dims()[0] ? "" : ", dimension mismatch"));
    if (!st.empty() || !su.empty() || !modules_ok) {
      R.mark(Outcome::InternalError, Stage::AInf, "A-infinity identities fail");
    }
    DualBar db = dual_bar_dg(x, w, cap.value_or(0));
    ai.add("tensor_cap", std::to_string(db.tensor_cap), false);
    ai.add("dual_bar_window", db.window ? "[" + std::to_string(-*db.window) + ",0]" : "empty");
    if (db.window) {
      std::map<int, std::size_t> dbt;
      for (int m = -*db.window; m <= 0; ++m) dbt[m] = db.cohomology.count(m) ? db.cohomology.at(m) : 0;
      R.tables["dual_bar"] = dbt;
    }
    ai.add("dual_bar_cohomology", dims_text(db.cohomology), true, db.window.has_value());
    if (!db.window) {
      ai.add("cross_check", "INCONCLUSIVE");
      R.mark(Outcome::Inconclusive, Stage::AInf, "no certified dual bar window");
    } else if (!decided) {
      ai.add("cross_check", "INCONCLUSIVE");
    } else {
      bool match = true;
      for (int m = -*db.window; m <= 0; ++m) {
        std::size_t lhs = db.cohomology.count(m) ? db.cohomology.at(m) : 0;
        std::size_t rhs = tr.gamma_tilde_dims.count(m) ? tr.gamma_tilde_dims.at(m) : 0;
        match = match && lhs == rhs;
      }
      ai.add("cross_check", match ? "MATCH" : "MISMATCH");
      if (!match) R.mark(Outcome::Fail, Stage::AInf, "dual bar cohomology differs from Gamma~");
    }
  } catch (const AInfError& e) {
    using C = AInfError::Code;
    std::string kind = e.code() == C::ResolutionNotFinite   ? "RESOLUTION_NOT_FINITE"
                       : e.code() == C::PositivityViolation ? "POSITIVITY_VIOLATION"
                                                            : "ERROR";
    ai.add("status", kind);
    ai.add("detail", e.what(), false);
    ai.add("cross_check", "INCONCLUSIVE");
    if (e.code() == C::PositivityViolation) R.mark(Outcome::Fail, Stage::AInf, e.what());
    else if (e.code() == C::ResolutionNotFinite) R.mark(Outcome::Inconclusive, Stage::AInf, e.what());
    else R.mark(Outcome::InternalError, Stage::AInf, e.what());
  }
  rep.sections.push_back(ai);
  R.time("ainf", t0);
  return R;
}

// Fields whose value legitimately depends on the window or length: run
// diagnostics, and tables that are compared entrywise instead.
bool window_dependent(const std::string& key) {
  auto ends = [&](const std::string& suf) {
    return key.size() >= suf.size() && key.compare(key.size() - suf.size(), suf.size(), suf) == 0;
  };
  return key.rfind("hom.", 0) == 0 || ends(".status") || ends("certified") || key == "defining_property" ||
         key == "dual_bar_cohomology" || key == "gamma_tilde_cohomology" || key == "dual_bar_window" ||
         key == "cond3_note";
}

}  // namespace

Report run_pipeline(const JobSpec& job, Stage until) { return run(job, until).report; }

std::vector<std::string> honesty_violations(const JobSpec& job, int extra_length, int extra_window) {
  JobSpec big = job;
  int base_len = job.length > 0 ? job.length : default_length(job.algebra, job.collection);
  big.length = base_len + extra_length;
  big.window = job.window + extra_window;
  JobSpec small = job;
  small.length = base_len;
  Run a = run(small, Stage::AInf), b = run(big, Stage::AInf);
  std::vector<std::string> out;
  for (const auto& sa : a.report.sections) {
    const ReportSection* sb = b.report.section(sa.name);
    if (!sb || sa.name == "params") continue;
    for (const auto& fa : sa.fields) {
      if (!fa.certified || !fa.verdict) continue;
      for (const auto& fb : sb->fields)
        if (fb.key == fa.key && fb.certified && fb.value != fa.value && !window_dependent(fa.key))
          out.push_back(sa.name + "." + fa.key + ": " + fa.value + " vs " + fb.value);
    }
  }
  // Window-dependent tables are compared entrywise on the common range.
  for (const auto& [k, ta] : a.tables) {
    auto it = b.tables.find(k);
    if (it == b.tables.end()) continue;
    for (const auto& [m, d] : ta) {
      auto jt = it->second.find(m);
      if (jt != it->second.end() && jt->second != d)
        out.push_back(k + "[" + std::to_string(m) + "]: " + std::to_string(d) + " vs " + std::to_string(jt->second));
    }
  }
  return out;
}

Report dg_reduce_report(const DgAlgebraPtr& a, const std::string& name) {
  Report rep;
  rep.tool_version = tool_version();
  auto t0 = Clock::now();
  ReportSection in{"dg", {}};
  in.add("name", name, false);
  in.add("field", a->field().name(), false);
  in.add("dim", std::to_string(a->dim()));
  in.add("vertices", std::to_string(a->vertices()));
  std::map<int, std::size_t> deg;
  for (std::size_t b = 0; b < a->dim(); ++b) ++deg[a->degree(b)];
  in.add("graded_dims", dims_text(deg));
  in.add("nonpositive", yes_no(a->nonpositive()));
  in.add("cohomology", dims_text(a->cohomology_dims()));
  rep.sections.push_back(in);
  ReportSection mo{"morita", {}};
  try {
    MoritaResult m = morita_reduce(a);
    auto vec = [](const std::vector<int>& v) {
      std::vector<std::size_t> s(v.begin(), v.end());
      return list_text(s);
    };
    mo.add("kept", vec(m.kept));
    mo.add("stripped", vec(m.stripped));
    mo.add("reduced_dim", std::to_string(m.reduced->dim()));
    mo.add("reduced_cohomology", dims_text(m.reduced->cohomology_dims()));
    rep.sections.push_back(mo);
    ReportSection h{"h0", {}};
    if (m.reduced->nonpositive()) {
      H0Data h0 = h0_algebra(m.reduced);
      h.add("dim", std::to_string(h0.algebra->dim()));
      h.add("cartan", matrix_text(h0.algebra->cartan()));
      Presentation p = present_algebra(h0.algebra);
      h.add("arrows", p.describe_arrows());
      h.add("relations", p.describe_relations(h0.algebra->field()));
      std::vector<std::size_t> sv;
      for (int v : dg_simple_vertices(m.reduced)) sv.push_back(static_cast<std::size_t>(v));
      h.add("simples", list_text(sv));
    } else {
      h.add("status", "not nonpositive; H^0 heart not available");
      rep.outcome = Outcome::Fail;
      rep.outcome_stage = "dg-reduce";
      rep.outcome_reason = "dg algebra has positive degrees";
    }
    rep.sections.push_back(h);
  } catch (const std::exception& e) {
    mo.add("error", e.what());
    rep.sections.push_back(mo);
    rep.outcome = Outcome::Fail;
    rep.outcome_stage = "dg-reduce";
    rep.outcome_reason = e.what();
  }
  rep.timings_ms.emplace_back("dg-reduce", std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  return rep;
}

// ---------------------------------------------------------------------------

bool CorpusResult::all_ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const CorpusEntry& e) { return e.ok; });
}

std::vector<std::string> CorpusResult::failing() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (!e.ok) out.push_back(e.name);
  return out;
}

std::string CorpusResult::render() const {
  std::ostringstream out;
  out << "[corpus]\n";
  out << "examples: " << entries.size() << "\n";
  std::size_t passed = 0;
  for (const auto& e : entries) {
    out << e.name << ": " << (e.ok ? "ok" : "MISMATCH") << (e.detail.empty() ? "" : " (" + e.detail + ")") << "\n";
    passed += e.ok;
  }
  out << "passed: " << passed << "/" << entries.size() << "\n";
  auto f = failing();
  if (!f.empty()) {
    out << "failing:";
    for (const auto& n : f) out << " " << n;
    out << "\n";
  }
  return out.str();
}

namespace {

std::string first_difference(const std::string& want, const std::string& got) {
  std::istringstream a(want), b(got);
  std::string la, lb;
  int line = 0;
  while (true) {
    ++line;
    bool ea = !std::getline(a, la), eb = !std::getline(b, lb);
    if (ea && eb) return "";
    if (ea) return "unexpected line " + std::to_string(line) + ": " + lb;
    if (eb) return "missing line " + std::to_string(line) + ": " + la;
    if (la != lb) return "line " + std::to_string(line) + ": expected '" + la + "', got '" + lb + "'";
  }
}

}  // namespace

CorpusResult corpus_run(const std::filesystem::path& dir, const JobOverrides& overrides, bool bless) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw EmptyCorpus("corpus directory " + dir.string() + " does not exist");
  std::vector<fs::path> jobs;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string n = e.path().filename().string();
    if (e.is_regular_file() && n.size() > 9 && n.substr(n.size() - 9) == ".job.json") jobs.push_back(e.path());
  }
  if (jobs.empty()) throw EmptyCorpus("no *.job.json files in " + dir.string());
  std::sort(jobs.begin(), jobs.end());

  std::vector<std::future<CorpusEntry>> futs;
  for (const auto& p : jobs)
    futs.push_back(std::async(std::launch::async, [p, &overrides, &dir, bless]() {
      CorpusEntry e;
      std::string fname = p.filename().string();
      e.name = fname.substr(0, fname.size() - 9);
      try {
        JobSpec job = load_job(p);
        apply_overrides(job, overrides);
        e.report = run_pipeline(job, Stage::AInf);
      } catch (const std::exception& ex) {
        e.detail = std::string("error: ") + ex.what();
        return e;
      }
      fs::path exp = dir / "expected" / (e.name + ".txt");
      std::string got = e.report.verdict_text();
      if (bless) {
        fs::create_directories(exp.parent_path());
        std::ofstream(exp) << got;
        e.ok = true;
        e.detail = "blessed";
        return e;
      }
      if (!fs::exists(exp)) {
        e.detail = "missing expectation file";
        return e;
      }
      std::string diff = first_difference(read_file(exp), got);
      e.ok = diff.empty();
      e.detail = diff;
      return e;
    }));
  CorpusResult res;
  for (auto& f : futs) res.entries.push_back(f.get());
  std::sort(res.entries.begin(), res.entries.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
  return res;
}

}  // namespace tilt
