// Acceptance run: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs. Structural claims are re-derived with the homotopy Hom
// oracle, which shares no elimination code with the library.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "../unit/fixtures.hpp"
#include "../unit/oracles.hpp"
#include "tilt/ainf.hpp"
#include "tilt/derived.hpp"
#include "tilt/pipeline.hpp"
#include "tilt/rickard.hpp"

using namespace tilt;

namespace {

const std::filesystem::path kCorpus = TILT_CORPUS_DIR;

struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

Complex stalk(const AlgebraPtr& a, SummandKind k, int v, int deg = 0) { return Complex::stalk(make_summand(a, k, v), deg); }

bool is_stalk(const Complex& x, SummandKind k, int v, int deg) {
  Complex t = minimized(x).trimmed();
  return t.lo() == deg && t.hi() == deg && t.summands(deg).size() == 1 && t.summands(deg)[0].kind == k &&
         t.summands(deg)[0].vertex == v;
}

// Hom(X_j, Sigma^m T_i) = delta_ij delta_m0 for |m| <= w, by the oracle (T_i
// are complexes of injectives).
void defining_property(Checker& c, const std::vector<Complex>& xs, const RickardResult& r, int w) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (int m = -w; m <= w; ++m) {
        std::size_t want = (i == j && m == 0) ? 1 : 0;
        std::size_t got = oracle::homotopy_hom_dim(xs[j], r.t[i], m);
        c.expect(got == want, "Hom(X" + std::to_string(j + 1) + ", Sigma^" + std::to_string(m) + " T" +
                                  std::to_string(i + 1) + ") = " + std::to_string(got));
      }
}

// H^m(Gamma~) = Hom(nu^-1 T, Sigma^m nu^-1 T) by the oracle.
std::map<int, std::size_t> oracle_gamma_tilde(const TiltingReport& t, int lo, int hi) {
  std::map<int, std::size_t> out;
  for (int m = lo; m <= hi; ++m)
    if (auto d = oracle::homotopy_hom_dim(t.nu_inv_t, t.nu_inv_t, m)) out[m] = d;
  return out;
}

std::vector<std::vector<std::size_t>> oracle_cartan(const TiltingReport& t) {
  std::size_t r = t.nu_inv_parts.size();
  std::vector<std::vector<std::size_t>> c(r, std::vector<std::size_t>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) c[i][j] = oracle::homotopy_hom_dim(t.nu_inv_parts[j], t.nu_inv_parts[i], 0);
  return c;
}

std::string str(const std::map<int, std::size_t>& m) {
  std::ostringstream o;
  for (const auto& [k, v] : m) o << k << ":" << v << " ";
  return o.str();
}

AlgebraPtr a2() { return fixture::a2(Field::rational()); }

void identity_collection(Checker& c) {
  auto a = a2();
  std::vector<Complex> xs{stalk(a, SummandKind::S, 0), stalk(a, SummandKind::S, 1)};
  auto r = rickard_construct(xs, {3, 8, 0});
  for (std::size_t i = 0; i < 2; ++i) {
    c.expect(r.trace[i].status == StepStatus::Terminated && r.trace[i].steps.size() <= 1,
             "T" + std::to_string(i + 1) + " not terminated within one step");
    c.expect(is_stalk(r.t[i], SummandKind::I, static_cast<int>(i), 0), "T" + std::to_string(i + 1) + " is not I");
  }
  defining_property(c, xs, r, 3);
  auto t = check_tilting(r);
  for (int i = 0; i < 2; ++i) c.expect(is_stalk(t.nu_inv_parts[i], SummandKind::P, i, 0), "nu^-1 T is not Lambda");
  c.expect(t.verdict == Verdict::Tilting, "verdict " + to_string(t.verdict));
  c.expect(oracle_gamma_tilde(t, -3, 3) == std::map<int, std::size_t>{{0, 3}}, "oracle Gamma~ " + str(oracle_gamma_tilde(t, -3, 3)));
  c.expect(t.gamma && (*t.gamma)->dim() == 3, "dim Gamma");
  std::vector<std::vector<std::size_t>> want{{1, 1}, {0, 1}};
  c.expect(t.cartan == want, "Cartan matrix");
  c.expect(oracle_cartan(t) == want, "oracle Cartan matrix");
}

void apr_collection(Checker& c) {
  auto a = a2();
  std::vector<Complex> xs{stalk(a, SummandKind::P, 0), stalk(a, SummandKind::S, 1, -1)};
  auto r = rickard_construct(xs, {3, 8, 0});
  // T = S1 + S2[1]: cohomology one-dimensional, in the right place.
  c.expect(as_shifted_simple(r.t[0]) == std::make_pair(0, 0), "T1 is not S1");
  c.expect(as_shifted_simple(r.t[1]) == std::make_pair(1, 1), "T2 is not S2[1]");
  c.expect(oracle::homotopy_hom_dim(stalk(a, SummandKind::S, 0), r.t[0], 0) == 1, "oracle Hom(S1, T1)");
  defining_property(c, xs, r, 3);
  auto t = check_tilting(r);
  Complex p1 = minimized(t.nu_inv_parts[0]).trimmed(), p2 = minimized(t.nu_inv_parts[1]).trimmed();
  c.expect(p1.describe() == "[P1] (0..0)", "nu^-1 T1 = " + p1.describe());
  c.expect(p2.describe() == "[P2 -> P1] (-1..0)", "nu^-1 T2 = " + p2.describe());
  // H^0 is the APR module P1 + S1 (tau^-1 P2 = S1).
  auto dv1 = cohomology_module(p1, 0).dimension_vector(), dv2 = cohomology_module(p2, 0).dimension_vector();
  c.expect(dv1 == std::vector<int>{1, 1} && dv2 == std::vector<int>{1, 0}, "H^0 pattern");
  c.expect(cohomology_dims(p2) == std::map<int, std::size_t>{{0, 1}}, "nu^-1 T2 is a module");
  c.expect(t.verdict == Verdict::Tilting, "verdict " + to_string(t.verdict));
  c.expect(oracle_gamma_tilde(t, -3, 3) == std::map<int, std::size_t>{{0, 3}}, "oracle Gamma~");
  c.expect(t.gamma && (*t.gamma)->dim() == 3, "dim Gamma");
  auto cart = oracle_cartan(t);
  bool a2_shape = (cart == std::vector<std::vector<std::size_t>>{{1, 1}, {0, 1}} ||
                   cart == std::vector<std::vector<std::size_t>>{{1, 0}, {1, 1}});
  c.expect(a2_shape && cart == t.cartan, "Cartan matrix of A2 up to relabelling");
}

void negative_collection(Checker& c) {
  auto a = a2();
  std::vector<Complex> xs{stalk(a, SummandKind::S, 1), stalk(a, SummandKind::S, 0, -1)};
  auto r = rickard_construct(xs, {3, 8, 0});
  c.expect(is_stalk(r.t[0], SummandKind::I, 1, 0), "T1 is not I2");
  c.expect(is_stalk(r.t[1], SummandKind::I, 0, -1), "T2 is not I1[1]");
  defining_property(c, xs, r, 3);
  auto t = check_tilting(r);
  c.expect(is_stalk(t.nu_inv_parts[0], SummandKind::P, 1, 0) && is_stalk(t.nu_inv_parts[1], SummandKind::P, 0, -1),
           "nu^-1 T is not P2 + P1[1]");
  auto g = oracle_gamma_tilde(t, -3, 3);
  c.expect(g == std::map<int, std::size_t>{{-1, 1}, {0, 2}}, "oracle Gamma~ " + str(g));
  c.expect(t.gamma_tilde_dims == g, "library Gamma~ " + str(t.gamma_tilde_dims));
  c.expect(t.verdict == Verdict::NotTilting && t.witness == -1, "verdict " + to_string(t.verdict));
  c.expect(t.gamma && (*t.gamma)->dim() == 2, "dim Gamma");
  c.expect(t.cartan == std::vector<std::vector<std::size_t>>{{1, 0}, {0, 1}}, "Gamma is not K x K");
}

void symmetric_case(Checker& c) {
  auto a = fixture::dual_numbers(Field::rational());
  std::vector<Complex> xs{stalk(a, SummandKind::S, 0)};
  auto r = rickard_construct(xs, {4, 8, 6});
  c.expect(r.trace[0].status == StepStatus::WindowStable, "status " + to_string(r.trace[0].status));
  c.expect(r.trace[0].certified, "T not certified");
  defining_property(c, xs, r, 2);
  auto si = self_injective_check(xs, &r);
  c.expect(si.symmetric == std::optional<bool>(true), "not recognised as symmetric");
  c.expect(si.t_iso_nu_inv_t == std::optional<bool>(true), "T not isomorphic to nu^-1 T");
  auto t = check_tilting(r);
  c.expect(minimized(t.nu_inv_t).describe() == "[P1] (0..0)" && minimized(r.t[0]).describe() == "[I1] (0..0)",
           "T and nu^-1 T minimized forms");
  c.expect(t.verdict == Verdict::Tilting, "verdict " + to_string(t.verdict));
  c.expect(oracle_gamma_tilde(t, -2, 2) == std::map<int, std::size_t>{{0, 2}}, "oracle Gamma~");
  c.expect(t.gamma && (*t.gamma)->dim() == 2, "dim Gamma");
}

void nakayama_case(Checker& c) {
  auto a = fixture::two_cycle(Field::rational());
  std::vector<Complex> xs{stalk(a, SummandKind::S, 0), stalk(a, SummandKind::S, 1)};
  auto r = rickard_construct(xs, {4, 8, 6});
  c.expect(r.all_certified(), "T not certified");
  defining_property(c, xs, r, 2);
  auto si = self_injective_check(xs, &r);
  c.expect(si.nu_perm == std::vector<std::size_t>{1, 0}, "nu does not swap the simples");
  c.expect(si.symmetric == std::optional<bool>(false), "recognised as symmetric");
  c.expect(si.t_iso_nu_inv_t == std::optional<bool>(true), "T not isomorphic to nu^-1 T");
  auto t = check_tilting(r);
  for (int i = 0; i < 2; ++i)
    c.expect(minimized(t.nu_inv_parts[i]).describe() == "[P" + std::to_string(i + 1) + "] (0..0)",
             "nu^-1 T" + std::to_string(i + 1));
  c.expect(t.verdict == Verdict::Tilting, "verdict " + to_string(t.verdict));
  c.expect(oracle_gamma_tilde(t, -2, 2) == std::map<int, std::size_t>{{0, 4}}, "oracle Gamma~");
}

void invariant_suite(Checker& c) {
  std::mt19937 rng(8);
  auto zoo = fixture::zoo();
  int instances = 0, completed = 0;
  for (; instances < 200; ++instances) {
    const auto& a = zoo[static_cast<std::size_t>(instances) % zoo.size()];
    std::string tag = "instance " + std::to_string(instances) + ": ";
    Complex p = fixture::random_complex(a, rng, SummandKind::P, -1, 2 + static_cast<int>(rng() % 2));
    Complex q = fixture::random_complex(a, rng, SummandKind::P, -1, 2);
    Complex y = fixture::random_complex(a, rng, SummandKind::I, -1, 2);
    // d^2 = 0
    Complex pm = minimized(p);
    c.expect(p.check().empty() && y.check().empty() && pm.check().empty(), tag + "d^2 != 0");
    // minimize preserves derived Homs
    for (int m = -1; m <= 1; ++m)
      c.expect(oracle::homotopy_hom_dim(p, y, m) == oracle::homotopy_hom_dim(pm, y, m), tag + "minimize changed Hom");
    // Hom(P_v, M) = M e_v
    Module mod = fixture::random_module(a, rng);
    int v = static_cast<int>(rng() % static_cast<unsigned>(a->vertices()));
    c.expect(oracle::homotopy_hom_dim(stalk(a, SummandKind::P, v), Complex::stalk(mod, 0), 0) == mod.basis_at(v).size(),
             tag + "Hom(P_v, M) != M e_v");
    // Nakayama adjunction: Hom(P, Sigma^m nu Q) = D Hom(Q, Sigma^-m P)
    Complex nq = nu_complex(q);
    for (int m = -1; m <= 1; ++m)
      c.expect(oracle::homotopy_hom_dim(p, nq, m) == oracle::homotopy_hom_dim(q, p, -m), tag + "Nakayama adjunction");
    // truncation additivity on the dg side
    auto d = dg_from_algebra(a);
    DgModule mp = twisted_from_complex(d, p).module();
    Truncation tr = truncate(mp);
    auto lo = tr.le0.cohomology_dims(), hi = tr.ge1.cohomology_dims();
    for (const auto& [k, n] : hi) lo[k] += n;
    c.expect(lo == mp.cohomology_dims(), tag + "truncation is not additive");
    // SNF / rank consistency
    IntMat im;
    std::size_t r = 2 + rng() % 2;
    for (std::size_t i = 0; i < r; ++i) {
      im.emplace_back();
      for (std::size_t j = 0; j < r; ++j) im.back().emplace_back(static_cast<long>(rng() % 7) - 3);
    }
    c.expect(smith_normal_form(im) == oracle::smith_by_minors(im), tag + "Smith form");
    Mat rm = oracle::random_mat(a->field(), 3, 4, rng, 2);
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t i = 0; i < rm.rows(); ++i) rows.emplace_back(rm.row(i).begin(), rm.row(i).end());
    c.expect(rank(rm) == oracle::naive_rank(rows, a->field()), tag + "rank");
    // Stasheff identities on a minimal model
    if (instances % 4 == 0 && !is_acyclic(pm)) {
      auto mm = kadeishvili_minimal_model(endomorphism_dg({pm}, false), 3);
      c.expect(mm.alg.check_stasheff(3).empty() && mm.alg.check_strict_unit().empty(), tag + "Stasheff");
    }
    // H^{>0}(Gamma~) = 0 on completed runs
    std::vector<Complex> xs;
    for (int u = 0; u < a->vertices(); ++u)
      xs.push_back(stalk(a, SummandKind::S, u, -static_cast<int>(rng() % 3)));
    if (!validate_simple_minded(xs, 0, 32).passes()) continue;
    auto rr = rickard_construct(xs, {2, 6, 0});
    if (!rr.all_certified()) continue;
    ++completed;
    auto t = check_tilting(rr);
    for (const auto& [m, n] : t.gamma_tilde_dims) c.expect(m <= 0, tag + "H^" + std::to_string(m) + "(Gamma~) != 0");
    for (int m = 1; m <= 2; ++m)
      c.expect(oracle::homotopy_hom_dim(t.nu_inv_t, t.nu_inv_t, m) == 0, tag + "oracle H^>0(Gamma~) != 0");
  }
  c.expect(instances >= 200, "fewer than 200 instances");
  c.expect(completed >= 50, "only " + std::to_string(completed) + " completed Rickard runs");
}

void koszul_cross_check(Checker& c) {
  auto a = a2();
  std::vector<std::vector<Complex>> examples{
      {stalk(a, SummandKind::S, 0), stalk(a, SummandKind::S, 1)},
      {stalk(a, SummandKind::P, 0), stalk(a, SummandKind::S, 1, -1)},
      {stalk(a, SummandKind::S, 1), stalk(a, SummandKind::S, 0, -1)}};
  const int w = 3;
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const auto& xs = examples[e];
    std::string tag = "example " + std::to_string(e + 1) + ": ";
    auto x = collection_ainf(xs, 4, 10);
    auto cap = tensor_cap_for(x, w);
    if (!cap) {
      c.expect(false, tag + "no certified tensor cap");
      continue;
    }
    if (*cap > x.arity_cap) x = collection_ainf(xs, 4, 10, *cap);
    auto db = dual_bar_dg(x, w, *cap);
    c.expect(db.alg->check().empty(), tag + "dual bar is not a dg algebra");
    if (!db.window) {
      c.expect(false, tag + "empty certified window");
      continue;
    }
    auto t = check_tilting(rickard_construct(xs, {w, 8, 0}));
    auto g = oracle_gamma_tilde(t, -*db.window, 0);
    for (int m = -*db.window; m <= 0; ++m) {
      std::size_t lhs = db.cohomology.count(m) ? db.cohomology.at(m) : 0;
      std::size_t rhs = g.count(m) ? g.at(m) : 0;
      c.expect(lhs == rhs, tag + "H^" + std::to_string(m) + ": dual bar " + std::to_string(lhs) + ", Gamma~ " +
                               std::to_string(rhs));
    }
  }
}

void honesty(Checker& c) {
  int jobs = 0;
  for (const auto& e : std::filesystem::directory_iterator(kCorpus)) {
    std::string n = e.path().filename().string();
    if (n.size() <= 9 || n.substr(n.size() - 9) != ".job.json") continue;
    JobSpec job = load_job(e.path());
    ++jobs;
    for (auto [dl, dw] : {std::pair{2, 1}, std::pair{4, 2}})
      for (const auto& v : honesty_violations(job, dl, dw)) c.expect(false, n + ": " + v);
  }
  c.expect(jobs >= 8, "corpus has only " + std::to_string(jobs) + " jobs");
}

struct Criterion {
  const char* name;
  std::function<void(Checker&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {"identity collection over A2", identity_collection},
      {"APR collection over A2", apr_collection},
      {"non-tilting collection {S2, S1[1]} over A2", negative_collection},
      {"symmetric case K[x]/(x^2)", symmetric_case},
      {"self-injective Nakayama algebra", nakayama_case},
      {"invariant suite (200 random instances)", invariant_suite},
      {"Koszul cross-check on examples 1-3", koszul_cross_check},
      {"honesty across the corpus", honesty},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Checker c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << i + 1 << "  " << all[i].name << "  (" << static_cast<long>(ms)
              << " ms)";
    if (!ok) std::cout << "  first failure: " << c.failures.front() << " [" << c.failures.size() << " total]";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
