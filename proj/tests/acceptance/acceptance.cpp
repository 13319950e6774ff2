// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.
//
//   acceptance <path-to-channelkit-binary>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace channelkit;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_binary;
const std::string kRoot = CHANNELKIT_SOURCE_DIR;

struct Outcome {
  bool passed = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << s << " s";
  return out.str();
}

struct Shell {
  int status = -1;
  bool exited = false;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Shell shell(const std::vector<std::string>& args) {
  std::string cmd = quote(g_binary);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Shell r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int w = pclose(p);
  r.exited = WIFEXITED(w);
  r.status = r.exited ? WEXITSTATUS(w) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lang_names(const FinSet& s) { return s.elements(); }

// 1 -------------------------------------------------------------------------
Outcome direct_image_soundness() {
  gen::Rng rng(1001);
  const auto start = Clock::now();
  std::size_t failures = 0, nonempty = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Infomorphism f = gen::infomorphism(rng, gen::uniform(rng, 1, 5), gen::uniform(rng, 1, 5),
                                             gen::uniform(rng, 1, 4), gen::uniform(rng, 0, 2));
    const LocalLogic l(f.source(), gen::sound_theory(rng, f.source(), 6));
    if (!is_sound(l)) ++failures;
    if (!l.theory().empty()) ++nonempty;
    if (!is_sound(dir_logic(f, l))) ++failures;
  }
  const double s = seconds_since(start);
  return {failures == 0 && s < 10.0,
          "1000 pairs, " + std::to_string(nonempty) + " with nonempty theories, " +
              std::to_string(failures) + " unsound images, " + fmt_seconds(s) + " (limit 10 s)"};
}

// 2 -------------------------------------------------------------------------
Outcome inverse_image_completeness() {
  gen::Rng rng(1002);
  const auto start = Clock::now();
  std::size_t failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Infomorphism f = gen::infomorphism(rng, gen::uniform(rng, 1, 5), gen::uniform(rng, 1, 5),
                                             gen::uniform(rng, 1, 4), gen::uniform(rng, 0, 2));
    const LocalLogic l(f.target(), gen::complete_theory(rng, f.target()));
    if (!is_complete(l)) ++failures;
    if (!is_complete(inv_logic(f, l))) ++failures;
  }
  const double s = seconds_since(start);
  return {failures == 0 && s < 30.0,
          "1000 pairs, " + std::to_string(failures) + " incomplete preimages, " + fmt_seconds(s) +
              " (limit 30 s)"};
}

// 3 -------------------------------------------------------------------------
Outcome entailment_reduction() {
  gen::Rng rng(1003);
  std::size_t discrepancies = 0, models = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const FinSet lang = gen::names("t", gen::uniform(rng, 1, 4));
    const Theory t = gen::theory(rng, lang, 4);
    const Theory c = closure(t);
    const auto ot = gen::to_oracle(t);
    const auto names = lang_names(lang);
    for (const auto& q : IfcEnvironment::sentences(lang)) {
      const bool by_states = entails(t, q);
      if (by_states != oracle::entails(names, ot, gen::to_oracle(q))) ++discrepancies;
      if (by_states != c.contains(q)) ++discrepancies;
      if (!by_states) {
        const auto s = find_countermodel(t, q);
        const Classification witness(FinSet{"w"}, lang, {s->members});
        if (!satisfies_all(witness, t) || satisfies(witness, q)) ++discrepancies;
      }
    }
    for (int k = 0; k < 200; ++k) {
      const Classification m = gen::classification(rng, lang, gen::uniform(rng, 1, 5));
      const bool model = satisfies_all(m, t);
      models += model;
      if (model != satisfies_all(m, c)) ++discrepancies;
      const auto orows = gen::to_oracle(m);
      bool oracle_model = true;
      for (const auto& q : ot) oracle_model = oracle_model && oracle::cls_sat(orows, q);
      if (model != oracle_model) ++discrepancies;
    }
  }
  return {discrepancies == 0, "500 theories x 200 classifications, " + std::to_string(models) +
                                  " models, " + std::to_string(discrepancies) + " discrepancies"};
}

// 4 -------------------------------------------------------------------------
Outcome galois_and_adjointness() {
  gen::Rng rng(1004);
  std::size_t failures = 0, morphisms = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const FinSet y1 = gen::names("s", gen::uniform(rng, 1, 4));
    const FinSet y2 = gen::names("t", gen::uniform(rng, 1, 4));
    const SetFn sigma = gen::function(rng, y1, y2);
    const Theory t1 = gen::theory(rng, y1, 3);
    const Theory t2 = gen::theory(rng, y2, 3);

    const Theory c = closure(t1);
    for (const auto& q : t1) failures += !c.contains(q);
    failures += !(closure(c) == c);

    const bool left = theory_leq(t2, dir_theory(sigma, t1));
    const bool right = theory_leq(inv_theory(sigma, t2), t1);
    const bool morphism = is_theory_morphism(sigma, t1, t2).verdict;
    morphisms += morphism;
    failures += left != right;
    failures += left != morphism;
  }
  // The opposite orientation fails on sigma : {a} -> {p, q}, t1 = {}, t2 = {q |-}.
  const FinSet a{"a"}, pq{"p", "q"};
  const SetFn sigma = SetFn::from_names(a, pq, {{"a", "p"}});
  const Theory t1(a), t2 = fixtures::theory(pq, {"q |-"});
  const bool reversed_fails = theory_leq(dir_theory(sigma, t1), t2) != theory_leq(t1, inv_theory(sigma, t2));
  return {failures == 0 && reversed_fails,
          "500 triples (" + std::to_string(morphisms) + " theory morphisms), " +
              std::to_string(failures) +
              " failures; t2 <= dir(t1) iff inv(t2) <= t1 in the extent order"};
}

// 5 -------------------------------------------------------------------------
Outcome satisfaction_invariance() {
  gen::Rng rng(1005);
  std::size_t failures = 0, checks = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Infomorphism f = gen::infomorphism(rng, gen::uniform(rng, 1, 4), gen::uniform(rng, 1, 4),
                                             gen::uniform(rng, 1, 4), gen::uniform(rng, 0, 2));
    if (!check_infomorphism(f)) ++failures;
    const Classification pulled = reduct(f.type_map(), f.target());
    const auto target_rows = gen::to_oracle(f.target());
    const auto tau = gen::to_oracle(f.type_map());
    for (const auto& q : IfcEnvironment::sentences(f.source().types())) {
      const bool a = satisfies(pulled, q);
      const bool b = satisfies(f.target(), sen_translate(f.type_map(), q));
      const bool c = oracle::cls_sat(target_rows, oracle::translate(tau, gen::to_oracle(q)));
      failures += (a != b) + (b != c);
      ++checks;
    }
  }
  return {failures == 0, "500 infomorphisms, " + std::to_string(checks) + " sequents, " +
                             std::to_string(failures) + " failures"};
}

// 6 -------------------------------------------------------------------------
std::size_t count_refinements(const Channel& c1, const Channel& c2, bool& skipped) {
  const auto& a = c1.core();
  const auto& b = c2.core();
  double space = 1;
  for (std::size_t k = 0; k < a.types().size(); ++k) space *= double(b.types().size());
  for (std::size_t k = 0; k < b.instances().size(); ++k) space *= double(a.instances().size());
  skipped = space > 100000;
  if (skipped) return 0;
  if ((b.types().empty() && !a.types().empty()) ||
      (a.instances().empty() && !b.instances().empty())) {
    return 0;
  }
  std::vector<std::size_t> ty(a.types().size(), 0), in(b.instances().size(), 0);
  auto bump = [](std::vector<std::size_t>& v, std::size_t base) {
    for (auto& x : v) {
      if (++x < base) return true;
      x = 0;
    }
    return false;
  };
  std::size_t n = 0;
  do {
    do {
      Infomorphism r(a, b, SetFn(a.types(), b.types(), ty), SetFn(b.instances(), a.instances(), in));
      n += is_refinement(r, c1, c2);
    } while (bump(in, a.instances().size()));
  } while (bump(ty, b.types().size()));
  return n;
}

Outcome universal_properties() {
  gen::Rng rng(1006);
  std::size_t failures = 0, exhaustive = 0, mediators = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const ClsDiagram d = gen::cls_diagram(rng, 4, 4);
    const DistributedSystem sys(d.nodes, d.edges);

    // Sets.
    failures += !commutes(d.type_diagram(), set_colimit(d.type_diagram()));
    failures += !commutes(d.instance_diagram(), set_limit(d.instance_diagram()));

    // Classifications.
    const ClsColimit colim = cls_colimit(d);
    for (const auto& e : d.edges) {
      failures += !(compose(e.map, colim.legs[e.target]) == colim.legs[e.source]);
    }
    for (const auto& leg : colim.legs) failures += !check_infomorphism(leg);

    // Theories: node intents form a diagram of theory morphisms.
    TheoryDiagram td;
    for (const auto& n : d.nodes) td.nodes.push_back(intent(n));
    for (const auto& e : d.edges) td.edges.push_back({e.source, e.target, e.map.type_map()});
    const TheoryColimit tc = th_colimit(td);
    failures += !commutes(td.language_diagram(), tc.languages);
    for (std::size_t i = 0; i < td.nodes.size(); ++i) {
      failures += !is_theory_morphism(tc.languages.legs[i], td.nodes[i], tc.theory).verdict;
    }

    // Mediators.
    const Channel min = minimal_cover(sys);
    failures += !is_covering(min);
    for (int c = 0; c < 3; ++c) {
      const auto [other, r] = gen::covering_channel(rng, min);
      const Infomorphism med = mediator(min, other);
      ++mediators;
      failures += !is_refinement(med, min, other);
      failures += !(med == r);
      bool skipped = false;
      const std::size_t n = count_refinements(min, other, skipped);
      if (!skipped) {
        ++exhaustive;
        failures += n != 1;
      }
    }

    // Node permutation.
    std::vector<std::size_t> perm(d.nodes.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Classification> nodes(d.nodes.size());
    for (std::size_t i = 0; i < perm.size(); ++i) nodes[perm[i]] = d.nodes[i];
    std::vector<ClsEdge> edges;
    for (const auto& e : d.edges) edges.push_back({perm[e.source], perm[e.target], e.map});
    const Channel shuffled = minimal_cover(DistributedSystem(nodes, edges));
    failures += !cls_iso(min.core(), shuffled.core()).has_value();
  }
  return {failures == 0, "200 diagrams, " + std::to_string(mediators) + " mediators (" +
                             std::to_string(exhaustive) + " checked unique by enumeration), " +
                             std::to_string(failures) + " failures"};
}

// 7 -------------------------------------------------------------------------
Outcome f_rules() {
  using namespace fixtures;
  std::size_t failures = 0;
  auto check = [&](const Infomorphism& f, bool iso) {
    for (const auto& s : IfcEnvironment::sentences(f.source().types())) {
      const bool valid = satisfies(f.source(), s);
      const bool moved = satisfies(f.target(), f_intro(f, s));
      if (valid && !moved) ++failures;
      if (iso && valid != moved) ++failures;
    }
    for (const auto& s2 : IfcEnvironment::sentences(f.target().types())) {
      const bool valid = satisfies(f.target(), s2);
      for (const auto& s1 : f_elim_candidates(f, s2)) {
        const bool back = satisfies(f.source(), s1);
        if (!valid && back) ++failures;
        if (iso && valid != back) ++failures;
      }
    }
  };
  check(f(), false);

  gen::Rng rng(1007);
  std::size_t isos = 0;
  for (int trial = 0; trial < 200; ++trial) {
    if (trial % 4 == 0) {
      const Classification m = gen::classification(rng, gen::names("t", gen::uniform(rng, 1, 3)),
                                                    gen::uniform(rng, 1, 4));
      std::vector<std::size_t> perm(m.types().size());
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      const FinSet renamed = gen::names("r", perm.size());
      const SetFn tau(m.types(), renamed, perm);
      std::vector<TypeSet> rows;
      for (TypeSet r : m.rows()) rows.push_back(image(tau, r));
      const Classification m2(m.instances(), renamed, rows);
      check(Infomorphism(m, m2, tau, SetFn::identity(m.instances())), true);
      ++isos;
    } else {
      check(gen::infomorphism(rng, gen::uniform(rng, 1, 4), gen::uniform(rng, 1, 3),
                              gen::uniform(rng, 1, 4), gen::uniform(rng, 0, 2)),
            false);
    }
  }

  // a |- b fails in M but its image p |- p holds in N; and p |- p comes
  // back as a |- b.
  const Sequent ab = seq(Y(), "a |- b");
  const bool intro_counter = !satisfies(M(), ab) && satisfies(N(), f_intro(f(), ab));
  const auto back = f_elim_candidates(f(), seq(Z(), "p |- p"));
  const bool elim_counter = satisfies(N(), seq(Z(), "p |- p")) &&
                            std::find(back.begin(), back.end(), ab) != back.end() &&
                            !satisfies(M(), ab);
  return {failures == 0 && intro_counter && elim_counter,
          "fixtures + 200 random (" + std::to_string(isos) + " isomorphisms), " +
              std::to_string(failures) + " failures; a |- b counterexamples " +
              (intro_counter && elim_counter ? "reproduce" : "do not reproduce")};
}

// 8 -------------------------------------------------------------------------
Outcome pushout_golden() {
  const std::string derived = "acceptance-pushout.json";
  const Shell cover = shell({"mincover", kRoot + "/workspaces/pushout.json", "span", "--out", derived});
  if (!cover.exited || cover.status != 0) return {false, "mincover failed"};
  const std::vector<std::string> fuse = {"--format", "machine", "fuse", derived, "span.cover",
                                         "L0", "L1", "L2", "--probe", "|- c@2"};
  const Shell a = shell(fuse);
  const Shell b = shell(fuse);
  const std::string golden = read_file(kRoot + "/tests/data/golden/pushout-fuse.json");
  bool entailed = false;
  try {
    entailed = Json::parse(a.out)["result"]["probes"][0]["entails"].get<bool>();
  } catch (const std::exception&) {
  }
  std::remove(derived.c_str());

  // Same scenario in-process.
  const Workspace ws = load_workspace(kRoot + "/workspaces/pushout.json");
  const Channel ch = minimal_cover(ws.systems.at("span").value);
  const LocalLogic fused = fusion_logic(
      ch, {ws.logics.at("L0").value, ws.logics.at("L1").value, ws.logics.at("L2").value});
  const bool kernel = entails(fused.theory(), parse_sequent(ch.core().types(), "|- c@2"));

  const bool identical = a.exited && a.status == 0 && a.out == b.out;
  const bool matches = a.out == golden;
  return {entailed && kernel && identical && matches,
          std::string("fused theory entails |- c@2: ") + (entailed && kernel ? "yes" : "no") +
              "; reruns byte-identical: " + (identical ? "yes" : "no") +
              "; matches golden report: " + (matches ? "yes" : "no")};
}

// 9 -------------------------------------------------------------------------
Outcome sound_complete_characterization() {
  gen::Rng rng(1009);
  std::size_t discrepancies = 0, both = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Classification m = gen::classification(rng, gen::names("t", gen::uniform(rng, 1, 4)),
                                                  gen::uniform(rng, 1, 5));
    Theory t(m.types());
    switch (trial % 3) {
      case 0: t = gen::complete_theory(rng, m); break;
      case 1: t = gen::sound_theory(rng, m, 8); break;
      default: t = gen::theory(rng, m.types(), 4); break;
    }
    const LocalLogic l(m, t);
    const bool sc = is_sound(l) && is_complete(l);
    both += sc;
    discrepancies += sc != (closure(t) == intent(m));
  }
  return {discrepancies == 0, "300 logics (" + std::to_string(both) + " sound and complete), " +
                                  std::to_string(discrepancies) + " discrepancies"};
}

// 10 ------------------------------------------------------------------------
Outcome malformed_corpus() {
  const std::string dir = kRoot + "/tests/data/malformed/";
  const Json expected = Json::parse(read_file(dir + "expected.json"));
  std::size_t ok = 0, total = 0;
  std::string first_bad;
  for (const auto& [name, e] : expected.items()) {
    ++total;
    const Shell r = shell({"--format", "machine", "validate", dir + name + ".json"});
    bool good = r.exited && r.status == e["exit"].get<int>();
    try {
      const Json err = Json::parse(r.out)["error"];
      good = good && err["kind"] == e["kind"] && err["entity"] == e["entity"];
    } catch (const std::exception&) {
      good = false;
    }
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = name;
    }
  }
  return {total >= 20 && ok == total,
          std::to_string(ok) + "/" + std::to_string(total) + " documents give the expected error" +
              (first_bad.empty() ? "" : "; first mismatch: " + first_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <channelkit binary>\n";
    return 2;
  }
  g_binary = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"direct image preserves soundness", direct_image_soundness},
      {"inverse image preserves completeness", inverse_image_completeness},
      {"entailment reduces to state descriptions", entailment_reduction},
      {"closure and dir/inv adjointness", galois_and_adjointness},
      {"satisfaction invariance", satisfaction_invariance},
      {"universal properties of colimits and covers", universal_properties},
      {"f-Intro / f-Elim", f_rules},
      {"pushout integration golden report", pushout_golden},
      {"sound and complete iff closure equals intent", sound_complete_characterization},
      {"malformed workspace corpus", malformed_corpus},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first
              << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
