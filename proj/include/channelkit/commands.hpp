#ifndef CHANNELKIT_COMMANDS_HPP
#define CHANNELKIT_COMMANDS_HPP

// Workspace commands. Each returns a Report; the CLI only parses arguments,
// renders reports and maps errors onto exit codes.

#include <chrono>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "channelkit/workspace.hpp"

namespace channelkit {

/// A bad command-line argument (unknown entity name, malformed literal).
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::InvalidArgument, what) {}
};

struct Report {
  std::string command;
  std::vector<std::string> arguments;
  Caps caps;
  Json result = Json::object();
  std::vector<std::string> text;
  double elapsed_ms = 0;

  /// Structured form. Timing is left out so output is reproducible.
  Json machine() const {
    Json out = Json::object();
    out["command"] = command;
    out["arguments"] = arguments;
    out["caps"] = {{"max_types", caps.max_types},
                   {"max_closure_types", caps.max_closure_types},
                   {"max_product", caps.max_product},
                   {"max_iso_nodes", caps.max_iso_nodes}};
    out["result"] = result;
    return out;
  }

  std::string human() const {
    std::ostringstream out;
    for (const auto& line : text) out << line << "\n";
    out << "caps: max-types " << caps.max_types << ", max-closure-types "
        << caps.max_closure_types << ", max-product " << caps.max_product << ", max-iso-nodes "
        << caps.max_iso_nodes << "\n";
    out << "time: " << elapsed_ms << " ms\n";
    return out.str();
  }
};

namespace detail {

template <class Map>
const auto& cmd_lookup(const Map& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw UsageError(std::string("no ") + kind + " named '" + name + "'");
  return it->second;
}

inline Sequent cmd_sequent(const FinSet& lang, const std::string& literal) {
  try {
    return parse_sequent(lang, literal);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

inline std::size_t cmd_node(const WsSystem& sys, const std::string& id) {
  auto i = sys.node_index(id);
  if (!i) throw UsageError("no node named '" + id + "'");
  return *i;
}

inline std::string braces(const std::vector<std::string>& names) {
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out + "}";
}

inline Json theory_sequents(const Theory& t) {
  Json out = Json::array();
  for (const auto& q : t) out.push_back(sequent_json(q));
  return out;
}

inline Json map_json(const SetFn& f) {
  Json out = Json::object();
  for (std::size_t i = 0; i < f.source().size(); ++i) out[f.source()[i]] = f.target()[f(i)];
  return out;
}

inline Report start(std::string command, std::vector<std::string> arguments, const Caps& caps) {
  Report r;
  r.command = std::move(command);
  r.arguments = std::move(arguments);
  r.caps = caps;
  return r;
}

class Stopwatch {
 public:
  Stopwatch() : begin_(std::chrono::steady_clock::now()) {}
  void stop(Report& r) const {
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             begin_)
                       .count();
  }

 private:
  std::chrono::steady_clock::time_point begin_;
};

}  // namespace detail

inline Report cmd_validate(const Workspace& ws, const Caps& caps = {}) {
  detail::Stopwatch clock;
  Report r = detail::start("validate", {}, caps);
  Json counts = Json::object();
  counts["languages"] = ws.languages.size();
  counts["classifications"] = ws.classifications.size();
  counts["infomorphisms"] = ws.infomorphisms.size();
  counts["theories"] = ws.theories.size();
  counts["logics"] = ws.logics.size();
  counts["systems"] = ws.systems.size();
  counts["channels"] = ws.channels.size();
  r.result["valid"] = true;
  r.result["counts"] = counts;
  std::string line = "valid:";
  bool first = true;
  for (const auto& [k, v] : counts.items()) {
    line += std::string(first ? " " : ", ") + std::to_string(v.get<std::size_t>()) + " " + k;
    first = false;
  }
  r.text.push_back(line);
  Json covering = Json::object();
  for (const auto& [name, ch] : ws.channels) {
    auto e = find_uncovered_edge(ch.value);
    covering[name] = !e.has_value();
    r.text.push_back("channel " + name + (e ? " does not cover edge " + std::to_string(*e)
                                            : " covers its system"));
  }
  r.result["covering"] = covering;
  clock.stop(r);
  return r;
}

inline Report cmd_entail(const Workspace& ws, const std::string& theory, const std::string& literal,
                         const Caps& caps = {}) {
  detail::Stopwatch clock;
  Report r = detail::start("entail", {theory, literal}, caps);
  const auto& t = detail::cmd_lookup(ws.theories, theory, "theory");
  const Sequent q = detail::cmd_sequent(t.value.language(), literal);
  const auto counter = find_countermodel(t.value, q, caps);
  r.result["theory"] = theory;
  r.result["sequent"] = q.to_string();
  r.result["entails"] = !counter.has_value();
  r.result["countermodel"] =
      counter ? Json(type_names(counter->language, counter->members)) : Json(nullptr);
  r.text.push_back(theory + " entails " + q.to_string() + ": " + (counter ? "false" : "true"));
  if (counter) r.text.push_back("countermodel: " + counter->to_string());
  clock.stop(r);
  return r;
}

inline Report cmd_closure(const Workspace& ws, const std::string& theory, const Caps& caps = {},
                          Theory* out = nullptr) {
  detail::Stopwatch clock;
  Report r = detail::start("closure", {theory}, caps);
  const auto& t = detail::cmd_lookup(ws.theories, theory, "theory");
  const Theory c = closure(t.value, caps);
  r.result["theory"] = theory;
  r.result["size"] = c.size();
  r.result["sequents"] = detail::theory_sequents(c);
  r.text.push_back("closure of " + theory + ": " + std::to_string(c.size()) + " sequents");
  for (const auto& q : c) r.text.push_back("  " + q.to_string());
  if (out) *out = c;
  clock.stop(r);
  return r;
}

inline Report cmd_thcolimit(const Workspace& ws, const std::string& system,
                            const std::vector<std::string>& theories, const Caps& caps = {},
                            TheoryColimit* out = nullptr) {
  detail::Stopwatch clock;
  std::vector<std::string> args{system};
  args.insert(args.end(), theories.begin(), theories.end());
  Report r = detail::start("thcolimit", args, caps);
  const auto& sys = detail::cmd_lookup(ws.systems, system, "system");
  if (theories.size() != sys.node_ids.size()) {
    throw UsageError("thcolimit needs one theory per node (" +
                     std::to_string(sys.node_ids.size()) + "), got " +
                     std::to_string(theories.size()));
  }
  TheoryDiagram d;
  for (std::size_t i = 0; i < theories.size(); ++i) {
    const auto& t = detail::cmd_lookup(ws.theories, theories[i], "theory");
    detail::require(t.value.language() == sys.value.nodes()[i].types(), ErrorKind::LanguageMismatch,
                    "theory " + theories[i] + " is not over the language of node " +
                        sys.node_ids[i]);
    d.nodes.push_back(t.value);
  }
  for (const auto& e : sys.value.edges()) d.edges.push_back({e.source, e.target, e.map.type_map()});
  TheoryColimit colim = th_colimit(d, caps);
  r.result["system"] = system;
  r.result["language"] = colim.theory.language().elements();
  r.result["sequents"] = detail::theory_sequents(colim.theory);
  Json legs = Json::object();
  for (std::size_t i = 0; i < sys.node_ids.size(); ++i) {
    legs[sys.node_ids[i]] = detail::map_json(colim.languages.legs[i]);
  }
  r.result["legs"] = legs;
  r.text.push_back("colimit language: " + colim.theory.language().to_string());
  r.text.push_back("colimit theory: " + std::to_string(colim.theory.size()) + " sequents");
  for (const auto& q : colim.theory) r.text.push_back("  " + q.to_string());
  if (out) *out = std::move(colim);
  clock.stop(r);
  return r;
}

inline Report cmd_mincover(const Workspace& ws, const std::string& system, const Caps& caps = {},
                           Channel* out = nullptr) {
  detail::Stopwatch clock;
  Report r = detail::start("mincover", {system}, caps);
  const auto& sys = detail::cmd_lookup(ws.systems, system, "system");
  const Channel cover = minimal_cover(sys.value, caps);
  const auto& core = cover.core();
  bool identity = true;
  Json legs = Json::object();
  for (std::size_t i = 0; i < sys.node_ids.size(); ++i) {
    const auto& leg = cover.leg(i);
    identity = identity && leg == Infomorphism::identity(leg.source());
    legs[sys.node_ids[i]] = {{"types", detail::map_json(leg.type_map())},
                             {"instances", detail::map_json(leg.instance_map())}};
  }
  r.result["system"] = system;
  r.result["core"] = classification_json(WsClassification{system + ".core", core});
  r.result["legs"] = legs;
  r.result["identity"] = identity;
  r.text.push_back("minimal cover of " + system + ": core " + std::to_string(core.types().size()) +
                   " types, " + std::to_string(core.instances().size()) + " instances" +
                   (identity ? " (identity)" : ""));
  r.text.push_back("  types " + core.types().to_string());
  for (std::size_t x = 0; x < core.instances().size(); ++x) {
    r.text.push_back("  " + core.instances()[x] + " : " + core.state(x).to_string());
  }
  for (std::size_t i = 0; i < sys.node_ids.size(); ++i) {
    std::string line = "  leg " + sys.node_ids[i] + ":";
    const SetFn& t = cover.leg(i).type_map();
    for (std::size_t k = 0; k < t.source().size(); ++k) {
      line += " " + t.source()[k] + "->" + t.target()[t(k)];
    }
    r.text.push_back(line);
  }
  if (out) *out = cover;
  clock.stop(r);
  return r;
}

inline Report cmd_fuse(const Workspace& ws, const std::string& channel,
                       const std::vector<std::string>& logics,
                       const std::vector<std::string>& probes = {}, const Caps& caps = {},
                       LocalLogic* out = nullptr) {
  detail::Stopwatch clock;
  std::vector<std::string> args{channel};
  args.insert(args.end(), logics.begin(), logics.end());
  for (const auto& p : probes) args.push_back("probe:" + p);
  Report r = detail::start("fuse", args, caps);
  const auto& ch = detail::cmd_lookup(ws.channels, channel, "channel");
  if (logics.size() != ch.value.legs().size()) {
    throw UsageError("fuse needs one logic per node (" + std::to_string(ch.value.legs().size()) +
                     "), got " + std::to_string(logics.size()));
  }
  std::vector<LocalLogic> parts;
  for (const auto& name : logics) parts.push_back(detail::cmd_lookup(ws.logics, name, "logic").value);
  const LocalLogic fused = fusion_logic(ch.value, parts);
  r.result["channel"] = channel;
  r.result["sequents"] = detail::theory_sequents(fused.theory());
  r.text.push_back("fused theory over " + ch.core + ": " + std::to_string(fused.theory().size()) +
                   " sequents");
  for (const auto& q : fused.theory()) r.text.push_back("  " + q.to_string());
  Json probe_results = Json::array();
  for (const auto& p : probes) {
    const Sequent q = detail::cmd_sequent(fused.language(), p);
    const bool ok = entails(fused.theory(), q, caps);
    probe_results.push_back({{"sequent", q.to_string()}, {"entails", ok}});
    r.text.push_back("probe " + q.to_string() + ": " + (ok ? "entailed" : "not entailed"));
  }
  r.result["probes"] = probe_results;
  if (out) *out = fused;
  clock.stop(r);
  return r;
}

inline Report cmd_flow(const Workspace& ws, const std::string& channel, const std::string& node_i,
                       const std::string& literal_i, const std::string& node_j,
                       const std::string& literal_j, const Caps& caps = {}) {
  detail::Stopwatch clock;
  Report r = detail::start("flow", {channel, node_i, literal_i, node_j, literal_j}, caps);
  const auto& ch = detail::cmd_lookup(ws.channels, channel, "channel");
  const auto& sys = ws.systems.at(ch.system);
  const std::size_t i = detail::cmd_node(sys, node_i);
  const std::size_t j = detail::cmd_node(sys, node_j);
  const Sequent a_i = detail::cmd_sequent(sys.value.nodes()[i].types(), literal_i);
  const Sequent a_j = detail::cmd_sequent(sys.value.nodes()[j].types(), literal_j);
  const FlowVerdict v = carries_info(ch.value, i, a_i, j, a_j, caps);
  r.result["channel"] = channel;
  r.result["carries"] = v.carries;
  r.result["premise"] = v.premise.to_string();
  r.result["conclusion"] = v.conclusion.to_string();
  r.result["defeating_state"] =
      v.defeating_state ? Json(type_names(v.defeating_state->language, v.defeating_state->members))
                        : Json(nullptr);
  r.result["defeating_instance"] =
      v.defeating_instance ? Json(ch.value.core().instances()[*v.defeating_instance]) : Json(nullptr);
  Json warnings = Json::array();
  for (std::size_t k : v.projection_warnings) warnings.push_back(sys.node_ids[k]);
  r.result["projection_warnings"] = warnings;
  r.text.push_back(node_i + " '" + a_i.to_string() + "' carries " + node_j + " '" +
                   a_j.to_string() + "': " + (v.carries ? "true" : "false"));
  r.text.push_back("  in the core: " + v.premise.to_string() + "  =>  " + v.conclusion.to_string());
  if (v.defeating_state) {
    r.text.push_back("  defeated by " + ch.value.core().instances()[*v.defeating_instance] + " " +
                     v.defeating_state->to_string());
  }
  for (std::size_t k : v.projection_warnings) {
    r.text.push_back("  warning: leg " + sys.node_ids[k] +
                     " is not a projection up to isomorphism");
  }
  clock.stop(r);
  return r;
}

inline Report cmd_audit(const Workspace& ws, const std::string& logic, const Caps& caps = {}) {
  detail::Stopwatch clock;
  Report r = detail::start("audit", {logic}, caps);
  const auto& l = detail::cmd_lookup(ws.logics, logic, "logic");
  const auto unsound = find_unsound(l.value);
  const auto incomplete = find_incomplete(l.value, caps);
  r.result["logic"] = logic;
  r.result["sound"] = !unsound;
  r.result["unsound_witness"] =
      unsound ? Json{{"instance", l.value.structure().instances()[unsound->instance]},
                     {"sequent", unsound->sequent.to_string()}}
              : Json(nullptr);
  r.result["complete"] = !incomplete;
  r.result["incomplete_witness"] = incomplete ? Json(incomplete->to_string()) : Json(nullptr);
  r.text.push_back("sound: " + std::string(unsound ? "no" : "yes"));
  if (unsound) {
    r.text.push_back("  " + l.value.structure().instances()[unsound->instance] + " fails " +
                     unsound->sequent.to_string());
  }
  r.text.push_back("complete: " + std::string(incomplete ? "no" : "yes"));
  if (incomplete) r.text.push_back("  valid but not entailed: " + incomplete->to_string());
  clock.stop(r);
  return r;
}

}  // namespace channelkit

#endif  // CHANNELKIT_COMMANDS_HPP
