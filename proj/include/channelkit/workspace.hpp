#ifndef CHANNELKIT_WORKSPACE_HPP
#define CHANNELKIT_WORKSPACE_HPP

// Workspace documents: named languages, classifications, infomorphisms,
// theories, logics, systems and channels in one JSON object. Loading
// validates everything and reports the first failing entity.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "channelkit/channel.hpp"
#include "channelkit/logic.hpp"

namespace channelkit {

using Json = nlohmann::ordered_json;

/// A load failure tied to an entity path ("infomorphisms.f") and, for
/// syntax errors, a 1-based line and column.
class WorkspaceError : public Error {
 public:
  WorkspaceError(ErrorKind kind, std::string entity, const std::string& message,
                 std::size_t line = 0, std::size_t column = 0)
      : Error(kind, (entity.empty() ? "" : entity + ": ") + message),
        entity_(std::move(entity)),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& entity() const noexcept { return entity_; }
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string entity_;
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

struct WsClassification {
  std::string language;
  Classification value;
};

struct WsInfomorphism {
  std::string source;
  std::string target;
  Infomorphism value;
};

struct WsTheory {
  std::string language;
  Theory value;
};

struct WsLogic {
  std::string classification;
  std::string theory;
  LocalLogic value;
};

struct WsEdge {
  std::string from;
  std::string to;
  std::string infomorphism;
};

struct WsSystem {
  std::vector<std::string> node_ids;
  std::vector<std::string> node_classifications;
  std::vector<WsEdge> edges;
  DistributedSystem value;

  std::optional<std::size_t> node_index(const std::string& id) const {
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
      if (node_ids[i] == id) return i;
    }
    return std::nullopt;
  }
};

struct WsChannel {
  std::string system;
  std::string core;
  std::map<std::string, std::string> legs;  ///< node id -> infomorphism
  Channel value;
};

struct Workspace {
  std::map<std::string, FinSet> languages;
  std::map<std::string, WsClassification> classifications;
  std::map<std::string, WsInfomorphism> infomorphisms;
  std::map<std::string, WsTheory> theories;
  std::map<std::string, WsLogic> logics;
  std::map<std::string, WsSystem> systems;
  std::map<std::string, WsChannel> channels;
};

namespace detail {

inline std::string entity_path(const std::string& section, const std::string& name) {
  return section + "." + name;
}

[[noreturn]] inline void ws_fail(ErrorKind kind, const std::string& entity,
                                 const std::string& message) {
  throw WorkspaceError(kind, entity, message);
}

inline const Json& ws_field(const Json& j, const char* key, const std::string& entity) {
  auto it = j.find(key);
  if (it == j.end()) ws_fail(ErrorKind::Schema, entity, std::string("missing field '") + key + "'");
  return *it;
}

inline void ws_object(const Json& j, const std::string& entity,
                      std::initializer_list<const char*> allowed) {
  if (!j.is_object()) ws_fail(ErrorKind::Schema, entity, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) ws_fail(ErrorKind::Schema, entity, "unknown field '" + it.key() + "'");
  }
}

inline const std::string& ws_string(const Json& j, const std::string& entity, const char* what) {
  if (!j.is_string()) ws_fail(ErrorKind::Schema, entity, std::string(what) + " must be a string");
  return j.get_ref<const std::string&>();
}

inline std::vector<std::string> ws_strings(const Json& j, const std::string& entity,
                                           const char* what) {
  if (!j.is_array()) {
    ws_fail(ErrorKind::Schema, entity, std::string(what) + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(ws_string(e, entity, what));
  return out;
}

inline std::map<std::string, std::string> ws_string_map(const Json& j, const std::string& entity,
                                                        const char* what) {
  if (!j.is_object()) {
    ws_fail(ErrorKind::Schema, entity, std::string(what) + " must be an object of strings");
  }
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = ws_string(it.value(), entity, what);
  return out;
}

inline FinSet ws_set(std::vector<std::string> names, const std::string& entity, const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (names[k] == names[i]) {
        ws_fail(ErrorKind::Schema, entity,
                std::string("duplicate ") + what + " '" + names[i] + "'");
      }
    }
  }
  return FinSet(std::move(names));
}

template <class Map>
const auto& ws_lookup(const Map& m, const std::string& name, const std::string& entity,
                      const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) {
    ws_fail(ErrorKind::DanglingReference, entity,
            std::string("unknown ") + kind + " '" + name + "'");
  }
  return it->second;
}

inline TypeSet ws_types(const FinSet& lang, const std::string& lang_name,
                        const std::vector<std::string>& names, const std::string& entity,
                        const std::string& context) {
  if (lang.size() > kMaxLanguageSize) {
    ws_fail(ErrorKind::InvalidArgument, entity,
            "language " + lang_name + " has more than 64 types");
  }
  TypeSet s = 0;
  for (const auto& n : names) {
    auto i = lang.index_of(n);
    if (!i) {
      ws_fail(ErrorKind::LanguageMismatch, entity,
              context + " type '" + n + "' is not in language " + lang_name);
    }
    s |= TypeSet{1} << *i;
  }
  return s;
}

/// Translate a byte offset into a 1-based line and column.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace detail

/// Parse a sequent object {"gamma": [...], "delta": [...]}; either side may
/// be omitted.
inline Sequent parse_sequent_json(const Json& j, const FinSet& lang, const std::string& lang_name,
                                  const std::string& entity) {
  detail::ws_object(j, entity, {"gamma", "delta"});
  std::vector<std::string> gamma, delta;
  if (j.contains("gamma")) gamma = detail::ws_strings(j["gamma"], entity, "gamma");
  if (j.contains("delta")) delta = detail::ws_strings(j["delta"], entity, "delta");
  return Sequent(lang, detail::ws_types(lang, lang_name, gamma, entity, "sequent"),
                 detail::ws_types(lang, lang_name, delta, entity, "sequent"));
}

inline Json sequent_json(const Sequent& q) {
  Json out = Json::object();
  out["gamma"] = type_names(q.language(), q.gamma());
  out["delta"] = type_names(q.language(), q.delta());
  return out;
}

namespace detail {

inline Workspace build_workspace(const Json& doc, std::string& current) {
  Workspace ws;
  if (doc.is_null()) return ws;
  ws_object(doc, "", {"languages", "classifications", "infomorphisms", "theories", "logics",
                      "systems", "channels"});
  auto section = [&](const char* key) -> const Json& {
    static const Json empty = Json::object();
    auto it = doc.find(key);
    if (it == doc.end()) return empty;
    if (!it->is_object()) ws_fail(ErrorKind::Schema, key, "expected an object");
    return *it;
  };

  for (const auto& [name, j] : section("languages").items()) {
    const std::string entity = entity_path("languages", name);
    current = entity;
    ws.languages.emplace(name, ws_set(ws_strings(j, entity, "language"), entity, "type"));
  }

  for (const auto& [name, j] : section("classifications").items()) {
    const std::string entity = entity_path("classifications", name);
    current = entity;
    ws_object(j, entity, {"language", "instances", "incidence"});
    const std::string& lang_name = ws_string(ws_field(j, "language", entity), entity, "language");
    const FinSet& lang = ws_lookup(ws.languages, lang_name, entity, "language");
    const FinSet inst =
        ws_set(ws_strings(ws_field(j, "instances", entity), entity, "instances"), entity,
               "instance");
    std::vector<TypeSet> rows(inst.size(), 0);
    if (j.contains("incidence")) {
      const Json& inc = j["incidence"];
      if (!inc.is_object()) ws_fail(ErrorKind::Schema, entity, "incidence must be an object");
      for (auto it = inc.begin(); it != inc.end(); ++it) {
        auto x = inst.index_of(it.key());
        if (!x) {
          ws_fail(ErrorKind::DanglingReference, entity,
                  "incidence names unknown instance '" + it.key() + "'");
        }
        rows[*x] = ws_types(lang, lang_name, ws_strings(it.value(), entity, "incidence"), entity,
                            "incidence of " + it.key() + ":");
      }
    } else if (lang.size() > kMaxLanguageSize) {
      ws_fail(ErrorKind::InvalidArgument, entity,
              "language " + lang_name + " has more than 64 types");
    }
    ws.classifications.emplace(name,
                               WsClassification{lang_name, Classification(inst, lang, rows)});
  }

  for (const auto& [name, j] : section("infomorphisms").items()) {
    const std::string entity = entity_path("infomorphisms", name);
    current = entity;
    ws_object(j, entity, {"source", "target", "types", "instances"});
    const std::string& src = ws_string(ws_field(j, "source", entity), entity, "source");
    const std::string& tgt = ws_string(ws_field(j, "target", entity), entity, "target");
    const Classification& a = ws_lookup(ws.classifications, src, entity, "classification").value;
    const Classification& b = ws_lookup(ws.classifications, tgt, entity, "classification").value;
    const auto types = ws_string_map(ws_field(j, "types", entity), entity, "types");
    const auto insts = ws_string_map(ws_field(j, "instances", entity), entity, "instances");

    auto build = [&](const FinSet& from, const FinSet& to, const std::map<std::string, std::string>& m,
                     const char* what) {
      std::vector<std::size_t> table(from.size());
      for (const auto& [k, v] : m) {
        if (!from.contains(k)) {
          ws_fail(ErrorKind::LanguageMismatch, entity,
                  std::string(what) + " map names '" + k + "', which is not in its domain");
        }
        if (!to.contains(v)) {
          ws_fail(ErrorKind::LanguageMismatch, entity,
                  std::string(what) + " map sends '" + k + "' to '" + v +
                      "', which is not in its codomain");
        }
      }
      for (std::size_t i = 0; i < from.size(); ++i) {
        auto it = m.find(from[i]);
        if (it == m.end()) {
          ws_fail(ErrorKind::InvalidMorphism, entity,
                  std::string(what) + " map does not send '" + from[i] + "' anywhere");
        }
        table[i] = *to.index_of(it->second);
      }
      return SetFn(from, to, std::move(table));
    };
    SetFn type_map = build(a.types(), b.types(), types, "type");
    SetFn instance_map = build(b.instances(), a.instances(), insts, "instance");
    Infomorphism f(a, b, std::move(type_map), std::move(instance_map));
    if (auto v = find_violation(f)) {
      ws_fail(ErrorKind::InvalidMorphism, entity,
              "fundamental condition fails at (" + b.instances()[v->instance] + ", " +
                  a.types()[v->type] + ")");
    }
    ws.infomorphisms.emplace(name, WsInfomorphism{src, tgt, std::move(f)});
  }

  for (const auto& [name, j] : section("theories").items()) {
    const std::string entity = entity_path("theories", name);
    current = entity;
    ws_object(j, entity, {"language", "sequents"});
    const std::string& lang_name = ws_string(ws_field(j, "language", entity), entity, "language");
    const FinSet& lang = ws_lookup(ws.languages, lang_name, entity, "language");
    if (lang.size() > kMaxLanguageSize) {
      ws_fail(ErrorKind::InvalidArgument, entity,
              "language " + lang_name + " has more than 64 types");
    }
    Theory t(lang);
    if (j.contains("sequents")) {
      const Json& list = j["sequents"];
      if (!list.is_array()) ws_fail(ErrorKind::Schema, entity, "sequents must be an array");
      for (const auto& q : list) t.insert(parse_sequent_json(q, lang, lang_name, entity));
    }
    ws.theories.emplace(name, WsTheory{lang_name, std::move(t)});
  }

  for (const auto& [name, j] : section("logics").items()) {
    const std::string entity = entity_path("logics", name);
    current = entity;
    ws_object(j, entity, {"classification", "theory"});
    const std::string& cls = ws_string(ws_field(j, "classification", entity), entity, "classification");
    const std::string& th = ws_string(ws_field(j, "theory", entity), entity, "theory");
    const auto& m = ws_lookup(ws.classifications, cls, entity, "classification");
    const auto& t = ws_lookup(ws.theories, th, entity, "theory");
    if (!(m.value.types() == t.value.language())) {
      ws_fail(ErrorKind::LanguageMismatch, entity,
              "theory " + th + " is over " + t.language + ", classification " + cls + " over " +
                  m.language);
    }
    ws.logics.emplace(name, WsLogic{cls, th, LocalLogic(m.value, t.value)});
  }

  for (const auto& [name, j] : section("systems").items()) {
    const std::string entity = entity_path("systems", name);
    current = entity;
    ws_object(j, entity, {"nodes", "edges"});
    WsSystem sys;
    const Json& nodes = ws_field(j, "nodes", entity);
    if (!nodes.is_array()) ws_fail(ErrorKind::Schema, entity, "nodes must be an array");
    std::vector<Classification> values;
    for (const auto& n : nodes) {
      std::string id, cls;
      if (n.is_string()) {
        id = cls = n.get<std::string>();
      } else {
        ws_object(n, entity, {"id", "classification"});
        cls = ws_string(ws_field(n, "classification", entity), entity, "classification");
        id = n.contains("id") ? ws_string(n["id"], entity, "id") : cls;
      }
      if (sys.node_index(id)) ws_fail(ErrorKind::Schema, entity, "duplicate node id '" + id + "'");
      values.push_back(ws_lookup(ws.classifications, cls, entity, "classification").value);
      sys.node_ids.push_back(id);
      sys.node_classifications.push_back(cls);
    }
    std::vector<ClsEdge> edges;
    if (j.contains("edges")) {
      const Json& list = j["edges"];
      if (!list.is_array()) ws_fail(ErrorKind::Schema, entity, "edges must be an array");
      for (const auto& e : list) {
        const std::string at = entity + ".edges[" + std::to_string(sys.edges.size()) + "]";
        ws_object(e, at, {"from", "to", "infomorphism"});
        WsEdge edge{ws_string(ws_field(e, "from", at), at, "from"),
                    ws_string(ws_field(e, "to", at), at, "to"),
                    ws_string(ws_field(e, "infomorphism", at), at, "infomorphism")};
        auto s = sys.node_index(edge.from);
        auto t = sys.node_index(edge.to);
        if (!s) ws_fail(ErrorKind::DanglingReference, at, "unknown node '" + edge.from + "'");
        if (!t) ws_fail(ErrorKind::DanglingReference, at, "unknown node '" + edge.to + "'");
        const auto& f = ws_lookup(ws.infomorphisms, edge.infomorphism, at, "infomorphism");
        if (f.source != sys.node_classifications[*s] || f.target != sys.node_classifications[*t]) {
          ws_fail(ErrorKind::MalformedDiagram, at,
                  "infomorphism " + edge.infomorphism + " runs " + f.source + " -> " + f.target +
                      ", not " + sys.node_classifications[*s] + " -> " +
                      sys.node_classifications[*t]);
        }
        edges.push_back({*s, *t, f.value});
        sys.edges.push_back(std::move(edge));
      }
    }
    sys.value = DistributedSystem(std::move(values), std::move(edges), sys.node_ids);
    ws.systems.emplace(name, std::move(sys));
  }

  for (const auto& [name, j] : section("channels").items()) {
    const std::string entity = entity_path("channels", name);
    current = entity;
    ws_object(j, entity, {"system", "core", "legs"});
    WsChannel ch;
    ch.system = ws_string(ws_field(j, "system", entity), entity, "system");
    ch.core = ws_string(ws_field(j, "core", entity), entity, "core");
    ch.legs = ws_string_map(ws_field(j, "legs", entity), entity, "legs");
    const auto& sys = ws_lookup(ws.systems, ch.system, entity, "system");
    const auto& core = ws_lookup(ws.classifications, ch.core, entity, "classification");
    for (const auto& [node, f] : ch.legs) {
      if (!sys.node_index(node)) {
        ws_fail(ErrorKind::DanglingReference, entity, "leg for unknown node '" + node + "'");
      }
    }
    std::vector<Infomorphism> legs;
    for (std::size_t i = 0; i < sys.node_ids.size(); ++i) {
      auto it = ch.legs.find(sys.node_ids[i]);
      if (it == ch.legs.end()) {
        ws_fail(ErrorKind::MalformedDiagram, entity, "no leg for node '" + sys.node_ids[i] + "'");
      }
      const auto& f = ws_lookup(ws.infomorphisms, it->second, entity, "infomorphism");
      if (f.source != sys.node_classifications[i] || f.target != ch.core) {
        ws_fail(ErrorKind::MalformedDiagram, entity,
                "leg " + it->second + " runs " + f.source + " -> " + f.target + ", not " +
                    sys.node_classifications[i] + " -> " + ch.core);
      }
      legs.push_back(f.value);
    }
    ch.value = Channel(sys.value, core.value, std::move(legs));
    ws.channels.emplace(name, std::move(ch));
  }
  return ws;
}

}  // namespace detail

inline Workspace workspace_from_json(const Json& doc) {
  std::string current;
  try {
    return detail::build_workspace(doc, current);
  } catch (const WorkspaceError&) {
    throw;
  } catch (const CapExceeded&) {
    throw;
  } catch (const Error& e) {
    throw WorkspaceError(e.kind(), current, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw WorkspaceError(ErrorKind::Schema, current, e.what());
  }
}

inline Workspace parse_workspace(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string message = e.what();
    if (auto p = message.find("parse error"); p != std::string::npos) message = message.substr(p);
    throw WorkspaceError(ErrorKind::Parse, "", message, line, column);
  }
  return workspace_from_json(doc);
}

inline Workspace load_workspace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WorkspaceError(ErrorKind::InvalidArgument, "", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  // An empty (or all-whitespace) document is an empty workspace.
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return Workspace{};
  return parse_workspace(text);
}

// ---------------------------------------------------------------------------
// Serialization. Keys come out sorted (the maps are ordered), so output is
// deterministic.

inline Json classification_json(const WsClassification& c) {
  Json out = Json::object();
  out["language"] = c.language;
  out["instances"] = c.value.instances().elements();
  Json inc = Json::object();
  for (std::size_t x = 0; x < c.value.instances().size(); ++x) {
    inc[c.value.instances()[x]] = type_names(c.value.types(), c.value.row(x));
  }
  out["incidence"] = std::move(inc);
  return out;
}

inline Json infomorphism_json(const WsInfomorphism& f) {
  Json out = Json::object();
  out["source"] = f.source;
  out["target"] = f.target;
  Json types = Json::object();
  const SetFn& t = f.value.type_map();
  for (std::size_t i = 0; i < t.source().size(); ++i) types[t.source()[i]] = t.target()[t(i)];
  Json insts = Json::object();
  const SetFn& g = f.value.instance_map();
  for (std::size_t i = 0; i < g.source().size(); ++i) insts[g.source()[i]] = g.target()[g(i)];
  out["types"] = std::move(types);
  out["instances"] = std::move(insts);
  return out;
}

inline Json theory_json(const WsTheory& t) {
  Json out = Json::object();
  out["language"] = t.language;
  Json list = Json::array();
  for (const auto& q : t.value) list.push_back(sequent_json(q));
  out["sequents"] = std::move(list);
  return out;
}

inline Json workspace_to_json(const Workspace& ws) {
  Json doc = Json::object();
  Json& langs = doc["languages"] = Json::object();
  for (const auto& [k, v] : ws.languages) langs[k] = v.elements();
  Json& cls = doc["classifications"] = Json::object();
  for (const auto& [k, v] : ws.classifications) cls[k] = classification_json(v);
  Json& infos = doc["infomorphisms"] = Json::object();
  for (const auto& [k, v] : ws.infomorphisms) infos[k] = infomorphism_json(v);
  Json& ths = doc["theories"] = Json::object();
  for (const auto& [k, v] : ws.theories) ths[k] = theory_json(v);
  Json& logics = doc["logics"] = Json::object();
  for (const auto& [k, v] : ws.logics) logics[k] = {{"classification", v.classification}, {"theory", v.theory}};
  Json& systems = doc["systems"] = Json::object();
  for (const auto& [k, v] : ws.systems) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < v.node_ids.size(); ++i) {
      if (v.node_ids[i] == v.node_classifications[i]) {
        nodes.push_back(v.node_ids[i]);
      } else {
        nodes.push_back({{"id", v.node_ids[i]}, {"classification", v.node_classifications[i]}});
      }
    }
    Json edges = Json::array();
    for (const auto& e : v.edges) {
      edges.push_back({{"from", e.from}, {"to", e.to}, {"infomorphism", e.infomorphism}});
    }
    systems[k] = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  }
  Json& channels = doc["channels"] = Json::object();
  for (const auto& [k, v] : ws.channels) {
    Json legs = Json::object();
    for (const auto& [node, f] : v.legs) legs[node] = f;
    channels[k] = {{"system", v.system}, {"core", v.core}, {"legs", std::move(legs)}};
  }
  return doc;
}

inline std::string serialize_workspace(const Workspace& ws) {
  return workspace_to_json(ws).dump(2) + "\n";
}

/// Record a minimal cover of system `name` under derived names:
/// language and classification "<name>.core", legs "<name>.leg.<node>",
/// channel "<name>.cover". Existing entries with those names are replaced.
inline std::string add_minimal_cover(Workspace& ws, const std::string& name, const Channel& cover) {
  const WsSystem& sys = ws.systems.at(name);
  const std::string core = name + ".core";
  ws.languages.insert_or_assign(core, cover.core().types());
  ws.classifications.insert_or_assign(core, WsClassification{core, cover.core()});
  WsChannel ch{name, core, {}, cover};
  for (std::size_t i = 0; i < sys.node_ids.size(); ++i) {
    const std::string leg = name + ".leg." + sys.node_ids[i];
    ws.infomorphisms.insert_or_assign(
        leg, WsInfomorphism{sys.node_classifications[i], core, cover.leg(i)});
    ch.legs[sys.node_ids[i]] = leg;
  }
  const std::string channel = name + ".cover";
  ws.channels.insert_or_assign(channel, std::move(ch));
  return channel;
}

}  // namespace channelkit

#endif  // CHANNELKIT_WORKSPACE_HPP
