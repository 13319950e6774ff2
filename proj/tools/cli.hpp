#ifndef CHANNELKIT_TOOLS_CLI_HPP
#define CHANNELKIT_TOOLS_CLI_HPP

// Command-line front end. run_cli parses arguments, loads the workspace,
// runs one command and returns the exit status:
//   0 success, 1 usage error, 2 validation error, 3 cap exceeded.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "channelkit/commands.hpp"

namespace channelkit::cli {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kCap = 3 };

inline const char* cap_flag(const std::string& cap) {
  if (cap == "max-types") return "--max-types";
  if (cap == "max-closure-types") return "--max-closure-types";
  if (cap == "max-product") return "--max-product";
  if (cap == "max-iso-nodes") return "--max-iso-nodes";
  return "";
}

struct Options {
  Caps caps;
  std::string format = "human";
  std::string out;
  std::string workspace;
};

inline void emit_error(const Options& opt, std::ostream& out, std::ostream& err, int code,
                       const std::string& kind, const std::string& message,
                       const WorkspaceError* ws = nullptr, const CapExceeded* cap = nullptr) {
  if (opt.format == "machine") {
    Json e = Json::object();
    e["kind"] = kind;
    e["entity"] = ws && !ws->entity().empty() ? Json(ws->entity()) : Json(nullptr);
    e["message"] = ws ? ws->message() : message;
    if (ws && ws->line() > 0) {
      e["line"] = ws->line();
      e["column"] = ws->column();
    }
    if (cap) {
      e["cap"] = {{"name", cap->cap_name()},
                  {"limit", cap->limit()},
                  {"requested", cap->requested()},
                  {"flag", cap_flag(cap->cap_name())}};
    }
    out << Json{{"error", e}, {"exit", code}}.dump(2) << "\n";
    return;
  }
  err << "error[" << kind << "]: " << message << "\n";
  if (ws && ws->line() > 0) err << "  at line " << ws->line() << ", column " << ws->column() << "\n";
  if (cap) {
    err << "  hint: raise " << cap_flag(cap->cap_name()) << " (this step needed at least "
        << cap->requested() << ")\n";
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("cannot write " + path);
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"channelkit: classifications, local logics and channels"};
  app.name("channelkit");
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  app.add_option("--max-types", opt.caps.max_types, "largest language for state enumeration")
      ->envname("CHANNELKIT_MAX_TYPES")
      ->check(CLI::Range(std::size_t{1}, kMaxLanguageSize));
  app.add_option("--max-closure-types", opt.caps.max_closure_types,
                 "largest language for listing every sequent")
      ->envname("CHANNELKIT_MAX_CLOSURE_TYPES")
      ->check(CLI::Range(std::size_t{1}, kMaxLanguageSize));
  app.add_option("--max-product", opt.caps.max_product, "largest limit instance set")
      ->envname("CHANNELKIT_MAX_PRODUCT");
  app.add_option("--max-iso-nodes", opt.caps.max_iso_nodes, "isomorphism search budget")
      ->envname("CHANNELKIT_MAX_ISO_NODES");
  app.add_option("--format", opt.format, "report format")
      ->envname("CHANNELKIT_FORMAT")
      ->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--out", opt.out, "write the workspace with derived objects here")
      ->envname("CHANNELKIT_OUT");

  auto workspace_arg = [&](CLI::App* sub) {
    sub->add_option("workspace", opt.workspace, "workspace document")
        ->required()
        ->check(CLI::ExistingFile);
  };

  std::string name_a, name_b, lit_a, lit_b, node_a, node_b;
  std::vector<std::string> names, probes;

  auto* validate = app.add_subcommand("validate", "load and check a workspace");
  workspace_arg(validate);

  auto* entail = app.add_subcommand("entail", "decide whether a theory entails a sequent");
  workspace_arg(entail);
  entail->add_option("theory", name_a)->required();
  entail->add_option("sequent", lit_a, "e.g. \"a b |- c\"")->required();

  auto* closure_cmd = app.add_subcommand("closure", "list every sequent a theory entails");
  workspace_arg(closure_cmd);
  closure_cmd->add_option("theory", name_a)->required();

  auto* thcolimit = app.add_subcommand("thcolimit", "colimit of theories over a system's languages");
  workspace_arg(thcolimit);
  thcolimit->add_option("system", name_a)->required();
  thcolimit->add_option("theories", names, "one theory per node, in node order");

  auto* mincover = app.add_subcommand("mincover", "minimal cover of a distributed system");
  workspace_arg(mincover);
  mincover->add_option("system", name_a)->required();

  auto* fuse = app.add_subcommand("fuse", "fuse node logics over a channel's core");
  workspace_arg(fuse);
  fuse->add_option("channel", name_a)->required();
  fuse->add_option("logics", names, "one logic per node, in node order");
  fuse->add_option("--probe", probes, "check whether the fused theory entails this sequent");

  auto* flow = app.add_subcommand("flow", "does a_i at node i carry a_j at node j");
  workspace_arg(flow);
  flow->add_option("channel", name_a)->required();
  flow->add_option("i", node_a)->required();
  flow->add_option("a_i", lit_a)->required();
  flow->add_option("j", node_b)->required();
  flow->add_option("a_j", lit_b)->required();

  auto* audit = app.add_subcommand("audit", "soundness and completeness of a logic");
  workspace_arg(audit);
  audit->add_option("logic", name_a)->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(opt, out, err, kUsage, "usage", e.what());
    return kUsage;
  }

  try {
    Workspace ws = load_workspace(opt.workspace);
    Report report;
    bool changed = false;
    if (app.got_subcommand(validate)) {
      report = cmd_validate(ws, opt.caps);
    } else if (app.got_subcommand(entail)) {
      report = cmd_entail(ws, name_a, lit_a, opt.caps);
    } else if (app.got_subcommand(closure_cmd)) {
      Theory c;
      report = cmd_closure(ws, name_a, opt.caps, &c);
      const std::string derived = name_a + ".closure";
      ws.theories.insert_or_assign(derived, WsTheory{ws.theories.at(name_a).language, c});
      changed = true;
    } else if (app.got_subcommand(thcolimit)) {
      TheoryColimit colim;
      report = cmd_thcolimit(ws, name_a, names, opt.caps, &colim);
      const std::string derived = name_a + ".thcolimit";
      ws.languages.insert_or_assign(derived, colim.theory.language());
      ws.theories.insert_or_assign(derived, WsTheory{derived, colim.theory});
      changed = true;
    } else if (app.got_subcommand(mincover)) {
      Channel cover;
      report = cmd_mincover(ws, name_a, opt.caps, &cover);
      add_minimal_cover(ws, name_a, cover);
      changed = true;
    } else if (app.got_subcommand(fuse)) {
      LocalLogic fused;
      report = cmd_fuse(ws, name_a, names, probes, opt.caps, &fused);
      const auto& ch = ws.channels.at(name_a);
      const std::string derived = name_a + ".fused";
      ws.theories.insert_or_assign(
          derived, WsTheory{ws.classifications.at(ch.core).language, fused.theory()});
      ws.logics.insert_or_assign(derived, WsLogic{ch.core, derived, fused});
      changed = true;
    } else if (app.got_subcommand(flow)) {
      report = cmd_flow(ws, name_a, node_a, lit_a, node_b, lit_b, opt.caps);
    } else if (app.got_subcommand(audit)) {
      report = cmd_audit(ws, name_a, opt.caps);
    }
    if (!opt.out.empty()) {
      if (!changed) throw UsageError("--out: " + report.command + " derives nothing to write");
      write_file(opt.out, serialize_workspace(ws));
    }
    if (opt.format == "machine") {
      out << report.machine().dump(2) << "\n";
    } else {
      out << report.human();
    }
    return kOk;
  } catch (const CapExceeded& e) {
    emit_error(opt, out, err, kCap, to_string(e.kind()), e.what(), nullptr, &e);
    return kCap;
  } catch (const UsageError& e) {
    emit_error(opt, out, err, kUsage, "usage", e.what());
    return kUsage;
  } catch (const WorkspaceError& e) {
    emit_error(opt, out, err, kValidation, to_string(e.kind()), e.what(), &e);
    return kValidation;
  } catch (const Error& e) {
    emit_error(opt, out, err, kValidation, to_string(e.kind()), e.what());
    return kValidation;
  } catch (const std::exception& e) {
    emit_error(opt, out, err, kValidation, "internal", e.what());
    return kValidation;
  }
}

}  // namespace channelkit::cli

#endif  // CHANNELKIT_TOOLS_CLI_HPP
