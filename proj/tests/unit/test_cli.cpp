#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace channelkit;

namespace {

std::string sample(const std::string& name) {
  return std::string(CHANNELKIT_SOURCE_DIR) + "/workspaces/" + name;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

CliRun machine(std::vector<std::string> args) {
  args.insert(args.begin(), {"--format", "machine"});
  return run(std::move(args));
}

}  // namespace

TEST(Cli, Validate) {
  const CliRun r = machine({"validate", sample("fixtures.json")});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.json()["result"]["counts"]["classifications"], 2);
  EXPECT_EQ(r.json()["result"]["covering"]["binary"], true);
}

TEST(Cli, Entail) {
  const std::string ws = sample("fixtures.json");
  CliRun r = machine({"entail", ws, "T1", "a |- "});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["result"]["entails"], true);

  r = machine({"entail", ws, "EMPTY", "a |- a"});
  EXPECT_EQ(r.json()["result"]["entails"], true);

  r = machine({"entail", ws, "EMPTY", " |- "});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["result"]["entails"], false);
  EXPECT_EQ(r.json()["result"]["countermodel"], Json::array());

  const CliRun human = run({"entail", ws, "EMPTY", " |- "});
  EXPECT_NE(human.out.find("countermodel: {}"), std::string::npos);
  EXPECT_NE(human.out.find("time: "), std::string::npos);
}

TEST(Cli, EntailCapReportsLimit) {
  const CliRun r = machine({"--max-types", "1", "entail", sample("fixtures.json"), "T1", "a |-"});
  EXPECT_EQ(r.code, 3);
  const Json e = r.json()["error"];
  EXPECT_EQ(e["kind"], "cap_exceeded");
  EXPECT_EQ(e["cap"]["limit"], 1);
  EXPECT_EQ(e["cap"]["flag"], "--max-types");
}

TEST(Cli, MinimalCover) {
  const std::string ws = sample("fixtures.json");
  CliRun r = machine({"mincover", ws, "discrete"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.json()["result"]["core"]["language"], "discrete.core");
  EXPECT_EQ(r.json()["result"]["core"]["instances"].size(), 2u);
  EXPECT_EQ(r.json()["result"]["legs"].size(), 2u);
  const CliRun human = run({"mincover", ws, "discrete"});
  EXPECT_NE(human.out.find("core 3 types, 2 instances"), std::string::npos);

  r = machine({"mincover", ws, "single"});
  EXPECT_EQ(r.json()["result"]["identity"], true);

  r = machine({"--max-product", "1", "mincover", ws, "discrete"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.json()["error"]["cap"]["flag"], "--max-product");
  const CliRun hint = run({"--max-product", "1", "mincover", ws, "discrete"});
  EXPECT_NE(hint.err.find("--max-product"), std::string::npos);
}

TEST(Cli, MinimalCoverWritesDerivedObjects) {
  const std::string out = testing::TempDir() + "cover.json";
  const CliRun r = run({"mincover", sample("pushout.json"), "span", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const Workspace ws = load_workspace(out);
  EXPECT_TRUE(ws.channels.contains("span.cover"));
  EXPECT_TRUE(ws.infomorphisms.contains("span.leg.A1"));
  EXPECT_TRUE(is_covering(ws.channels.at("span.cover").value));

  const CliRun fused = machine({"fuse", out, "span.cover", "L0", "L1", "L2", "--probe", "|- c@2"});
  ASSERT_EQ(fused.code, 0) << fused.out;
  EXPECT_EQ(fused.json()["result"]["probes"][0]["entails"], true);
  EXPECT_EQ(fused.json()["result"]["sequents"].size(), 2u);
}

TEST(Cli, FuseEmptyAndNonCovering) {
  const std::string out = testing::TempDir() + "cover2.json";
  ASSERT_EQ(run({"mincover", sample("fixtures.json"), "discrete", "--out", out}).code, 0);
  // An empty component theory contributes nothing.
  const CliRun r = machine({"fuse", out, "discrete.cover", "M.empty", "N.natural"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.json()["result"]["sequents"].size(), 1u);

  // Break covering: channel over the binary system whose M leg disagrees
  // with f ; leg_N.
  const std::string text = R"({
    "languages": {"Y": ["a", "b"], "Z": ["p"]},
    "classifications": {
      "M2": {"language": "Y", "instances": ["v1", "v2"], "incidence": {"v1": ["a", "b"], "v2": ["a", "b"]}},
      "N": {"language": "Z", "instances": ["u"], "incidence": {"u": ["p"]}}
    },
    "infomorphisms": {
      "g1": {"source": "M2", "target": "N", "types": {"a": "p", "b": "p"}, "instances": {"u": "v1"}},
      "g2": {"source": "M2", "target": "N", "types": {"a": "p", "b": "p"}, "instances": {"u": "v2"}},
      "idN": {"source": "N", "target": "N", "types": {"p": "p"}, "instances": {"u": "u"}}
    },
    "theories": {"E": {"language": "Y"}, "F": {"language": "Z"}},
    "logics": {"LM": {"classification": "M2", "theory": "E"}, "LN": {"classification": "N", "theory": "F"}},
    "systems": {"S": {"nodes": ["M2", "N"], "edges": [{"from": "M2", "to": "N", "infomorphism": "g2"}]}},
    "channels": {"C": {"system": "S", "core": "N", "legs": {"M2": "g1", "N": "idN"}}}
  })";
  const std::string path = testing::TempDir() + "noncovering.json";
  std::ofstream(path) << text;
  const CliRun bad = machine({"fuse", path, "C", "LM", "LN"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(bad.json()["error"]["kind"], "invalid_morphism");
  EXPECT_NE(bad.json()["error"]["message"].get<std::string>().find("edge 0 (M2 -> N)"),
            std::string::npos);
}

TEST(Cli, Flow) {
  CliRun r = machine({"flow", sample("iso-binary.json"), "iso", "M", "|- a", "Mr", "|- ra"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.json()["result"]["carries"], true);
  EXPECT_EQ(r.json()["result"]["projection_warnings"], Json::array());

  r = machine({"flow", sample("fixtures.json"), "binary", "M", "|- a", "N", "|- p"});
  EXPECT_EQ(r.json()["result"]["carries"], true);
  EXPECT_EQ(r.json()["result"]["projection_warnings"], Json::array({"M"}));

  r = machine({"flow", sample("fixtures.json"), "binary", "N", "|- p", "N", "|- p"});
  EXPECT_EQ(r.json()["result"]["carries"], true);

  r = machine({"flow", sample("iso-binary.json"), "iso", "M", "|- a", "Mr", "|- rb"});
  EXPECT_EQ(r.json()["result"]["carries"], false);
  EXPECT_EQ(r.json()["result"]["defeating_instance"], "r1");
}

TEST(Cli, Audit) {
  const std::string ws = sample("fixtures.json");
  CliRun r = machine({"audit", ws, "M.natural"});
  EXPECT_EQ(r.json()["result"]["sound"], true);
  EXPECT_EQ(r.json()["result"]["complete"], true);

  r = machine({"audit", ws, "M.empty"});
  EXPECT_EQ(r.json()["result"]["sound"], true);
  EXPECT_EQ(r.json()["result"]["complete"], false);
  EXPECT_EQ(r.json()["result"]["incomplete_witness"], "|- a");

  r = machine({"audit", ws, "M.b"});
  EXPECT_EQ(r.json()["result"]["sound"], false);
  EXPECT_EQ(r.json()["result"]["unsound_witness"]["instance"], "x1");
}

TEST(Cli, ClosureAndTheoryColimit) {
  CliRun r = machine({"closure", sample("fixtures.json"), "A"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.json()["result"]["size"], 10);

  r = machine({"thcolimit", sample("pushout.json"), "span", "T0", "T1", "T2"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.json()["result"]["language"].size(), 3u);
  EXPECT_EQ(r.json()["result"]["sequents"].size(), 2u);

  r = machine({"thcolimit", sample("pushout.json"), "span", "T0"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"validate", "/no/such/file.json"}).code, 1);
  EXPECT_EQ(run({"entail", sample("fixtures.json"), "NOPE", "|-"}).code, 1);
  EXPECT_EQ(run({"entail", sample("fixtures.json"), "T1", "a b"}).code, 1);
  EXPECT_EQ(run({"entail", sample("fixtures.json"), "T1", "|- zz"}).code, 1);
  EXPECT_EQ(run({"--format", "xml", "validate", sample("fixtures.json")}).code, 1);
  EXPECT_EQ(run({"validate", sample("fixtures.json"), "--out", "x.json"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, EnvironmentVariables) {
  ::setenv("CHANNELKIT_MAX_PRODUCT", "1", 1);
  const CliRun r = machine({"mincover", sample("fixtures.json"), "discrete"});
  ::unsetenv("CHANNELKIT_MAX_PRODUCT");
  EXPECT_EQ(r.code, 3);
  ::setenv("CHANNELKIT_FORMAT", "machine", 1);
  const CliRun m = run({"validate", sample("fixtures.json")});
  ::unsetenv("CHANNELKIT_FORMAT");
  EXPECT_NO_THROW(Json::parse(m.out));
}

TEST(Cli, MachineReportsAreDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"validate", sample("fixtures.json")},
      {"mincover", sample("pushout.json"), "span"},
      {"flow", sample("fixtures.json"), "binary", "M", "|- a", "N", "|- p"},
      {"audit", sample("fixtures.json"), "M.empty"},
  };
  for (const auto& c : commands) {
    const CliRun a = machine(c);
    const CliRun b = machine(c);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.find("time"), std::string::npos);
  }
}
