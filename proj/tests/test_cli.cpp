#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dssp/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

// Runs the CLI with redirected streams inside a per-test scratch directory.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::path("cli_scratch") / std::to_string(counter++);
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string command = std::string(DSSP_CLI_PATH) + " " + args + " > " +
                              out.string() + " 2> " + err.string();
  const int raw = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

std::string asset(const std::string& name) {
  return std::string(DSSP_ASSET_DIR) + "/" + name;
}

const std::string kExpectedSolution = R"({
  "status": "SOLUTION",
  "level": 3,
  "policies": [
    {
      "agent": "G1",
      "assignments": {
        "q0": [
          "a1"
        ],
        "q1": [
          "a2"
        ]
      }
    },
    {
      "agent": "G2",
      "assignments": {
        "q0": [
          "b1",
          "b4"
        ]
      }
    }
  ]
}
)";

}  // namespace

TEST_CASE("synth solves the demo model") {
  const RunResult result = run_cli("synth " + asset("example_fig2.dssp"));
  CHECK(result.exit_code == 0);
  CHECK(result.out == kExpectedSolution);
}

TEST_CASE("synth emits the trace on request") {
  const RunResult result =
      run_cli("synth --trace " + asset("example_fig2.dssp"));
  CHECK(result.exit_code == 0);
  CHECK(result.err.find("chosen agent 2 level 1") != std::string::npos);
  CHECK(result.err.find("chosen agent 1 level 3") != std::string::npos);
  CHECK(result.err.find("rounds [2, 3] level 3") != std::string::npos);
  CHECK(result.err.find("rounds [1, 4] level 4") != std::string::npos);
  CHECK(result.err.find("V [1, 3]") != std::string::npos);
  CHECK(result.err.find("k 3") != std::string::npos);
}

TEST_CASE("synth reports no solution with exit one") {
  const RunResult result = run_cli("synth " + asset("example_fig2_r3.dssp"));
  CHECK(result.exit_code == 1);
  CHECK(result.out.find("NO_SOLUTION") != std::string::npos);
}

TEST_CASE("synth distinguishes io and validation failures") {
  CHECK(run_cli("synth missing.dssp").exit_code == 3);

  fs::create_directories("cli_scratch");
  std::ofstream("cli_scratch/broken.dssp") << "{ not json";
  const RunResult broken = run_cli("synth cli_scratch/broken.dssp");
  CHECK(broken.exit_code == 2);
  CHECK(broken.err.find("SYNTAX_ERROR") != std::string::npos);

  std::ofstream("cli_scratch/invalid.dssp")
      << R"({"agents": [{"name": "A", "states": ["s0"], "initial": "s0",
              "secret_states": ["s0"], "protectable": [],
              "transitions": []}],
             "cost_classes": [], "secrets": []})";
  const RunResult invalid = run_cli("synth cli_scratch/invalid.dssp");
  CHECK(invalid.exit_code == 2);
  CHECK(invalid.err.find("REQUIREMENT_EMPTY") != std::string::npos);
}

TEST_CASE("repeated synth runs are byte-identical") {
  fs::create_directories("cli_scratch");
  const RunResult first = run_cli("synth --out cli_scratch/a.policy " +
                                  asset("example_fig2.dssp"));
  const RunResult second = run_cli("synth --out cli_scratch/b.policy " +
                                   asset("example_fig2.dssp"));
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(slurp("cli_scratch/a.policy") == slurp("cli_scratch/b.policy"));
  CHECK(slurp("cli_scratch/a.policy") == kExpectedSolution);
}

TEST_CASE("synth writes dot snapshots of the intermediates") {
  fs::create_directories("cli_scratch");
  const RunResult result = run_cli("synth --dot cli_scratch/dots " +
                                   asset("example_fig2.dssp"));
  CHECK(result.exit_code == 0);
  CHECK(fs::exists("cli_scratch/dots/agent1.dot"));
  CHECK(fs::exists("cli_scratch/dots/agent2.dot"));
  CHECK(fs::exists("cli_scratch/dots/pair1_agent1_round1_supervisor.dot"));

  // the second round of the second pair runs on the relabelled agent
  const std::string relabelled =
      slurp("cli_scratch/dots/pair2_agent2_round2_plant.dot");
  CHECK(relabelled.find("'b1.1") != std::string::npos);
  CHECK(relabelled.find("'b4.1") != std::string::npos);
  CHECK(relabelled.find("relabelled=true") != std::string::npos);
}

TEST_CASE("verify accepts the bundled policies") {
  const RunResult full = run_cli("verify " + asset("example_fig2.dssp") +
                                 " " + asset("example_fig2.policy"));
  CHECK(full.exit_code == 0);
  CHECK(full.out.find("PASS") != std::string::npos);
  CHECK(full.out.find("policy level: 3") != std::string::npos);

  const RunResult partial =
      run_cli("verify " + asset("example_fig2.dssp") + " " +
              asset("example_fig2_p1_only.policy"));
  CHECK(partial.exit_code == 0);

  const RunResult empty = run_cli("verify " + asset("example_fig2.dssp") +
                                  " " + asset("example_fig2_empty.policy"));
  CHECK(empty.exit_code == 1);
  CHECK(empty.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify supports machine format") {
  const RunResult result =
      run_cli("verify --format machine " + asset("example_fig2.dssp") + " " +
              asset("example_fig2.policy"));
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("pair 1 required 1 satisfied 1") != std::string::npos);
  CHECK(result.out.find("pass 1") != std::string::npos);
  CHECK(result.out.find("policy-level 3") != std::string::npos);
}

TEST_CASE("solvable answers yes and no") {
  const RunResult yes = run_cli("solvable " + asset("example_fig2.dssp"));
  CHECK(yes.exit_code == 0);
  CHECK(yes.out == "yes\n");

  const RunResult no = run_cli("solvable " + asset("example_fig2_r3.dssp"));
  CHECK(no.exit_code == 1);
  CHECK(no.out == "no\n");
}

TEST_CASE("solvable treats unreachable secrets as vacuously safe") {
  fs::create_directories("cli_scratch");
  std::ofstream("cli_scratch/unreachable.dssp") << R"({
    "agents": [{"name": "A", "states": ["s0", "s1", "lost"],
                "initial": "s0", "secret_states": ["lost"],
                "protectable": ["go"],
                "transitions": [["s0", "go", "s1"]]}],
    "cost_classes": [["go"]],
    "secrets": [{"tuple": ["lost"], "protections": 9}]})";
  const RunResult result = run_cli("solvable cli_scratch/unreachable.dssp");
  CHECK(result.exit_code == 0);
  CHECK(result.out == "yes\n");
}

TEST_CASE("oracle-k prints the least level or none") {
  const RunResult three = run_cli("oracle-k " + asset("example_fig2.dssp"));
  CHECK(three.exit_code == 0);
  CHECK(three.out == "3\n");

  const RunResult none = run_cli("oracle-k " + asset("example_fig2_r3.dssp"));
  CHECK(none.exit_code == 1);
  CHECK(none.out == "none\n");
}

TEST_CASE("validate reports ok or the violation codes") {
  const RunResult ok = run_cli("validate " + asset("example_fig2.dssp"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.out == "ok\n");

  fs::create_directories("cli_scratch");
  std::ofstream("cli_scratch/overlap.dssp") << R"({
    "agents": [{"name": "A", "states": ["s0", "s1"], "initial": "s0",
                "secret_states": ["s1"], "protectable": ["p"],
                "transitions": [["s0", "p", "s1"]]}],
    "cost_classes": [["p"], ["p"]],
    "secrets": [{"tuple": ["s1"], "protections": 1}]})";
  const RunResult overlap = run_cli("validate cli_scratch/overlap.dssp");
  CHECK(overlap.exit_code == 2);
  CHECK(overlap.err.find("COST_PARTITION_OVERLAP") != std::string::npos);
}

TEST_CASE("gen is deterministic and checks its parameters") {
  fs::create_directories("cli_scratch");
  const RunResult first =
      run_cli("gen --seed 1 --out cli_scratch/g1.dssp");
  const RunResult second =
      run_cli("gen --seed 1 --out cli_scratch/g2.dssp");
  CHECK(first.exit_code == 0);
  CHECK(second.exit_code == 0);
  CHECK(slurp("cli_scratch/g1.dssp") == slurp("cli_scratch/g2.dssp"));

  CHECK(run_cli("gen --seed 1 --agents 0").exit_code == 2);
  CHECK(run_cli("gen --seed 1 --agents nonsense").exit_code == 2);
}

TEST_CASE("generated models flow through synth and verify") {
  fs::create_directories("cli_scratch");
  for (int seed = 2; seed <= 8; ++seed) {
    const std::string model = "cli_scratch/flow" + std::to_string(seed);
    REQUIRE(run_cli("gen --seed " + std::to_string(seed) + " --out " + model +
                    ".dssp")
                .exit_code == 0);
    const int solvable =
        run_cli("solvable " + model + ".dssp").exit_code;
    const int synth = run_cli("synth " + model + ".dssp --out " + model +
                              ".policy")
                          .exit_code;
    CHECK(synth == solvable);  // 0 iff solvable says yes
    if (synth == 0) {
      CHECK(run_cli("verify " + model + ".dssp " + model + ".policy")
                .exit_code == 0);
    }
  }
}

TEST_CASE("render writes one graph per agent") {
  fs::create_directories("cli_scratch");
  const RunResult result = run_cli("render " + asset("example_fig2.dssp") +
                                   " --dot cli_scratch/render");
  CHECK(result.exit_code == 0);
  CHECK(fs::exists("cli_scratch/render/agent1.dot"));
  CHECK(fs::exists("cli_scratch/render/agent2.dot"));

  const std::string second = slurp("cli_scratch/render/agent2.dot");
  int edges = 0;
  for (std::size_t pos = 0; (pos = second.find("->", pos)) != std::string::npos;
       ++pos)
    ++edges;
  CHECK(edges == 8);
  CHECK(second.find("\"q2\" [secret=true") != std::string::npos);
  CHECK(second.find("\"q4\" [secret=true") != std::string::npos);
  CHECK(second.find("protected=true") == std::string::npos);

  // overlaying the bundled policy marks the protected transitions
  const RunResult overlay = run_cli(
      "render " + asset("example_fig2.dssp") + " --dot cli_scratch/render2" +
      " --policy " + asset("example_fig2.policy"));
  CHECK(overlay.exit_code == 0);
  CHECK(slurp("cli_scratch/render2/agent1.dot").find("protected=true") !=
        std::string::npos);

  // an empty policy overlay marks nothing
  const RunResult empty_overlay = run_cli(
      "render " + asset("example_fig2.dssp") + " --dot cli_scratch/render3" +
      " --policy " + asset("example_fig2_empty.policy"));
  CHECK(empty_overlay.exit_code == 0);
  CHECK(slurp("cli_scratch/render3/agent1.dot").find("protected=true") ==
        std::string::npos);

  // a directory that cannot be created is an io failure
  std::ofstream("cli_scratch/blocker") << "file";
  CHECK(run_cli("render " + asset("example_fig2.dssp") +
                " --dot cli_scratch/blocker/sub")
            .exit_code == 3);
}

TEST_CASE("misuse of the command line exits with code two") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate x").exit_code == 2);
  CHECK(run_cli("synth").exit_code == 2);
}
