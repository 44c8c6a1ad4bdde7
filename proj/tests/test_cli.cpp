#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "octsynth/json_io.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = true) {
  const std::string cmd = std::string(OCTSYNTH_CLI_PATH) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct Golden {
  std::string name;
  std::string synth_args;
  std::string sweep_args;
};

const std::vector<Golden>& goldens() {
  static const std::vector<Golden> g = {
      {"g1", "--a 1 --lambda 0.9 --t0 0 --T 0.5 --x0 0",
       "--a 1 --lambda 0.9 --t0 0 --x0 0 --horizon-min 0.5 --horizon-max 3.5 "
       "--steps 5"},
      {"g2", "--a 2 --lambda 1 --t0 0 --T 1.6 --x0 -1",
       "--a 2 --lambda 1 --t0 0 --x0 -1 --horizon-min 1.0 --horizon-max 1.6 "
       "--steps 5"},
      {"g3", "--a 2 --lambda 1 --t0 0 --T 1.1 --x0 0.5",
       "--a 2 --lambda 1 --t0 0 --x0 0.5 --horizon-min 0.4 --horizon-max 1.6 "
       "--steps 4"},
      {"g4", "--a 2 --lambda 1 --t0 0 --T 0.8 --x0 0.69314718055994531",
       "--a 2 --lambda 1 --t0 0 --x0 0.69314718055994531 --horizon-min 0.4 "
       "--horizon-max 1.2 --steps 3"},
      {"g5", "--a 2 --lambda 1 --t0 0 --T 0.9 --x0 1",
       "--a 2 --lambda 1 --t0 0 --x0 1 --horizon-min 0.5 --horizon-max 1.5 "
       "--steps 3"},
      {"g6", "--a 2 --lambda 1 --t0 0 --T 2 --x0 0",
       "--a 2 --lambda 1 --t0 0 --x0 0 --horizon-min 0.6 --horizon-max 2.4 "
       "--steps 4"}};
  return g;
}

}  // namespace

TEST_CASE("exit codes follow the 0/1/2 contract", "[cli]") {
  CHECK(run_cli("synthesize --a 2 --lambda 1 --t0 0 --T 1 --x0 0").code == 0);

  const RunResult bad_x0 =
      run_cli("synthesize --a 2 --lambda 1 --t0 0 --T 1 --x0 1.5");
  CHECK(bad_x0.code == 2);
  CHECK(bad_x0.out.find("x0 must lie in [-1,1]") != std::string::npos);

  CHECK(run_cli("verify --a 1 --lambda 0.9 --t0 0 --T 0.5 --x0 0").code == 0);
  // A zero tolerance cannot absorb the discretization gap.
  CHECK(run_cli("verify --a 1 --lambda 0.9 --t0 0 --T 0.5 --x0 0 --tol 0")
            .code == 1);

  const RunResult bad_range = run_cli(
      "sweep --a 2 --lambda 1 --t0 0 --x0 0 --horizon-min 2 --horizon-max 1 "
      "--steps 4");
  CHECK(bad_range.code == 2);
  CHECK(bad_range.out.find("horizon-min must be less than horizon-max") !=
        std::string::npos);

  CHECK(run_cli("lemmas --trials 200 --seed 7").code == 0);
  CHECK(run_cli("nonsense").code == 2);
}

TEST_CASE("verification verdicts name the certificate status", "[cli]") {
  const RunResult healthy =
      run_cli("verify --a 1 --lambda 0.9 --t0 0 --T 4.5 --x0 0", false);
  CHECK(healthy.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(healthy.out);
  CHECK(doc.at("verdict") == "PASS");
  CHECK(doc.at("certificate").at("status") == "pass");
  const std::string note = doc.at("notes").at(0).get<std::string>();
  CHECK(note.rfind("certificate: ", 0) == 0);

  // In the contradicted long-horizon clause both checks fail honestly: the
  // oracle strictly undercuts the published shape and no multipliers exist.
  const RunResult broken =
      run_cli("verify --a 2 --lambda 1 --t0 0 --T 2 --x0 0 --nt 4000 "
              "--nx 2001 --controls -1,0,1",
              false);
  CHECK(broken.code == 1);
  const nlohmann::json bdoc = nlohmann::json::parse(broken.out);
  CHECK(bdoc.at("verdict") == "FAIL");
  CHECK(bdoc.at("certificate").at("status") == "infeasible");
  CHECK(bdoc.at("oracle_value").get<double>() <
        bdoc.at("best_candidate_cost").get<double>() - 5e-3);
}

TEST_CASE("json output is canonical and round-trips byte-identically",
          "[cli]") {
  const RunResult r =
      run_cli("synthesize --a 2 --lambda 1 --t0 0 --T 1.6 --x0 -1", false);
  REQUIRE(r.code == 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(octsynth::dump_canonical_json(doc) == r.out);
  CHECK(doc.at("regime").at("theorem") == "Thm3b");
  CHECK(doc.at("regime").at("clause") == "b");
  REQUIRE(doc.at("candidates").size() == 2);
  for (const auto& cand : doc.at("candidates"))
    CHECK(cand.at("status") == "LocalCandidate");
}

TEST_CASE("sweep emits one row per step and tracks clause transitions",
          "[cli]") {
  const RunResult two = run_cli(
      "sweep --a 2 --lambda 1 --t0 0 --x0 0 --horizon-min 0.5 "
      "--horizon-max 1.0 --steps 2",
      false);
  REQUIRE(two.code == 0);
  CHECK(split_lines(two.out).size() == 3);  // header + 2 rows

  // Crossing the tent threshold 2*rho doubles the candidate count.
  const RunResult tent = run_cli(goldens()[1].sweep_args.empty()
                                     ? ""
                                     : "sweep " + goldens()[1].sweep_args,
                                 false);
  REQUIRE(tent.code == 0);
  const auto lines = split_lines(tent.out);
  REQUIRE(lines.size() == 6);
  const std::vector<std::string> want_clause = {"a", "a", "a", "b", "b"};
  const std::vector<std::string> want_count = {"1", "1", "1", "2", "2"};
  for (int i = 0; i < 5; ++i) {
    const auto fields = split_csv(lines[static_cast<std::size_t>(i) + 1]);
    REQUIRE(fields.size() >= 6);
    CHECK(fields[1] == "Thm3b");
    CHECK(fields[2] == want_clause[static_cast<std::size_t>(i)]);
    CHECK(fields[3] == want_count[static_cast<std::size_t>(i)]);
  }

  // Crossing (3 - x0)/a switches the best shape to rise-hold-descend: two
  // interior switch times appear in the final column.
  const RunResult rhd =
      run_cli("sweep " + goldens()[5].sweep_args, false);
  REQUIRE(rhd.code == 0);
  const auto rhd_lines = split_lines(rhd.out);
  REQUIRE(rhd_lines.size() == 5);
  const auto last = split_csv(rhd_lines.back());
  CHECK(last[1] == "Thm3d");
  CHECK(last[2] == "f");
  CHECK(last.back().find(';') != std::string::npos);
}

TEST_CASE("lemma runs are deterministic and single-line", "[cli]") {
  const RunResult a = run_cli("lemmas --trials 1000 --seed 42", false);
  const RunResult b = run_cli("lemmas --trials 1000 --seed 42", false);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("verdict=PASS") != std::string::npos);

  const RunResult one = run_cli("lemmas --trials 1 --seed 9", false);
  CHECK(one.code == 0);
  CHECK(split_lines(one.out).size() == 1);
}

TEST_CASE("golden documents are reproduced byte-for-byte", "[cli]") {
  const std::string dir = OCTSYNTH_GOLDEN_DIR;
  for (const Golden& g : goldens()) {
    const RunResult synth = run_cli("synthesize " + g.synth_args, false);
    REQUIRE(synth.code == 0);
    CHECK(synth.out == read_file(dir + "/" + g.name + "_synthesize.json"));

    const RunResult sweep = run_cli("sweep " + g.sweep_args, false);
    REQUIRE(sweep.code == 0);
    CHECK(sweep.out == read_file(dir + "/" + g.name + "_sweep.csv"));
  }
  const RunResult csv = run_cli(
      "synthesize " + goldens()[1].synth_args + " --format csv --samples 8",
      false);
  REQUIRE(csv.code == 0);
  CHECK(csv.out == read_file(dir + "/g2_synthesize.csv"));
  const auto lines = split_lines(csv.out);
  CHECK(lines.front() == "candidate,t,x,u");
}
