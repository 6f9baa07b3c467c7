#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

const char* cli_path() { return std::getenv("RELGEO_CLI"); }

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  RunResult res;
  std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("cli: ball export and exit codes" * doctest::skip(cli_path() == nullptr)) {
  RunResult ball = run("ball --group free --r 1");
  CHECK(ball.exit_code == 0);
  CHECK(ball.output.find("vertex 0 1") != std::string::npos);
  CHECK(ball.output.find("sedge") != std::string::npos);

  CHECK(run("alpha --which 1 --group does-not-exist --r 3").exit_code == 2);
  CHECK(run("treegraded --in /does/not/exist.json").exit_code == 2);
}

TEST_CASE("cli: alpha sweep csv is deterministic" * doctest::skip(cli_path() == nullptr)) {
  std::string args = "alpha --which 1 --group abelian-2-rel-a --r 3..4 --delta 1 --format csv";
  RunResult a = run(args);
  RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("r,diameter") != std::string::npos);
}

TEST_CASE("cli: bound flag turns measurements into pass/fail" *
          doctest::skip(cli_path() == nullptr)) {
  // the Z^2 negative control exceeds a tight alpha_1 bound
  CHECK(run("alpha --which 1 --group abelian-2-rel-a --r 4 --delta 1 --bound 2").exit_code == 1);
  CHECK(run("alpha --which 1 --group free-rel-a --r 4 --delta 1 --bound 5").exit_code == 0);
}

TEST_CASE("cli: treegraded verdict" * doctest::skip(cli_path() == nullptr)) {
  // two triangles sharing a vertex: fine; opposite edges of a square: not
  std::ofstream good("/tmp/relgeo_good_space.json");
  good << R"({"vertices":5,"edges":[[0,1,1],[1,2,1],[2,0,1],[0,3,1],[3,4,1],[4,0,1]],)"
       << R"("pieces":[[0,1,2],[0,3,4]]})";
  good.close();
  CHECK(run("treegraded --in /tmp/relgeo_good_space.json").exit_code == 0);

  std::ofstream bad("/tmp/relgeo_bad_space.json");
  bad << R"({"vertices":4,"edges":[[0,1,1],[1,2,1],[2,3,1],[3,0,1]],)"
      << R"("pieces":[[0,1],[2,3]]})";
  bad.close();
  RunResult r = run("treegraded --in /tmp/relgeo_bad_space.json");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("t2_witness") != std::string::npos);
}

TEST_CASE("cli: smallcancel dehn" * doctest::skip(cli_path() == nullptr)) {
  std::ofstream pres("/tmp/relgeo_surface.txt");
  pres << "gens a,b,c,d; rel [a,b][c,d];";
  pres.close();
  RunResult r = run("smallcancel --mode dehn --rel /tmp/relgeo_surface.txt --word \"[a,b][c,d]\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"trivial\": true") != std::string::npos);
}
