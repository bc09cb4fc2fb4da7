#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "icomp/suite.hpp"
#include "run_cli.hpp"

TEST_CASE("analyze examples and exit codes") {
  auto a = cli::run({"analyze", "--seq", "paper:inverseBlocks", "--ideal", "decB(2adic)", "--limit", "rat(0)", "--depth",
                     "8"});
  CHECK(a.code == 0);
  CHECK(cli::has(a, "I-convergence: True"));
  CHECK(cli::has(a, "neighborhoods:"));

  auto c = cli::run({"analyze", "--seq", "const rat(1/2)", "--ideal", "fin", "--limit", "rat(1/2)"});
  CHECK(c.code == 0);
  CHECK(cli::has(c, "I-convergence: True"));

  auto u = cli::run({"analyze", "--seq", "paper:udSequence", "--ideal", "density", "--limit", "rat(1/2)", "--depth",
                     "6"});
  CHECK(u.code == 0);
  CHECK(cli::has(u, "I-convergence: False"));

  auto s = cli::run({"analyze", "--seq", "paper:inverseBlocks", "--ideal", "decB(2adic)", "--limit", "rat(0)", "--mode",
                     "istar", "--depth", "6"});
  CHECK(s.code == 0);
  CHECK(cli::has(s, "I*-convergence: False"));
}

TEST_CASE("errors exit 1 with a diagnostic") {
  auto p = cli::run({"analyze", "--seq", "nonsense", "--ideal", "fin", "--limit", "rat(0)"});
  CHECK(p.code == 1);
  CHECK(cli::has(p, "error: ParseError"));
  auto h = cli::run({"--horizon", "1000", "analyze", "--seq", "const rat(0)", "--ideal", "fin", "--limit", "rat(0)"});
  CHECK(h.code == 1);
  CHECK(cli::has(h, "error: OutOfRange"));
  auto d = cli::run({"--depth", "0", "analyze", "--seq", "const rat(0)", "--ideal", "fin", "--limit", "rat(0)"});
  CHECK(d.code == 1);
  CHECK(cli::run({"verify-paper", "--inject-fault", "no-such-row"}).code == 1);
  CHECK(cli::run({"frobnicate"}).code == 1);
  auto sh = cli::run({"extract", "--seq", "paper:udSequence", "--ideal", "density"});
  CHECK(sh.code == 1);
  CHECK(cli::has(sh, "error: UnsupportedShrink"));
}

TEST_CASE("density tables") {
  auto b = cli::run({"density-table", "--set", "block(3)"});
  REQUIRE(b.code == 0);
  std::istringstream in(b.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "N,count,density_num,density_den,decimal");
  int rows = 0;
  std::uint64_t N = 1024;
  while (std::getline(in, line)) {
    CHECK(line == std::to_string(N) + "," + std::to_string(N / 8) + ",1,8,0.125000");
    N *= 2;
    ++rows;
  }
  CHECK(rows == 8);

  auto f = cli::run({"density-table", "--set", "fin{1,2,3}"});
  CHECK(cli::has(f, "\n1024,3,3,1024,"));
  CHECK(cli::has(f, "\n131072,3,3,131072,"));
  auto o = cli::run({"density-table", "--set", "ap(1,2)"});
  CHECK(cli::has(o, "\n1024,512,1,2,"));
  CHECK(cli::run({"density-table", "--set", "ap(1"}).code == 1);
}

TEST_CASE("extract, refute and closure commands") {
  auto e = cli::run({"extract", "--seq", "paper:inverseBlocks", "--ideal", "decB(2adic)", "--depth", "10"});
  CHECK(e.code == 0);
  CHECK(cli::has(e, "method: bisect"));
  auto up = cli::run({"extract", "--seq", "blocks(geometric, 1/2, 1, 1/2)", "--ideal", "decA", "--upgrade"});
  CHECK(up.code == 0);
  CHECK(cli::has(up, "upgrade True"));
  auto p = cli::run({"extract", "--seq", "paper:prodDiagBlocks", "--ideal", "decB(2adic)", "--mode", "product",
                     "--depth", "6"});
  CHECK(p.code == 0);
  CHECK(cli::has(p, "limit ones"));
  auto r = cli::run({"refute", "--seq", "paper:inverseBlocks", "--ideal", "decB(2adic)", "--mode", "blockRecurrence"});
  CHECK(r.code == 0);
  CHECK(cli::has(r, "refutation (blockRecurrence): True"));
  auto m = cli::run({"refute", "--seq", "paper:inverseBlocks", "--ideal", "density", "--mode", "densityBound"});
  CHECK(m.code == 1);
  CHECK(cli::has(m, "error: ModeMismatch"));
  auto c = cli::run({"closure", "--set", "(0,1)", "--point", "rat(0)", "--ideal", "decB(2adic)"});
  CHECK(c.code == 0);
  CHECK(cli::has(c, "schema: block-constant"));
  auto n = cli::run({"closure", "--set", "[1/2,1]", "--point", "rat(0)", "--ideal", "fin", "--format", "structured"});
  CHECK(n.code == 0);
  CHECK(cli::has(n, "verdict: False"));
  CHECK(cli::has(n, "separating_radius: 1/4"));
}

TEST_CASE("verify-paper rows, faults and horizons") {
  auto full = cli::run({"verify-paper"});
  CHECK(full.code == 0);
  CHECK(cli::has(full, "10/10 rows pass"));
  auto low = cli::run({"--horizon", "1024", "verify-paper"});
  CHECK(low.code == 0);
  CHECK(cli::has(low, "10/10 rows pass"));
  for (const auto& id : icomp::suiteRowIds()) {
    auto f = cli::run({"verify-paper", "--inject-fault", id, "--format", "structured"});
    CHECK_MESSAGE(f.code == 1, id);
    CHECK_MESSAGE(cli::has(f, "passed: 9/10"), id);
  }
}

TEST_CASE("structured output is deterministic and can go to a file") {
  auto a = cli::run({"verify-paper", "--format", "structured"});
  auto b = cli::run({"--format", "structured", "verify-paper"});
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("command: verify-paper\n", 0) == 0);

  std::string path = "cli_report_test.txt";
  auto w = cli::run({"analyze", "--seq", "const rat(1/2)", "--ideal", "fin", "--limit", "rat(1/2)", "--format",
                     "structured", "--output", path});
  CHECK(w.code == 0);
  CHECK(w.out.empty());
  std::ifstream f(path);
  std::stringstream body;
  body << f.rdbuf();
  auto direct =
      cli::run({"analyze", "--seq", "const rat(1/2)", "--ideal", "fin", "--limit", "rat(1/2)", "--format", "structured"});
  CHECK(body.str() == direct.out);
  std::remove(path.c_str());
}
