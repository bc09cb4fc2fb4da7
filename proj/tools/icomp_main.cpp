#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "icomp/closure.hpp"
#include "icomp/compactness.hpp"
#include "icomp/error.hpp"
#include "icomp/report.hpp"
#include "icomp/suite.hpp"

using namespace icomp;

namespace {

struct RunConfig {
  std::string command;
  std::string seq, ideal, limit, set, point, mode;
  std::optional<std::uint64_t> depth, horizon;
  std::string output;
  std::string format = "text";
  std::string fault;
  bool upgrade = false;
};

constexpr int kExitDefinitive = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;

int exitFor(const Verdict& v) { return v.isUnknown() ? kExitUnknown : kExitDefinitive; }

Mode parseMode(const std::string& m) {
  if (m.empty() || m == "i") return Mode::I;
  if (m == "istar") return Mode::IStar;
  fail(ErrorKind::UnknownName, "convergence mode '" + m + "' (expected i or istar)");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) fail(ErrorKind::ParseError, std::string("missing ") + flag);
}

struct Output {
  Report body;
  std::string headline;
  int code = kExitDefinitive;
};

void header(Report& r, const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  r.set("command", cfg.command);
  if (!cfg.seq.empty()) r.set("seq", cfg.seq);
  if (!cfg.set.empty()) r.set("set", cfg.set);
  if (!cfg.ideal.empty()) r.set("ideal_spec", cfg.ideal);
  if (!cfg.limit.empty()) r.set("limit_spec", cfg.limit);
  if (!cfg.point.empty()) r.set("point", cfg.point);
  if (!cfg.mode.empty()) r.set("run_mode", cfg.mode);
  r.set("depth", std::to_string(depth));
  r.set("horizon", std::to_string(horizon));
}

Output analyze(const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  require(cfg.seq, "--seq");
  require(cfg.ideal, "--ideal");
  require(cfg.limit, "--limit");
  Sequence s = parseSequence(cfg.seq);
  Ideal I = parseIdeal(cfg.ideal);
  Point xi = parsePoint(cfg.limit);
  Output out;
  header(out.body, cfg, depth, horizon);
  if (parseMode(cfg.mode) == Mode::I) {
    ConvergenceReport r = iConverges(s, I, xi, depth, horizon);
    describe(out.body, r);
    out.headline = "I-convergence: " + r.overall.summary();
    out.code = exitFor(r.overall);
  } else {
    auto [r, w] = iStarConverges(s, I, xi, depth, horizon);
    describe(out.body, r);
    if (w) describe(out.body.item("witness"), *w);
    out.headline = "I*-convergence: " + r.overall.summary();
    out.code = exitFor(r.overall);
  }
  return out;
}

Output extract(const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  require(cfg.seq, "--seq");
  require(cfg.ideal, "--ideal");
  Sequence s = parseSequence(cfg.seq);
  Ideal I = parseIdeal(cfg.ideal);
  std::string m = cfg.mode.empty() ? "bisect" : cfg.mode;
  ExtractionWitness w;
  if (m == "bisect") w = bisectExtract(s, I, depth, horizon);
  else if (m == "net") w = netExtract(s, I, depth, horizon);
  else if (m == "product") w = productExtract(s, I, depth, horizon);
  else fail(ErrorKind::UnknownName, "extraction mode '" + m + "' (expected bisect, net or product)");
  Output out;
  header(out.body, cfg, depth, horizon);
  describe(out.body, w);
  out.headline = "extraction (" + m + "): limit " + w.xi.toString() + ", subsequence report " + w.report.overall.summary();
  out.code = exitFor(w.report.overall);
  if (cfg.upgrade) {
    // Finite selections from 2-adic blocks leave the 64-bit range past ten levels.
    std::uint64_t upDepth = std::min<std::uint64_t>(depth, 10);
    IStarWitness star = upgradeToStar(s, w, I, upDepth);
    Verdict back = iStarToI(subsequence(subsequence(s, w.K), star.M), star, I, w.xi, upDepth);
    Report& u = out.body.item("upgrade");
    u.set("upgrade_depth", std::to_string(upDepth));
    describe(u, star);
    u.set("conversion", back);
    out.headline += "; upgrade " + back.summary();
    if (back.isUnknown()) out.code = kExitUnknown;
  }
  return out;
}

Output refute(const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  require(cfg.seq, "--seq");
  require(cfg.ideal, "--ideal");
  require(cfg.mode, "--mode");
  Sequence s = parseSequence(cfg.seq);
  Ideal I = parseIdeal(cfg.ideal);
  RefuteOptions o;
  o.horizon = horizon;
  o.diagDepth = depth;
  Refutation f = refuteNonthinConvergence(s, I, parseRefuteMode(cfg.mode), o);
  Output out;
  header(out.body, cfg, depth, horizon);
  describe(out.body, f);
  out.headline = std::string("refutation (") + refuteModeName(f.mode) + "): " + f.verdict.summary();
  out.code = exitFor(f.verdict);
  return out;
}

Output closure(const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  require(cfg.set, "--set");
  require(cfg.point, "--point");
  require(cfg.ideal, "--ideal");
  SetDescription A = parseSetDescription(cfg.set);
  Point x = parsePoint(cfg.point);
  Ideal I = parseIdeal(cfg.ideal);
  ClosureResult c = iClosureMember(A, x, I, depth, parseMode(cfg.mode));
  Output out;
  header(out.body, cfg, depth, horizon);
  describe(out.body, c);
  out.headline = "closure membership: " + c.verdict.summary();
  out.code = exitFor(c.verdict);
  return out;
}

Output verifyPaper(const RunConfig& cfg, std::uint64_t depth, std::uint64_t horizon) {
  SuiteOptions o;
  o.depth = depth;
  o.horizon = horizon;
  o.fault = cfg.fault;
  auto rows = verifySuite(o);
  Output out;
  header(out.body, cfg, depth, horizon);
  int passed = 0;
  out.body.list("rows");
  for (const auto& row : rows) {
    Report& r = out.body.item("rows");
    r.set("id", row.id);
    r.set("status", row.pass ? "PASS" : "FAIL");
    r.set("claim", row.claim);
    for (const auto& [k, v] : row.facts) r.set(k, v);
    passed += row.pass;
  }
  out.body.set("passed", std::to_string(passed) + "/" + std::to_string(rows.size()));
  out.headline = "verify-paper: " + std::to_string(passed) + "/" + std::to_string(rows.size()) + " rows pass";
  for (const auto& row : rows)
    out.headline += std::string("\n  ") + (row.pass ? "PASS " : "FAIL ") + row.id + "  " + row.claim;
  out.code = passed == static_cast<int>(rows.size()) ? kExitDefinitive : kExitError;
  return out;
}

int emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write " << cfg.output << "\n";
    return kExitError;
  }
  f << text;
  return 0;
}

int run(const RunConfig& cfg) {
  constexpr std::uint64_t kMinHorizon = 1024;
  if (cfg.depth && *cfg.depth == 0) fail(ErrorKind::OutOfRange, "depth must be at least 1");
  if (cfg.horizon && *cfg.horizon < kMinHorizon) fail(ErrorKind::OutOfRange, "horizon must be at least 1024");
  if (cfg.format != "text" && cfg.format != "structured")
    fail(ErrorKind::UnknownName, "format '" + cfg.format + "' (expected text or structured)");

  if (cfg.command == "density-table") {
    require(cfg.set, "--set");
    return emit(cfg, densityTable(parseIndexSet(cfg.set)));
  }
  bool refuteLike = cfg.command == "refute" || cfg.command == "verify-paper";
  std::uint64_t horizon = cfg.horizon.value_or(refuteLike ? 10000 : kDefaultSequenceHorizon);
  std::uint64_t depth = cfg.depth.value_or(cfg.command == "extract" ? kDefaultExtractDepth : 10);
  Output out;
  if (cfg.command == "analyze") out = analyze(cfg, depth, horizon);
  else if (cfg.command == "extract") out = extract(cfg, depth, horizon);
  else if (cfg.command == "refute") out = refute(cfg, depth, horizon);
  else if (cfg.command == "closure") out = closure(cfg, depth, horizon);
  else out = verifyPaper(cfg, depth, horizon);
  std::string text = cfg.format == "structured" ? out.body.render() : out.headline + "\n\n" + out.body.render();
  int e = emit(cfg, text);
  return e ? e : out.code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ideal convergence and compactness toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--depth", cfg.depth, "Basis depth, bisection levels or coordinates");
  app.add_option("--horizon", cfg.horizon, "Scan horizon for sampled sets (at least 1024)");
  app.add_option("--format", cfg.format, "text or structured");
  app.add_option("--output", cfg.output, "Write the report to this file");

  auto* an = app.add_subcommand("analyze", "I- or I*-convergence verdict for a sequence");
  an->add_option("--seq", cfg.seq)->required();
  an->add_option("--ideal", cfg.ideal)->required();
  an->add_option("--limit", cfg.limit)->required();
  an->add_option("--mode", cfg.mode, "i or istar");

  auto* ex = app.add_subcommand("extract", "Extract a nonthin convergent subsequence");
  ex->add_option("--seq", cfg.seq)->required();
  ex->add_option("--ideal", cfg.ideal)->required();
  ex->add_option("--mode", cfg.mode, "bisect, net or product");
  ex->add_flag("--upgrade", cfg.upgrade, "Upgrade the witness with finite selections");

  auto* rf = app.add_subcommand("refute", "Certify that no nonthin subsequence converges");
  rf->add_option("--seq", cfg.seq)->required();
  rf->add_option("--ideal", cfg.ideal)->required();
  rf->add_option("--mode", cfg.mode, "densityBound, blockRecurrence, cubeBlockRecurrence or cubeDensityDiag")
      ->required();

  auto* cl = app.add_subcommand("closure", "I-closure membership of a point");
  cl->add_option("--set", cfg.set)->required();
  cl->add_option("--point", cfg.point)->required();
  cl->add_option("--ideal", cfg.ideal)->required();
  cl->add_option("--mode", cfg.mode, "i or istar");

  auto* dt = app.add_subcommand("density-table", "Prefix densities of an index set as CSV");
  dt->add_option("--set", cfg.set)->required();

  auto* vp = app.add_subcommand("verify-paper", "Run every named example check");
  vp->add_option("--inject-fault", cfg.fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }
  for (auto* sub : {an, ex, rf, cl, dt, vp})
    if (sub->parsed()) cfg.command = sub->get_name();
  try {
    return run(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << errorName(e.kind()) << ": " << e.detail() << "\n";
    return kExitError;
  }
}
