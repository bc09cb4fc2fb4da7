#include "icomp/report.hpp"

#include <algorithm>

namespace icomp {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') out += "\\n";
    else out += c;
  }
  return out;
}

std::string joinNumbers(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

Report::Entry& Report::entry(const std::string& key) {
  for (auto& e : entries_)
    if (e.key == key && e.isList) return e;
  entries_.push_back(Entry{key, "", true, {}, {}});
  return entries_.back();
}

Report& Report::set(std::string key, std::string value) {
  entries_.push_back(Entry{std::move(key), std::move(value), false, {}, {}});
  return *this;
}

Report& Report::set(std::string key, const Verdict& v) {
  set(key, truthName(v.value));
  if (v.isUnknown()) set(key + "_horizon", std::to_string(v.horizon));
  set(key + "_rule", v.rule);
  if (!v.trace.empty()) lines(key + "_trace", v.trace);
  return *this;
}

Report& Report::item(std::string listKey) {
  Entry& e = entry(listKey);
  e.items.emplace_back();
  return e.items.back();
}

Report& Report::list(std::string listKey) {
  entry(listKey);
  return *this;
}

Report& Report::lines(std::string listKey, const std::vector<std::string>& values) {
  Entry& e = entry(listKey);
  e.values.insert(e.values.end(), values.begin(), values.end());
  return *this;
}

void Report::renderInto(std::string& out, int indent, bool firstDash) const {
  bool first = true;
  for (const auto& e : entries_) {
    std::string pad(indent, ' ');
    if (first && firstDash) pad.replace(indent - 2, 2, "- ");
    first = false;
    if (!e.isList) {
      out += pad + e.key + ": " + escape(e.value) + "\n";
      continue;
    }
    if (e.items.empty() && e.values.empty()) {
      out += pad + e.key + ": []\n";
      continue;
    }
    out += pad + e.key + ":\n";
    std::string inner(indent + 2, ' ');
    for (const auto& v : e.values) out += inner + "- " + escape(v) + "\n";
    for (const auto& it : e.items) {
      if (it.entries_.empty()) out += inner + "- {}\n";
      else it.renderInto(out, indent + 4, true);
    }
  }
}

std::string Report::render() const {
  std::string out;
  renderInto(out, 0, false);
  return out;
}

void describe(Report& r, const ConvergenceReport& c) {
  r.set("mode", modeName(c.mode));
  r.set("sequence", c.sequence);
  r.set("ideal", c.ideal);
  r.set("limit", c.limit);
  r.set("schedule", c.schedule);
  r.set("verdict", c.overall);
  r.list("neighborhoods");
  for (const auto& b : c.perBasis) {
    Report& n = r.item("neighborhoods");
    n.set("nbhd", b.nbhd.toString());
    n.set("exceptional", b.exceptional);
    n.set("verdict", b.verdict);
  }
}

void describe(Report& r, const IStarWitness& w) {
  r.set("M", w.M.toString());
  r.set("filter", w.filterVerdict);
  r.set("certificate", w.tailLimitCertificate);
  r.set("symbolic", w.symbolic ? "true" : "false");
  r.set("thin", w.thin ? "true" : "false");
  r.set("prefix", joinNumbers(w.enumeratedPrefix));
  r.list("cuts");
  for (const auto& [nbhd, cut] : w.cuts) {
    Report& c = r.item("cuts");
    c.set("nbhd", nbhd);
    c.set("cut", std::to_string(cut));
  }
}

void describe(Report& r, const ExtractionWitness& w) {
  r.set("method", w.method);
  r.set("K", w.K.toString());
  r.set("K_member", w.kVerdict);
  r.set("xi", w.xi.toString());
  r.set("xi_exact", w.xiExact ? "true" : "false");
  r.list("levels");
  for (std::size_t k = 0; k < w.trace.indexSets.size(); ++k) {
    Report& l = r.item("levels");
    l.set("level", std::to_string(k + 1));
    l.set("choice", w.trace.choices[k]);
    if (k < w.trace.cells.size()) {
      std::string cell;
      for (std::size_t i = 0; i < w.trace.cells[k].size(); ++i)
        cell += (i ? " x " : "") + w.trace.cells[k][i].toString();
      l.set("cell", cell);
    }
    l.set("set", w.trace.indexSets[k].toString());
    l.set("member", truthName(w.trace.verdicts[k].value));
  }
  std::vector<std::string> blocks;
  for (const auto& b : w.shrink.blocks) blocks.push_back(joinNumbers(b));
  r.lines("shrink_blocks", blocks);
  r.set("continuation", w.shrink.continuation);
  describe(r.item("report"), w.report);
}

void describe(Report& r, const Refutation& f) {
  r.set("mode", refuteModeName(f.mode));
  r.set("verdict", f.verdict);
  r.list("rows");
  for (const auto& row : f.rows) {
    Report& x = r.item("rows");
    x.set("label", row.label);
    x.set("measured", toString(row.measured));
    x.set("measured_decimal", toDecimal(row.measured, 6));
    x.set("reference", toString(row.reference));
    x.set("tolerance", toString(row.tolerance));
    x.set("ok", row.ok ? "true" : "false");
    x.set("note", row.note);
  }
}

void describe(Report& r, const ClosureResult& c) {
  r.set("schema", c.schema);
  r.set("verdict", c.verdict);
  if (c.witness) r.set("witness", c.witness->name());
  if (c.separatingRadius) r.set("separating_radius", toString(*c.separatingRadius));
}

std::string densityTable(const IndexSet& s) {
  std::string out = "N,count,density_num,density_den,decimal\n";
  for (int k = 10; k <= 17; ++k) {
    std::uint64_t N = std::uint64_t{1} << k;
    std::uint64_t c = prefixCount(s, N);
    Rational d(static_cast<std::int64_t>(c), static_cast<std::int64_t>(N));
    out += std::to_string(N) + "," + std::to_string(c) + "," + numerator(d).str() + "," + denominator(d).str() + "," +
           toDecimal(d, 6) + "\n";
  }
  return out;
}

}  // namespace icomp
