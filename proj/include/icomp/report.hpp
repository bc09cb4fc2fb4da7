#pragma once

#include <string>
#include <utility>
#include <vector>

#include "icomp/closure.hpp"
#include "icomp/compactness.hpp"
#include "icomp/density.hpp"

namespace icomp {

// Ordered key/value tree rendered as indented lines; lists hold nested reports.
class Report {
 public:
  Report& set(std::string key, std::string value);
  Report& set(std::string key, const Verdict& v);
  Report& item(std::string listKey);
  Report& list(std::string listKey);
  Report& lines(std::string listKey, const std::vector<std::string>& values);

  std::string render() const;

 private:
  struct Entry {
    std::string key;
    std::string value;
    bool isList = false;
    std::vector<Report> items;
    std::vector<std::string> values;
  };
  Entry& entry(const std::string& key);
  void renderInto(std::string& out, int indent, bool firstDash) const;
  std::vector<Entry> entries_;
};

void describe(Report& r, const ConvergenceReport& c);
void describe(Report& r, const IStarWitness& w);
void describe(Report& r, const ExtractionWitness& w);
void describe(Report& r, const Refutation& f);
void describe(Report& r, const ClosureResult& c);

// CSV lines "N,count,density_num,density_den,decimal" at N = 2^10..2^17, with a header.
std::string densityTable(const IndexSet& s);

}  // namespace icomp
