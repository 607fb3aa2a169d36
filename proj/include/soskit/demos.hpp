#pragma once

#include "soskit/problem_file.hpp"

namespace sos {

// A bundled demo problem. `text` is embedded so the binary is self-contained;
// the same bytes ship as demos/<file> (kept in sync by a unit test).
struct Demo {
  std::string name;
  std::string file;
  bool issos = false;  // report through issos (basis, Gram, factors)
  std::string brief;
  std::string text;
};

const std::vector<Demo>& demo_catalog();
const Demo* find_demo(const std::string& name);

// Bundled problem files that are not demo commands (used by examples and
// tests), as (file name, text) pairs.
const std::vector<std::pair<std::string, std::string>>& extra_problem_files();

// One-line takeaway printed above the report by the demo command.
std::string demo_headline(const Demo& demo, const ReportDocument& doc);

}  // namespace sos
