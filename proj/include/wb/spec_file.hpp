#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wb/decseq.hpp"
#include "wb/domain.hpp"
#include "wb/evset.hpp"
#include "wb/finop.hpp"
#include "wb/finrel.hpp"
#include "wb/matrix.hpp"
#include "wb/rop.hpp"
#include "wb/thread.hpp"

namespace wb {

// One `task` line: kind plus raw key=value arguments (bare flags map to "").
struct TaskSpec {
  std::string name;
  std::string kind;
  std::map<std::string, std::string> args;
  int line = 0;
};

// A fully resolved definition file: one domain, named objects, task list.
struct WorkbenchSpec {
  FiniteDomain domain{2};
  bool domain_declared = false;
  std::map<std::string, FinOp> ops;
  std::map<std::string, FinRel> rels;
  std::map<std::string, ROp> rops;
  std::map<std::string, EvThread> threads;
  std::map<std::string, EvMatrix> matrices;
  std::map<std::string, EvSet> evsets;
  std::map<std::string, DecSeq> decseqs;
  std::vector<TaskSpec> tasks;
};

WorkbenchSpec parse_spec(const std::string& text);

// Standalone literal parsers; reports print witnesses in exactly these
// syntaxes so they re-parse.
EvThread parse_thread_literal(FiniteDomain domain, const std::string& text);
EvMatrix parse_matrix_literal(FiniteDomain domain, const std::string& text);
PatternGen parse_pattern_literal(FiniteDomain domain, const std::string& text);

struct TaskResult {
  std::string name;
  std::string kind;
  bool pass = false;
  // ordered key/value pairs; order fixed by the task kind, so the lines
  // format is byte-stable
  std::vector<std::pair<std::string, std::string>> fields;
  long long wall_ms = 0;
};

struct Report {
  FiniteDomain domain{2};
  std::vector<TaskResult> results;
  bool all_pass() const;
};

enum class ReportFormat { Text, Lines };

TaskResult run_task(const WorkbenchSpec& spec, const TaskSpec& task);

// Runs every task, or just the ones whose name matches `only`.
Report run_all(const WorkbenchSpec& spec, const std::string& only = "");

std::string emit_report(const Report& report, ReportFormat format);

}  // namespace wb
