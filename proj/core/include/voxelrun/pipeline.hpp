#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voxelrun::pipeline {

namespace fs = std::filesystem;

inline constexpr const char* kDefaultPipelineFile = "Pipeline";
inline constexpr const char* kHashCacheFile = ".voxelrun-hashes";

struct Rule {
  std::string target;
  std::vector<std::string> prerequisites;
  std::vector<std::string> recipe;  // lines without the leading tab

  bool operator==(const Rule&) const = default;
};

/// Rules in file order plus the set of .PHONY names.
class RuleGraph {
 public:
  void add(Rule rule);
  void mark_phony(const std::string& name) { phony_.insert(name); }

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const Rule* find(std::string_view target) const;
  bool is_phony(std::string_view name) const;
  /// First rule in file order, if any.
  std::optional<std::string> default_target() const;
  bool empty() const noexcept { return rules_.empty(); }

 private:
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::set<std::string, std::less<>> phony_;
};

/// Parses the Make subset: "target: prereq..." rule lines, recipe lines
/// starting with one tab, '#' comments, blank lines and ".PHONY: names".
/// Throws recipe_without_rule, duplicate_target, missing_colon, invalid_rule.
RuleGraph parse_pipeline(std::string_view text);
RuleGraph load_pipeline(const fs::path& path);

enum class Staleness { mtime, content_hash };

/// Digests of prerequisites recorded after each successful rule, keyed
/// "target::prerequisite". Stored in hashes.json format.
using HashCache = std::map<std::string, std::string>;

HashCache load_hash_cache(const fs::path& path);
void save_hash_cache(const HashCache& cache, const fs::path& path);

struct PlanOptions {
  fs::path working_dir = ".";
  Staleness staleness = Staleness::mtime;
  const HashCache* cache = nullptr;  // used with content_hash
};

/// Rules to run for `target`, prerequisites first (depth-first postorder),
/// each at most once. A rule is scheduled when it is phony, its target file
/// is missing, a prerequisite rule is scheduled, or a prerequisite file is
/// newer than the target (content_hash: its digest differs from the cache).
/// Throws cycle_detected and unknown_target.
std::vector<Rule> plan(const RuleGraph& graph, const std::string& target,
                       const PlanOptions& options = {});

struct CommandRecord {
  std::string target;
  std::string command;
  int exit_status = 0;
  double wall_s = 0.0;
};

struct ExecutionReport {
  std::vector<CommandRecord> commands;

  std::size_t commands_run() const noexcept { return commands.size(); }
};

struct ExecuteOptions {
  /// Directories prepended to PATH for recipe commands.
  std::vector<fs::path> path_prepend;
  /// Command echo and timing; null for silence.
  std::ostream* log = nullptr;
  /// Phony names; their files are never deleted on failure.
  const RuleGraph* graph = nullptr;
  /// When set, receives every command record as it completes, including
  /// the failing one.
  ExecutionReport* progress = nullptr;
};

/// Runs recipe lines one at a time through /bin/sh in working_dir and stops
/// at the first failure. A failed rule's target file is removed if the
/// recipe created or modified it. Throws RecipeFailed.
ExecutionReport execute(const std::vector<Rule>& plan, const fs::path& working_dir,
                        const ExecuteOptions& options = {});

struct RunOptions {
  Staleness staleness = Staleness::mtime;
  ExecuteOptions execute;
};

/// Loads the pipeline file, plans `target` (the default target when empty)
/// relative to the file's directory, executes the plan, and in content-hash
/// mode updates the cache file beside the pipeline file.
ExecutionReport run(const fs::path& pipeline_file, const std::string& target,
                    const RunOptions& options = {});

}  // namespace voxelrun::pipeline
