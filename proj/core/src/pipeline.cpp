#include "voxelrun/pipeline.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <json.hpp>

#include "voxelrun/error.hpp"
#include "voxelrun/io.hpp"
#include "voxelrun/manifest.hpp"

namespace voxelrun::pipeline {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) words.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return words;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

std::string cache_key(const std::string& target, const std::string& prereq) {
  return target + "::" + prereq;
}

class Planner {
 public:
  Planner(const RuleGraph& graph, const PlanOptions& options)
      : graph_(graph), options_(options) {}

  std::vector<Rule> run(const std::string& target) {
    visit(target);
    return std::move(plan_);
  }

 private:
  enum class State { active, done };

  fs::path file(const std::string& name) const { return options_.working_dir / name; }

  void visit(const std::string& name) {
    const Rule* rule = graph_.find(name);
    if (rule == nullptr) {
      std::error_code ec;
      if (fs::exists(file(name), ec)) return;
      fail(Errc::unknown_target, "no rule to make '" + name +
                                     "' and no such file");
    }
    if (auto it = state_.find(name); it != state_.end()) {
      if (it->second == State::done) return;
      std::string cycle;
      for (const auto& s : stack_) cycle += s + " -> ";
      fail(Errc::cycle_detected, cycle + name);
    }
    state_[name] = State::active;
    stack_.push_back(name);
    for (const auto& p : rule->prerequisites) visit(p);
    stack_.pop_back();
    state_[name] = State::done;

    if (is_stale(*rule)) {
      scheduled_.insert(name);
      plan_.push_back(*rule);
    }
  }

  bool is_stale(const Rule& rule) const {
    if (graph_.is_phony(rule.target)) return true;
    std::error_code ec;
    const fs::path target_file = file(rule.target);
    if (!fs::exists(target_file, ec)) return true;
    const auto target_time = fs::last_write_time(target_file, ec);
    for (const auto& p : rule.prerequisites) {
      if (scheduled_.count(p) != 0 || graph_.is_phony(p)) return true;
      const fs::path prereq_file = file(p);
      if (!fs::exists(prereq_file, ec)) return true;
      if (options_.staleness == Staleness::mtime) {
        if (fs::last_write_time(prereq_file, ec) > target_time) return true;
      } else {
        if (fs::is_directory(prereq_file, ec)) continue;
        if (options_.cache == nullptr) return true;
        const auto it = options_.cache->find(cache_key(rule.target, p));
        if (it == options_.cache->end()) return true;
        if (manifest::sha256_file(prereq_file) != it->second) return true;
      }
    }
    return false;
  }

  const RuleGraph& graph_;
  const PlanOptions& options_;
  std::map<std::string, State> state_;
  std::vector<std::string> stack_;
  std::set<std::string> scheduled_;
  std::vector<Rule> plan_;
};

int run_shell(const std::string& command, const fs::path& working_dir,
              const std::vector<fs::path>& path_prepend) {
  std::string path_env;
  for (const auto& dir : path_prepend) path_env += dir.string() + ":";
  if (const char* current = std::getenv("PATH")) {
    path_env += current;
  } else {
    path_env += "/usr/local/bin:/usr/bin:/bin";
  }
  const std::string pwd = fs::absolute(working_dir).lexically_normal().string();

  const pid_t pid = ::fork();
  if (pid < 0) fail(Errc::io_error, "fork failed");
  if (pid == 0) {
    if (::chdir(pwd.c_str()) != 0) ::_exit(126);
    ::setenv("PATH", path_env.c_str(), 1);
    ::setenv("PWD", pwd.c_str(), 1);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) fail(Errc::io_error, "waitpid failed");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return 1;
}

}  // namespace

void RuleGraph::add(Rule rule) {
  if (index_.count(rule.target) != 0) {
    fail(Errc::duplicate_target, "target '" + rule.target + "' defined twice");
  }
  index_.emplace(rule.target, rules_.size());
  rules_.push_back(std::move(rule));
}

const Rule* RuleGraph::find(std::string_view target) const {
  const auto it = index_.find(target);
  return it == index_.end() ? nullptr : &rules_[it->second];
}

bool RuleGraph::is_phony(std::string_view name) const {
  return phony_.find(name) != phony_.end();
}

std::optional<std::string> RuleGraph::default_target() const {
  if (rules_.empty()) return std::nullopt;
  return rules_.front().target;
}

RuleGraph parse_pipeline(std::string_view text) {
  RuleGraph graph;
  std::optional<Rule> current;
  auto flush = [&] {
    if (current) graph.add(std::move(*current));
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (!line.empty() && line.front() == '\t') {
      if (!current) {
        fail(Errc::recipe_without_rule, at_line(line_no) + "recipe line before any rule");
      }
      const std::string_view body = line.substr(1);
      if (!trim(body).empty()) current->recipe.emplace_back(body);
      continue;
    }
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;

    flush();
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      fail(Errc::missing_colon, at_line(line_no) + "expected 'target: prerequisites'");
    }
    const std::string_view head = trim(line.substr(0, colon));
    std::string_view tail = line.substr(colon + 1);
    if (!tail.empty() && (tail.front() == ':' || tail.front() == '=')) {
      fail(Errc::invalid_rule, at_line(line_no) + "only single-colon rules are supported");
    }
    if (const auto hash = tail.find('#'); hash != std::string_view::npos) {
      tail = tail.substr(0, hash);
    }
    const auto targets = split_words(head);
    if (targets.size() != 1) {
      fail(Errc::invalid_rule, at_line(line_no) + "a rule needs exactly one target");
    }
    auto prereqs = split_words(tail);
    if (targets.front() == ".PHONY") {
      for (const auto& name : prereqs) graph.mark_phony(name);
      continue;
    }
    current = Rule{targets.front(), std::move(prereqs), {}};
  }
  flush();
  return graph;
}

RuleGraph load_pipeline(const fs::path& path) {
  return parse_pipeline(read_file(path));
}

HashCache load_hash_cache(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  HashCache cache;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::malformed_manifest, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) fail(Errc::malformed_manifest, path.string() + ": not an object");
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string() || !manifest::is_sha256_hex(value.get<std::string>())) {
      fail(Errc::malformed_manifest, path.string() + ": bad digest for '" + key + "'");
    }
    cache.emplace(key, value.get<std::string>());
  }
  return cache;
}

void save_hash_cache(const HashCache& cache, const fs::path& path) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, digest] : cache) doc[key] = digest;
  write_file_atomic(path, doc.dump(2) + "\n");
}

std::vector<Rule> plan(const RuleGraph& graph, const std::string& target,
                       const PlanOptions& options) {
  return Planner(graph, options).run(target);
}

ExecutionReport execute(const std::vector<Rule>& plan, const fs::path& working_dir,
                        const ExecuteOptions& options) {
  ExecutionReport report;
  for (const Rule& rule : plan) {
    const bool phony = options.graph != nullptr && options.graph->is_phony(rule.target);
    const fs::path target_file = working_dir / rule.target;
    std::error_code ec;
    const bool existed = fs::exists(target_file, ec);
    const auto before = existed ? fs::last_write_time(target_file, ec)
                                : fs::file_time_type::min();

    for (const std::string& line : rule.recipe) {
      if (options.log != nullptr) {
        *options.log << line << '\n';
        options.log->flush();
      }
      const auto start = std::chrono::steady_clock::now();
      const int status = run_shell(line, working_dir, options.path_prepend);
      const std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      CommandRecord record{rule.target, line, status, elapsed.count()};
      report.commands.push_back(record);
      if (options.progress != nullptr) options.progress->commands.push_back(record);

      if (status != 0) {
        if (!phony && fs::exists(target_file, ec) &&
            (!existed || fs::last_write_time(target_file, ec) != before) &&
            !fs::is_directory(target_file, ec)) {
          fs::remove(target_file, ec);
          if (options.log != nullptr) {
            *options.log << "voxelrun: deleting partial target '" << rule.target << "'\n";
          }
        }
        throw RecipeFailed(rule.target, line, status);
      }
    }
  }
  return report;
}

ExecutionReport run(const fs::path& pipeline_file, const std::string& target,
                    const RunOptions& options) {
  const RuleGraph graph = load_pipeline(pipeline_file);
  const fs::path dir = pipeline_file.has_parent_path() ? pipeline_file.parent_path()
                                                       : fs::path(".");
  std::string goal = target;
  if (goal.empty()) {
    const auto first = graph.default_target();
    if (!first) fail(Errc::unknown_target, "pipeline has no rules");
    goal = *first;
  }

  const fs::path cache_path = dir / kHashCacheFile;
  HashCache cache;
  if (options.staleness == Staleness::content_hash) cache = load_hash_cache(cache_path);

  const PlanOptions plan_options{dir, options.staleness, &cache};
  const std::vector<Rule> steps = plan(graph, goal, plan_options);

  ExecuteOptions exec = options.execute;
  exec.graph = &graph;
  ExecutionReport report;
  for (const Rule& rule : steps) {
    const ExecutionReport one = execute({rule}, dir, exec);
    report.commands.insert(report.commands.end(), one.commands.begin(), one.commands.end());
    if (options.staleness == Staleness::content_hash) {
      for (const auto& p : rule.prerequisites) {
        std::error_code ec;
        if (fs::is_regular_file(dir / p, ec)) {
          cache[cache_key(rule.target, p)] = manifest::sha256_file(dir / p);
        }
      }
      save_hash_cache(cache, cache_path);
    }
  }
  return report;
}

}  // namespace voxelrun::pipeline
