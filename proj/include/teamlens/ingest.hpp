#pragma once

// Trace ingestion: event-line records, numstat commit logs, outcome tables and
// sprint windowing.

#include <istream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlens/core.hpp"

namespace teamlens {

enum class EventKind { Message, Commit, WorkLog, TaskAssign };

inline std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Message: return "message";
    case EventKind::Commit: return "commit";
    case EventKind::WorkLog: return "worklog";
    case EventKind::TaskAssign: return "task_assign";
  }
  return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view text) {
  if (text == "message") return EventKind::Message;
  if (text == "commit") return EventKind::Commit;
  if (text == "worklog") return EventKind::WorkLog;
  if (text == "task_assign") return EventKind::TaskAssign;
  return std::nullopt;
}

struct FileChange {
  std::string path;
  std::int64_t lines_added = 0;
  std::int64_t lines_deleted = 0;

  friend bool operator==(const FileChange&, const FileChange&) = default;
};

struct InteractionEvent {
  EventKind kind = EventKind::Message;
  Timestamp timestamp{};
  MemberId actor;
  std::set<MemberId> recipients;
  std::optional<std::string> channel;
  std::vector<FileChange> files;
  std::optional<std::string> task_id;
  std::set<MemberId> co_workers;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

// Returns the first violated invariant, or nullopt.
inline std::optional<std::string> validate(const InteractionEvent& e) {
  if (e.actor.empty()) return "empty actor";
  if (e.recipients.contains(e.actor)) return "actor in recipients";
  if (e.co_workers.contains(e.actor)) return "actor in co_workers";
  for (const auto& r : e.recipients) {
    if (r.empty()) return "empty recipient";
  }
  switch (e.kind) {
    case EventKind::Message:
      if (e.recipients.empty() && !e.channel) return "message needs recipients or a channel";
      break;
    case EventKind::Commit:
      if (e.files.empty()) return "commit without files";
      for (const auto& f : e.files) {
        if (f.path.empty()) return "file with empty path";
        if (f.lines_added < 0 || f.lines_deleted < 0) return "negative line count";
      }
      break;
    case EventKind::WorkLog:
    case EventKind::TaskAssign:
      break;
  }
  if (e.kind != EventKind::Message && (!e.recipients.empty() || e.channel)) {
    return "recipients/channel only valid for messages";
  }
  if (e.kind != EventKind::Commit && !e.files.empty()) return "files only valid for commits";
  if ((e.kind == EventKind::Message || e.kind == EventKind::Commit) && (e.task_id || !e.co_workers.empty())) {
    return "task_id/co_workers only valid for worklog and task_assign";
  }
  return std::nullopt;
}

struct ParseOptions {
  bool skip_bad_lines = false;
};

struct EventParseResult {
  std::vector<InteractionEvent> events;
  std::size_t skipped = 0;
};

namespace detail {

inline std::set<MemberId> member_set(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw Error(std::string("'") + field + "' must be an array");
  std::set<MemberId> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw Error(std::string("'") + field + "' entries must be strings");
    out.insert(item.get<std::string>());
  }
  return out;
}

inline std::int64_t line_count(const nlohmann::json& j, const char* field) {
  if (!j.is_number_integer()) throw Error(std::string("file '") + field + "' must be an integer");
  return j.get<std::int64_t>();
}

inline InteractionEvent event_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("record is not an object");
  InteractionEvent e;

  auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) throw Error("missing 'kind'");
  auto kind = parse_event_kind(kind_it->get<std::string>());
  if (!kind) throw Error("unknown kind '" + kind_it->get<std::string>() + "'");
  e.kind = *kind;

  auto ts_it = j.find("ts");
  if (ts_it == j.end() || !ts_it->is_string()) throw Error("missing 'ts'");
  auto ts = parse_timestamp(ts_it->get<std::string>());
  if (!ts) throw Error("unparseable timestamp '" + ts_it->get<std::string>() + "'");
  e.timestamp = *ts;

  auto actor_it = j.find("actor");
  if (actor_it == j.end() || !actor_it->is_string() || actor_it->get<std::string>().empty()) {
    throw Error("missing or invalid 'actor'");
  }
  e.actor = actor_it->get<std::string>();

  if (auto it = j.find("recipients"); it != j.end()) e.recipients = member_set(*it, "recipients");
  if (auto it = j.find("channel"); it != j.end()) {
    if (!it->is_string()) throw Error("'channel' must be a string");
    e.channel = it->get<std::string>();
  }
  if (auto it = j.find("files"); it != j.end()) {
    if (!it->is_array()) throw Error("'files' must be an array");
    for (const auto& f : *it) {
      if (!f.is_object() || !f.contains("path") || !f["path"].is_string()) {
        throw Error("file entry needs a string 'path'");
      }
      FileChange change{f["path"].get<std::string>(), 0, 0};
      if (f.contains("added")) change.lines_added = line_count(f["added"], "added");
      if (f.contains("deleted")) change.lines_deleted = line_count(f["deleted"], "deleted");
      e.files.push_back(std::move(change));
    }
  }
  if (auto it = j.find("task_id"); it != j.end()) {
    if (!it->is_string()) throw Error("'task_id' must be a string");
    e.task_id = it->get<std::string>();
  }
  if (auto it = j.find("co_workers"); it != j.end()) e.co_workers = member_set(*it, "co_workers");

  if (auto problem = validate(e)) throw Error(*problem);
  return e;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline nlohmann::json to_json(const InteractionEvent& e) {
  nlohmann::json j;
  j["kind"] = to_string(e.kind);
  j["ts"] = format_timestamp(e.timestamp);
  j["actor"] = e.actor;
  if (e.kind == EventKind::Message) j["recipients"] = e.recipients;
  if (e.channel) j["channel"] = *e.channel;
  if (e.kind == EventKind::Commit) {
    auto files = nlohmann::json::array();
    for (const auto& f : e.files) {
      files.push_back({{"path", f.path}, {"added", f.lines_added}, {"deleted", f.lines_deleted}});
    }
    j["files"] = std::move(files);
  }
  if (e.task_id) j["task_id"] = *e.task_id;
  if (!e.co_workers.empty()) j["co_workers"] = e.co_workers;
  return j;
}

inline std::string serialize_event(const InteractionEvent& e) { return to_json(e).dump(); }

// Parses newline-delimited event records. Blank lines are ignored. Any bad
// line aborts with a ParseError unless skip_bad_lines is set.
inline EventParseResult parse_events(std::istream& in, ParseOptions options = {}) {
  EventParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      result.events.push_back(detail::event_from_json(j));
    } catch (const nlohmann::json::parse_error& ex) {
      if (!options.skip_bad_lines) throw ParseError(line_no, std::string("malformed record: ") + ex.what());
      ++result.skipped;
    } catch (const Error& ex) {
      if (!options.skip_bad_lines) throw ParseError(line_no, ex.what());
      ++result.skipped;
    }
  }
  return result;
}

inline EventParseResult parse_events(std::string_view text, ParseOptions options = {}) {
  std::istringstream in{std::string(text)};
  return parse_events(in, options);
}

// Alias → member. Keys match either the full author string or the bare
// address inside angle brackets; there is no other normalization.
using AuthorMap = std::map<std::string, MemberId>;

struct CommitParseResult {
  std::vector<InteractionEvent> events;
  std::size_t skipped = 0;
  std::size_t empty_blocks = 0;
};

namespace detail {

inline std::optional<MemberId> resolve_author(const AuthorMap& map, std::string_view author) {
  if (auto it = map.find(std::string(author)); it != map.end()) return it->second;
  const auto open = author.rfind('<');
  const auto close = author.rfind('>');
  if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
    if (auto it = map.find(std::string(author.substr(open + 1, close - open - 1))); it != map.end()) {
      return it->second;
    }
  }
  return std::nullopt;
}

inline std::optional<std::int64_t> numstat_count(std::string_view field) {
  if (field == "-") return 0;
  if (field.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || value < 0) return std::nullopt;
  return value;
}

inline std::optional<FileChange> parse_numstat_line(std::string_view line) {
  const auto t1 = line.find('\t');
  if (t1 == std::string_view::npos) return std::nullopt;
  const auto t2 = line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos) return std::nullopt;
  auto added = numstat_count(line.substr(0, t1));
  auto deleted = numstat_count(line.substr(t1 + 1, t2 - t1 - 1));
  auto path = line.substr(t2 + 1);
  if (!added || !deleted || path.empty()) return std::nullopt;
  return FileChange{std::string(path), *added, *deleted};
}

}  // namespace detail

// Parses numstat-style commit blocks:
//
//   commit <hash>
//   author <string>
//   date <ISO-8601>
//   <blank>
//   <added>\t<deleted>\t<path>   (zero or more; "-" counts as 0)
//
// Blocks without file lines (merges) produce no event. Unmapped authors are
// always fatal and listed together; structural damage honours skip_bad_lines.
inline CommitParseResult parse_commit_log(std::istream& in, const AuthorMap& authors, ParseOptions options = {}) {
  CommitParseResult result;
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  std::set<std::string> unmapped;
  std::size_t i = 0;
  auto fail = [&](std::size_t line_no, const std::string& reason) {
    if (!options.skip_bad_lines) throw ParseError(line_no, reason);
    ++result.skipped;
  };
  auto is_commit_line = [](std::string_view l) { return l.starts_with("commit "); };

  while (i < lines.size()) {
    const std::string_view current = lines[i];
    if (detail::trim(current).empty()) {
      ++i;
      continue;
    }
    if (!is_commit_line(current)) {
      fail(i + 1, "expected 'commit <hash>', got '" + std::string(current) + "'");
      ++i;
      continue;
    }
    const std::size_t block_start = i + 1;
    std::string author_line;
    std::string date_line;
    bool truncated = false;
    if (i + 2 < lines.size() && lines[i + 1].starts_with("author ") && lines[i + 2].starts_with("date ")) {
      author_line = lines[i + 1].substr(7);
      date_line = lines[i + 2].substr(5);
    } else {
      truncated = true;
    }
    if (truncated) {
      fail(block_start, "truncated commit block starting at line " + std::to_string(block_start));
      ++i;
      while (i < lines.size() && !is_commit_line(lines[i])) ++i;
      continue;
    }
    i += 3;

    InteractionEvent event;
    event.kind = EventKind::Commit;
    auto ts = parse_timestamp(detail::trim(date_line));
    bool block_ok = true;
    if (!ts) {
      fail(block_start + 2, "unparseable date '" + date_line + "'");
      block_ok = false;
    } else {
      event.timestamp = *ts;
    }
    const auto author = std::string(detail::trim(author_line));
    if (auto member = detail::resolve_author(authors, author)) {
      event.actor = *member;
    } else {
      unmapped.insert(author);
      block_ok = false;
    }

    while (i < lines.size() && !is_commit_line(lines[i])) {
      const std::string_view l = lines[i];
      if (!detail::trim(l).empty()) {
        if (auto change = detail::parse_numstat_line(l)) {
          event.files.push_back(std::move(*change));
        } else {
          fail(i + 1, "malformed numstat line '" + std::string(l) + "'");
        }
      }
      ++i;
    }
    if (!block_ok) continue;
    if (event.files.empty()) {
      ++result.empty_blocks;
      continue;
    }
    result.events.push_back(std::move(event));
  }

  if (!unmapped.empty()) {
    std::string list;
    for (const auto& alias : unmapped) list += (list.empty() ? "" : ", ") + ("'" + alias + "'");
    throw Error("unmapped commit author(s): " + list);
  }
  return result;
}

inline CommitParseResult parse_commit_log(std::string_view text, const AuthorMap& authors,
                                          ParseOptions options = {}) {
  std::istringstream in{std::string(text)};
  return parse_commit_log(in, authors, options);
}

struct SprintWindow {
  std::string label;
  Timestamp start{};
  Timestamp end{};

  friend bool operator==(const SprintWindow&, const SprintWindow&) = default;
};

inline constexpr std::string_view kUnassigned = "__unassigned__";

inline void validate_windows(std::span<const SprintWindow> windows) {
  std::set<std::string> labels;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (w.label.empty()) throw Error("sprint window with empty label");
    if (w.label == kUnassigned) throw Error("sprint label '__unassigned__' is reserved");
    if (!labels.insert(w.label).second) throw Error("duplicate sprint label '" + w.label + "'");
    if (!(w.start < w.end)) throw Error("sprint '" + w.label + "' must start before it ends");
    if (i > 0 && windows[i - 1].end > w.start) {
      throw Error("sprint '" + w.label + "' overlaps or precedes '" + windows[i - 1].label + "'");
    }
  }
}

// Buckets events by half-open window [start, end). Every window label is
// present in the result; events outside all windows go to "__unassigned__".
inline std::map<std::string, std::vector<InteractionEvent>> window_events(std::span<const InteractionEvent> events,
                                                                          std::span<const SprintWindow> windows) {
  validate_windows(windows);
  std::map<std::string, std::vector<InteractionEvent>> buckets;
  for (const auto& w : windows) buckets[w.label];
  for (const auto& e : events) {
    auto it = std::upper_bound(windows.begin(), windows.end(), e.timestamp,
                               [](Timestamp t, const SprintWindow& w) { return t < w.start; });
    if (it != windows.begin() && e.timestamp < std::prev(it)->end) {
      buckets[std::prev(it)->label].push_back(e);
    } else {
      buckets[std::string(kUnassigned)].push_back(e);
    }
  }
  return buckets;
}

struct OutcomeRecord {
  std::string team_id;
  std::string sprint_label;
  std::int64_t stories_passed = 0;
  std::int64_t story_points_passed = 0;
  double communication_score = 1.0;
};

// Comma-separated outcome table with a mandatory header row.
inline std::vector<OutcomeRecord> parse_outcomes(std::istream& in) {
  static constexpr std::string_view kHeader =
      "team_id,sprint_label,stories_passed,story_points_passed,communication_score";
  std::vector<OutcomeRecord> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    if (!header_seen) {
      if (trimmed != kHeader) throw ParseError(line_no, "expected header '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream row{std::string(trimmed)};
    for (std::string cell; std::getline(row, cell, ',');) cells.emplace_back(detail::trim(cell));
    if (cells.size() != 5) throw ParseError(line_no, "expected 5 columns, got " + std::to_string(cells.size()));
    OutcomeRecord rec;
    rec.team_id = cells[0];
    rec.sprint_label = cells[1];
    auto as_count = [&](const std::string& cell, const char* name) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 0) {
        throw ParseError(line_no, std::string("invalid ") + name + " '" + cell + "'");
      }
      return v;
    };
    rec.stories_passed = as_count(cells[2], "stories_passed");
    rec.story_points_passed = as_count(cells[3], "story_points_passed");
    double score = 0.0;
    auto [ptr, ec] = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(), score);
    if (ec != std::errc{} || ptr != cells[4].data() + cells[4].size() || !(score >= 1.0 && score <= 5.0)) {
      throw ParseError(line_no, "communication_score must be within [1,5], got '" + cells[4] + "'");
    }
    rec.communication_score = score;
    if (rec.team_id.empty() || rec.sprint_label.empty()) throw ParseError(line_no, "empty team or sprint");
    out.push_back(std::move(rec));
  }
  if (!header_seen) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");
  return out;
}

}  // namespace teamlens
