#include "crasplab/glitch.hpp"

#include <algorithm>
#include <fstream>

#include "crasplab/errors.hpp"
#include "nlohmann/json.hpp"

namespace crasplab {

bool AmbiguityMap::ambiguous(const std::string& token) const {
  auto it = successors.find(token);
  return it != successors.end() && it->second.size() >= 2;
}

std::int64_t AmbiguityMap::ambiguous_types() const {
  std::int64_t n = 0;
  for (const auto& [_, succ] : successors) n += succ.size() >= 2;
  return n;
}

std::int64_t AmbiguityMap::unambiguous_types() const {
  return static_cast<std::int64_t>(successors.size()) - ambiguous_types();
}

AmbiguityMap classify_tokens(std::span<const std::string> src) {
  AmbiguityMap map;
  for (const std::string& tok : src) map.successors[tok];  // register every type
  for (std::size_t i = 0; i + 1 < src.size(); ++i) {
    map.successors[src[i]].insert(src[i + 1]);
  }
  return map;
}

TransitionReport analyze(std::span<const std::string> src, std::span<const std::string> out,
                         const AlignScoring& scoring, double min_length_ratio) {
  TransitionReport report;
  report.src_tokens = static_cast<std::int64_t>(src.size());
  report.out_tokens = static_cast<std::int64_t>(out.size());
  report.length_ok =
      static_cast<double>(out.size()) >= min_length_ratio * static_cast<double>(src.size());
  report.ops = align(src, out, scoring);
  report.groups = group_spans(report.ops);

  AmbiguityMap map = classify_tokens(src);
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    if (report.groups[g].aligned) continue;
    if (g == 0) {
      report.leading_misalignment = true;
      continue;
    }
    const SpanGroup& prev = report.groups[g - 1];
    const AlignmentOp& last_match = report.ops[prev.last_op];
    Transition t;
    t.src_index = last_match.src_index;
    t.token = src[last_match.src_index];
    t.ambiguous = map.ambiguous(t.token);
    report.transitions.push_back(t);
  }
  return report;
}

void GlitchAggregate::add(const TransitionReport& report) {
  ++pairs;
  if (!report.length_ok) return;
  ++eligible_pairs;
  if (report.transitions.empty() && !report.leading_misalignment) {
    bool all_match = true;
    for (const SpanGroup& g : report.groups) all_match &= g.aligned;
    perfect_copies += all_match ? 1 : 0;
  }
  leading_misalignments += report.leading_misalignment ? 1 : 0;
  for (const Transition& t : report.transitions) {
    ++transitions;
    if (t.ambiguous) {
      ++ambiguous_transitions;
    } else {
      ++unambiguous_transitions;
    }
  }
}

void GlitchAggregate::merge(const GlitchAggregate& other) {
  pairs += other.pairs;
  eligible_pairs += other.eligible_pairs;
  transitions += other.transitions;
  ambiguous_transitions += other.ambiguous_transitions;
  unambiguous_transitions += other.unambiguous_transitions;
  leading_misalignments += other.leading_misalignments;
  perfect_copies += other.perfect_copies;
}

std::string GlitchAggregate::table() const {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "pairs %lld  eligible %lld  perfect copies %lld\n",
                static_cast<long long>(pairs), static_cast<long long>(eligible_pairs),
                static_cast<long long>(perfect_copies));
  out += buf;
  const double ratio =
      transitions == 0 ? 0.0 : static_cast<double>(ambiguous_transitions) / transitions;
  std::snprintf(buf, sizeof(buf),
                "transitions %lld  ambiguous %lld  unambiguous %lld  ambiguous ratio %.4f\n",
                static_cast<long long>(transitions), static_cast<long long>(ambiguous_transitions),
                static_cast<long long>(unambiguous_transitions), ratio);
  out += buf;
  std::snprintf(buf, sizeof(buf), "leading misalignments %lld\n",
                static_cast<long long>(leading_misalignments));
  out += buf;
  return out;
}

ScoreTable score_outputs(const std::vector<DatasetRecord>& records,
                         const std::map<std::string, std::string>& predictions,
                         const std::vector<std::pair<int, int>>& bins) {
  std::vector<std::pair<int, int>> effective = bins;
  if (effective.empty()) {
    std::set<int> lengths;
    for (const DatasetRecord& r : records) lengths.insert(r.length);
    for (int l : lengths) effective.emplace_back(l, l);
  }
  std::sort(effective.begin(), effective.end());

  ScoreTable table;
  std::map<std::pair<std::string, std::size_t>, ScoreRow> rows;
  for (const DatasetRecord& r : records) {
    std::size_t bin_index = effective.size();
    for (std::size_t b = 0; b < effective.size(); ++b) {
      if (r.length >= effective[b].first && r.length <= effective[b].second) {
        bin_index = b;
        break;
      }
    }
    if (bin_index == effective.size()) continue;  // outside every bin
    ScoreRow& row = rows[{r.task, bin_index}];
    row.task = r.task;
    row.min_len = effective[bin_index].first;
    row.max_len = effective[bin_index].second;
    ++row.total;
    auto it = predictions.find(r.id);
    if (it == predictions.end()) {
      ++row.missing;
      table.missing_ids.push_back(r.id);
    } else if (it->second == r.target) {
      ++row.correct;
    }
  }
  for (auto& [_, row] : rows) table.rows.push_back(row);
  return table;
}

std::string ScoreTable::table() const {
  char buf[200];
  std::string out = "task       bin          total  correct  missing  accuracy\n";
  for (const ScoreRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s [%d, %d]  %lld  %lld  %lld  %.4f\n", r.task.c_str(),
                  r.min_len, r.max_len, static_cast<long long>(r.total),
                  static_cast<long long>(r.correct), static_cast<long long>(r.missing),
                  r.accuracy());
    out += buf;
  }
  if (!missing_ids.empty()) {
    out += "missing predictions: " + std::to_string(missing_ids.size()) + "\n";
  }
  return out;
}

std::string ScoreTable::to_jsonl() const {
  using ordered_json = nlohmann::ordered_json;
  std::string out;
  for (const ScoreRow& r : rows) {
    ordered_json j;
    j["task"] = r.task;
    j["bin_min"] = r.min_len;
    j["bin_max"] = r.max_len;
    j["total"] = r.total;
    j["correct"] = r.correct;
    j["missing"] = r.missing;
    j["accuracy"] = r.accuracy();
    out += j.dump() + "\n";
  }
  for (const std::string& id : missing_ids) {
    ordered_json j;
    j["missing_id"] = id;
    out += j.dump() + "\n";
  }
  return out;
}

std::map<std::string, std::string> parse_predictions(std::istream& in, const std::string& origin) {
  std::map<std::string, std::string> preds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw IoError(origin + ":" + std::to_string(line_no) + ": malformed prediction line: " +
                    e.what());
    }
    const std::string id = j.at("id").get<std::string>();
    if (!preds.emplace(id, j.at("output").get<std::string>()).second) {
      throw DuplicatePredictionKeyError(origin + ":" + std::to_string(line_no) +
                                        ": duplicate prediction id '" + id + "'");
    }
  }
  return preds;
}

std::map<std::string, std::string> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return parse_predictions(in, path);
}

}  // namespace crasplab
