#include "crasplab/records.hpp"

#include <fstream>
#include <sstream>

#include "crasplab/errors.hpp"
#include "nlohmann/json.hpp"

namespace crasplab {

using ordered_json = nlohmann::ordered_json;

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "val") return Split::val;
  if (name == "test") return Split::test;
  throw Error("unknown split '" + name + "'");
}

std::string record_to_json(const DatasetRecord& r) {
  ordered_json j;
  j["id"] = r.id;
  j["task"] = r.task;
  j["input"] = r.input;
  j["target"] = r.target;
  j["length"] = r.length;
  j["seed"] = r.seed;
  j["split"] = split_name(r.split);
  j["meta"] = ordered_json::object();
  for (const auto& [k, v] : r.meta) j["meta"][k] = v;
  for (const auto& [k, v] : r.extras) j[k] = v;
  return j.dump();
}

DatasetRecord record_from_json(const std::string& line) {
  ordered_json j = ordered_json::parse(line);
  DatasetRecord r;
  r.id = j.at("id").get<std::string>();
  r.task = j.at("task").get<std::string>();
  r.input = j.at("input").get<std::string>();
  r.target = j.at("target").get<std::string>();
  r.length = j.at("length").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.split = split_from_name(j.at("split").get<std::string>());
  for (const auto& [k, v] : j.at("meta").items()) r.meta[k] = v.get<std::string>();
  static const char* known[] = {"id", "task", "input", "target", "length", "seed", "split", "meta"};
  for (const auto& [k, v] : j.items()) {
    bool is_known = false;
    for (const char* kk : known) is_known |= (k == kk);
    if (!is_known) r.extras[k] = v.get<std::string>();
  }
  return r;
}

void write_records(const std::vector<DatasetRecord>& records, std::ostream& out,
                   const std::string& header) {
  if (!header.empty()) out << "# " << header << "\n";
  for (const DatasetRecord& r : records) out << record_to_json(r) << "\n";
}

void write_records(const std::vector<DatasetRecord>& records, const std::string& path,
                   const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_records(records, out, header);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<DatasetRecord> read_records(std::istream& in, const std::string& origin) {
  std::vector<DatasetRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      records.push_back(record_from_json(line));
    } catch (const std::exception& e) {
      throw IoError(origin + ":" + std::to_string(line_no) + ": malformed record line: " +
                    e.what());
    }
  }
  return records;
}

std::vector<DatasetRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_records(in, path);
}

}  // namespace crasplab
