#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace crasplab {

enum class Split { train, val, test };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

// One serialized example. `input` and `target` are space-separated symbol
// text; retrieval inputs carry the separator token before the query, copy
// inputs carry it trailing. `extras` holds format-specific top-level keys
// (the git records expose snippet/revert/cherrypick verbatim).
struct DatasetRecord {
  std::string id;
  std::string task;
  std::string input;
  std::string target;
  int length = 0;
  std::uint64_t seed = 0;
  Split split = Split::test;
  std::map<std::string, std::string> meta;
  std::map<std::string, std::string> extras;

  bool operator==(const DatasetRecord& other) const = default;
};

std::string record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const std::string& line);

// One record per line, UTF-8, LF. Lines starting with '#' are header
// comments and are skipped on read.
void write_records(const std::vector<DatasetRecord>& records, const std::string& path,
                   const std::string& header = "");
std::vector<DatasetRecord> read_records(const std::string& path);

void write_records(const std::vector<DatasetRecord>& records, std::ostream& out,
                   const std::string& header = "");
std::vector<DatasetRecord> read_records(std::istream& in, const std::string& origin);

}  // namespace crasplab
