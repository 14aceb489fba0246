#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crasplab/records.hpp"
#include "crasplab/rng.hpp"
#include "crasplab/symbol.hpp"
#include "crasplab/tasks.hpp"

namespace crasplab {

// Reproducible generation request. Lengths come either from an explicit list
// (count records per length) or from a uniform range (count records total).
// Tasks in the same family share context strings: UL/UR records with equal
// (seed, split, length, index) have identical inputs, and likewise for the
// four non-unique kinds and for UF/UB and NF/NB.
struct GenSpec {
  TaskKind task = TaskKind::UL;
  std::vector<Symbol> alphabet;          // empty: letters+digits
  std::vector<int> lengths;              // explicit lengths, or
  std::optional<std::pair<int, int>> length_range;
  int count = 0;                         // per length (list) or total (range)
  std::uint64_t seed = 0;
  Split split = Split::test;
  bool first_half_ood = false;           // all query occurrences in the first half
  int combined_cap = 0;                  // copy: require 2*length <= cap when set
  std::string separator = "||";
};

// Instance samplers, shared by the generators and construction verification.
// Non-unique sampling places two to five occurrences; all occurrence slots
// leave a left neighbor for the first and a right neighbor for the last so
// every sibling task reads the same string.
RetrievalInstance sample_retrieval_instance(bool unique_query, int length,
                                            std::span<const Symbol> alphabet,
                                            bool first_half_ood, Rng& rng);
CopyInstance sample_copy_instance(bool injective, int length, std::span<const Symbol> alphabet,
                                  Rng& rng);

std::vector<DatasetRecord> gen_retrieval(const GenSpec& spec, int workers = 0);
std::vector<DatasetRecord> gen_copy(const GenSpec& spec, int workers = 0);

// Record-text round trips.
std::string render_retrieval_input(const RetrievalInstance& inst, const std::string& separator);
std::string render_copy_input(const CopyInstance& inst, const std::string& separator);
RetrievalInstance parse_retrieval_input(const std::string& input, const std::string& separator);
CopyInstance parse_copy_input(const std::string& input, const std::string& separator);

// Re-derives every expected output through the oracles; returns the ids of
// records whose stored target disagrees.
std::vector<std::string> oracle_inconsistencies(const std::vector<DatasetRecord>& records,
                                                const std::string& separator = "||");

// Number of records violating the first-half placement constraint.
int count_first_half_violations(const std::vector<DatasetRecord>& records,
                                const std::string& separator = "||");

}  // namespace crasplab
