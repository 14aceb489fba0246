#include "crasplab/datagen.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "crasplab/errors.hpp"
#include "crasplab/parallel.hpp"

namespace crasplab {

namespace {

enum GroupTag : std::uint64_t {
  kRetrievalUnique = 1,
  kRetrievalNonUnique = 2,
  kCopyUnique = 3,
  kCopyNonUnique = 4,
};

GroupTag group_of(TaskKind task) {
  if (task_is_retrieval(task)) {
    return task_is_unique(task) ? kRetrievalUnique : kRetrievalNonUnique;
  }
  return task_is_unique(task) ? kCopyUnique : kCopyNonUnique;
}

// Largest 0-based occurrence index allowed under the first-half constraint:
// 1-based q must satisfy q < ceil(L/2).
int first_half_max_index(int length) { return (length + 1) / 2 - 2; }

// t distinct values in [lo, hi], ascending draw order (Floyd's method).
std::vector<int> sample_distinct(int lo, int hi, int t, Rng& rng) {
  std::set<int> chosen;
  for (int j = hi - t + 1; j <= hi; ++j) {
    int r = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(j - lo + 1)));
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

const std::vector<Symbol>& resolve_alphabet(const GenSpec& spec) {
  return spec.alphabet.empty() ? default_alphabet() : spec.alphabet;
}

struct CellPlan {
  int length;
  std::int64_t index;  // id index within the split
};

std::vector<CellPlan> plan_cells(const GenSpec& spec) {
  std::vector<CellPlan> cells;
  if (spec.length_range.has_value()) {
    cells.reserve(spec.count);
    for (std::int64_t k = 0; k < spec.count; ++k) cells.push_back({0, k});  // length drawn per cell
  } else {
    if (spec.lengths.empty()) throw InfeasibleSpecError("no lengths requested");
    cells.reserve(spec.lengths.size() * spec.count);
    for (int len : spec.lengths) {
      for (std::int64_t k = 0; k < spec.count; ++k) cells.push_back({len, k});
    }
  }
  return cells;
}

std::string make_id(const GenSpec& spec, int length, std::int64_t index) {
  return std::string(task_name(spec.task)) + "-" + split_name(spec.split) + "-L" +
         std::to_string(length) + "-s" + std::to_string(spec.seed) + "-" + std::to_string(index);
}

void check_retrieval_feasible(const GenSpec& spec, int length, std::size_t alphabet_size) {
  if (length < task_min_length(spec.task)) {
    throw InfeasibleSpecError("length " + std::to_string(length) + " is below the minimum " +
                              std::to_string(task_min_length(spec.task)) + " for " +
                              task_name(spec.task));
  }
  if (alphabet_size < 2) throw InfeasibleSpecError("retrieval needs at least two symbols");
  int hi = length - 2;
  if (spec.first_half_ood) hi = std::min(hi, first_half_max_index(length));
  int slots = hi >= 1 ? hi : 0;
  int needed = task_is_unique(spec.task) ? 1 : 2;
  if (slots < needed) {
    throw InfeasibleSpecError("length " + std::to_string(length) +
                              " leaves no valid occurrence placement" +
                              (spec.first_half_ood ? " under first-half placement" : ""));
  }
}

void check_copy_feasible(const GenSpec& spec, int length, std::size_t alphabet_size) {
  if (length < 1) throw InfeasibleSpecError("copy length must be positive");
  if (task_is_unique(spec.task) && alphabet_size < static_cast<std::size_t>(length)) {
    throw InfeasibleSpecError("all-distinct source of length " + std::to_string(length) +
                              " is impossible over " + std::to_string(alphabet_size) +
                              " symbols");
  }
  if (spec.combined_cap > 0 && 2 * length > spec.combined_cap) {
    throw InfeasibleSpecError("combined input/target length " + std::to_string(2 * length) +
                              " exceeds the cap " + std::to_string(spec.combined_cap));
  }
}

// Runs the per-cell draw, retrying with fresh substreams until inputs are
// unique within the split. The retry sequence depends only on (seed, cell,
// attempt), so output is identical for any worker count.
std::vector<DatasetRecord> run_generation(
    const GenSpec& spec, int workers,
    const std::function<DatasetRecord(const CellPlan&, Rng&)>& draw) {
  const GroupTag group = group_of(spec.task);
  std::vector<CellPlan> cells = plan_cells(spec);
  std::vector<DatasetRecord> records(cells.size());

  auto make = [&](std::size_t i, std::uint64_t attempt) {
    Rng rng = substream(spec.seed, {group, static_cast<std::uint64_t>(spec.split),
                                    static_cast<std::uint64_t>(cells[i].length),
                                    static_cast<std::uint64_t>(cells[i].index), attempt});
    return draw(cells[i], rng);
  };

  parallel_chunks(cells.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) records[i] = make(i, 0);
  });

  std::unordered_set<std::string> seen;
  seen.reserve(records.size() * 2);
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::uint64_t attempt = 0;
    while (!seen.insert(records[i].input).second) {
      if (++attempt > 1000) {
        throw InfeasibleSpecError("cannot draw " + std::to_string(records.size()) +
                                  " distinct records; the instance space is too small");
      }
      records[i] = make(i, attempt);
    }
  }
  return records;
}

}  // namespace

RetrievalInstance sample_retrieval_instance(bool unique_query, int length,
                                            std::span<const Symbol> alphabet,
                                            bool first_half_ood, Rng& rng) {
  const int m = static_cast<int>(alphabet.size());
  const Symbol& query = alphabet[rng.below(m)];
  int query_index = static_cast<int>(&query - alphabet.data());

  int hi = length - 2;
  if (first_half_ood) hi = std::min(hi, first_half_max_index(length));
  int slots = hi;  // positions 1..hi
  int t = 1;
  if (!unique_query) {
    t = rng.range(2, std::max(2, std::min(5, slots)));
  }
  std::vector<int> occurrences = sample_distinct(1, hi, t, rng);

  std::vector<Symbol> context(length);
  std::size_t next_occ = 0;
  for (int i = 0; i < length; ++i) {
    if (next_occ < occurrences.size() && occurrences[next_occ] == i) {
      context[i] = query;
      ++next_occ;
    } else {
      int r = static_cast<int>(rng.below(m - 1));
      context[i] = alphabet[r >= query_index ? r + 1 : r];
    }
  }
  RetrievalInstance inst;
  inst.context = std::move(context);
  inst.query = query;
  inst.occurrences = std::move(occurrences);
  return inst;
}

CopyInstance sample_copy_instance(bool injective, int length, std::span<const Symbol> alphabet,
                                  Rng& rng) {
  const int m = static_cast<int>(alphabet.size());
  CopyInstance inst;
  inst.source.reserve(length);
  if (injective) {
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    for (int i = 0; i < length; ++i) {
      int j = i + static_cast<int>(rng.below(m - i));
      std::swap(idx[i], idx[j]);
      inst.source.push_back(alphabet[idx[i]]);
    }
  } else {
    for (int i = 0; i < length; ++i) inst.source.push_back(alphabet[rng.below(m)]);
  }
  return inst;
}

std::string render_retrieval_input(const RetrievalInstance& inst, const std::string& separator) {
  return join_symbols(inst.context) + " " + separator + " " + inst.query.text();
}

std::string render_copy_input(const CopyInstance& inst, const std::string& separator) {
  if (inst.source.empty()) return separator;
  return join_symbols(inst.source) + " " + separator;
}

RetrievalInstance parse_retrieval_input(const std::string& input, const std::string& separator) {
  std::vector<Symbol> tokens = parse_symbols(input);
  if (tokens.size() < 2 || tokens[tokens.size() - 2].text() != separator) {
    throw Error("retrieval input must end with '" + separator + " <query>': " + input);
  }
  Symbol query = tokens.back();
  tokens.pop_back();
  tokens.pop_back();
  return RetrievalInstance::make(std::move(tokens), std::move(query));
}

CopyInstance parse_copy_input(const std::string& input, const std::string& separator) {
  std::vector<Symbol> tokens = parse_symbols(input);
  if (tokens.empty() || tokens.back().text() != separator) {
    throw Error("copy input must end with '" + separator + "': " + input);
  }
  tokens.pop_back();
  return CopyInstance{std::move(tokens)};
}

std::vector<DatasetRecord> gen_retrieval(const GenSpec& spec, int workers) {
  if (!task_is_retrieval(spec.task)) {
    throw InfeasibleSpecError(std::string("gen_retrieval got copy task ") + task_name(spec.task));
  }
  const auto& alphabet = resolve_alphabet(spec);
  if (spec.length_range.has_value()) {
    check_retrieval_feasible(spec, spec.length_range->first, alphabet.size());
    check_retrieval_feasible(spec, spec.length_range->second, alphabet.size());
  } else {
    for (int len : spec.lengths) check_retrieval_feasible(spec, len, alphabet.size());
  }
  const bool unique = task_is_unique(spec.task);

  return run_generation(spec, workers, [&](const CellPlan& cell, Rng& rng) {
    int length = cell.length;
    if (spec.length_range.has_value()) {
      length = rng.range(spec.length_range->first, spec.length_range->second);
    }
    RetrievalInstance inst =
        sample_retrieval_instance(unique, length, alphabet, spec.first_half_ood, rng);
    DatasetRecord r;
    r.id = make_id(spec, length, cell.index);
    r.task = task_name(spec.task);
    r.input = render_retrieval_input(inst, spec.separator);
    r.target = oracle_retrieval(spec.task, inst).text();
    r.length = length;
    r.seed = spec.seed;
    r.split = spec.split;
    r.meta["query"] = inst.query.text();
    r.meta["occurrences"] = std::to_string(inst.occurrences.size());
    return r;
  });
}

std::vector<DatasetRecord> gen_copy(const GenSpec& spec, int workers) {
  if (!task_is_copy(spec.task)) {
    throw InfeasibleSpecError(std::string("gen_copy got retrieval task ") + task_name(spec.task));
  }
  const auto& alphabet = resolve_alphabet(spec);
  if (spec.length_range.has_value()) {
    check_copy_feasible(spec, spec.length_range->first, alphabet.size());
    check_copy_feasible(spec, spec.length_range->second, alphabet.size());
  } else {
    for (int len : spec.lengths) check_copy_feasible(spec, len, alphabet.size());
  }
  const bool injective = task_is_unique(spec.task);

  return run_generation(spec, workers, [&](const CellPlan& cell, Rng& rng) {
    int length = cell.length;
    if (spec.length_range.has_value()) {
      length = rng.range(spec.length_range->first, spec.length_range->second);
    }
    CopyInstance inst = sample_copy_instance(injective, length, alphabet, rng);
    DatasetRecord r;
    r.id = make_id(spec, length, cell.index);
    r.task = task_name(spec.task);
    r.input = render_copy_input(inst, spec.separator);
    r.target = join_symbols(oracle_copy(spec.task, inst));
    r.length = length;
    r.seed = spec.seed;
    r.split = spec.split;
    return r;
  });
}

std::vector<std::string> oracle_inconsistencies(const std::vector<DatasetRecord>& records,
                                                const std::string& separator) {
  std::vector<std::string> bad;
  for (const DatasetRecord& r : records) {
    std::optional<TaskKind> kind = task_from_name(r.task);
    std::string expected;
    if (kind.has_value() && task_is_retrieval(*kind)) {
      expected = oracle_retrieval(*kind, parse_retrieval_input(r.input, separator)).text();
    } else if (kind.has_value() && task_is_copy(*kind)) {
      expected = join_symbols(oracle_copy(*kind, parse_copy_input(r.input, separator)));
    } else if (r.task == "lorem") {
      expected = r.input;  // verbatim copy task
    } else if (r.task == "git") {
      continue;  // checked at the snippet/revert/cherrypick level
    } else {
      bad.push_back(r.id);
      continue;
    }
    if (expected != r.target) bad.push_back(r.id);
  }
  return bad;
}

int count_first_half_violations(const std::vector<DatasetRecord>& records,
                                const std::string& separator) {
  int violations = 0;
  for (const DatasetRecord& r : records) {
    RetrievalInstance inst = parse_retrieval_input(r.input, separator);
    const int max_index = first_half_max_index(static_cast<int>(inst.context.size()));
    for (int occ : inst.occurrences) {
      if (occ > max_index) {
        ++violations;
        break;
      }
    }
  }
  return violations;
}

}  // namespace crasplab
