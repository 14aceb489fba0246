#include "cli_app.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "crasplab/datagen.hpp"
#include "crasplab/errors.hpp"
#include "crasplab/glitch.hpp"
#include "crasplab/interpreter.hpp"
#include "crasplab/parallel.hpp"
#include "crasplab/parser.hpp"
#include "crasplab/prompts.hpp"
#include "crasplab/records.hpp"
#include "crasplab/reference.hpp"
#include "crasplab/textgen.hpp"
#include "crasplab/validate.hpp"
#include "nlohmann/json.hpp"

namespace crasplab::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct UsageError : Error {
  using Error::Error;
};

TaskKind parse_task(const std::string& name) {
  auto kind = task_from_name(name);
  if (!kind.has_value()) throw UsageError("unknown task '" + name + "'");
  return *kind;
}

std::vector<Symbol> parse_alphabet_chars(const std::string& chars) {
  std::vector<Symbol> out;
  for (char c : chars) out.emplace_back(std::string_view(&c, 1));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoi(part));
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("range '" + text + "' is not MIN:MAX");
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string task = "UR";
  std::string lengths;
  std::string length_range;
  int count = 0;
  std::uint64_t seed = 0;
  std::string split = "test";
  std::string alphabet;
  std::string separator = "||";
  bool first_half_ood = false;
  int combined_cap = 0;
  std::string depths = "10,15,20,25";
  int n_seeds = 3;
  int sentences = 45;
  int token_budget = 500;
  std::string out;
  int workers = 0;
};

std::string gen_header(const GenArgs& a) {
  ordered_json j;
  j["command"] = "gen";
  j["task"] = a.task;
  if (!a.lengths.empty()) j["lengths"] = a.lengths;
  if (!a.length_range.empty()) j["length_range"] = a.length_range;
  j["count"] = a.count;
  j["seed"] = a.seed;
  j["split"] = a.split;
  if (!a.alphabet.empty()) j["alphabet"] = a.alphabet;
  j["separator"] = a.separator;
  if (a.first_half_ood) j["first_half_ood"] = true;
  if (a.combined_cap > 0) j["combined_cap"] = a.combined_cap;
  if (a.task == "git") {
    j["depths"] = a.depths;
    j["seeds"] = a.n_seeds;
  }
  if (a.task == "lorem") {
    j["sentences"] = a.sentences;
    j["token_budget"] = a.token_budget;
  }
  return "config " + j.dump();
}

int cmd_gen(const GenArgs& a) {
  std::vector<DatasetRecord> records;
  if (a.task == "git") {
    GitSpec spec;
    spec.depths = parse_int_list(a.depths);
    spec.seeds.clear();
    for (int s = 0; s < a.n_seeds; ++s) spec.seeds.push_back(a.seed + s);
    spec.count_per_cell = a.count;
    records = gen_git_histories(spec, a.workers);
  } else if (a.task == "lorem") {
    LoremSpec spec;
    spec.count = a.count;
    spec.seed = a.seed;
    spec.sentence_target = a.sentences;
    spec.token_budget = a.token_budget;
    records = gen_lorem(spec, a.workers);
  } else {
    GenSpec spec;
    spec.task = parse_task(a.task);
    if (!a.alphabet.empty()) spec.alphabet = parse_alphabet_chars(a.alphabet);
    if (!a.length_range.empty()) {
      spec.length_range = parse_range(a.length_range);
    } else if (!a.lengths.empty()) {
      spec.lengths = parse_int_list(a.lengths);
    } else {
      throw UsageError("gen needs --lengths or --length-range");
    }
    spec.count = a.count;
    spec.seed = a.seed;
    spec.split = split_from_name(a.split);
    spec.first_half_ood = a.first_half_ood;
    spec.combined_cap = a.combined_cap;
    spec.separator = a.separator;
    records = task_is_copy(spec.task) ? gen_copy(spec, a.workers)
                                      : gen_retrieval(spec, a.workers);
  }
  if (a.out.empty()) throw UsageError("gen needs --out");
  write_records(records, a.out, gen_header(a));
  std::cout << "wrote " << records.size() << " records to " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string task;
  bool all_expressible = false;
  std::string bins;
  int samples = 500;
  std::uint64_t seed = 3;
  std::string out;
  int workers = 0;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<TaskKind> tasks;
  if (a.all_expressible) {
    tasks = expressible_tasks();
  } else if (!a.task.empty()) {
    tasks.push_back(parse_task(a.task));
  } else {
    throw UsageError("verify needs --task or --all-expressible");
  }

  bool all_passed = true;
  std::string serialized;
  for (TaskKind task : tasks) {
    std::vector<LengthBin> bins =
        a.bins.empty() ? default_verification_bins(task) : parse_bins(a.bins);
    VerificationReport report = verify_program(task, bins, a.samples, a.seed, a.workers);
    std::cout << report.table();
    serialized += report.to_jsonl();
    all_passed &= report.passed();
  }
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw IoError("cannot open '" + a.out + "' for writing");
    out << serialized;
  }
  return all_passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string program_path;
  std::string input;
  std::string mode = "next";
  int max_steps = 10000;
  bool trace = false;
};

int cmd_run(const RunArgs& a) {
  std::ifstream in(a.program_path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + a.program_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();

  ParseResult parsed = parse_program(buffer.str());
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics) {
      std::cerr << a.program_path << ": " << d.to_string() << "\n";
    }
    return 2;
  }
  std::vector<Diagnostic> diags = validate_program(*parsed.program);
  if (!diags.empty()) {
    for (const Diagnostic& d : diags) std::cerr << a.program_path << ": " << d.to_string() << "\n";
    return 2;
  }

  std::vector<Symbol> input = parse_symbols(a.input);
  if (a.trace || a.mode == "eval") {
    Valuation v = evaluate(*parsed.program, input);
    std::cout << "position";
    for (std::size_t i = 0; i < input.size(); ++i) std::cout << "\t" << input[i].text();
    std::cout << "\n";
    for (std::size_t o = 0; o < v.names.size(); ++o) {
      std::cout << v.names[o];
      for (std::size_t i = 0; i < v.length; ++i) {
        if (v.bool_valued[o]) {
          std::cout << "\t" << (v.values[o][i] ? "T" : ".");
        } else {
          std::cout << "\t" << v.values[o][i];
        }
      }
      std::cout << "\n";
    }
    return 0;
  }
  if (a.mode == "next") {
    std::optional<Symbol> token = next_token(*parsed.program, input);
    std::cout << (token.has_value() ? token->text() : "HALT") << "\n";
    return 0;
  }
  if (a.mode == "generate") {
    std::vector<Symbol> out = generate(*parsed.program, input, a.max_steps);
    std::cout << join_symbols(out) << "\n";
    return 0;
  }
  throw UsageError("unknown mode '" + a.mode + "' (next, generate, eval)");
}

// ---------------------------------------------------------------------------
// prompt

struct PromptArgs {
  std::string records;
  std::string pool;
  std::string sep_mode = "sep";
  std::string fewshot = "small";
  std::string instruction = "bare";
  int k = 5;
  std::string separator = "||";
  std::string out;
  std::int64_t limit = -1;
};

int cmd_prompt(const PromptArgs& a) {
  std::vector<DatasetRecord> records = read_records(a.records);
  std::vector<DatasetRecord> pool = a.pool.empty() ? records : read_records(a.pool);
  PromptTemplate tpl = parse_prompt_template(a.sep_mode, a.fewshot, a.instruction, a.k);

  if (a.out.empty()) throw UsageError("prompt needs --out");
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw IoError("cannot open '" + a.out + "' for writing");
  ordered_json header;
  header["command"] = "prompt";
  header["template"] = tpl.name();
  header["k"] = a.k;
  header["separator"] = a.separator;
  out << "# config " << header.dump() << "\n";

  std::int64_t emitted = 0;
  for (const DatasetRecord& r : records) {
    if (a.limit >= 0 && emitted >= a.limit) break;
    ordered_json j;
    j["id"] = r.id;
    j["prompt"] = render_prompt(tpl, r, pool, a.separator);
    out << j.dump() << "\n";
    ++emitted;
  }
  std::cout << "wrote " << emitted << " prompts to " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string records;
  std::string preds;
  std::string scoring = "1,-1,-1";
  std::string tokenizer = "whitespace";
  double min_length_ratio = 0.75;
  std::string out;
  int workers = 0;
};

int cmd_analyze(const AnalyzeArgs& a) {
  if (a.tokenizer != "whitespace") {
    throw UsageError("unknown tokenizer '" + a.tokenizer +
                     "' (the CLI ships whitespace; other tokenizers plug in via the library)");
  }
  std::vector<int> sc = parse_int_list(a.scoring);
  if (sc.size() != 3) throw UsageError("--scoring needs match,mismatch,gap");
  AlignScoring scoring{sc[0], sc[1], sc[2]};

  std::vector<DatasetRecord> records = read_records(a.records);
  std::map<std::string, std::string> preds = read_predictions(a.preds);

  struct PairResult {
    bool have = false;
    TransitionReport report;
    std::string id;
  };
  std::vector<PairResult> results(records.size());
  parallel_chunks(records.size(), a.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto it = preds.find(records[i].id);
      if (it == preds.end()) continue;
      std::vector<std::string> src = whitespace_tokenize(records[i].target);
      std::vector<std::string> out_toks = whitespace_tokenize(it->second);
      results[i].have = true;
      results[i].id = records[i].id;
      results[i].report = analyze(src, out_toks, scoring, a.min_length_ratio);
    }
  });

  GlitchAggregate agg;
  std::int64_t missing = 0;
  std::unique_ptr<std::ofstream> out;
  if (!a.out.empty()) {
    out = std::make_unique<std::ofstream>(a.out, std::ios::binary);
    if (!*out) throw IoError("cannot open '" + a.out + "' for writing");
    ordered_json header;
    header["command"] = "analyze";
    header["scoring"] = a.scoring;
    header["min_length_ratio"] = a.min_length_ratio;
    *out << "# config " << header.dump() << "\n";
  }
  for (const PairResult& r : results) {
    if (!r.have) {
      ++missing;
      continue;
    }
    agg.add(r.report);
    if (out) {
      ordered_json j;
      j["id"] = r.id;
      j["eligible"] = r.report.length_ok;
      j["src_tokens"] = r.report.src_tokens;
      j["out_tokens"] = r.report.out_tokens;
      j["leading_misalignment"] = r.report.leading_misalignment;
      ordered_json ts = ordered_json::array();
      for (const Transition& t : r.report.transitions) {
        ordered_json tj;
        tj["src_index"] = t.src_index;
        tj["token"] = t.token;
        tj["ambiguous"] = t.ambiguous;
        ts.push_back(tj);
      }
      j["transitions"] = ts;
      *out << j.dump() << "\n";
    }
  }
  std::cout << agg.table();
  if (missing > 0) std::cout << "records without predictions: " << missing << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string records;
  std::string preds;
  std::string bins;
  std::string out;
};

int cmd_score(const ScoreArgs& a) {
  std::vector<DatasetRecord> records = read_records(a.records);
  std::map<std::string, std::string> preds = read_predictions(a.preds);
  std::vector<std::pair<int, int>> bins;
  if (!a.bins.empty()) {
    for (const LengthBin& b : parse_bins(a.bins)) bins.emplace_back(b.min_len, b.max_len);
  }
  ScoreTable table = score_outputs(records, preds, bins);
  std::cout << table.table();
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw IoError("cannot open '" + a.out + "' for writing");
    out << table.to_jsonl();
  }
  return 0;
}

// ---------------------------------------------------------------------------

std::unique_ptr<CLI::App> build_app(GenArgs& gen, VerifyArgs& verify, RunArgs& run,
                                    PromptArgs& prompt, AnalyzeArgs& analyze, ScoreArgs& score) {
  auto app = std::make_unique<CLI::App>(
      "crasplab: counting-program interpreter, task oracles, construction verification, "
      "dataset generation, and copy-glitch analysis");
  app->require_subcommand(1);
  app->set_config("--config", "", "plain-text config file (key=value); flags override");

  CLI::App* g = app->add_subcommand("gen", "generate a dataset as line-delimited records");
  g->add_option("--task", gen.task, "task: UL UR NLFirst NRFirst NLLast NRLast UF UB NF NB, or git, lorem");
  g->add_option("--lengths", gen.lengths, "comma-separated lengths; --count records per length");
  g->add_option("--length-range", gen.length_range, "MIN:MAX uniform lengths; --count records total");
  g->add_option("--count", gen.count, "records per length (or per cell for git)")->required();
  g->add_option("--seed", gen.seed, "master seed");
  g->add_option("--split", gen.split, "train, val, or test");
  g->add_option("--alphabet", gen.alphabet, "content symbols, one character each (default: letters+digits)");
  g->add_option("--separator", gen.separator, "separator token in record inputs ('||' or '#')");
  g->add_flag("--first-half-ood", gen.first_half_ood, "place every query occurrence in the first half of the context");
  g->add_option("--combined-cap", gen.combined_cap, "copy tasks: cap on input+target length");
  g->add_option("--depths", gen.depths, "git: comma-separated history depths");
  g->add_option("--seeds", gen.n_seeds, "git: number of consecutive seeds starting at --seed");
  g->add_option("--sentences", gen.sentences, "lorem: sentences per paragraph before truncation");
  g->add_option("--token-budget", gen.token_budget, "lorem: token cap after truncation");
  g->add_option("--out", gen.out, "output record file")->required();
  g->add_option("--workers", gen.workers, "worker threads (0 = hardware); output is identical for any value");

  CLI::App* v = app->add_subcommand("verify", "check a bundled construction against its oracle");
  v->add_option("--task", verify.task, "task to verify");
  v->add_flag("--all-expressible", verify.all_expressible, "verify every task that has a construction");
  v->add_option("--bins", verify.bins, "length bins MIN:MAX,MIN:MAX (default: task-minimum:50,51:100,101:150,201:500)");
  v->add_option("--samples", verify.samples, "instances per bin");
  v->add_option("--seed", verify.seed, "master seed");
  v->add_option("--out", verify.out, "write the report as line-delimited records");
  v->add_option("--workers", verify.workers, "worker threads (0 = hardware)");

  CLI::App* r = app->add_subcommand("run", "parse a program and run it on an input");
  r->add_option("--program", run.program_path, "program file (.crasp)")->required();
  r->add_option("--input", run.input, "space-separated input symbols; <bos>/<sep> spellings accepted")->required();
  r->add_option("--mode", run.mode, "next (default), generate, or eval");
  r->add_option("--max-steps", run.max_steps, "generation step budget");
  r->add_flag("--trace", run.trace, "print every operation's value at every position");

  CLI::App* p = app->add_subcommand("prompt", "render prompts for records");
  p->add_option("--records", prompt.records, "evaluation records")->required();
  p->add_option("--pool", prompt.pool, "demonstration pool (default: the records file itself)");
  p->add_option("--separator-mode", prompt.sep_mode, "sep or nosep");
  p->add_option("--fewshot", prompt.fewshot, "small (shorter demonstrations) or same (same length)");
  p->add_option("--template", prompt.instruction,
                "bare, simple_rule, simple_rule_explained, math_rule, math_rule_explained");
  p->add_option("--k", prompt.k, "demonstrations per prompt");
  p->add_option("--separator", prompt.separator, "separator token used in inputs");
  p->add_option("--out", prompt.out, "output file of {id, prompt} lines")->required();
  p->add_option("--limit", prompt.limit, "render at most this many prompts");

  CLI::App* an = app->add_subcommand("analyze", "align outputs against references and classify copy glitches");
  an->add_option("--records", analyze.records, "reference records")->required();
  an->add_option("--preds", analyze.preds, "predictions file: {id, output} lines")->required();
  an->add_option("--scoring", analyze.scoring, "match,mismatch,gap (default 1,-1,-1)");
  an->add_option("--tokenizer", analyze.tokenizer, "tokenizer for both sides (whitespace)");
  an->add_option("--min-length-ratio", analyze.min_length_ratio,
                 "skip pairs whose output is shorter than this fraction of the reference");
  an->add_option("--out", analyze.out, "per-pair report file");
  an->add_option("--workers", analyze.workers, "worker threads (0 = hardware)");

  CLI::App* sc = app->add_subcommand("score", "exact-match accuracy per task and length bin");
  sc->add_option("--records", score.records, "reference records")->required();
  sc->add_option("--preds", score.preds, "predictions file: {id, output} lines")->required();
  sc->add_option("--bins", score.bins, "length bins MIN:MAX,... (default: one bin per length)");
  sc->add_option("--out", score.out, "write the table as line-delimited records");

  return app;
}

}  // namespace

int run(int argc, const char* const* argv) {
  GenArgs gen_args;
  VerifyArgs verify_args;
  RunArgs run_args;
  PromptArgs prompt_args;
  AnalyzeArgs analyze_args;
  ScoreArgs score_args;
  auto app = build_app(gen_args, verify_args, run_args, prompt_args, analyze_args, score_args);

  try {
    app->parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app->exit(e);  // --help
    app->exit(e);
    return 2;
  }

  try {
    if (app->got_subcommand("gen")) return cmd_gen(gen_args);
    if (app->got_subcommand("verify")) return cmd_verify(verify_args);
    if (app->got_subcommand("run")) return cmd_run(run_args);
    if (app->got_subcommand("prompt")) return cmd_prompt(prompt_args);
    if (app->got_subcommand("analyze")) return cmd_analyze(analyze_args);
    if (app->got_subcommand("score")) return cmd_score(score_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleSpecError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NotExpressibleError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("crasplab");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> undocumented_options() {
  GenArgs gen_args;
  VerifyArgs verify_args;
  RunArgs run_args;
  PromptArgs prompt_args;
  AnalyzeArgs analyze_args;
  ScoreArgs score_args;
  auto app = build_app(gen_args, verify_args, run_args, prompt_args, analyze_args, score_args);

  std::vector<std::string> bad;
  auto audit = [&bad](const CLI::App* a, auto&& self) -> void {
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_description().empty()) bad.push_back(a->get_name() + " " + opt->get_name());
    }
    for (const CLI::App* sub : a->get_subcommands({})) {
      if (sub->get_description().empty()) bad.push_back("subcommand " + sub->get_name());
      self(sub, self);
    }
  };
  audit(app.get(), audit);
  return bad;
}

}  // namespace crasplab::cli
