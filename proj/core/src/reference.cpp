#include "crasplab/reference.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "crasplab/datagen.hpp"
#include "crasplab/errors.hpp"
#include "crasplab/interpreter.hpp"
#include "crasplab/parallel.hpp"
#include "crasplab/rng.hpp"
#include "nlohmann/json.hpp"

namespace crasplab {

namespace {

std::string mangle(const Symbol& s) {
  if (s.is_bos()) return "BOS";
  if (s.is_sep()) return "SEP";
  if (s.is_eos()) return "EOS";
  std::string out;
  for (char c : s.text()) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "x%02X", static_cast<unsigned char>(c));
      out += buf;
    }
  }
  return out;
}

std::string quoted(const Symbol& s) {
  if (s.is_bos()) return "'<bos>'";
  if (s.is_sep()) return "'<sep>'";
  if (s.is_eos()) return "'<eos>'";
  return "'" + s.text() + "'";
}

// Builds the AST and (optionally) the DSL text from one description, so the
// bundled sources and the fast verification path cannot drift apart. OR is
// written as surface sugar in the text and lowered here exactly as the
// parser lowers it.
class Construction {
 public:
  explicit Construction(bool with_text) : with_text_(with_text) {}

  void reserve(std::size_t ops) { program_.ops.reserve(ops); }

  int one() {
    if (one_ < 0) one_ = emit("ONE_", false, OpKind::ConstOne, -1, -1, -1);
    return one_;
  }
  int two() {
    if (two_ < 0) {
      int o = one();
      two_ = emit("TWO_", false, OpKind::Add, o, o, -1);
    }
    return two_;
  }
  int zero() {
    if (zero_ < 0) {
      int o = one();
      zero_ = emit("ZERO_", false, OpKind::Sub, o, o, -1);
    }
    return zero_;
  }
  int q(const Symbol& s) {
    auto it = q_ops_.find(s.text());
    if (it != q_ops_.end()) return it->second;
    Op op;
    op.name = "Q_" + mangle(s);
    op.kind = OpKind::InitialQ;
    op.declared_bool = true;
    op.symbol = s;
    int idx = push(std::move(op));
    q_ops_.emplace(s.text(), idx);
    return idx;
  }
  int count_all(std::string name, int p) {
    return emit(std::move(name), false, OpKind::CountAll, p, -1, -1);
  }
  int count_dist1(std::string name, int p) {
    Op op;
    op.name = std::move(name);
    op.kind = OpKind::CountDist;
    op.declared_bool = false;
    op.arg0 = p;
    op.distances = {1};
    return push(std::move(op));
  }
  int le(std::string name, int a, int b) {
    return emit(std::move(name), true, OpKind::Compare, a, b, -1);
  }
  int band(std::string name, int a, int b) {
    return emit(std::move(name), true, OpKind::BoolAnd, a, b, -1);
  }
  int bnot(std::string name, int a) {
    return emit(std::move(name), true, OpKind::BoolNot, a, -1, -1);
  }
  int bor(std::string name, int a, int b) {
    // Text keeps the sugar; the AST gets the same lowering the parser does.
    or_args_.emplace_back(program_.ops.size() + 3, std::make_pair(a, b));
    int na = emit_internal(name + "~1", OpKind::BoolNot, a, -1);
    int nb = emit_internal(name + "~2", OpKind::BoolNot, b, -1);
    int nand = emit_internal(name + "~3", OpKind::BoolAnd, na, nb);
    Op op;
    op.name = std::move(name);
    op.kind = OpKind::BoolNot;
    op.declared_bool = true;
    op.arg0 = nand;
    return push(std::move(op));
  }
  // 1 <= COUNT[all](p), the unbounded existential.
  int exists_all(const std::string& name, int p) {
    int c = count_all(name + "C", p);
    return le(name, one(), c);
  }
  // 1 <= COUNT[dist={1}](p), the predecessor existential.
  int exists_prev(const std::string& name, int p) {
    int c = count_dist1(name + "C", p);
    return le(name, one(), c);
  }
  int or_chain(const std::string& name, const std::vector<int>& terms) {
    if (terms.size() == 1) return bor(name, terms[0], terms[0]);
    int acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) {
      const bool last = i + 1 == terms.size();
      acc = bor(last ? name : name + "_" + std::to_string(i), acc, terms[i]);
    }
    return acc;
  }
  void next(const Symbol& s, int op) { program_.next_ops.emplace_back(s, op); }
  void comment(const std::string& text) {
    if (with_text_) annotations_.emplace_back(program_.ops.size(), "# " + text);
  }
  void blank() {
    if (with_text_) annotations_.emplace_back(program_.ops.size(), "");
  }

  Program take_program() { return std::move(program_); }

  // Renders the DSL text from the finished operation list. The three helper
  // operations behind each OR are folded back into the surface sugar.
  std::string take_text() const {
    std::string text;
    std::size_t next_annotation = 0;
    std::size_t next_or = 0;
    for (std::size_t i = 0; i < program_.ops.size(); ++i) {
      while (next_annotation < annotations_.size() && annotations_[next_annotation].first == i) {
        text += annotations_[next_annotation].second + "\n";
        ++next_annotation;
      }
      const Op& op = program_.ops[i];
      if (op.name.find('~') != std::string::npos) continue;
      if (next_or < or_args_.size() && or_args_[next_or].first == i) {
        text += "bool " + op.name + " := OR(" + program_.ops[or_args_[next_or].second.first].name +
                ", " + program_.ops[or_args_[next_or].second.second].name + ")\n";
        ++next_or;
        continue;
      }
      text += render_line(op);
    }
    text += "\n";
    for (const auto& [sym, idx] : program_.next_ops) {
      text += "next " + quoted(sym) + " := " + program_.ops[idx].name + "\n";
    }
    return text;
  }

 private:
  std::string render_line(const Op& op) const {
    auto ref = [&](int idx) { return program_.ops[idx].name; };
    std::string head = std::string(op.declared_bool ? "bool " : "count ") + op.name + " := ";
    switch (op.kind) {
      case OpKind::InitialQ: return head + "Q(" + quoted(op.symbol) + ")\n";
      case OpKind::BoolNot: return head + "NOT(" + ref(op.arg0) + ")\n";
      case OpKind::BoolAnd: return head + "AND(" + ref(op.arg0) + ", " + ref(op.arg1) + ")\n";
      case OpKind::ConstTrue: return head + "TRUE\n";
      case OpKind::Positional: {
        std::string r;
        for (std::size_t k = 0; k < op.residues.size(); ++k) {
          if (k) r += ",";
          r += std::to_string(op.residues[k]);
        }
        return head + "POS(period=" + std::to_string(op.period) + ", residues={" + r + "})\n";
      }
      case OpKind::Compare: return head + "LE(" + ref(op.arg0) + ", " + ref(op.arg1) + ")\n";
      case OpKind::CountAll: return head + "COUNT[all](" + ref(op.arg0) + ")\n";
      case OpKind::CountDist: {
        std::string d;
        for (std::size_t k = 0; k < op.distances.size(); ++k) {
          if (k) d += ",";
          d += std::to_string(op.distances[k]);
        }
        return head + "COUNT[dist={" + d + "}](" + ref(op.arg0) + ")\n";
      }
      case OpKind::Conditional:
        return head + "IF(" + ref(op.arg0) + ", " + ref(op.arg1) + ", " + ref(op.arg2) + ")\n";
      case OpKind::Add: return head + "ADD(" + ref(op.arg0) + ", " + ref(op.arg1) + ")\n";
      case OpKind::Sub: return head + "SUB(" + ref(op.arg0) + ", " + ref(op.arg1) + ")\n";
      case OpKind::ConstOne: return head + "ONE\n";
    }
    return head + "TRUE\n";
  }

  int emit(std::string name, bool is_bool, OpKind kind, int a0, int a1, int a2) {
    Op op;
    op.name = std::move(name);
    op.kind = kind;
    op.declared_bool = is_bool;
    op.arg0 = a0;
    op.arg1 = a1;
    op.arg2 = a2;
    return push(std::move(op));
  }
  int emit_internal(std::string name, OpKind kind, int a0, int a1) {
    Op op;
    op.name = std::move(name);
    op.kind = kind;
    op.declared_bool = true;
    op.arg0 = a0;
    op.arg1 = a1;
    int idx = static_cast<int>(program_.ops.size());
    program_.ops.push_back(std::move(op));
    return idx;
  }
  int push(Op op) {
    int idx = static_cast<int>(program_.ops.size());
    program_.ops.push_back(std::move(op));
    return idx;
  }

  bool with_text_;
  Program program_;
  std::vector<std::pair<std::size_t, std::string>> annotations_;
  std::vector<std::pair<std::size_t, std::pair<int, int>>> or_args_;
  std::map<std::string, int> q_ops_;
  int one_ = -1, two_ = -1, zero_ = -1;
};

// PRED / CBIGRAM / NEXT pipeline for unique retrieval. The right and left
// versions differ only in the bigram orientation read by the NEXT stage.
void build_unique_retrieval(Construction& c, std::span<const Symbol> alphabet, bool right) {
  const int m = static_cast<int>(alphabet.size());
  c.reserve(static_cast<std::size_t>(8) * m * m + 4 * m + 8);
  c.comment(std::string(right ? "UR" : "UL") +
            ": answer is the token to the " + (right ? "right" : "left") +
            " of the query's unique occurrence.");
  c.one();
  c.blank();
  c.comment("token indicators");
  std::vector<int> q(m);
  for (int s = 0; s < m; ++s) q[s] = c.q(alphabet[s]);
  c.blank();
  c.comment("PRED_a: the previous position holds a");
  std::vector<int> pred(m);
  for (int a = 0; a < m; ++a) {
    pred[a] = c.exists_prev("PRED_" + mangle(alphabet[a]), q[a]);
  }
  c.blank();
  c.comment("CBIGRAM_a_b: the bigram (a b) has occurred up to the current position");
  std::vector<std::vector<int>> cb(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      std::string tag = mangle(alphabet[a]) + "_" + mangle(alphabet[b]);
      int bg = c.band("BG_" + tag, q[b], pred[a]);
      cb[a][b] = c.exists_all("CBIGRAM_" + tag, bg);
    }
  }
  c.blank();
  c.comment("NEXT_a: some recorded bigram pairs the current symbol with a");
  for (int a = 0; a < m; ++a) {
    std::vector<int> terms(m);
    for (int s = 0; s < m; ++s) {
      terms[s] = c.band("T_" + mangle(alphabet[a]) + "_" + mangle(alphabet[s]), q[s],
                        right ? cb[s][a] : cb[a][s]);
    }
    int nxt = c.or_chain("NEXT_" + mangle(alphabet[a]), terms);
    c.next(alphabet[a], nxt);
  }
}

// First-occurrence retrieval: an ISLEFTMOST gate restricts the bigram memory
// to first occurrences. The right version gates the predecessor position,
// the left version gates the occurrence position itself.
void build_first_retrieval(Construction& c, std::span<const Symbol> alphabet, bool right) {
  const int m = static_cast<int>(alphabet.size());
  c.reserve(static_cast<std::size_t>(8) * m * m + 12 * m + 16);
  c.comment(std::string(right ? "NRFirst" : "NLFirst") +
            ": answer is the token to the " + (right ? "right" : "left") +
            " of the query's first occurrence.");
  c.one();
  c.blank();
  c.comment("token indicators");
  std::vector<int> q(m);
  for (int s = 0; s < m; ++s) q[s] = c.q(alphabet[s]);
  c.blank();
  c.comment("ISLEFTMOST: the current position is the first occurrence of its symbol");
  std::vector<int> lm(m);
  for (int s = 0; s < m; ++s) {
    std::string tag = mangle(alphabet[s]);
    int seen = c.count_all("SEEN_" + tag, q[s]);
    int atmost = c.le("ATMOST1_" + tag, seen, c.one());
    lm[s] = c.band("LM_" + tag, q[s], atmost);
  }
  int isleftmost = c.or_chain("ISLEFTMOST", lm);
  c.blank();

  std::vector<int> pred(m);
  if (right) {
    c.comment("PRED_a: the previous position holds a and is a's first occurrence");
    for (int a = 0; a < m; ++a) {
      std::string tag = mangle(alphabet[a]);
      int gated = c.band("GA_" + tag, q[a], isleftmost);
      pred[a] = c.exists_prev("PRED_" + tag, gated);
    }
  } else {
    c.comment("PRED_a: the previous position holds a");
    for (int a = 0; a < m; ++a) {
      pred[a] = c.exists_prev("PRED_" + mangle(alphabet[a]), q[a]);
    }
  }
  c.blank();

  std::vector<std::vector<int>> cb(m, std::vector<int>(m));
  if (right) {
    c.comment("CBIGRAM_a_b: bigram (a b) with a at its first occurrence");
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        std::string tag = mangle(alphabet[a]) + "_" + mangle(alphabet[b]);
        int bg = c.band("BG_" + tag, q[b], pred[a]);
        cb[a][b] = c.exists_all("CBIGRAM_" + tag, bg);
      }
    }
  } else {
    c.comment("CBIGRAM_a_b: bigram (a b) with b at its first occurrence");
    std::vector<int> gq(m);
    for (int b = 0; b < m; ++b) {
      gq[b] = c.band("GQ_" + mangle(alphabet[b]), q[b], isleftmost);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        std::string tag = mangle(alphabet[a]) + "_" + mangle(alphabet[b]);
        int bg = c.band("BG_" + tag, gq[b], pred[a]);
        cb[a][b] = c.exists_all("CBIGRAM_" + tag, bg);
      }
    }
  }
  c.blank();
  c.comment("NEXT_a: some recorded bigram pairs the current symbol with a");
  for (int a = 0; a < m; ++a) {
    std::vector<int> terms(m);
    for (int s = 0; s < m; ++s) {
      terms[s] = c.band("T_" + mangle(alphabet[a]) + "_" + mangle(alphabet[s]), q[s],
                        right ? cb[s][a] : cb[a][s]);
    }
    int nxt = c.or_chain("NEXT_" + mangle(alphabet[a]), terms);
    c.next(alphabet[a], nxt);
  }
}

// Copying as iterated unique retrieval. A restart clause fires at the
// separator; the end marker (separator forward, begin marker backward) is
// emitted once, and a DONE gate silences every NEXT afterwards. The backward
// program additionally restricts the bigram memory to the source region:
// generated text writes reversed bigrams that would otherwise collide.
void build_copy(Construction& c, std::span<const Symbol> alphabet, bool forward) {
  const int m = static_cast<int>(alphabet.size());
  c.reserve(static_cast<std::size_t>(9) * (m + 2) * (m + 2));
  const Symbol& bos = Symbol::bos();
  const Symbol& sep = Symbol::sep();
  c.comment(std::string(forward ? "UF" : "UB") + ": reproduce the all-distinct source " +
            (forward ? "in order." : "in reverse order."));
  c.one();
  c.two();
  c.blank();
  c.comment("token indicators");
  std::vector<int> q(m);
  for (int s = 0; s < m; ++s) q[s] = c.q(alphabet[s]);
  int qbos = c.q(bos);
  int qsep = c.q(sep);
  c.blank();
  c.comment("DONE: the end marker has appeared twice; LIVE gates every NEXT");
  int marker_seen = c.count_all("MARKERSEEN", forward ? qsep : qbos);
  int done = c.le("DONE", c.two(), marker_seen);
  int live = c.bnot("LIVE", done);

  int insrc = -1;
  if (!forward) {
    c.blank();
    c.comment("INSRC: no separator yet, i.e. still inside the source segment");
    int sepseen = c.count_all("SEPSEEN", qsep);
    insrc = c.le("INSRC", sepseen, c.zero());
  }
  c.blank();
  c.comment("PRED_a: the previous position holds a");
  std::vector<int> pred(m);
  for (int a = 0; a < m; ++a) pred[a] = c.exists_prev("PRED_" + mangle(alphabet[a]), q[a]);
  int pred_bos = c.exists_prev("PRED_BOS", qbos);
  c.blank();

  // Bigram memory. Forward: first element in alphabet+bos, second in
  // alphabet+sep. Backward: first element in alphabet+bos, second in
  // alphabet, second element gated to the source region.
  c.comment("CBIGRAM_a_b: the bigram (a b) has occurred");
  std::vector<std::vector<int>> cb(m + 1);  // [a][b], index m = bos
  std::vector<int> second(m);
  for (int b = 0; b < m; ++b) {
    second[b] = forward ? q[b] : c.band("GQ_" + mangle(alphabet[b]), q[b], insrc);
  }
  auto first_pred = [&](int a) { return a == m ? pred_bos : pred[a]; };
  auto first_tag = [&](int a) { return a == m ? std::string("BOS") : mangle(alphabet[a]); };
  for (int a = 0; a <= m; ++a) {
    cb[a].assign(m + 1, -1);
    for (int b = 0; b < m; ++b) {
      std::string tag = first_tag(a) + "_" + mangle(alphabet[b]);
      int bg = c.band("BG_" + tag, second[b], first_pred(a));
      cb[a][b] = c.exists_all("CBIGRAM_" + tag, bg);
    }
    if (forward) {
      std::string tag = first_tag(a) + "_SEP";
      int bg = c.band("BG_" + tag, qsep, first_pred(a));
      cb[a][m] = c.exists_all("CBIGRAM_" + tag, bg);
    }
  }

  std::vector<int> presep(m);
  if (!forward) {
    c.blank();
    c.comment("PRESEP_a: a immediately precedes the separator (the last source token)");
    for (int a = 0; a < m; ++a) {
      std::string tag = mangle(alphabet[a]);
      int at_sep = c.band("SEPPRED_" + tag, qsep, pred[a]);
      presep[a] = c.exists_all("PRESEP_" + tag, at_sep);
    }
  }

  c.blank();
  c.comment(forward ? "NEXT_a: continue the copy, or start it when standing on the separator"
                    : "NEXT_a: continue the reversed copy, or emit the last source token first");
  for (int a = 0; a < m; ++a) {
    std::string atag = mangle(alphabet[a]);
    std::vector<int> terms;
    terms.reserve(m + 1);
    for (int s = 0; s < m; ++s) {
      terms.push_back(c.band("T_" + atag + "_" + mangle(alphabet[s]), q[s],
                             forward ? cb[s][a] : cb[a][s]));
    }
    int restart = forward ? c.band("R_" + atag, qsep, cb[m][a])
                          : c.band("R_" + atag, qsep, presep[a]);
    terms.push_back(restart);
    int any = c.or_chain("ANY_" + atag, terms);
    int nxt = c.band("NEXT_" + atag, any, live);
    c.next(alphabet[a], nxt);
  }
  c.blank();
  c.comment("the end marker itself");
  std::vector<int> mterms(m);
  for (int s = 0; s < m; ++s) {
    std::string stag = mangle(alphabet[s]);
    mterms[s] = forward ? c.band("TM_" + stag, q[s], cb[s][m])
                        : c.band("TM_" + stag, q[s], cb[m][s]);
  }
  int many = c.or_chain("ANY_MARKER", mterms);
  int mnext = c.band("NEXT_MARKER", many, live);
  c.next(forward ? sep : bos, mnext);
}

void build_task(Construction& c, TaskKind task, std::span<const Symbol> alphabet) {
  switch (task) {
    case TaskKind::UR: build_unique_retrieval(c, alphabet, true); break;
    case TaskKind::UL: build_unique_retrieval(c, alphabet, false); break;
    case TaskKind::NRFirst: build_first_retrieval(c, alphabet, true); break;
    case TaskKind::NLFirst: build_first_retrieval(c, alphabet, false); break;
    case TaskKind::UF: build_copy(c, alphabet, true); break;
    case TaskKind::UB: build_copy(c, alphabet, false); break;
    default:
      throw NotExpressibleError(std::string("no construction for ") + task_name(task));
  }
}

std::string inexpressibility_note(TaskKind task) {
  switch (task) {
    case TaskKind::NLLast:
    case TaskKind::NRLast:
      return std::string("NotExpressible: no program in this operation set answers "
                         "last-occurrence retrieval; ") +
             task_name(task) + " is verified against the oracle only.";
    case TaskKind::NF:
    case TaskKind::NB:
      return std::string("NotExpressible: no program in this operation set copies sources "
                         "with repeated symbols; ") +
             task_name(task) + " is verified against the oracle only.";
    case TaskKind::WordReverse:
      return "NotExpressible: chunk reversal contains repeated-symbol reversal as the "
             "single-token-chunk case; WordReverse is verified against the oracle only.";
    default:
      return "";
  }
}

}  // namespace

const std::vector<TaskKind>& expressible_tasks() {
  static const std::vector<TaskKind> tasks = {TaskKind::UL, TaskKind::UR,      TaskKind::NLFirst,
                                              TaskKind::NRFirst, TaskKind::UF, TaskKind::UB};
  return tasks;
}

Expressibility program_for(TaskKind task, std::span<const Symbol> alphabet) {
  Expressibility e;
  e.task = task;
  const auto& tasks = expressible_tasks();
  if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) {
    e.expressible = false;
    e.note = inexpressibility_note(task);
    return e;
  }
  Construction c(true);
  build_task(c, task, alphabet.empty() ? std::span<const Symbol>(default_alphabet()) : alphabet);
  e.expressible = true;
  e.program_source = c.take_text();
  return e;
}

Program build_reference_program(TaskKind task, std::span<const Symbol> alphabet) {
  Construction c(false);
  build_task(c, task, alphabet.empty() ? std::span<const Symbol>(default_alphabet()) : alphabet);
  return c.take_program();
}

std::vector<Symbol> retrieval_program_input(const RetrievalInstance& instance) {
  std::vector<Symbol> input;
  input.reserve(instance.context.size() + 3);
  input.push_back(Symbol::bos());
  input.insert(input.end(), instance.context.begin(), instance.context.end());
  input.push_back(Symbol::sep());
  input.push_back(instance.query);
  return input;
}

std::vector<Symbol> copy_program_prefix(const CopyInstance& instance) {
  std::vector<Symbol> input;
  input.reserve(instance.source.size() + 2);
  input.push_back(Symbol::bos());
  input.insert(input.end(), instance.source.begin(), instance.source.end());
  input.push_back(Symbol::sep());
  return input;
}

Symbol copy_end_marker(TaskKind kind) {
  return kind == TaskKind::UF || kind == TaskKind::NF ? Symbol::sep() : Symbol::bos();
}

std::vector<LengthBin> default_verification_bins(TaskKind task) {
  const int lo = task_is_copy(task) ? 4 : task_min_length(task);
  return {{lo, 50}, {51, 100}, {101, 150}, {201, 500}};
}

std::vector<LengthBin> parse_bins(const std::string& text) {
  std::vector<LengthBin> bins;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw Error("bin '" + part + "' is not MIN:MAX");
    LengthBin bin;
    bin.min_len = std::stoi(part.substr(0, colon));
    bin.max_len = std::stoi(part.substr(colon + 1));
    if (bin.min_len <= 0 || bin.max_len < bin.min_len) throw Error("bad bin '" + part + "'");
    bins.push_back(bin);
  }
  if (bins.empty()) throw Error("no bins given");
  return bins;
}

std::string VerificationReport::table() const {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "task %s  samples/bin %d  seed %llu\n", task_name(task),
                samples_per_bin, static_cast<unsigned long long>(seed));
  out += buf;
  for (const BinResult& b : bins) {
    std::snprintf(buf, sizeof(buf), "  [%d, %d]  checked %lld  mismatches %lld  %s\n",
                  b.bin.min_len, b.bin.max_len, static_cast<long long>(b.checked),
                  static_cast<long long>(b.mismatches), b.mismatches == 0 ? "PASS" : "FAIL");
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "  elapsed %.2fs  overall %s\n", elapsed_seconds,
                passed() ? "PASS" : "FAIL");
  out += buf;
  return out;
}

std::string VerificationReport::to_jsonl() const {
  using ordered_json = nlohmann::ordered_json;
  std::string out;
  ordered_json head;
  head["task"] = task_name(task);
  head["samples_per_bin"] = samples_per_bin;
  head["seed"] = seed;
  head["passed"] = passed();
  out += head.dump() + "\n";
  for (const BinResult& b : bins) {
    ordered_json j;
    j["bin_min"] = b.bin.min_len;
    j["bin_max"] = b.bin.max_len;
    j["checked"] = b.checked;
    j["mismatches"] = b.mismatches;
    out += j.dump() + "\n";
  }
  for (const VerificationMismatch& m : mismatches) {
    ordered_json j;
    j["bin"] = m.bin_index;
    j["index"] = m.instance_index;
    j["input"] = m.input;
    j["program_output"] = m.program_output;
    j["oracle_output"] = m.oracle_output;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

struct InstanceOutcome {
  bool mismatch = false;
  std::string input;
  std::string program_output;
  std::string oracle_output;
};

// Retrieval verification shares one program over the full default alphabet.
void verify_retrieval_bin(TaskKind task, const LengthBin& bin, int bin_index, int samples,
                          std::uint64_t seed, int workers, std::vector<InstanceOutcome>& out) {
  const auto& alphabet = default_alphabet();
  const Program program = build_reference_program(task, alphabet);
  const bool unique = task_is_unique(task);

  parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end) {
    Runtime rt(program);
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = substream(seed, {static_cast<std::uint64_t>(task),
                                 static_cast<std::uint64_t>(bin_index), i});
      const int length = rng.range(bin.min_len, bin.max_len);
      RetrievalInstance inst = sample_retrieval_instance(unique, length, alphabet, false, rng);
      const Symbol expected = oracle_retrieval(task, inst);

      rt.reset();
      for (const Symbol& s : retrieval_program_input(inst)) rt.push(s);
      std::string got;
      try {
        std::optional<Symbol> token = rt.decide();
        got = token.has_value() ? token->text() : "<halt>";
      } catch (const AmbiguousNextError& e) {
        got = std::string("<ambiguous: ") + e.what() + ">";
      }
      if (got != expected.text()) {
        out[i].mismatch = true;
        out[i].input = render_retrieval_input(inst, "||");
        out[i].program_output = got;
        out[i].oracle_output = expected.text();
      }
    }
  });
}

// Copy verification builds the program over exactly the symbols a length
// uses: lengths within a worker chunk are grouped so each program is built
// once. Short bins keep the 62-symbol alphabet so unused rows get exercised.
void verify_copy_bin(TaskKind task, const LengthBin& bin, int bin_index, int samples,
                     std::uint64_t seed, int workers, std::vector<InstanceOutcome>& out) {
  std::vector<int> lengths(samples);
  for (int i = 0; i < samples; ++i) {
    Rng rng = substream(seed, {static_cast<std::uint64_t>(task),
                               static_cast<std::uint64_t>(bin_index),
                               static_cast<std::uint64_t>(i)});
    lengths[i] = rng.range(bin.min_len, bin.max_len);
  }
  const bool small_alphabet = bin.max_len <= static_cast<int>(default_alphabet().size());
  const Symbol marker = copy_end_marker(task);

  parallel_chunks(samples, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

    int built_for = -1;
    std::vector<Symbol> alphabet;
    std::unique_ptr<Runtime> rt;
    std::unique_ptr<Program> program;
    for (std::size_t i : order) {
      const int length = lengths[i];
      const int want = small_alphabet ? static_cast<int>(default_alphabet().size()) : length;
      if (want != built_for) {
        alphabet = small_alphabet ? default_alphabet() : synthetic_alphabet(length);
        program = std::make_unique<Program>(build_reference_program(task, alphabet));
        rt = std::make_unique<Runtime>(*program);
        built_for = want;
      }
      Rng rng = substream(seed, {static_cast<std::uint64_t>(task),
                                 static_cast<std::uint64_t>(bin_index),
                                 static_cast<std::uint64_t>(i)});
      (void)rng.range(bin.min_len, bin.max_len);  // same draw as the length pass
      CopyInstance inst = sample_copy_instance(true, length, alphabet, rng);
      std::vector<Symbol> expected = oracle_copy(task, inst);

      std::string got;
      bool ok = false;
      try {
        rt->reset();
        for (const Symbol& s : copy_program_prefix(inst)) rt->push(s);
        std::vector<Symbol> generated;
        while (true) {
          std::optional<Symbol> tok = rt->decide();
          if (!tok.has_value()) break;
          if (static_cast<int>(generated.size()) >= length + 2) {
            throw StepBudgetError("generation exceeded the step budget of " +
                                  std::to_string(length + 2));
          }
          generated.push_back(*tok);
          rt->push(*tok);
        }
        if (!generated.empty() && generated.back() == marker) {
          generated.pop_back();
          ok = std::equal(generated.begin(), generated.end(), expected.begin(), expected.end()) &&
               generated.size() == expected.size();
        }
        if (!ok) got = join_symbols(generated) + " <no clean marker>";
      } catch (const Error& e) {
        got = std::string("<error: ") + e.what() + ">";
      }
      if (!ok) {
        out[i].mismatch = true;
        out[i].input = render_copy_input(inst, "||");
        out[i].program_output = got;
        out[i].oracle_output = join_symbols(expected);
      }
    }
  });
}

}  // namespace

VerificationReport verify_program(TaskKind task, std::span<const LengthBin> bins,
                                  int samples_per_bin, std::uint64_t seed, int workers) {
  Expressibility e = program_for(task);
  if (!e.expressible) throw NotExpressibleError(e.note);

  VerificationReport report;
  report.task = task;
  report.samples_per_bin = samples_per_bin;
  report.seed = seed;

  const auto start = std::chrono::steady_clock::now();
  for (int bi = 0; bi < static_cast<int>(bins.size()); ++bi) {
    const LengthBin& bin = bins[bi];
    if (bin.min_len < task_min_length(task)) {
      throw InfeasibleSpecError("bin minimum " + std::to_string(bin.min_len) +
                                " is below the task minimum " +
                                std::to_string(task_min_length(task)));
    }
    std::vector<InstanceOutcome> outcomes(samples_per_bin);
    if (task_is_retrieval(task)) {
      verify_retrieval_bin(task, bin, bi, samples_per_bin, seed, workers, outcomes);
    } else {
      verify_copy_bin(task, bin, bi, samples_per_bin, seed, workers, outcomes);
    }
    BinResult result;
    result.bin = bin;
    result.checked = samples_per_bin;
    for (std::int64_t i = 0; i < samples_per_bin; ++i) {
      if (outcomes[i].mismatch) {
        ++result.mismatches;
        report.mismatches.push_back({bi, i, outcomes[i].input, outcomes[i].program_output,
                                     outcomes[i].oracle_output});
      }
    }
    report.bins.push_back(result);
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace crasplab
