#include "crasplab/interpreter.hpp"

#include <algorithm>
#include <cassert>

namespace crasplab {

namespace {

enum TapeKind : std::uint8_t {
  kQ,
  kNot,
  kAnd,
  kOr,  // fused NOT(AND(NOT x, NOT y))
  kTrue,
  kPos,
  kLe,
  kCountAll,
  kCountDist,
  kIf,
  kAdd,
  kSub,
  kOne,
};

TapeKind tape_kind(OpKind k) {
  switch (k) {
    case OpKind::InitialQ: return kQ;
    case OpKind::BoolNot: return kNot;
    case OpKind::BoolAnd: return kAnd;
    case OpKind::ConstTrue: return kTrue;
    case OpKind::Positional: return kPos;
    case OpKind::Compare: return kLe;
    case OpKind::CountAll: return kCountAll;
    case OpKind::CountDist: return kCountDist;
    case OpKind::Conditional: return kIf;
    case OpKind::Add: return kAdd;
    case OpKind::Sub: return kSub;
    case OpKind::ConstOne: return kOne;
  }
  return kTrue;
}

std::int32_t reserve_symbol(std::unordered_map<std::string, std::int32_t>& ids,
                            const std::string& text) {
  auto [it, _] = ids.emplace(text, static_cast<std::int32_t>(ids.size()));
  return it->second;
}

}  // namespace

const std::vector<std::int64_t>& Valuation::of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw Error("no operation named '" + name + "' in valuation");
}

Valuation evaluate(const Program& program, std::span<const Symbol> input) {
  const std::size_t n = input.size();
  const std::size_t k = program.ops.size();

  // Resolve symbols first so an unknown symbol fails before any work.
  std::unordered_map<std::string, std::int32_t> ids;
  reserve_symbol(ids, Symbol::bos().text());
  reserve_symbol(ids, Symbol::sep().text());
  reserve_symbol(ids, Symbol::eos().text());
  for (const Op& op : program.ops) {
    if (op.kind == OpKind::InitialQ) reserve_symbol(ids, op.symbol.text());
  }
  for (const auto& [sym, _] : program.next_ops) reserve_symbol(ids, sym.text());
  for (const Symbol& sym : program.declared_alphabet) reserve_symbol(ids, sym.text());
  std::vector<std::int32_t> in(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = ids.find(input[i].text());
    if (it == ids.end()) {
      throw UnknownSymbolError("unknown symbol '" + input[i].text() + "' at position " +
                               std::to_string(i));
    }
    in[i] = it->second;
  }
  std::vector<std::int32_t> q_ids(k, -1);
  for (std::size_t o = 0; o < k; ++o) {
    if (program.ops[o].kind == OpKind::InitialQ) q_ids[o] = ids.at(program.ops[o].symbol.text());
  }

  Valuation v;
  v.length = n;
  v.names.reserve(k);
  v.values.assign(k, std::vector<std::int64_t>(n, 0));
  for (const Op& op : program.ops) {
    v.names.push_back(op.name);
    v.bool_valued.push_back(op_kind_is_bool(op.kind));
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < k; ++o) {
      const Op& op = program.ops[o];
      std::int64_t r = 0;
      switch (op.kind) {
        case OpKind::InitialQ: r = (in[i] == q_ids[o]); break;
        case OpKind::BoolNot: r = v.values[op.arg0][i] == 0; break;
        case OpKind::BoolAnd: r = v.values[op.arg0][i] != 0 && v.values[op.arg1][i] != 0; break;
        case OpKind::ConstTrue: r = 1; break;
        case OpKind::Positional: {
          std::int64_t residue = static_cast<std::int64_t>(i) % op.period;
          r = std::find(op.residues.begin(), op.residues.end(), residue) != op.residues.end();
          break;
        }
        case OpKind::Compare: r = v.values[op.arg0][i] <= v.values[op.arg1][i]; break;
        case OpKind::CountAll:
          r = (i ? v.values[o][i - 1] : 0) + (v.values[op.arg0][i] != 0);
          break;
        case OpKind::CountDist: {
          for (std::int64_t d : op.distances) {
            if (d >= 0 && d <= static_cast<std::int64_t>(i)) r += (v.values[op.arg0][i - d] != 0);
          }
          break;
        }
        case OpKind::Conditional:
          r = v.values[op.arg0][i] != 0 ? v.values[op.arg1][i] : v.values[op.arg2][i];
          break;
        case OpKind::Add: r = v.values[op.arg0][i] + v.values[op.arg1][i]; break;
        case OpKind::Sub: r = v.values[op.arg0][i] - v.values[op.arg1][i]; break;
        case OpKind::ConstOne: r = 1; break;
      }
      v.values[o][i] = r;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Runtime

Runtime::Runtime(const Program& program) : program_(&program) { compile(program); }

void Runtime::compile(const Program& program) {
  const std::size_t k = program.ops.size();

  reserve_symbol(symbol_ids_, Symbol::bos().text());
  reserve_symbol(symbol_ids_, Symbol::sep().text());
  reserve_symbol(symbol_ids_, Symbol::eos().text());
  for (const Op& op : program.ops) {
    if (op.kind == OpKind::InitialQ) reserve_symbol(symbol_ids_, op.symbol.text());
  }
  for (const auto& [sym, _] : program.next_ops) reserve_symbol(symbol_ids_, sym.text());
  for (const Symbol& sym : program.declared_alphabet) reserve_symbol(symbol_ids_, sym.text());

  std::vector<std::int32_t> uses(k, 0);
  auto count_use = [&](std::int32_t a) {
    if (a >= 0) ++uses[a];
  };
  for (const Op& op : program.ops) {
    count_use(op.arg0);
    count_use(op.arg1);
    count_use(op.arg2);
  }
  std::vector<bool> is_next_target(k, false);
  for (const auto& [_, idx] : program.next_ops) {
    if (idx >= 0 && idx < static_cast<int>(k)) is_next_target[idx] = true;
  }

  // Fuse OR-lowering chains: z = NOT(x), x = AND(a, b), a = NOT(u), b = NOT(v)
  // with x, a, b single-use internals becomes z = OR(u, v).
  enum class Shape : std::uint8_t { Plain, Or, Dead };
  std::vector<Shape> shape(k, Shape::Plain);
  std::vector<std::int32_t> or_lhs(k, -1), or_rhs(k, -1);
  for (std::size_t z = 0; z < k; ++z) {
    const Op& oz = program.ops[z];
    if (oz.kind != OpKind::BoolNot) continue;
    std::int32_t x = oz.arg0;
    if (x < 0 || program.ops[x].kind != OpKind::BoolAnd || uses[x] != 1 || is_next_target[x])
      continue;
    std::int32_t a = program.ops[x].arg0, b = program.ops[x].arg1;
    if (a < 0 || b < 0 || a == b) continue;
    if (program.ops[a].kind != OpKind::BoolNot || uses[a] != 1 || is_next_target[a]) continue;
    if (program.ops[b].kind != OpKind::BoolNot || uses[b] != 1 || is_next_target[b]) continue;
    if (shape[a] != Shape::Plain || shape[b] != Shape::Plain || shape[x] != Shape::Plain) continue;
    shape[z] = Shape::Or;
    or_lhs[z] = program.ops[a].arg0;
    or_rhs[z] = program.ops[b].arg0;
    shape[x] = shape[a] = shape[b] = Shape::Dead;
  }

  // Counting closure: counting operations and everything they transitively
  // read must be evaluated at every position; the rest is final-position-only.
  std::vector<bool> always(k, false);
  std::vector<std::int32_t> stack;
  auto mark = [&](std::int32_t op) {
    if (op >= 0 && !always[op]) {
      always[op] = true;
      stack.push_back(op);
    }
  };
  for (std::size_t o = 0; o < k; ++o) {
    if (shape[o] == Shape::Dead) continue;
    if (program.ops[o].kind == OpKind::CountAll) {
      mark(static_cast<std::int32_t>(o));
    } else if (program.ops[o].kind == OpKind::CountDist) {
      mark(program.ops[o].arg0);
    }
  }
  while (!stack.empty()) {
    std::int32_t o = stack.back();
    stack.pop_back();
    if (shape[o] == Shape::Or) {
      mark(or_lhs[o]);
      mark(or_rhs[o]);
    } else {
      mark(program.ops[o].arg0);
      mark(program.ops[o].arg1);
      mark(program.ops[o].arg2);
    }
  }

  // Ring descriptors: one per slot whose history a CountDist reads.
  std::vector<std::int32_t> window(k, 0);
  for (std::size_t o = 0; o < k; ++o) {
    const Op& op = program.ops[o];
    if (op.kind != OpKind::CountDist || shape[o] == Shape::Dead) continue;
    std::int64_t maxd = -1;
    for (std::int64_t d : op.distances) maxd = std::max(maxd, d);
    if (maxd >= 0 && op.arg0 >= 0) {
      window[op.arg0] = std::max<std::int32_t>(window[op.arg0], static_cast<std::int32_t>(maxd) + 1);
    }
  }

  // Slot assignment: always slots first, then lazy ones, both in program order.
  std::vector<std::int32_t> slot_of(k, -1);
  std::vector<std::int32_t> order;
  order.reserve(k);
  for (std::size_t o = 0; o < k; ++o) {
    if (shape[o] != Shape::Dead && always[o]) order.push_back(static_cast<std::int32_t>(o));
  }
  const std::size_t n_always = order.size();
  for (std::size_t o = 0; o < k; ++o) {
    if (shape[o] != Shape::Dead && !always[o]) order.push_back(static_cast<std::int32_t>(o));
  }
  for (std::size_t s = 0; s < order.size(); ++s) slot_of[order[s]] = static_cast<std::int32_t>(s);

  std::vector<std::int32_t> ring_of(k, -1);
  for (std::size_t o = 0; o < k; ++o) {
    if (window[o] > 0) {
      ring_of[o] = static_cast<std::int32_t>(rings_.size());
      rings_.push_back({slot_of[o], window[o], static_cast<std::int64_t>(ring_buf_.size())});
      ring_buf_.resize(ring_buf_.size() + window[o]);
    }
  }

  auto build_slot = [&](std::int32_t o) {
    const Op& op = program.ops[o];
    Slot s{};
    if (shape[o] == Shape::Or) {
      s.kind = kOr;
      s.a0 = slot_of[or_lhs[o]];
      s.a1 = slot_of[or_rhs[o]];
      return s;
    }
    s.kind = tape_kind(op.kind);
    s.a0 = op.arg0 >= 0 ? slot_of[op.arg0] : -1;
    s.a1 = op.arg1 >= 0 ? slot_of[op.arg1] : -1;
    s.a2 = op.arg2 >= 0 ? slot_of[op.arg2] : -1;
    switch (op.kind) {
      case OpKind::InitialQ:
        s.imm = symbol_ids_.at(op.symbol.text());
        break;
      case OpKind::Positional: {
        s.imm = op.period;
        s.aux = static_cast<std::int32_t>(residue_pool_.size());
        residue_pool_.resize(residue_pool_.size() + op.period, 0);
        for (std::int64_t r : op.residues) {
          if (r >= 0 && r < op.period) residue_pool_[s.aux + r] = 1;
        }
        break;
      }
      case OpKind::CountDist: {
        s.aux = static_cast<std::int32_t>(dist_pool_.size());
        for (std::int64_t d : op.distances) dist_pool_.push_back(static_cast<std::int32_t>(d));
        s.aux2 = static_cast<std::int32_t>(op.distances.size());
        s.a1 = op.arg0 >= 0 ? ring_of[op.arg0] : -1;
        break;
      }
      default:
        break;
    }
    return s;
  };

  for (std::size_t s = 0; s < order.size(); ++s) {
    Slot slot = build_slot(order[s]);
    if (s < n_always) {
      always_.push_back(slot);
    } else {
      lazy_.push_back(slot);
    }
  }

  for (const auto& [sym, idx] : program.next_ops) {
    next_.push_back({sym, slot_of[idx], symbol_ids_.at(sym.text())});
  }
  slot_of_ = std::move(slot_of);

  cur_.assign(order.size(), 0);
}

void Runtime::reset() {
  std::fill(cur_.begin(), cur_.end(), 0);
  std::fill(ring_buf_.begin(), ring_buf_.end(), 0);
  pos_ = 0;
  lazy_pos_ = static_cast<std::size_t>(-1);
}

std::int64_t Runtime::eval_slot(const Slot& s, std::size_t at_pos) const {
  switch (s.kind) {
    case kQ: return 0;  // handled inline in push_id
    case kNot: return cur_[s.a0] ^ 1;
    case kAnd: return cur_[s.a0] & cur_[s.a1];
    case kOr: return cur_[s.a0] | cur_[s.a1];
    case kTrue: return 1;
    case kPos: return residue_pool_[s.aux + static_cast<std::int64_t>(at_pos) % s.imm];
    case kLe: return cur_[s.a0] <= cur_[s.a1];
    case kCountDist: {
      std::int64_t r = 0;
      const Ring* ring = s.a1 >= 0 ? &rings_[s.a1] : nullptr;
      for (std::int32_t di = 0; di < s.aux2; ++di) {
        std::int32_t d = dist_pool_[s.aux + di];
        if (d > static_cast<std::int64_t>(at_pos)) continue;
        if (d == 0) {
          r += cur_[s.a0] != 0;
        } else {
          r += ring_buf_[ring->offset + (at_pos - d) % ring->window] != 0;
        }
      }
      return r;
    }
    case kIf: return cur_[s.a0] ? cur_[s.a1] : cur_[s.a2];
    case kAdd: return cur_[s.a0] + cur_[s.a1];
    case kSub: return cur_[s.a0] - cur_[s.a1];
    case kOne: return 1;
    default: return 0;
  }
}

void Runtime::push_id(std::int32_t id) {
  last_id_ = id;
  const std::size_t at = pos_;
  const std::size_t n = always_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Slot& s = always_[i];
    std::int64_t v;
    if (s.kind == kQ) {
      v = (s.imm == id);
    } else if (s.kind == kCountAll) {
      v = cur_[i] + (cur_[s.a0] != 0);
    } else {
      v = eval_slot(s, at);
    }
    cur_[i] = v;
  }
  for (const Ring& r : rings_) {
    ring_buf_[r.offset + at % r.window] = cur_[r.src];
  }
  pos_ = at + 1;
}

void Runtime::push(const Symbol& symbol) {
  auto it = symbol_ids_.find(symbol.text());
  if (it == symbol_ids_.end()) {
    throw UnknownSymbolError("unknown symbol '" + symbol.text() + "' at position " +
                             std::to_string(pos_));
  }
  push_id(it->second);
}

void Runtime::eval_lazy() {
  if (pos_ == 0 || lazy_pos_ == pos_) return;
  const std::size_t at = pos_ - 1;
  const std::size_t base = always_.size();
  for (std::size_t i = 0; i < lazy_.size(); ++i) {
    const Slot& s = lazy_[i];
    cur_[base + i] = s.kind == kQ ? (s.imm == last_id_) : eval_slot(s, at);
  }
  lazy_pos_ = pos_;
}

std::optional<Symbol> Runtime::decide() {
  if (pos_ == 0) return std::nullopt;
  eval_lazy();
  const NextEntry* found = nullptr;
  for (const NextEntry& e : next_) {
    if (cur_[e.slot] != 0) {
      if (found != nullptr) {
        throw AmbiguousNextError("NEXT is ambiguous at position " + std::to_string(pos_ - 1) +
                                 ": both '" + found->symbol.text() + "' and '" + e.symbol.text() +
                                 "' hold");
      }
      found = &e;
    }
  }
  if (!found) return std::nullopt;
  return found->symbol;
}

std::int64_t Runtime::value_at_last(const std::string& name) {
  const int op = program_->index_of(name);
  if (op < 0 || slot_of_[op] < 0 || pos_ == 0) {
    throw Error("no value for operation '" + name + "'");
  }
  eval_lazy();
  return cur_[slot_of_[op]];
}

std::optional<Symbol> next_token(const Program& program, std::span<const Symbol> prefix) {
  Runtime rt(program);
  for (const Symbol& s : prefix) rt.push(s);
  return rt.decide();
}

std::vector<Symbol> generate(const Program& program, std::span<const Symbol> prefix,
                             int max_steps) {
  Runtime rt(program);
  for (const Symbol& s : prefix) rt.push(s);
  std::vector<Symbol> out;
  while (true) {
    std::optional<Symbol> next = rt.decide();
    if (!next.has_value()) return out;
    if (static_cast<int>(out.size()) >= max_steps) {
      throw StepBudgetError("generation exceeded the step budget of " + std::to_string(max_steps));
    }
    out.push_back(*next);
    rt.push(*next);
  }
}

}  // namespace crasplab
