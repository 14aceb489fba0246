#include <set>

#include "crasplab/interpreter.hpp"
#include "crasplab/parser.hpp"
#include "crasplab/validate.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crasplab;
using testutil::syms;

namespace {

Program parse_ok(const std::string& src, const std::string& admit = "") {
  ParseResult r = parse_program(src);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) MESSAGE(d.to_string());
  }
  REQUIRE(r.ok());
  std::vector<Diagnostic> diags = validate_program(*r.program);
  for (const auto& d : diags) MESSAGE(d.to_string());
  REQUIRE(diags.empty());
  r.program->declared_alphabet = syms(admit);
  return std::move(*r.program);
}

}  // namespace

TEST_CASE("parser accepts a minimal one-line program") {
  Program p = parse_ok("bool P := Q('a')\n");
  CHECK(p.ops.size() == 1);
  CHECK(p.ops[0].kind == OpKind::InitialQ);
  CHECK(p.ops[0].symbol.text() == "a");
  CHECK(p.alphabet().size() == 1);
}

TEST_CASE("parser rejects self-reference as an undefined name") {
  ParseResult r = parse_program("bool P := AND(P, P)\n");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[0].message.find("undefined name 'P'") != std::string::npos);
}

TEST_CASE("parser rejects duplicates, unknown expressions, misplaced operations") {
  CHECK(!parse_program("bool P := TRUE\nbool P := TRUE\n").ok());
  CHECK(!parse_program("bool P := FROB(1)\n").ok());
  CHECK(!parse_program("bool P := TRUE\nnext 'a' := P\nbool Q2 := TRUE\n").ok());
  CHECK(!parse_program("bool P := TRUE\nnext 'a' := P\nnext 'a' := P\n").ok());
  CHECK(!parse_program("count C := ONE extra\n").ok());
}

TEST_CASE("parser handles comments, blank lines, and quoted specials") {
  Program p = parse_ok(
      "# leading comment\n"
      "\n"
      "bool AT_SEP := Q('<sep>')   # trailing comment\n"
      "count HOW_OFTEN := COUNT[all](AT_SEP)\n"
      "count ONE_ := ONE\n"
      "bool SEEN := LE(ONE_, HOW_OFTEN)\n"
      "next '<bos>' := SEEN\n");
  CHECK(p.ops[0].symbol == Symbol::sep());
  CHECK(p.next_ops.size() == 1);
  CHECK(p.next_ops[0].first == Symbol::bos());
}

TEST_CASE("OR lowers to the core operation set") {
  Program p = parse_ok(
      "bool A := Q('a')\n"
      "bool B := Q('b')\n"
      "bool EITHER := OR(A, B)\n",
      "c");
  REQUIRE(p.ops.size() == 6);  // A, B, two NOTs, AND, final NOT
  CHECK(p.ops.back().name == "EITHER");
  CHECK(p.ops.back().kind == OpKind::BoolNot);
  Valuation v = evaluate(p, syms("a b c"));
  CHECK(v.of("EITHER") == std::vector<std::int64_t>{1, 1, 0});
}

TEST_CASE("validator reports kind mismatches and bad predicates") {
  ParseResult r = parse_program(
      "bool B := TRUE\n"
      "count C := ONE\n"
      "bool BAD1 := LE(B, C)\n"
      "count BAD2 := COUNT[dist={-1}](B)\n"
      "bool BAD3 := POS(period=3, residues={5})\n"
      "count BAD4 := AND(B, B)\n"
      "next 'a' := C\n");
  REQUIRE(r.ok());  // structurally fine; kinds are the validator's job
  std::vector<Diagnostic> diags = validate_program(*r.program);
  REQUIRE(diags.size() == 5);
  CHECK(diags[0].message.find("must be count-valued") != std::string::npos);
  CHECK(diags[1].message.find("invalid predicate") != std::string::npos);
  CHECK(diags[2].message.find("outside [0, period)") != std::string::npos);
  CHECK(diags[3].message.find("declared count") != std::string::npos);
  CHECK(diags[4].message.find("boolean-valued operation") != std::string::npos);
}

TEST_CASE("validator accepts hand-built forward references only") {
  Program p;
  Op a;
  a.name = "X";
  a.kind = OpKind::BoolNot;
  a.arg0 = 1;  // forward reference
  p.ops.push_back(a);
  Op b;
  b.name = "Y";
  b.kind = OpKind::ConstTrue;
  p.ops.push_back(b);
  std::vector<Diagnostic> diags = validate_program(p);
  REQUIRE(!diags.empty());
  CHECK(diags[0].message.find("not defined earlier") != std::string::npos);
}

TEST_CASE("predecessor check is false at position zero") {
  Program p = parse_ok(
      "bool Q_a := Q('a')\n"
      "count PC := COUNT[dist={1}](Q_a)\n"
      "count ONE_ := ONE\n"
      "bool PRED_a := LE(ONE_, PC)\n",
      "b c");
  Valuation v = evaluate(p, syms("b a c"));
  CHECK(v.of("PRED_a") == std::vector<std::int64_t>{0, 0, 1});
}

TEST_CASE("counting with the always-true predicate is a prefix count") {
  Program p = parse_ok(
      "bool T := TRUE\n"
      "count N := COUNT[all](T)\n",
      "a");
  Valuation v = evaluate(p, syms("a a a a a"));
  CHECK(v.of("N") == std::vector<std::int64_t>{1, 2, 3, 4, 5});
}

TEST_CASE("evaluate rejects symbols outside alphabet and specials") {
  Program p = parse_ok("bool P := Q('a')\n");
  CHECK_THROWS_AS((void)evaluate(p, syms("a z")), UnknownSymbolError);
  CHECK_NOTHROW((void)evaluate(p, syms("a ⟨bos⟩ ⟨sep⟩ ⟨eos⟩")));
}

TEST_CASE("next_token: unique winner, halt, and ambiguity") {
  Program p = parse_ok(
      "bool A := Q('a')\n"
      "bool B := Q('b')\n"
      "next 'x' := A\n"
      "next 'y' := B\n",
      "c");
  auto tok = next_token(p, syms("c a"));
  REQUIRE(tok.has_value());
  CHECK(tok->text() == "x");
  CHECK(!next_token(p, syms("c c")).has_value());  // none true: halt

  Program ambiguous = parse_ok(
      "bool T := TRUE\n"
      "next 'x' := T\n"
      "next 'y' := T\n",
      "a");
  CHECK_THROWS_AS((void)next_token(ambiguous, syms("a")), AmbiguousNextError);
  CHECK(!next_token(p, std::span<const Symbol>{}).has_value());
}

TEST_CASE("generate stops at halt and enforces the step budget") {
  // Emits 'b' after an 'a', nothing after a 'b'.
  Program p = parse_ok(
      "bool A := Q('a')\n"
      "next 'b' := A\n");
  std::vector<Symbol> out = generate(p, syms("a"), 10);
  REQUIRE(out.size() == 1);
  CHECK(out[0].text() == "b");

  Program loop = parse_ok(
      "bool T := TRUE\n"
      "next 'a' := T\n");  // 'a' is mentioned by the directive
  CHECK_THROWS_AS((void)generate(loop, syms("a"), 7), StepBudgetError);
}

TEST_CASE("generate returns the empty suffix when NEXT is never true") {
  Program p = parse_ok(
      "bool A := Q('a')\n"
      "bool N := NOT(A)\n"
      "bool NEVER := AND(A, N)\n"
      "next 'a' := NEVER\n",
      "b c");
  CHECK(generate(p, syms("a b c"), 5).empty());
}

TEST_CASE("evaluation is deterministic") {
  Rng rng = substream(11, {1});
  const auto& alphabet = default_alphabet();
  for (int trial = 0; trial < 20; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 30);
    auto input = testutil::random_input(rng, alphabet, 40);
    Valuation a = evaluate(p, input);
    Valuation b = evaluate(p, input);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("runtime agrees with the reference evaluator on random programs") {
  Rng rng = substream(12, {2});
  std::vector<Symbol> alphabet(default_alphabet().begin(), default_alphabet().begin() + 6);
  for (int trial = 0; trial < 200; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 3 + static_cast<int>(rng.below(60)));
    // Random NEXT directives over boolean ops exercise the lazy split.
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (!rng.chance(0.4)) continue;
      std::vector<int> bools;
      for (int o = 0; o < static_cast<int>(p.ops.size()); ++o) {
        if (op_kind_is_bool(p.ops[o].kind)) bools.push_back(o);
      }
      p.next_ops.emplace_back(alphabet[i], bools[rng.below(bools.size())]);
    }
    auto input = testutil::random_input(rng, alphabet, 1 + static_cast<int>(rng.below(30)));
    Valuation v = evaluate(p, input);

    Runtime rt(p);
    for (std::size_t i = 0; i < input.size(); ++i) {
      rt.push(input[i]);
      // Spot-check a handful of named operations at this position.
      for (int probe = 0; probe < 5; ++probe) {
        const Op& op = p.ops[rng.below(p.ops.size())];
        CAPTURE(trial);
        CAPTURE(op.name);
        CHECK(rt.value_at_last(op.name) == v.values[p.index_of(op.name)][i]);
      }
    }
    // NEXT decision agrees with a direct read of the valuation.
    std::set<std::string> expected;
    for (const auto& [sym, idx] : p.next_ops) {
      if (v.values[idx].back() != 0) expected.insert(sym.text());
    }
    if (expected.size() >= 2) {
      CHECK_THROWS_AS((void)rt.decide(), AmbiguousNextError);
    } else {
      auto tok = rt.decide();
      if (expected.empty()) {
        CHECK(!tok.has_value());
      } else {
        REQUIRE(tok.has_value());
        CHECK(tok->text() == *expected.begin());
      }
    }
  }
}

TEST_CASE("existential sugar equals its 1 <= count lowering") {
  Rng rng = substream(13, {3});
  std::vector<Symbol> alphabet(default_alphabet().begin(), default_alphabet().begin() + 4);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 3 + static_cast<int>(rng.below(12)));
    std::vector<int> bools;
    for (int o = 0; o < static_cast<int>(p.ops.size()); ++o) {
      if (op_kind_is_bool(p.ops[o].kind)) bools.push_back(o);
    }
    const int target = bools[rng.below(bools.size())];
    const bool use_all = rng.chance(0.5);

    Op count;
    count.name = "exC";
    count.declared_bool = false;
    count.arg0 = target;
    if (use_all) {
      count.kind = OpKind::CountAll;
    } else {
      count.kind = OpKind::CountDist;
      int n = 1 + static_cast<int>(rng.below(3));
      for (int d = 0; d < n; ++d) count.distances.push_back(rng.below(4));
      std::sort(count.distances.begin(), count.distances.end());
      count.distances.erase(std::unique(count.distances.begin(), count.distances.end()),
                            count.distances.end());
    }
    Op one;
    one.name = "exOne";
    one.declared_bool = false;
    one.kind = OpKind::ConstOne;
    Op exists;
    exists.name = "exE";
    exists.declared_bool = true;
    exists.kind = OpKind::Compare;
    exists.arg0 = static_cast<int>(p.ops.size()) + 1;  // one
    exists.arg1 = static_cast<int>(p.ops.size());      // count
    std::vector<std::int64_t> dists = count.distances;
    p.ops.push_back(std::move(count));
    p.ops.push_back(std::move(one));
    p.ops.push_back(std::move(exists));
    REQUIRE(validate_program(p).empty());

    auto input = testutil::random_input(rng, alphabet, 1 + static_cast<int>(rng.below(20)));
    Valuation v = evaluate(p, input);
    const auto& pv = v.values[target];
    const auto& ev = v.of("exE");
    for (std::size_t i = 0; i < input.size(); ++i) {
      bool direct = false;  // test-local existential, computed from P's values
      if (use_all) {
        for (std::size_t j = 0; j <= i; ++j) direct |= pv[j] != 0;
      } else {
        for (std::int64_t d : dists) {
          if (d <= static_cast<std::int64_t>(i)) direct |= pv[i - d] != 0;
        }
      }
      CHECK(ev[i] == (direct ? 1 : 0));
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("local predicates are translation invariant") {
  Rng rng = substream(14, {4});
  std::vector<Symbol> alphabet(default_alphabet().begin(), default_alphabet().begin() + 5);
  testutil::RandomProgramOptions opt;
  opt.allow_count_all = false;
  opt.allow_positional = false;
  opt.max_distance = 3;
  for (int trial = 0; trial < 100; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 3 + static_cast<int>(rng.below(25)), opt);
    auto input = testutil::random_input(rng, alphabet, 12 + static_cast<int>(rng.below(12)));
    const int pad = 1 + static_cast<int>(rng.below(6));
    std::vector<Symbol> padded(pad, Symbol::bos());
    padded.insert(padded.end(), input.begin(), input.end());

    Valuation base = evaluate(p, input);
    Valuation shifted = evaluate(p, padded);
    // Windowed counts compose, so the positions where every predicate
    // distance stays inside the input are bounded by each operation's
    // transitive lookback depth.
    std::vector<int> depth(p.ops.size(), 0);
    for (std::size_t o = 0; o < p.ops.size(); ++o) {
      const Op& op = p.ops[o];
      for (int arg : {op.arg0, op.arg1, op.arg2}) {
        if (arg >= 0) depth[o] = std::max(depth[o], depth[arg]);
      }
      if (op.kind == OpKind::CountDist) {
        for (auto d : op.distances) depth[o] += static_cast<int>(d);
      }
    }
    for (std::size_t o = 0; o < p.ops.size(); ++o) {
      for (std::size_t i = static_cast<std::size_t>(depth[o]); i < input.size(); ++i) {
        CHECK(base.values[o][i] == shifted.values[o][i + pad]);
      }
    }
  }
}

TEST_CASE("positional operations are periodic") {
  Rng rng = substream(15, {5});
  const auto& alphabet = default_alphabet();
  for (int trial = 0; trial < 50; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 20);
    auto input = testutil::random_input(rng, alphabet, 40);
    Valuation v = evaluate(p, input);
    for (std::size_t o = 0; o < p.ops.size(); ++o) {
      if (p.ops[o].kind != OpKind::Positional) continue;
      const auto period = static_cast<std::size_t>(p.ops[o].period);
      for (std::size_t i = 0; i + period < input.size(); ++i) {
        CHECK(v.values[o][i] == v.values[o][i + period]);
      }
    }
  }
}

TEST_CASE("count values stay in range and arithmetic is exact") {
  Rng rng = substream(16, {6});
  const auto& alphabet = default_alphabet();
  for (int trial = 0; trial < 100; ++trial) {
    Program p = testutil::random_program(rng, alphabet, 30);
    auto input = testutil::random_input(rng, alphabet, 30);
    Valuation v = evaluate(p, input);
    for (std::size_t o = 0; o < p.ops.size(); ++o) {
      const Op& op = p.ops[o];
      for (std::size_t i = 0; i < input.size(); ++i) {
        const std::int64_t val = v.values[o][i];
        switch (op.kind) {
          case OpKind::CountAll:
          case OpKind::CountDist:
            CHECK(val >= 0);
            CHECK(val <= static_cast<std::int64_t>(i) + 1);
            break;
          case OpKind::Add:
            CHECK(val == v.values[op.arg0][i] + v.values[op.arg1][i]);
            break;
          case OpKind::Sub:  // may be negative, must not wrap or saturate
            CHECK(val == v.values[op.arg0][i] - v.values[op.arg1][i]);
            break;
          default:
            break;
        }
      }
    }
  }
}
