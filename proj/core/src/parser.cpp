#include "crasplab/parser.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace crasplab {

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Cursor over a single line.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 0;

  int column() const { return static_cast<int>(pos) + 1; }
  bool eol() {
    skip_ws();
    return pos >= text.size();
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (text.substr(pos, w.size()) == w &&
        (pos + w.size() >= text.size() || !is_name_char(text[pos + w.size()]))) {
      pos += w.size();
      return true;
    }
    return false;
  }
};

struct LineParser {
  Cursor cur;
  std::vector<Diagnostic>* diags;
  bool failed = false;

  void error(const std::string& msg) {
    if (!failed) diags->push_back({cur.line, cur.column(), msg});
    failed = true;
  }

  std::string parse_name() {
    cur.skip_ws();
    if (cur.pos >= cur.text.size() || !is_name_start(cur.text[cur.pos])) {
      error("expected a name");
      return {};
    }
    std::size_t start = cur.pos;
    while (cur.pos < cur.text.size() && is_name_char(cur.text[cur.pos])) ++cur.pos;
    return std::string(cur.text.substr(start, cur.pos - start));
  }

  std::string parse_quoted_symbol() {
    cur.skip_ws();
    if (!cur.eat('\'')) {
      error("expected a quoted symbol like 'a'");
      return {};
    }
    std::size_t start = cur.pos;
    while (cur.pos < cur.text.size() && cur.text[cur.pos] != '\'') ++cur.pos;
    if (cur.pos >= cur.text.size()) {
      error("unterminated symbol quote");
      return {};
    }
    std::string sym(cur.text.substr(start, cur.pos - start));
    ++cur.pos;
    if (sym.empty()) error("empty symbol");
    for (char c : sym) {
      if (std::isspace(static_cast<unsigned char>(c))) error("symbol may not contain whitespace");
    }
    return sym;
  }

  std::int64_t parse_int() {
    cur.skip_ws();
    std::size_t start = cur.pos;
    if (cur.pos < cur.text.size() && (cur.text[cur.pos] == '-' || cur.text[cur.pos] == '+')) ++cur.pos;
    while (cur.pos < cur.text.size() && std::isdigit(static_cast<unsigned char>(cur.text[cur.pos]))) ++cur.pos;
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(cur.text.data() + start, cur.text.data() + cur.pos, value);
    if (ec != std::errc() || p != cur.text.data() + cur.pos || cur.pos == start) {
      error("expected an integer");
      return 0;
    }
    return value;
  }

  std::vector<std::int64_t> parse_int_set() {
    std::vector<std::int64_t> values;
    if (!cur.eat('{')) {
      error("expected '{'");
      return values;
    }
    if (cur.peek() != '}') {
      values.push_back(parse_int());
      while (!failed && cur.eat(',')) values.push_back(parse_int());
    }
    if (!failed && !cur.eat('}')) error("expected '}'");
    return values;
  }

  void expect(char c, const char* what) {
    if (!failed && !cur.eat(c)) error(std::string("expected '") + c + "' " + what);
  }
};

struct ProgramBuilder {
  Program program;
  std::unordered_map<std::string, int> names;
  std::vector<Diagnostic>* diags;

  int lookup(const std::string& name, LineParser& lp) {
    auto it = names.find(name);
    if (it == names.end()) {
      lp.failed = true;  // position already advanced past the name; report at line level
      diags->push_back({lp.cur.line, lp.cur.column(), "reference to undefined name '" + name + "'"});
      return -1;
    }
    return it->second;
  }

  int add(Op op) {
    int idx = static_cast<int>(program.ops.size());
    names.emplace(op.name, idx);
    program.ops.push_back(std::move(op));
    return idx;
  }
};

// One `kind NAME := EXPR` statement, including OR lowering.
void parse_statement(ProgramBuilder& b, LineParser& lp, bool declared_bool) {
  std::string name = lp.parse_name();
  if (lp.failed) return;
  if (b.names.count(name)) {
    lp.error("duplicate operation name '" + name + "'");
    return;
  }
  lp.expect(':', "before '='");
  lp.expect('=', "in ':='");
  if (lp.failed) return;

  Op op;
  op.name = name;
  op.declared_bool = declared_bool;
  op.line = lp.cur.line;

  auto arg = [&]() { return lp.failed ? -1 : b.lookup(lp.parse_name(), lp); };

  if (lp.cur.eat_word("Q")) {
    lp.expect('(', "after Q");
    op.kind = OpKind::InitialQ;
    op.symbol = Symbol(lp.parse_quoted_symbol());
    lp.expect(')', "after symbol");
  } else if (lp.cur.eat_word("TRUE")) {
    op.kind = OpKind::ConstTrue;
  } else if (lp.cur.eat_word("NOT")) {
    lp.expect('(', "after NOT");
    op.kind = OpKind::BoolNot;
    op.arg0 = arg();
    lp.expect(')', "after argument");
  } else if (lp.cur.eat_word("AND")) {
    lp.expect('(', "after AND");
    op.kind = OpKind::BoolAnd;
    op.arg0 = arg();
    lp.expect(',', "between arguments");
    op.arg1 = arg();
    lp.expect(')', "after arguments");
  } else if (lp.cur.eat_word("OR")) {
    lp.expect('(', "after OR");
    int x = arg();
    lp.expect(',', "between arguments");
    int y = arg();
    lp.expect(')', "after arguments");
    if (lp.failed) return;
    // OR(x, y) = NOT(AND(NOT(x), NOT(y)))
    Op nx{name + "~1", OpKind::BoolNot, true, x, -1, -1, {}, 0, {}, {}, lp.cur.line};
    Op ny{name + "~2", OpKind::BoolNot, true, y, -1, -1, {}, 0, {}, {}, lp.cur.line};
    int ix = b.add(std::move(nx));
    int iy = b.add(std::move(ny));
    Op both{name + "~3", OpKind::BoolAnd, true, ix, iy, -1, {}, 0, {}, {}, lp.cur.line};
    int iboth = b.add(std::move(both));
    op.kind = OpKind::BoolNot;
    op.arg0 = iboth;
  } else if (lp.cur.eat_word("POS")) {
    lp.expect('(', "after POS");
    if (!lp.cur.eat_word("period")) lp.error("expected 'period='");
    lp.expect('=', "after period");
    op.kind = OpKind::Positional;
    op.period = lp.parse_int();
    lp.expect(',', "between period and residues");
    if (!lp.cur.eat_word("residues")) lp.error("expected 'residues='");
    lp.expect('=', "after residues");
    op.residues = lp.parse_int_set();
    lp.expect(')', "after residues");
  } else if (lp.cur.eat_word("LE")) {
    lp.expect('(', "after LE");
    op.kind = OpKind::Compare;
    op.arg0 = arg();
    lp.expect(',', "between arguments");
    op.arg1 = arg();
    lp.expect(')', "after arguments");
  } else if (lp.cur.eat_word("COUNT")) {
    lp.expect('[', "after COUNT");
    if (lp.cur.eat_word("all")) {
      op.kind = OpKind::CountAll;
    } else if (lp.cur.eat_word("dist")) {
      lp.expect('=', "after dist");
      op.kind = OpKind::CountDist;
      op.distances = lp.parse_int_set();
    } else {
      lp.error("expected 'all' or 'dist={...}'");
    }
    lp.expect(']', "after predicate");
    lp.expect('(', "before argument");
    op.arg0 = arg();
    lp.expect(')', "after argument");
  } else if (lp.cur.eat_word("IF")) {
    lp.expect('(', "after IF");
    op.kind = OpKind::Conditional;
    op.arg0 = arg();
    lp.expect(',', "between arguments");
    op.arg1 = arg();
    lp.expect(',', "between arguments");
    op.arg2 = arg();
    lp.expect(')', "after arguments");
  } else if (lp.cur.eat_word("ADD")) {
    lp.expect('(', "after ADD");
    op.kind = OpKind::Add;
    op.arg0 = arg();
    lp.expect(',', "between arguments");
    op.arg1 = arg();
    lp.expect(')', "after arguments");
  } else if (lp.cur.eat_word("SUB")) {
    lp.expect('(', "after SUB");
    op.kind = OpKind::Sub;
    op.arg0 = arg();
    lp.expect(',', "between arguments");
    op.arg1 = arg();
    lp.expect(')', "after arguments");
  } else if (lp.cur.eat_word("ONE")) {
    op.kind = OpKind::ConstOne;
  } else {
    lp.error("unknown expression");
  }

  if (!lp.cur.eol() && !lp.failed) lp.error("trailing input after expression");
  if (lp.failed) {
    // Register a placeholder so later lines do not cascade undefined-name errors.
    Op placeholder{name, declared_bool ? OpKind::ConstTrue : OpKind::ConstOne,
                   declared_bool, -1, -1, -1, {}, 0, {}, {}, lp.cur.line};
    b.add(std::move(placeholder));
    return;
  }
  b.add(std::move(op));
}

}  // namespace

ParseResult parse_program(std::string_view source) {
  ParseResult result;
  ProgramBuilder b;
  b.diags = &result.diagnostics;
  bool in_directives = false;

  int line_no = 0;
  std::size_t offset = 0;
  while (offset <= source.size()) {
    std::size_t nl = source.find('\n', offset);
    std::string_view line = source.substr(offset, nl == std::string_view::npos ? source.size() - offset : nl - offset);
    offset = nl == std::string_view::npos ? source.size() + 1 : nl + 1;
    ++line_no;

    std::size_t hash = std::string_view::npos;
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\'') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        hash = i;
        break;
      }
    }
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    LineParser lp{{line, 0, line_no}, &result.diagnostics};
    if (lp.cur.eol()) continue;

    if (lp.cur.eat_word("bool")) {
      if (in_directives) lp.error("operation after the next-directive block");
      parse_statement(b, lp, true);
    } else if (lp.cur.eat_word("count")) {
      if (in_directives) lp.error("operation after the next-directive block");
      parse_statement(b, lp, false);
    } else if (lp.cur.eat_word("next")) {
      in_directives = true;
      std::string sym = lp.parse_quoted_symbol();
      lp.expect(':', "before '='");
      lp.expect('=', "in ':='");
      if (!lp.failed) {
        std::string target = lp.parse_name();
        if (!lp.failed) {
          int idx = b.lookup(target, lp);
          if (idx >= 0) {
            Symbol symbol{sym};
            for (const auto& [s, _] : b.program.next_ops) {
              if (s == symbol) lp.error("duplicate next directive for symbol '" + sym + "'");
            }
            if (!lp.failed) b.program.next_ops.emplace_back(symbol, idx);
          }
        }
      }
      if (!lp.cur.eol() && !lp.failed) lp.error("trailing input after directive");
    } else {
      lp.error("expected 'bool', 'count', or 'next'");
    }
  }

  if (result.diagnostics.empty()) result.program = std::move(b.program);
  return result;
}

}  // namespace crasplab
