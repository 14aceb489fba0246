#include "crasplab/symbol.hpp"

#include <array>
#include <cstdio>

namespace crasplab {

namespace {

constexpr std::string_view kBos = "\xE2\x9F\xA8"   "bos" "\xE2\x9F\xA9";  // ⟨bos⟩
constexpr std::string_view kSep = "\xE2\x9F\xA8"   "sep" "\xE2\x9F\xA9";  // ⟨sep⟩
constexpr std::string_view kEos = "\xE2\x9F\xA8"   "eos" "\xE2\x9F\xA9";  // ⟨eos⟩

std::string canonicalize(std::string_view text) {
  if (text == "<bos>" || text == kBos) return std::string(kBos);
  if (text == "<sep>" || text == kSep) return std::string(kSep);
  if (text == "<eos>" || text == kEos) return std::string(kEos);
  return std::string(text);
}

}  // namespace

Symbol::Symbol(std::string_view text) : text_(canonicalize(text)) {}

const Symbol& Symbol::bos() {
  static const Symbol s{kBos};
  return s;
}

const Symbol& Symbol::sep() {
  static const Symbol s{kSep};
  return s;
}

const Symbol& Symbol::eos() {
  static const Symbol s{kEos};
  return s;
}

bool Symbol::is_bos() const { return text_ == kBos; }
bool Symbol::is_sep() const { return text_ == kSep; }
bool Symbol::is_eos() const { return text_ == kEos; }

std::vector<Symbol> parse_symbols(std::string_view text) {
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

std::string join_symbols(std::span<const Symbol> symbols, std::string_view glue) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += glue;
    out += symbols[i].text();
  }
  return out;
}

const std::vector<Symbol>& default_alphabet() {
  static const std::vector<Symbol> alphabet = [] {
    std::vector<Symbol> v;
    for (char c = 'a'; c <= 'z'; ++c) v.emplace_back(std::string_view(&c, 1));
    for (char c = 'A'; c <= 'Z'; ++c) v.emplace_back(std::string_view(&c, 1));
    for (char c = '0'; c <= '9'; ++c) v.emplace_back(std::string_view(&c, 1));
    return v;
  }();
  return alphabet;
}

std::vector<Symbol> synthetic_alphabet(std::size_t n) {
  std::vector<Symbol> v;
  v.reserve(n);
  char buf[24];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "s%zu", i);
    v.emplace_back(std::string_view(buf));
  }
  return v;
}

}  // namespace crasplab
