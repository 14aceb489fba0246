#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crasplab {

// One atomic token. Content symbols are arbitrary non-whitespace strings;
// three specials (begin, separator, end) are reserved and compare distinct
// from any content symbol.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  static const Symbol& bos();
  static const Symbol& sep();
  static const Symbol& eos();

  const std::string& text() const { return text_; }
  bool is_bos() const;
  bool is_sep() const;
  bool is_eos() const;
  bool is_special() const { return is_bos() || is_sep() || is_eos(); }

  friend bool operator==(const Symbol& a, const Symbol& b) { return a.text_ == b.text_; }
  friend bool operator!=(const Symbol& a, const Symbol& b) { return a.text_ != b.text_; }
  friend bool operator<(const Symbol& a, const Symbol& b) { return a.text_ < b.text_; }

 private:
  std::string text_;
};

// Splits on whitespace. "<bos>"/"<sep>"/"<eos>" and their angle-quoted
// variants are canonicalized to the reserved specials.
std::vector<Symbol> parse_symbols(std::string_view text);

std::string join_symbols(std::span<const Symbol> symbols, std::string_view glue = " ");

// Lowercase letters, uppercase letters, digits: the 62 single-character
// symbols used by the default generators.
const std::vector<Symbol>& default_alphabet();

// n distinct multi-character symbols (s000, s001, ...) for instances whose
// injectivity constraint needs an alphabet larger than 62.
std::vector<Symbol> synthetic_alphabet(std::size_t n);

}  // namespace crasplab
