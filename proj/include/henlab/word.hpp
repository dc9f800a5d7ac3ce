#pragma once
#include <string>
#include <string_view>
#include <vector>

namespace henlab {

enum class Sym { E, SMinus, SPlus, WMinus, WPlus, WEq, WTriple, C, BoxMinus, BoxPlus };

// index is k for C (c_k) and j for BoxMinus/BoxPlus (the c_j - c_{j+1} gap).
struct Symbol {
  Sym kind = Sym::E;
  int index = 0;
  bool operator==(const Symbol&) const = default;
};

using Word = std::vector<Symbol>;

Word parse_word(std::string_view text);
std::string format_symbol(const Symbol& s);
std::string format_word(const Word& w);

// Replace every c_k by w=, s+, s-^(k-1) (c_0 = w=). Gap symbols stay atomic.
Word expand_word(const Word& w);

inline Word c_word(int k) { return Word{Symbol{Sym::C, k}}; }
Word concat(const Word& u, const Word& v);

}  // namespace henlab
