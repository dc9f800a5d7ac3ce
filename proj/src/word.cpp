#include "henlab/word.hpp"

#include <cctype>

#include "henlab/errors.hpp"

namespace henlab {

namespace {

int parse_index(std::string_view tok, std::size_t at, std::size_t pos) {
  if (at >= tok.size()) throw WordParseError("missing index in '" + std::string(tok) + "'", pos + at);
  int v = 0;
  for (std::size_t i = at; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i])))
      throw WordParseError("bad index in '" + std::string(tok) + "'", pos + i);
    v = v * 10 + (tok[i] - '0');
    if (v > 1000) throw WordParseError("index too large", pos + i);
  }
  return v;
}

Symbol parse_symbol(std::string_view tok, std::size_t pos) {
  if (tok == "e") return {Sym::E, 0};
  if (tok == "s-") return {Sym::SMinus, 0};
  if (tok == "s+") return {Sym::SPlus, 0};
  if (tok == "w-") return {Sym::WMinus, 0};
  if (tok == "w+") return {Sym::WPlus, 0};
  if (tok == "w=") return {Sym::WEq, 0};
  if (tok == "w=3") return {Sym::WTriple, 0};
  if (tok.size() >= 2 && tok[0] == 'c') return {Sym::C, parse_index(tok, 1, pos)};
  if (tok.size() >= 3 && tok.substr(0, 2) == "bm") return {Sym::BoxMinus, parse_index(tok, 2, pos)};
  if (tok.size() >= 3 && tok.substr(0, 2) == "bp") return {Sym::BoxPlus, parse_index(tok, 2, pos)};
  throw WordParseError("unknown symbol '" + std::string(tok) + "'", pos);
}

}  // namespace

Word parse_word(std::string_view text) {
  Word w;
  std::size_t pos = 0;
  if (text.empty()) throw WordParseError("empty word", 0);
  while (true) {
    std::size_t end = text.find(',', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
    std::size_t trail = raw.size();
    while (trail > lead && std::isspace(static_cast<unsigned char>(raw[trail - 1]))) --trail;
    std::string_view tok = raw.substr(lead, trail - lead);
    if (tok.empty()) throw WordParseError("empty symbol", pos + lead);
    w.push_back(parse_symbol(tok, pos + lead));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return w;
}

std::string format_symbol(const Symbol& s) {
  switch (s.kind) {
    case Sym::E: return "e";
    case Sym::SMinus: return "s-";
    case Sym::SPlus: return "s+";
    case Sym::WMinus: return "w-";
    case Sym::WPlus: return "w+";
    case Sym::WEq: return "w=";
    case Sym::WTriple: return "w=3";
    case Sym::C: return "c" + std::to_string(s.index);
    case Sym::BoxMinus: return "bm" + std::to_string(s.index);
    case Sym::BoxPlus: return "bp" + std::to_string(s.index);
  }
  return "?";
}

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += format_symbol(w[i]);
  }
  return out;
}

Word expand_word(const Word& w) {
  Word out;
  for (const auto& s : w) {
    if (s.kind != Sym::C) {
      out.push_back(s);
      continue;
    }
    out.push_back({Sym::WEq, 0});
    if (s.index >= 1) {
      out.push_back({Sym::SPlus, 0});
      for (int i = 1; i < s.index; ++i) out.push_back({Sym::SMinus, 0});
    }
  }
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out = u;
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace henlab
