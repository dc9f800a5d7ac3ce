#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "henlab/errors.hpp"
#include "henlab/word.hpp"

using namespace henlab;

TEST_CASE("parse and format round trip") {
  for (const char* t : {"e", "s-", "s+", "w-", "w+", "w=", "w=3", "c1", "c12", "bm0", "bp3", "c3,s+,bm0", "w=,s+,s-"}) {
    Word w = parse_word(t);
    CHECK(format_word(w) == t);
    CHECK(parse_word(format_word(w)) == w);
  }
  CHECK(parse_word(" c2 , s- ") == parse_word("c2,s-"));
}

TEST_CASE("malformed words report the position") {
  for (const char* t : {"", "s", "x+", "c", "c-1", "bm", "s-,,s+", "s-,", "w=4"}) {
    CHECK_THROWS_AS(parse_word(t), WordParseError);
  }
  try {
    parse_word("s-,q");
    FAIL("no throw");
  } catch (const WordParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("c_k expansion") {
  CHECK(format_word(expand_word(c_word(1))) == "w=,s+");
  CHECK(format_word(expand_word(c_word(3))) == "w=,s+,s-,s-");
  CHECK(format_word(expand_word(c_word(0))) == "w=");
  CHECK(format_word(expand_word(parse_word("c2,bm1"))) == "w=,s+,s-,bm1");
  CHECK(concat(parse_word("s-"), parse_word("c1")) == parse_word("s-,c1"));
}
