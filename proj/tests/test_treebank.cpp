#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "spamdet/synthetic.hpp"
#include "spamdet/treebank.hpp"

using namespace spamdet;

namespace {
const std::string kExample =
    "(S (NP (DT the) (NN dog)) (VP (VBZ barks)))";
}

TEST_CASE("parse_bracketed builds the example tree") {
  ParseTree t = parse_bracketed(kExample);
  CHECK(t.label == "S");
  REQUIRE(t.children.size() == 2);
  CHECK(t.children[0].label == "NP");
  CHECK(t.children[1].label == "VP");
  CHECK(t.children[0].children[0].label == "DT");
  CHECK(t.children[0].children[0].children[0].token == "the");
  auto toks = tree_tokens(t);
  CHECK(toks == std::vector<std::string>{"the", "dog", "barks"});
}

TEST_CASE("parse strips ROOT wrappers and functional tags") {
  ParseTree t = parse_bracketed("(ROOT (S (NP-SBJ (DT the) (NN dog)) "
                                "(VP (VBZ barks))))");
  CHECK(t.label == "S");
  CHECK(t.children[0].label == "NP");
  ParseTree u = parse_bracketed("( (S (NP (NN dog)) (VP (VBZ barks))))");
  CHECK(u.label == "S");
}

TEST_CASE("-NONE- empty elements are dropped with their structure") {
  ParseTree t = parse_bracketed(
      "(S (NP-SBJ (-NONE- *T*)) (VP (VBZ barks)))");
  REQUIRE(t.children.size() == 1);
  CHECK(t.children[0].label == "VP");
}

TEST_CASE("escaped bracket tokens are preserved") {
  ParseTree t = parse_bracketed("(NP (-LRB- -LRB-) (NN x) (-RRB- -RRB-))");
  CHECK(t.children[0].label == "-LRB-");
  CHECK(t.children[0].children[0].token == "-LRB-");
}

TEST_CASE("malformed input produces parse errors with offsets") {
  CHECK_THROWS_WITH_AS(parse_bracketed("(X (Y a)"),
                       "unbalanced at offset 8", TreeParseError);
  CHECK_THROWS_AS(parse_bracketed("dog"), TreeParseError);
  CHECK_THROWS_AS(parse_bracketed("(X)"), TreeParseError);
  CHECK_THROWS_AS(parse_bracketed(""), TreeParseError);
  CHECK_THROWS_AS(parse_bracketed("(S (NN a)) trailing"), TreeParseError);
}

TEST_CASE("render produces the canonical form and round-trips") {
  ParseTree t = parse_bracketed(kExample);
  CHECK(render_bracketed(t) == kExample);
  CHECK(render_bracketed(parse_bracketed("(NN dog)")) == "(NN dog)");
  // whitespace normalization
  ParseTree u = parse_bracketed("(S   (NP (DT the)\n (NN dog))  (VP (VBZ "
                                "barks)))");
  CHECK(render_bracketed(u) == kExample);
}

TEST_CASE("round-trip identity on random trees") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    ParseTree t = random_tree(rng);
    std::string rendered = render_bracketed(t);
    ParseTree back = parse_bracketed(rendered);
    CHECK(render_bracketed(back) == rendered);
  }
}

TEST_CASE("pos_tags returns preterminal labels in token order") {
  CHECK(pos_tags(parse_bracketed(kExample)) ==
        std::vector<std::string>{"DT", "NN", "VBZ"});
  CHECK(pos_tags(parse_bracketed("(UH wow)")) ==
        std::vector<std::string>{"UH"});
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    ParseTree t = random_tree(rng);
    CHECK(pos_tags(t).size() == t.leaf_count());
  }
}

TEST_CASE("production_rules extracts AP and UP rule multisets") {
  ParseTree t = parse_bracketed(kExample);
  auto ap = production_rules(t, true);
  auto up = production_rules(t, false);
  CHECK(ap.size() == 6);
  CHECK(up.size() == 3);

  std::multiset<std::string> ap_set, up_set;
  for (const auto& r : ap) ap_set.insert(r.to_string());
  for (const auto& r : up) up_set.insert(r.to_string());
  CHECK(ap_set.count("S -> NP VP") == 1);
  CHECK(ap_set.count("NP -> DT NN") == 1);
  CHECK(ap_set.count("VP -> VBZ") == 1);
  CHECK(ap_set.count("DT -> the") == 1);
  CHECK(ap_set.count("NN -> dog") == 1);
  CHECK(ap_set.count("VBZ -> barks") == 1);
  CHECK(up_set ==
        std::multiset<std::string>{"S -> NP VP", "NP -> DT NN", "VP -> VBZ"});

  // UP is a sub-multiset of AP.
  for (const auto& r : up_set) CHECK(ap_set.count(r) >= up_set.count(r));
}

TEST_CASE("rule counts match node structure on random trees") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    ParseTree t = random_tree(rng);
    auto ap = production_rules(t, true);
    auto up = production_rules(t, false);
    CHECK(ap.size() == t.internal_count());
    CHECK(up.size() == t.internal_count() - t.preterminal_count());
  }
}
