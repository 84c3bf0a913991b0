#include <algorithm>

#include "doctest.h"
#include "invexp/rewriter.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace invexp;
using invexp::testing::kind_of;

namespace {

constexpr Elem kZero = 0, kE = 1, kF = 2, kS = 3, kT = 4;

ExpElem ee(std::initializer_list<Elem> a, Elem t) { return {ElemSet(5, a), t}; }

std::vector<InverseSemigroup> desk_zoo() {
  return {cyclic_group(1),     cyclic_group(2),        cyclic_group(3),
          klein_four_group(),  five_element_example(), symmetric_inverse_monoid(2),
          idempotent_semilattice(symmetric_inverse_monoid(2))};
}

bool matches_prefix_oracle(const InverseSemigroup& g, const std::vector<Elem>& letters, const ExpElem& x) {
  const auto [a, t] = oracle::prefix_normal_form(g, letters);
  return x.bracket == t && x.eps.members() == a;
}

}  // namespace

TEST_CASE("parse_word") {
  const auto g = five_element_example();
  CHECK(parse_word("[s] [t]", g).letters == std::vector<Elem>{kS, kT});
  CHECK(parse_word("[s][s]", g).letters == std::vector<Elem>{kS, kS});
  CHECK(parse_word("[s*]", g).letters == std::vector<Elem>{kT});
  CHECK(parse_word("[st][t*]", g).letters == std::vector<Elem>{kE, kS});
  CHECK(parse_word("[s.t] [ 3 ]", g).letters == std::vector<Elem>{kE, kS});
  CHECK(kind_of([&] { parse_word("[q]", g); }) == ErrorKind::UnknownElement);
  CHECK(kind_of([&] { parse_word("[9]", g); }) == ErrorKind::UnknownElement);
  CHECK(kind_of([&] { parse_word("", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_word("[s", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_word("s", g); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { parse_word("[]", g); }) == ErrorKind::ParseError);

  const auto i2 = symmetric_inverse_monoid(2);
  CHECK(parse_word("[m21][m1-]", i2).letters == std::vector<Elem>{*i2.find("m21"), *i2.find("m1-")});
  CHECK(render_word(g, parse_word("[s][t*]", g)) == "[s][s]");
}

TEST_CASE("reduce_to_normal_form worked examples") {
  const auto g = five_element_example();
  CHECK(reduce_to_normal_form(g, parse_word("[s][t]", g)) == ee({kE, kS}, kE));
  CHECK(reduce_to_normal_form(g, parse_word("[e]", g)) == ee({kE}, kE));
  CHECK(reduce_to_normal_form(g, parse_word("[s][s]", g)) == ee({kZero}, kZero));
  CHECK(reduce_to_normal_form(g, parse_word("[s][t][s]", g)) == ee({kE, kS}, kS));
}

TEST_CASE("defining relations hold for every s, t") {
  for (const auto& g : desk_zoo()) {
    for (Elem s = 0; s < g.size(); ++s) {
      const Elem si = g.inverse(s);
      CHECK(words_equal(g, Word{{s, si, s}}, Word{{s}}));
      for (Elem t = 0; t < g.size(); ++t) {
        const Elem ti = g.inverse(t);
        CHECK(words_equal(g, Word{{s, t, ti}}, Word{{g.product(s, t), ti}}));
        CHECK(words_equal(g, Word{{si, s, t}}, Word{{si, g.product(s, t)}}));
        CHECK(rewrite_steps(g, Word{{s, t, ti}}).value == rewrite_steps(g, Word{{g.product(s, t), ti}}).value);
      }
      CHECK(rewrite_steps(g, Word{{s, si, s}}).value == canonical_gen(g, s));
    }
  }
  const auto g = five_element_example();
  CHECK(words_equal(g, Word{{kS}}, Word{{kS}}));
  CHECK_FALSE(words_equal(g, Word{{kS}}, Word{{kT}}));
}

TEST_CASE("rewriting agrees with the fold and the prefix oracle, within 10 len^2 steps") {
  for (const auto& g : desk_zoo()) {
    oracle::for_each_word(g.size(), 5, [&](const std::vector<Elem>& letters) {
      const Word w{letters};
      const auto folded = reduce_to_normal_form(g, w);
      REQUIRE(matches_prefix_oracle(g, letters, folded));
      const auto rewritten = rewrite_steps(g, w);
      REQUIRE(rewritten.value == folded);
      REQUIRE(rewritten.trace.steps.size() <= 10 * letters.size() * letters.size());
    });
  }
}

TEST_CASE("every trace step is sound") {
  for (const auto& g : {five_element_example(), symmetric_inverse_monoid(2)}) {
    oracle::for_each_word(g.size(), 3, [&](const std::vector<Elem>& letters) {
      for (const auto& st : rewrite_steps(g, Word{letters}).trace.steps) {
        REQUIRE(token_word_value(g, st.before) == token_word_value(g, st.after));
      }
    });
  }
}

TEST_CASE("trace rendering for [s][t][s]") {
  const auto g = five_element_example();
  const auto result = rewrite_steps(g, parse_word("[s][t][s]", g));
  CHECK(result.value == ee({kE, kS}, kS));
  const auto text = result.trace.render(g);
  CHECK(text.rfind("R3: [s] [t] [s] => eps{s} [s] [t] [s]\n", 0) == 0);
  CHECK(text.find("NormShape: ") != std::string::npos);
  for (const auto& st : result.trace.steps) CHECK(st.before != st.after);
}

TEST_CASE("the fold is a homomorphism on words") {
  for (const auto& g : {five_element_example(), symmetric_inverse_monoid(2)}) {
    std::vector<std::vector<Elem>> words;
    oracle::for_each_word(g.size(), 3, [&](const std::vector<Elem>& w) { words.push_back(w); });
    for (const auto& a : words) {
      const auto ra = reduce_to_normal_form(g, Word{a});
      for (const auto& b : words) {
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        REQUIRE(reduce_to_normal_form(g, Word{ab}) == exp_product(g, ra, reduce_to_normal_form(g, Word{b})));
      }
    }
  }
}

TEST_CASE("eps factors commute") {
  const auto g = symmetric_inverse_monoid(2);
  const Elem t = *g.find("m21");
  std::vector<Elem> prefix{*g.find("m1-"), *g.find("m-1"), *g.find("m2-"), t};
  std::sort(prefix.begin(), prefix.end());
  std::optional<ExpElem> first;
  do {
    TokenWord w;
    for (Elem v : prefix) w.push_back({Token::Kind::Eps, v, false});
    w.push_back({Token::Kind::Bracket, t, false});
    const auto value = rewrite_tokens(g, w).value;
    if (!first) first = value;
    REQUIRE(value == *first);
  } while (std::next_permutation(prefix.begin(), prefix.end()));
}

TEST_CASE("step limit carries the partial trace") {
  const auto g = five_element_example();
  try {
    rewrite_steps(g, parse_word("[s][t][s][t]", g), 2);
    FAIL("expected StepLimitExceeded");
  } catch (const StepLimitError& e) {
    CHECK(e.kind() == ErrorKind::StepLimitExceeded);
    CHECK(e.partial_trace().steps.size() == 2);
  }
  CHECK(kind_of([&] { rewrite_steps(g, Word{{kS}}, 0); }) == ErrorKind::StepLimitExceeded);
}
