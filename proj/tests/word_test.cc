// Copyright 2026 The Hyperlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyperlab/word.hpp"

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "hyperlab/error.hpp"

namespace hyperlab {
namespace {

Word W(const std::string& s) { return parse_word(s, 3); }

TEST(WordTest, FreeReduction) {
  // a a^-1 b and a b b^-1 a.
  EXPECT_EQ(reduce(std::vector<Letter>{1, -1, 2}, 2), W("b"));
  EXPECT_EQ(reduce(std::vector<Letter>{1, 2, -2, 1}, 2), W("aa"));
  EXPECT_EQ(reduce(std::vector<Letter>{1, 2}, 2).str(), "ab");
  EXPECT_THROW(reduce(std::vector<Letter>{1, 3}, 2), ConfigError);
}

TEST(WordTest, ParserSyntax) {
  EXPECT_EQ(W("a(ab)^5"), W("aababababab"));
  EXPECT_EQ(W("(ab)^-2"), W("BABA"));
  EXPECT_EQ(W("e"), Word{});
  EXPECT_EQ(W("a A"), Word{});
  EXPECT_EQ(W("e").str(), "e");
  EXPECT_THROW(parse_word("ad", 3), ConfigError);
}

TEST(WordTest, ProductsCancelAtJunction) {
  EXPECT_EQ(W("ab") * W("ba"), W("abba"));
  EXPECT_EQ(W("abc") * W("CBa"), W("aa"));
  EXPECT_EQ(W("abc") * W("abc").inverse(), Word{});
}

TEST(WordTest, CyclicDecomposition) {
  auto [conj, core] = W("abcaBA").cyclic_decomposition();
  EXPECT_EQ(conj, W("ab"));
  EXPECT_EQ(core, W("ca"));
  EXPECT_EQ(conj * core * conj.inverse(), W("abcaBA"));
  EXPECT_EQ(W("a(ab)^5").cyclic_reduction().size(), 11u);
  EXPECT_FALSE(W("abA").is_cyclically_reduced());
  EXPECT_TRUE(W("aba").is_cyclically_reduced());
}

TEST(WordTest, PowersAndRoots) {
  EXPECT_EQ(W("ab").pow(3), W("ababab"));
  EXPECT_EQ(W("ab").pow(-1), W("BA"));
  EXPECT_EQ(W("abA").pow(4), W("abbbbA"));
  auto [root, k] = W("cababC").primitive_root();
  EXPECT_EQ(root, W("cabC"));
  EXPECT_EQ(k, 2u);
  EXPECT_FALSE(W("aab").is_proper_power());
}

TEST(WordTest, ConjugacyKeyIsRotationInvariant) {
  Word w = W("abbcA").cyclic_reduction();
  Word key = w.conjugacy_key();
  for (std::size_t r = 0; r < w.size(); ++r) {
    Word rot = w.suffix_from(r) * w.prefix(r);
    EXPECT_EQ(rot.conjugacy_key(), key);
  }
  EXPECT_EQ(W("caC").conjugacy_key(), W("a"));
}

TEST(WordTest, ShortlexOrder) {
  EXPECT_TRUE(Word::shortlex_less(W("a"), W("A")));
  EXPECT_TRUE(Word::shortlex_less(W("A"), W("b")));
  EXPECT_TRUE(Word::shortlex_less(W("B"), W("aa")));
  EXPECT_FALSE(Word::shortlex_less(W("ab"), W("ab")));
}

}  // namespace
}  // namespace hyperlab
