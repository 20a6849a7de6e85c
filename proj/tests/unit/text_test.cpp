/*
 * Copyright 2026 The intentrec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "intentrec/error.hpp"
#include "intentrec/text.hpp"

namespace intentrec {
namespace {

using Tokens = std::vector<std::string>;

TEST(Normalize, SpanishPunctuationAndCase) {
  EXPECT_EQ(normalize("Hola,  ¿BUENAS!"), "hola buenas");
}

TEST(Normalize, CollapsesWhitespace) {
  EXPECT_EQ(normalize("RESET my   password."), "reset my password");
  EXPECT_EQ(normalize("  \t tabs\nand\r\nlines  "), "tabs and lines");
}

TEST(Normalize, EmptyStaysEmpty) {
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize("¡¿...!?"), "");
}

TEST(Normalize, ComposesToNfc) {
  // "e" + combining acute accent becomes the single code point U+00E9.
  EXPECT_EQ(normalize("Cafe\xCC\x81"), "caf\xC3\xA9");
  EXPECT_EQ(normalize("CAFÉ"), "café");
}

TEST(Normalize, Idempotent) {
  for (const char* s : {"Hola,  ¿BUENAS!", "ÑANDÚ y  Pingüino", "x-y_z", ""}) {
    EXPECT_EQ(normalize(normalize(s)), normalize(s));
  }
}

TEST(Tokenize, SplitsOnWhitespace) {
  EXPECT_EQ(tokenize("switch to human agent"), (Tokens{"switch", "to", "human", "agent"}));
  EXPECT_EQ(tokenize(""), Tokens{});
}

TEST(Tokenize, KeepsDiacritics) {
  EXPECT_EQ(tokenize("sí"), Tokens{"sí"});
  EXPECT_EQ(tokenize("¿Cuál es mi contraseña?"), (Tokens{"cuál", "es", "mi", "contraseña"}));
}

TEST(Vocabulary, ReservedIds) {
  Vocabulary v;
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.token(Vocabulary::kPad), "[PAD]");
  EXPECT_EQ(v.token(Vocabulary::kUnk), "[UNK]");
}

TEST(Vocabulary, BuildMinCountOne) {
  const std::vector<Tokens> corpus{{"a", "a", "b"}};
  const Vocabulary v = Vocabulary::build(corpus, 1);
  EXPECT_EQ(v.tokens(), (Tokens{"[PAD]", "[UNK]", "a", "b"}));
}

TEST(Vocabulary, BuildMinCountTwo) {
  const std::vector<Tokens> corpus{{"a", "a", "b"}};
  const Vocabulary v = Vocabulary::build(corpus, 2);
  EXPECT_EQ(v.tokens(), (Tokens{"[PAD]", "[UNK]", "a"}));
}

TEST(Vocabulary, FrequencyThenLexicographic) {
  const std::vector<Tokens> corpus{{"zeta", "beta", "alpha"}, {"zeta", "beta"}, {"gamma"}};
  const Vocabulary v = Vocabulary::build(corpus);
  EXPECT_EQ(v.tokens(), (Tokens{"[PAD]", "[UNK]", "beta", "zeta", "alpha", "gamma"}));
}

TEST(Vocabulary, EmptyTrainingTextFails) {
  const std::vector<Tokens> corpus{{}, {}};
  EXPECT_THROW(Vocabulary::build(corpus), DataError);
  EXPECT_THROW(Vocabulary::build(std::vector<Tokens>{{"a"}}, 0), std::invalid_argument);
}

TEST(Vocabulary, ReservedStringsInCorpusNeverCollide) {
  const std::vector<Tokens> corpus{{"[PAD]", "[UNK]", "x"}};
  const Vocabulary v = Vocabulary::build(corpus);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.id("x"), 2);
}

TEST(Vocabulary, Deterministic) {
  const auto d = testing::toy_dataset(4, 20, 3);
  std::vector<Tokens> seqs;
  for (const auto& e : d.examples()) seqs.push_back(tokenize(e.text));
  EXPECT_EQ(Vocabulary::build(seqs), Vocabulary::build(seqs));
}

TEST(Vocabulary, FileRoundTrip) {
  testing::TempDir dir("vocab");
  const std::vector<Tokens> corpus{{"hola", "buenas", "hola", "sí"}};
  const Vocabulary v = Vocabulary::build(corpus, 1);
  v.save(dir / "vocab.txt");
  const std::string text = testing::read_file(dir / "vocab.txt");
  EXPECT_EQ(text.rfind("#intentrec-vocab v1 reserved=[PAD],[UNK] min_count=1 size=5\n", 0), 0u);
  EXPECT_EQ(Vocabulary::load(dir / "vocab.txt"), v);
}

TEST(Vocabulary, RejectsBadHeader) {
  EXPECT_THROW(Vocabulary::deserialize("a\nb\n"), FormatError);
  EXPECT_THROW(Vocabulary::deserialize("#intentrec-vocab v1 reserved=[PAD],[UNK] min_count=1 size=9\na\n"),
               FormatError);
}

TEST(Encode, PadsOnTheRight) {
  const Vocabulary v = Vocabulary::from_tokens({"hola"});
  const EncodedSequence s = encode(Tokens{"hola"}, v, 3);
  EXPECT_EQ(s.ids, (std::vector<int>{2, 0, 0}));
  EXPECT_EQ(s.true_length, 1u);
}

TEST(Encode, TruncatesTheTail) {
  Tokens toks;
  Tokens vocab_tokens;
  for (int i = 0; i < 20; ++i) {
    toks.push_back("w" + std::to_string(i));
    vocab_tokens.push_back("w" + std::to_string(i));
  }
  const Vocabulary v = Vocabulary::from_tokens(vocab_tokens);
  const EncodedSequence s = encode(toks, v, 13);
  ASSERT_EQ(s.ids.size(), 13u);
  EXPECT_EQ(s.true_length, 13u);
  for (int i = 0; i < 13; ++i) EXPECT_EQ(s.ids[static_cast<std::size_t>(i)], i + 2);
}

TEST(Encode, UnknownMapsToUnk) {
  const Vocabulary v = Vocabulary::from_tokens({"a"});
  EXPECT_EQ(encode(Tokens{"a", "zzz"}, v, 2).ids, (std::vector<int>{2, 1}));
}

TEST(Encode, Invariants) {
  std::mt19937_64 rng(9);
  const Vocabulary v = Vocabulary::from_tokens({"a", "b", "c"});
  const Tokens pool{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 200; ++trial) {
    Tokens t(rng() % 10);
    for (auto& s : t) s = pool[rng() % pool.size()];
    const std::size_t L = 1 + rng() % 8;
    const EncodedSequence e = encode(t, v, L);
    ASSERT_EQ(e.ids.size(), L);
    EXPECT_EQ(e.true_length, std::min(t.size(), L));
    for (std::size_t i = 0; i < L; ++i) {
      EXPECT_LT(e.ids[i], static_cast<int>(v.size()));
      if (i >= e.true_length) {
        EXPECT_EQ(e.ids[i], Vocabulary::kPad);
      }
    }
    // decode reproduces in-vocabulary tokens up to truncation
    const Tokens back = decode(e, v);
    ASSERT_EQ(back.size(), e.true_length);
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i], v.find(t[i]) ? t[i] : std::string("[UNK]"));
    }
  }
}

TEST(Encode, RejectsZeroLength) {
  const Vocabulary v;
  EXPECT_THROW(encode(Tokens{"a"}, v, 0), std::invalid_argument);
}

}  // namespace
}  // namespace intentrec
