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

// Freely reduced words over a symmetric generating set {a, A, b, B, ...},
// where an upper-case letter denotes the inverse generator.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperlab/error.hpp"

namespace hyperlab {

// Generator g (0-based) is stored as g+1, its inverse as -(g+1).
using Letter = std::int8_t;

constexpr Letter inverse_letter(Letter x) noexcept { return static_cast<Letter>(-x); }
constexpr int generator_index(Letter x) noexcept { return (x > 0 ? x : -x) - 1; }

// Canonical letter order: a < A < b < B < ...
constexpr int letter_key(Letter x) noexcept {
  return 2 * generator_index(x) + (x < 0 ? 1 : 0);
}

constexpr Letter letter_from_key(int key) noexcept {
  auto g = static_cast<Letter>(key / 2 + 1);
  return key % 2 == 0 ? g : inverse_letter(g);
}

inline std::size_t common_prefix(std::span<const Letter> u,
                                 std::span<const Letter> v) noexcept {
  auto n = std::min(u.size(), v.size());
  std::size_t i = 0;
  while (i < n && u[i] == v[i]) {
    ++i;
  }
  return i;
}

class Word {
 public:
  Word() = default;

  // Reduces on construction.
  explicit Word(std::span<const Letter> letters) {
    letters_.reserve(letters.size());
    for (Letter x : letters) {
      push_back(x);
    }
  }

  Word(std::initializer_list<Letter> letters)
      : Word(std::span<const Letter>(letters.begin(), letters.size())) {}

  static Word generator(int g, bool inverted = false) {
    Word w;
    w.letters_.push_back(inverted ? static_cast<Letter>(-(g + 1))
                                  : static_cast<Letter>(g + 1));
    return w;
  }

  // Appends one letter, cancelling against the last letter if needed.
  void push_back(Letter x) {
    if (!letters_.empty() && letters_.back() == inverse_letter(x)) {
      letters_.pop_back();
    } else {
      letters_.push_back(x);
    }
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  Word prefix(std::size_t n) const {
    Word w;
    w.letters_.assign(letters_.begin(),
                      letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
    return w;
  }

  Word suffix_from(std::size_t i) const {
    Word w;
    if (i < size()) {
      w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(i), letters_.end());
    }
    return w;
  }

  Word inverse() const {
    Word w;
    w.letters_.reserve(size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
      w.letters_.push_back(inverse_letter(*it));
    }
    return w;
  }

  // Incremental reduction: only the junction can cancel.
  Word& operator*=(const Word& rhs) {
    std::size_t k = 0;
    while (k < rhs.size() && !letters_.empty() &&
           letters_.back() == inverse_letter(rhs.letters_[k])) {
      letters_.pop_back();
      ++k;
    }
    letters_.insert(letters_.end(),
                    rhs.letters_.begin() + static_cast<std::ptrdiff_t>(k),
                    rhs.letters_.end());
    return *this;
  }

  friend Word operator*(Word lhs, const Word& rhs) {
    lhs *= rhs;
    return lhs;
  }

  // Splits w = c * core * c^-1 with core cyclically reduced.
  std::pair<Word, Word> cyclic_decomposition() const {
    std::size_t n = size();
    std::size_t i = 0;
    while (2 * i + 1 < n && letters_[i] == inverse_letter(letters_[n - 1 - i])) {
      ++i;
    }
    Word conj;
    conj.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(i));
    Word core;
    core.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(i),
                         letters_.end() - static_cast<std::ptrdiff_t>(i));
    return {std::move(conj), std::move(core)};
  }

  Word cyclic_reduction() const { return cyclic_decomposition().second; }

  bool is_cyclically_reduced() const noexcept {
    return size() < 2 || letters_.front() != inverse_letter(letters_.back());
  }

  // w^n for any integer n, built as c core^n c^-1.
  Word pow(long long n) const {
    if (n == 0 || empty()) {
      return {};
    }
    if (n < 0) {
      return inverse().pow(-n);
    }
    auto [conj, core] = cyclic_decomposition();
    Word w = conj;
    w.letters_.reserve(2 * conj.size() + static_cast<std::size_t>(n) * core.size());
    for (long long k = 0; k < n; ++k) {
      w.letters_.insert(w.letters_.end(), core.letters_.begin(), core.letters_.end());
    }
    Word tail = conj.inverse();
    w.letters_.insert(w.letters_.end(), tail.letters_.begin(), tail.letters_.end());
    return w;
  }

  // Shortest r with cyclic core == r^k; returns (conj * r * conj^-1, k).
  std::pair<Word, std::size_t> primitive_root() const {
    auto [conj, core] = cyclic_decomposition();
    std::size_t n = core.size();
    if (n == 0) {
      return {Word{}, 0};
    }
    for (std::size_t p = 1; p <= n; ++p) {
      if (n % p != 0) {
        continue;
      }
      bool periodic = true;
      for (std::size_t i = p; i < n && periodic; ++i) {
        periodic = core.letters_[i] == core.letters_[i - p];
      }
      if (periodic) {
        Word root = conj * core.prefix(p) * conj.inverse();
        return {root, n / p};
      }
    }
    return {*this, 1};
  }

  bool is_proper_power() const { return primitive_root().second > 1; }

  // Lexicographically least rotation of the cyclic reduction; a conjugacy key.
  Word conjugacy_key() const {
    Word core = cyclic_reduction();
    std::size_t n = core.size();
    Word best = core;
    for (std::size_t r = 1; r < n; ++r) {
      Word rot;
      rot.letters_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        rot.letters_.push_back(core.letters_[(r + i) % n]);
      }
      if (shortlex_less(rot, best)) {
        best = std::move(rot);
      }
    }
    return best;
  }

  // Length first, then lexicographic under letter_key.
  static bool shortlex_less(const Word& u, const Word& v) noexcept {
    if (u.size() != v.size()) {
      return u.size() < v.size();
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u.letters_[i] != v.letters_[i]) {
        return letter_key(u.letters_[i]) < letter_key(v.letters_[i]);
      }
    }
    return false;
  }

  int max_generator() const noexcept {
    int g = -1;
    for (Letter x : letters_) {
      g = std::max(g, generator_index(x));
    }
    return g;
  }

  friend bool operator==(const Word&, const Word&) = default;

  std::string str() const {
    if (empty()) {
      return "e";
    }
    std::string s;
    s.reserve(size());
    for (Letter x : letters_) {
      char c = static_cast<char>('a' + generator_index(x));
      s.push_back(x > 0 ? c : static_cast<char>(std::toupper(c)));
    }
    return s;
  }

 private:
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (Letter x : w) {
      h ^= static_cast<std::uint8_t>(x);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  Word parse() {
    Word w = sequence();
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected character");
    }
    return w;
  }

 private:
  Word sequence() {
    Word w;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')') {
        return w;
      }
      w *= power(atom());
    }
  }

  Word atom() {
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word inner = sequence();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        fail("missing ')'");
      }
      ++pos_;
      return inner;
    }
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) == 0) {
      fail("expected a generator letter");
    }
    ++pos_;
    int g = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (c == 'e' && rank_ <= 4) {
      return {};
    }
    if (g >= rank_) {
      throw ConfigError("unknown generator '" + std::string(1, c) + "' for rank " +
                        std::to_string(rank_));
    }
    return Word::generator(g, std::isupper(static_cast<unsigned char>(c)) != 0);
  }

  Word power(Word base) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      bool negative = false;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
        ++pos_;
      }
      if (start == pos_) {
        fail("expected exponent");
      }
      long long n = std::stoll(std::string(text_.substr(start, pos_ - start)));
      return base.pow(negative ? -n : n);
    }
    return base;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (std::isspace(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '*' ||
            text_[pos_] == '.')) {
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("cannot parse word \"" + std::string(text_) + "\" at position " +
                      std::to_string(pos_) + ": " + why);
  }

  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Accepts "abAB", "a^-1 b", "(ab)^5 a", "e" or "1" for the identity.
inline Word parse_word(std::string_view text, int rank) {
  return detail::WordParser(text, rank).parse();
}

// Reduces a raw letter sequence, rejecting generators outside the rank.
inline Word reduce(std::span<const Letter> raw, int rank) {
  for (Letter x : raw) {
    if (x == 0 || generator_index(x) >= rank) {
      throw ConfigError("unknown generator index " + std::to_string(int{x}) + " for rank " +
                        std::to_string(rank));
    }
  }
  return Word(raw);
}

}  // namespace hyperlab
