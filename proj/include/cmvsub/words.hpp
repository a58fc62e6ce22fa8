#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "cmvsub/error.hpp"

namespace cmvsub {

enum class Letter : char { a = 'a', b = 'b' };

inline char to_char(Letter c) { return static_cast<char>(c); }

inline Letter letter_from_char(char c) {
  if (c == 'a') return Letter::a;
  if (c == 'b') return Letter::b;
  throw InvalidArgument(std::string("not a letter of {a,b}: '") + c + "'");
}

/// Finite word over {a, b}. Positions are 1-based through at().
class Word {
 public:
  Word() = default;
  explicit Word(std::string_view letters) : letters_(letters) {
    for (char c : letters_) letter_from_char(c);
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Letter at(std::size_t position) const {
    if (position == 0 || position > letters_.size())
      throw InvalidArgument("word position out of range: " + std::to_string(position));
    return static_cast<Letter>(letters_[position - 1]);
  }
  Letter operator[](std::size_t zero_based) const { return static_cast<Letter>(letters_[zero_based]); }

  void push_back(Letter c) { letters_.push_back(to_char(c)); }
  void append(const Word& w) { letters_ += w.letters_; }

  bool is_prefix_of(const Word& other) const {
    return other.letters_.compare(0, letters_.size(), letters_) == 0 && size() <= other.size();
  }

  const std::string& str() const { return letters_; }

  friend Word operator+(Word lhs, const Word& rhs) {
    lhs.append(rhs);
    return lhs;
  }
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::string letters_;
};

/// Substitution S on {a,b}*, given by the images of the two letters.
class SubstitutionRule {
 public:
  static constexpr int kDefaultMaxIterations = 10;

  SubstitutionRule(Word image_a, Word image_b, int k_max = kDefaultMaxIterations)
      : image_a_(std::move(image_a)), image_b_(std::move(image_b)) {
    if (image_a_.size() < 2) throw InvalidArgument("S(a) must have length > 1");
    if (image_a_[0] != Letter::a) throw InvalidArgument("S(a) must begin with a");
    if (!reaches_b(k_max))
      throw InvalidArgument("no iterate S^k(a), k <= " + std::to_string(k_max) + ", contains b");
  }

  static SubstitutionRule period_doubling() { return {Word("ab"), Word("aa")}; }
  static SubstitutionRule fibonacci() { return {Word("ab"), Word("a")}; }
  static SubstitutionRule thue_morse() { return {Word("ab"), Word("ba")}; }

  static SubstitutionRule by_name(std::string_view name) {
    if (name == "period-doubling") return period_doubling();
    if (name == "fibonacci") return fibonacci();
    if (name == "thue-morse") return thue_morse();
    throw InvalidArgument("unknown substitution rule: " + std::string(name));
  }

  const Word& image(Letter c) const { return c == Letter::a ? image_a_ : image_b_; }
  const Word& image_a() const { return image_a_; }
  const Word& image_b() const { return image_b_; }

  // True when every image has the same length (period doubling, Thue-Morse).
  bool is_constant_length() const { return image_a_.size() == image_b_.size(); }

 private:
  Word image_a_;
  Word image_b_;

  bool reaches_b(int k_max) const {
    // The set of letters occurring in S^k(a) only depends on the letters of
    // S^{k-1}(a), so iterate on letter sets.
    bool has_a = true, has_b = false;
    auto contains = [](const Word& w, Letter c) { return w.str().find(to_char(c)) != std::string::npos; };
    for (int k = 1; k <= k_max; ++k) {
      bool next_a = (has_a && contains(image_a_, Letter::a)) || (has_b && contains(image_b_, Letter::a));
      bool next_b = (has_a && contains(image_a_, Letter::b)) || (has_b && contains(image_b_, Letter::b));
      has_a = next_a;
      has_b = next_b;
      if (has_b) return true;
    }
    return false;
  }
};

/// S(c_1...c_l) = S(c_1)...S(c_l).
inline Word substitute(const SubstitutionRule& rule, const Word& w) {
  Word out;
  for (char c : w.str()) out.append(rule.image(static_cast<Letter>(c)));
  return out;
}

inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 26;

/// S^n(a). Throws ResourceLimit if the word would exceed max_letters.
inline Word fixed_point_prefix(const SubstitutionRule& rule, int level,
                               std::size_t max_letters = kDefaultWordCap) {
  if (level < 0) throw InvalidArgument("substitution level must be >= 0");
  Word w("a");
  for (int k = 0; k < level; ++k) {
    std::size_t next = 0;
    for (char c : w.str()) next += rule.image(static_cast<Letter>(c)).size();
    if (next > max_letters)
      throw ResourceLimit("S^" + std::to_string(level) + "(a) exceeds the cap of " +
                          std::to_string(max_letters) + " letters");
    w = substitute(rule, w);
  }
  return w;
}

/// S^n applied to an arbitrary starting letter.
inline Word iterate_letter(const SubstitutionRule& rule, Letter start, int level,
                           std::size_t max_letters = kDefaultWordCap) {
  Word w;
  w.push_back(start);
  for (int k = 0; k < level; ++k) {
    w = substitute(rule, w);
    if (w.size() > max_letters) throw ResourceLimit("substituted word exceeds the letter cap");
  }
  return w;
}

}  // namespace cmvsub
