#include "tweetfuse/porter_stemmer.hpp"

#include <array>

namespace tweetfuse {
namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// 'y' is a consonant at the start of a word or after a vowel, and a vowel
// after a consonant.
bool is_consonant(std::string_view w, std::size_t i) {
  if (is_vowel_letter(w[i])) return false;
  if (w[i] != 'y') return true;
  bool negate = false;
  while (i > 0 && w[i] == 'y') {
    negate = !negate;
    --i;
  }
  return (!is_vowel_letter(w[i])) != negate;
}

// m in [C](VC)^m[V]
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    const bool vowel = !is_consonant(stem, i);
    if (prev_vowel && !vowel) ++m;
    prev_vowel = vowel;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (!is_consonant(stem, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const auto n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant, final consonant not w, x or y.
bool ends_cvc(std::string_view w) {
  const auto n = w.size();
  return n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         w[n - 1] != 'w' && w[n - 1] != 'x' && w[n - 1] != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

using Condition = bool (*)(std::string_view);

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;
};

bool m_gt_0(std::string_view s) { return measure(s) > 0; }
bool m_gt_1(std::string_view s) { return measure(s) > 1; }
bool m_gt_1_and_s_or_t(std::string_view s) {
  return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't');
}

// The rule whose suffix matches is the only one considered: when its
// condition fails the word is left alone. Rule lists are ordered so the
// first matching suffix is also the longest.
template <std::size_t N>
bool apply_first_match(std::string& w, const std::array<Rule, N>& rules) {
  for (const auto& rule : rules) {
    if (!ends_with(w, rule.suffix)) continue;
    const std::string_view stem(w.data(), w.size() - rule.suffix.size());
    if (rule.condition && !rule.condition(stem)) return false;
    w.resize(stem.size());
    w.append(rule.replacement);
    return true;
  }
  return false;
}

constexpr std::array<Rule, 4> kStep1a{{
    {"sses", "ss", nullptr},
    {"ies", "i", nullptr},
    {"ss", "ss", nullptr},
    {"s", "", nullptr},
}};

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate", m_gt_0}, {"tional", "tion", m_gt_0}, {"enci", "ence", m_gt_0},
    {"anci", "ance", m_gt_0},   {"izer", "ize", m_gt_0},    {"abli", "able", m_gt_0},
    {"alli", "al", m_gt_0},     {"entli", "ent", m_gt_0},   {"eli", "e", m_gt_0},
    {"ousli", "ous", m_gt_0},   {"ization", "ize", m_gt_0}, {"ation", "ate", m_gt_0},
    {"ator", "ate", m_gt_0},    {"alism", "al", m_gt_0},    {"iveness", "ive", m_gt_0},
    {"fulness", "ful", m_gt_0}, {"ousness", "ous", m_gt_0}, {"aliti", "al", m_gt_0},
    {"iviti", "ive", m_gt_0},   {"biliti", "ble", m_gt_0},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic", m_gt_0},
    {"ative", "", m_gt_0},
    {"alize", "al", m_gt_0},
    {"iciti", "ic", m_gt_0},
    {"ical", "ic", m_gt_0},
    {"ful", "", m_gt_0},
    {"ness", "", m_gt_0},
}};

constexpr std::array<Rule, 19> kStep4{{
    {"al", "", m_gt_1},    {"ance", "", m_gt_1}, {"ence", "", m_gt_1},
    {"er", "", m_gt_1},    {"ic", "", m_gt_1},   {"able", "", m_gt_1},
    {"ible", "", m_gt_1},  {"ant", "", m_gt_1},  {"ement", "", m_gt_1},
    {"ment", "", m_gt_1},  {"ent", "", m_gt_1},  {"ion", "", m_gt_1_and_s_or_t},
    {"ou", "", m_gt_1},    {"ism", "", m_gt_1},  {"ate", "", m_gt_1},
    {"iti", "", m_gt_1},   {"ous", "", m_gt_1},  {"ive", "", m_gt_1},
    {"ize", "", m_gt_1},
}};

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
    return;
  }
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix) && contains_vowel(std::string_view(w).substr(0, w.size() - suffix.size()))) {
      w.resize(w.size() - suffix.size());
      removed = true;
      break;
    }
  }
  if (!removed) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w)) {
    const char last = w.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(std::string_view(w).substr(0, w.size() - 1))) w.back() = 'i';
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const std::string_view stem = std::string_view(w).substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (ends_with(w, "ll") && measure(w) > 1) w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  apply_first_match(w, kStep1a);
  step1b(w);
  step1c(w);
  apply_first_match(w, kStep2);
  apply_first_match(w, kStep3);
  apply_first_match(w, kStep4);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace tweetfuse
