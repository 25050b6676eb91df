#pragma once

#include "arborify/exact.hpp"
#include "arborify/frequency.hpp"
#include "arborify/pairing.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace arborify {

struct Slot {
  int conj = 0;
  bool hat = false;
  Frequency freq;
  long origin = -1;  // scratch id used while building words; ignored by equality
};

struct Letter {
  std::vector<Slot> slots;
  bool green_node = false;  // wave only: time pinned to 0
  std::string tag;
};

// Letters in time order, last letter at the final time. Pairing ids are global slot
// positions, counted letter by letter.
struct Word {
  Model model = Model::NLS;
  std::vector<Letter> letters;
  Pairing pairing;
  std::string key;  // filled by canonical_word

  bool empty() const { return letters.empty(); }
  std::size_t num_slots() const;
  std::size_t slot_offset(std::size_t letter) const;
  const Slot& slot(int id) const;
  std::size_t letter_of(int id) const;

  friend bool operator==(const Word& a, const Word& b) { return a.key == b.key; }
  friend auto operator<=>(const Word& a, const Word& b) { return a.key <=> b.key; }
};

Word empty_word(Model model);

// Sorts the slots of each letter and renumbers the pairing; idempotent and invariant
// under re-identification of slot ids.
Word canonical_word(Word w);

void validate_word(const Word& w, bool allow_wide = false);

using WordPoly = std::map<Word, ExactCoeff>;

void add_term(WordPoly& p, const Word& w, const ExactCoeff& c);
WordPoly single(const Word& w, const ExactCoeff& c = ExactCoeff::one());
WordPoly& operator+=(WordPoly& a, const WordPoly& b);
WordPoly operator+(WordPoly a, const WordPoly& b);
WordPoly scale(const WordPoly& p, const ExactCoeff& c);

Word concat(const Word& u, const Word& v);
WordPoly shuffle(const Word& u, const Word& v);
WordPoly shuffle(const WordPoly& a, const WordPoly& b);
WordPoly concat(const WordPoly& a, const WordPoly& b);

// Exchanges the hat flags of slots with frequency k and slots with frequency l;
// pairs touching a hat slot become class 1, others class 2.
Word swap_green(const Word& w, const Frequency& k, const Frequency& l);
WordPoly swap_green(const WordPoly& p, const Frequency& k, const Frequency& l);

// Sequence of letter tags, with optional renaming.
using TagWord = std::vector<std::string>;
using TagPoly = std::map<TagWord, ExactCoeff>;
TagPoly tag_projection(const WordPoly& p, const std::map<std::string, std::string>& rename = {});
TagPoly tag_shuffle(const TagWord& u, const TagWord& v);
TagPoly tag_shuffle(const TagPoly& a, const TagPoly& b);

}  // namespace arborify
