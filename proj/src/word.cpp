#include "arborify/word.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace arborify {

std::size_t Word::num_slots() const {
  std::size_t n = 0;
  for (const auto& l : letters) n += l.slots.size();
  return n;
}

std::size_t Word::slot_offset(std::size_t letter) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < letter; ++i) n += letters[i].slots.size();
  return n;
}

const Slot& Word::slot(int id) const {
  int k = id;
  for (const auto& l : letters) {
    if (k < static_cast<int>(l.slots.size())) return l.slots[k];
    k -= static_cast<int>(l.slots.size());
  }
  throw std::out_of_range("slot id " + std::to_string(id));
}

std::size_t Word::letter_of(int id) const {
  int k = id;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (k < static_cast<int>(letters[i].slots.size())) return i;
    k -= static_cast<int>(letters[i].slots.size());
  }
  throw std::out_of_range("slot id " + std::to_string(id));
}

Word empty_word(Model model) {
  Word w;
  w.model = model;
  return canonical_word(w);
}

namespace {

struct SlotKey {
  int conj;
  int hat;
  Frequency freq;
  int cls;       // 0 unpaired
  int rel;       // 0 none, 1 earlier letter, 2 same letter, 3 later letter
  int pletter;
  int pconj;
  int phat;
  Frequency pfreq;
  int ppos;      // canonical position of the partner when already placed

  auto operator<=>(const SlotKey&) const = default;
  bool operator==(const SlotKey&) const = default;
};

std::string slot_text(const Slot& s) {
  return std::to_string(s.conj) + (s.hat ? "h" : "") + s.freq.str();
}

}  // namespace

Word canonical_word(Word w) {
  const int n = static_cast<int>(w.num_slots());
  w.pairing.check_disjoint(n);
  std::vector<int> letter_of(n), partner(n, -1), cls(n, 0);
  std::vector<const Slot*> slot_ptr(n);
  {
    int id = 0;
    for (std::size_t li = 0; li < w.letters.size(); ++li)
      for (const auto& s : w.letters[li].slots) {
        letter_of[id] = static_cast<int>(li);
        slot_ptr[id] = &s;
        ++id;
      }
  }
  for (int c : {1, 2})
    for (auto [a, b] : c == 1 ? w.pairing.class1 : w.pairing.class2) {
      partner[a] = b;
      partner[b] = a;
      cls[a] = cls[b] = c;
    }

  std::vector<int> new_pos(n, -1);
  std::vector<int> order;  // old ids in canonical order
  int base = 0;
  for (std::size_t li = 0; li < w.letters.size(); ++li) {
    const int len = static_cast<int>(w.letters[li].slots.size());
    std::vector<int> ids(len);
    for (int j = 0; j < len; ++j) ids[j] = base + j;
    auto key_of = [&](int id) {
      const Slot& s = *slot_ptr[id];
      SlotKey k{s.conj, s.hat, s.freq, cls[id], 0, -1, 0, 0, Frequency{}, -1};
      if (int p = partner[id]; p >= 0) {
        const Slot& ps = *slot_ptr[p];
        k.pletter = letter_of[p];
        k.rel = letter_of[p] < static_cast<int>(li) ? 1 : letter_of[p] == static_cast<int>(li) ? 2 : 3;
        k.pconj = ps.conj;
        k.phat = ps.hat;
        k.pfreq = ps.freq;
        if (k.rel == 1) k.ppos = new_pos[p];
      }
      return k;
    };
    std::vector<SlotKey> keys(n);
    for (int id : ids) keys[id] = key_of(id);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) { return keys[a] < keys[b]; });

    // resolve ties among slots paired inside this letter
    std::vector<int> group(n, -1);
    std::vector<std::pair<int, int>> runs;
    for (int i = 0; i < len;) {
      int j = i;
      while (j < len && keys[ids[j]] == keys[ids[i]]) ++j;
      for (int q = i; q < j; ++q) group[ids[q]] = static_cast<int>(runs.size());
      runs.emplace_back(i, j);
      i = j;
    }
    for (std::size_t g = 0; g < runs.size(); ++g) {
      auto [i, j] = runs[g];
      if (j - i < 2 || keys[ids[i]].rel != 2) continue;
      const int h = group[partner[ids[i]]];
      if (h == static_cast<int>(g)) {
        std::vector<int> arranged;
        std::vector<char> done(n, 0);
        for (int q = i; q < j; ++q) {
          int id = ids[q];
          if (done[id]) continue;
          done[id] = done[partner[id]] = 1;
          arranged.push_back(id);
          arranged.push_back(partner[id]);
        }
        std::copy(arranged.begin(), arranged.end(), ids.begin() + i);
      } else if (h < static_cast<int>(g)) {
        std::vector<int> where(n, 0);
        for (int q = 0; q < len; ++q) where[ids[q]] = q;
        std::stable_sort(ids.begin() + i, ids.begin() + j,
                         [&](int a, int b) { return where[partner[a]] < where[partner[b]]; });
      }
    }
    for (int q = 0; q < len; ++q) {
      new_pos[ids[q]] = base + q;
      order.push_back(ids[q]);
    }
    base += len;
  }

  Word out;
  out.model = w.model;
  base = 0;
  for (const auto& l : w.letters) {
    Letter nl;
    nl.green_node = l.green_node;
    nl.tag = l.tag;
    for (std::size_t q = 0; q < l.slots.size(); ++q) {
      Slot s = *slot_ptr[order[base + q]];
      s.origin = -1;
      nl.slots.push_back(std::move(s));
    }
    base += static_cast<int>(l.slots.size());
    out.letters.push_back(std::move(nl));
  }
  out.pairing = w.pairing.remap(new_pos);

  std::string key = out.model == Model::NLS ? "N" : "W";
  if (out.letters.empty()) key += "1";
  for (const auto& l : out.letters) {
    key += l.green_node ? "G" : "";
    if (!l.tag.empty()) key += "#" + l.tag;
    key += "[";
    for (std::size_t q = 0; q < l.slots.size(); ++q) key += (q ? " " : "") + slot_text(l.slots[q]);
    key += "]";
  }
  for (auto [a, b] : out.pairing.class1) key += "|1:" + std::to_string(a) + "," + std::to_string(b);
  for (auto [a, b] : out.pairing.class2) key += "|2:" + std::to_string(a) + "," + std::to_string(b);
  out.key = std::move(key);
  return out;
}

void validate_word(const Word& w, bool allow_wide) {
  w.pairing.check_disjoint(static_cast<int>(w.num_slots()));
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    const Letter& l = w.letters[i];
    const std::size_t a = l.slots.size();
    if (a == 0) throw std::invalid_argument("empty letter");
    if (l.green_node && w.model != Model::Wave) throw std::invalid_argument("green node letters are wave only");
    if (i + 1 == w.letters.size()) continue;
    Frequency sum = Frequency::zero(l.slots[0].freq.dim());
    for (const auto& s : l.slots)
      sum += w.model == Model::NLS ? s.freq.signed_by(s.conj) : s.freq;
    if (w.model == Model::NLS) {
      if (!(a == 1 || a == 3 || a == 4 || (allow_wide && a > 4)))
        throw std::invalid_argument("NLS letter arity " + std::to_string(a) + " not allowed");
      if (a == 4 && !sum.is_zero()) throw std::invalid_argument("NLS 4-letter with nonzero signed sum");
    } else {
      for (const auto& s : l.slots)
        if (s.conj) throw std::invalid_argument("wave slots carry conj 0");
      if (!(a == 2 || a == 4 || (allow_wide && (a == 6 || a == 8))))
        throw std::invalid_argument("wave letter arity " + std::to_string(a) + " not allowed");
      if (!sum.is_zero()) throw std::invalid_argument("wave letter with nonzero frequency sum");
    }
  }
  for (const auto* s : {&w.pairing.class1, &w.pairing.class2})
    for (auto [x, y] : *s) {
      const Slot& a = w.slot(x);
      const Slot& b = w.slot(y);
      if (!pair_is_valid({a.freq, a.conj}, {b.freq, b.conj}, w.model))
        throw std::invalid_argument("invalid pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
}

void add_term(WordPoly& p, const Word& w, const ExactCoeff& c) {
  if (c.is_zero()) return;
  Word cw = w.key.empty() ? canonical_word(w) : w;
  auto it = p.find(cw);
  if (it == p.end()) {
    p.emplace(std::move(cw), c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

WordPoly single(const Word& w, const ExactCoeff& c) {
  WordPoly p;
  add_term(p, w, c);
  return p;
}

WordPoly& operator+=(WordPoly& a, const WordPoly& b) {
  for (const auto& [w, c] : b) add_term(a, w, c);
  return a;
}

WordPoly operator+(WordPoly a, const WordPoly& b) { return a += b; }

WordPoly scale(const WordPoly& p, const ExactCoeff& c) {
  WordPoly out;
  for (const auto& [w, x] : p) add_term(out, w, x * c);
  return out;
}

namespace {

Model joint_model(const Word& u, const Word& v) {
  if (u.empty()) return v.model;
  if (v.empty()) return u.model;
  if (u.model != v.model) throw std::invalid_argument("cannot combine words of different models");
  return u.model;
}

// Stamps origins with combined ids: u's slots first, then v's.
void stamp(Word& u, Word& v, Pairing& combined) {
  long id = 0;
  for (auto& l : u.letters)
    for (auto& s : l.slots) s.origin = id++;
  const int shift = static_cast<int>(id);
  for (auto& l : v.letters)
    for (auto& s : l.slots) s.origin = id++;
  combined = u.pairing;
  for (auto [a, b] : v.pairing.class1) combined.add(a + shift, b + shift, 1);
  for (auto [a, b] : v.pairing.class2) combined.add(a + shift, b + shift, 2);
}

Word assemble(Model model, const std::vector<const Letter*>& letters, const Pairing& combined,
              std::size_t total) {
  Word w;
  w.model = model;
  std::vector<int> old_to_new(total, -1);
  int pos = 0;
  for (const Letter* l : letters) {
    for (const auto& s : l->slots) old_to_new[s.origin] = pos++;
    w.letters.push_back(*l);
  }
  w.pairing = combined.remap(old_to_new);
  return canonical_word(std::move(w));
}

}  // namespace

Word concat(const Word& u0, const Word& v0) {
  Model m = joint_model(u0, v0);
  Word u = u0, v = v0;
  Pairing combined;
  stamp(u, v, combined);
  std::vector<const Letter*> ls;
  for (const auto& l : u.letters) ls.push_back(&l);
  for (const auto& l : v.letters) ls.push_back(&l);
  return assemble(m, ls, combined, u.num_slots() + v.num_slots());
}

WordPoly shuffle(const Word& u0, const Word& v0) {
  Model m = joint_model(u0, v0);
  Word u = u0, v = v0;
  Pairing combined;
  stamp(u, v, combined);
  const std::size_t total = u.num_slots() + v.num_slots();
  WordPoly out;
  std::vector<const Letter*> cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == u.letters.size() && j == v.letters.size()) {
      add_term(out, assemble(m, cur, combined, total), ExactCoeff::one());
      return;
    }
    if (i < u.letters.size()) {
      cur.push_back(&u.letters[i]);
      rec(i + 1, j);
      cur.pop_back();
    }
    if (j < v.letters.size()) {
      cur.push_back(&v.letters[j]);
      rec(i, j + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

WordPoly shuffle(const WordPoly& a, const WordPoly& b) {
  WordPoly out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b)
      for (const auto& [w, cw] : shuffle(u, v)) add_term(out, w, cu * cv * cw);
  return out;
}

WordPoly concat(const WordPoly& a, const WordPoly& b) {
  WordPoly out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b) add_term(out, concat(u, v), cu * cv);
  return out;
}

Word swap_green(const Word& w, const Frequency& k, const Frequency& l) {
  if (k == l) return w;
  int nk = 0, nl = 0, hk = 0, hl = 0;
  for (const auto& let : w.letters)
    for (const auto& s : let.slots) {
      if (s.freq == k) ++nk, hk += s.hat;
      if (s.freq == l) ++nl, hl += s.hat;
    }
  if (nk == 0 || nl == 0) throw std::invalid_argument("swap_green: no slot with frequency " + (nk ? l : k).str());
  if ((hk != 0 && hk != nk) || (hl != 0 && hl != nl))
    throw std::invalid_argument("swap_green: mixed hat flags among slots of one frequency");
  const bool new_k = hl != 0, new_l = hk != 0;
  Word out = w;
  for (auto& let : out.letters)
    for (auto& s : let.slots) {
      if (s.freq == k) s.hat = new_k;
      else if (s.freq == l) s.hat = new_l;
    }
  Pairing p;
  for (const auto* set : {&w.pairing.class1, &w.pairing.class2})
    for (auto [a, b] : *set) p.add(a, b, (out.slot(a).hat || out.slot(b).hat) ? 1 : 2);
  out.pairing = p;
  return canonical_word(std::move(out));
}

WordPoly swap_green(const WordPoly& p, const Frequency& k, const Frequency& l) {
  WordPoly out;
  for (const auto& [w, c] : p) add_term(out, swap_green(w, k, l), c);
  return out;
}

TagPoly tag_projection(const WordPoly& p, const std::map<std::string, std::string>& rename) {
  TagPoly out;
  for (const auto& [w, c] : p) {
    TagWord tw;
    for (const auto& l : w.letters) {
      auto it = rename.find(l.tag);
      tw.push_back(it == rename.end() ? l.tag : it->second);
    }
    auto& slot = out[tw];
    slot += c;
    if (slot.is_zero()) out.erase(tw);
  }
  return out;
}

TagPoly tag_shuffle(const TagWord& u, const TagWord& v) {
  TagPoly out;
  TagWord cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
    if (i == u.size() && j == v.size()) {
      out[cur] += ExactCoeff::one();
      return;
    }
    if (i < u.size()) {
      cur.push_back(u[i]);
      rec(i + 1, j);
      cur.pop_back();
    }
    if (j < v.size()) {
      cur.push_back(v[j]);
      rec(i, j + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

TagPoly tag_shuffle(const TagPoly& a, const TagPoly& b) {
  TagPoly out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b)
      for (const auto& [w, cw] : tag_shuffle(u, v)) {
        auto& s = out[w];
        s += cu * cv * cw;
        if (s.is_zero()) out.erase(w);
      }
  return out;
}

}  // namespace arborify
