#include "arborify/io.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace arborify {

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') ++line, col = 1;
      else ++col;
    }
  };
  while (i < s.size()) {
    const char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '/' && i + 1 < s.size() && s[i + 1] == '/') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourceSpan sp{i, i, line, col};
    std::size_t j = i;
    Tok kind;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      kind = Tok::Int;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      kind = Tok::Ident;
    } else if (std::string("[](),;#@+-/{}=:^").find(ch) != std::string::npos) {
      j = i + 1;
      kind = Tok::Sym;
    } else {
      sp.end = i + 1;
      throw ParseError(std::string("unexpected character '") + ch + "'", sp);
    }
    sp.end = j;
    out.push_back({kind, s.substr(i, j - i), sp});
    advance(j - i);
  }
  SourceSpan endspan{s.size(), s.size(), line, col};
  out.push_back({Tok::End, "", endspan});
  return out;
}

// ---------------------------------------------------------------- expansion types

struct TreeTerm {
  ExactCoeff coeff = ExactCoeff::one();
  std::vector<Node> forest;  // leaf labels live in Node::tag until finalization
  std::string root_tag;
};

struct WordTerm {
  ExactCoeff coeff = ExactCoeff::one();
  std::vector<Letter> letters;
  std::vector<std::string> labels;  // one per slot, flat
};

struct PairDecl {
  std::string a, b;
  int cls;
  SourceSpan span;
};

// A frequency literal, possibly left for Kirchhoff derivation.
struct FreqSpec {
  std::optional<Frequency> value;
  std::string derive_name;  // bind the derived value to this name ("" for '_')
};

template <class T>
std::vector<T> product(const std::vector<T>& a, const std::vector<T>& b,
                       const std::function<T(const T&, const T&)>& mul) {
  std::vector<T> out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(mul(x, y));
  return out;
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Document run() {
    Document doc;
    std::optional<std::vector<TreeTerm>> trees;
    std::optional<std::vector<WordTerm>> words;
    SourceSpan expr_span;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && t.text == "let") {
        parse_let();
        continue;
      }
      if (t.kind == Tok::Ident && peek(1).kind == Tok::Sym && peek(1).text == ":") {
        const std::string kw = t.text;
        const SourceSpan sp = t.span;
        if (kw == "model") {
          next();
          next();
          const Token& m = expect(Tok::Ident, "model name");
          if (m.text == "nls") model_ = Model::NLS;
          else if (m.text == "wave") model_ = Model::Wave;
          else throw ParseError("unknown model '" + m.text + "'", m.span);
          continue;
        }
        if (kw == "pair1" || kw == "pair2") {
          next();
          next();
          parse_pairs(kw == "pair1" ? 1 : 2);
          continue;
        }
        if (kw == "tree" || kw == "word") {
          next();
          next();
          if (trees || words) throw ParseError("more than one expression", sp);
          expr_span = peek().span;
          if (kw == "tree") trees = parse_tree_expr(true);
          else words = parse_word_expr();
          continue;
        }
        throw ParseError("unknown stanza '" + kw + "'", sp);
      }
      if (trees || words) throw ParseError("unexpected '" + t.text + "' after expression", t.span);
      expr_span = t.span;
      if (looks_like_word()) words = parse_word_expr();
      else trees = parse_tree_expr(true);
    }
    doc.model = model_;
    doc.bindings = bindings_;
    std::set<std::string> used;
    if (trees) doc.trees = finish_trees(*trees, used, expr_span);
    if (words) doc.words = finish_words(*words, used, expr_span);
    for (const auto& d : pairs_) {
      if (!used.count(d.a + "\n" + d.b)) {
        if (!labels_.count(d.a)) throw ParseError("unknown tag '" + d.a + "'", d.span);
        if (!labels_.count(d.b)) throw ParseError("unknown tag '" + d.b + "'", d.span);
        throw ParseError("tags '" + d.a + "' and '" + d.b + "' never occur in the same term", d.span);
      }
    }
    if (!trees && !words) throw ParseError("no expression", peek().span);
    return doc;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Frequency> bindings_;
  std::optional<Model> model_;
  std::vector<PairDecl> pairs_;
  std::map<std::string, SourceSpan> labels_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_sym(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_ident(const std::string& s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  const Token& expect_sym(const std::string& s) {
    if (!is_sym(s)) throw ParseError("expected '" + s + "', found '" + peek().text + "'", peek().span);
    return next();
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) throw ParseError("expected " + what + ", found '" + peek().text + "'", peek().span);
    return next();
  }

  bool looks_like_word() const {
    for (std::size_t k = 0; peek(k).kind != Tok::End; ++k) {
      if (is_ident("S", k) || is_ident("SG", k)) return true;
      if (is_ident("I", k) || is_ident("Ihat", k)) return false;
    }
    return false;
  }

  // ---- literals

  std::int64_t parse_int() {
    bool neg = false;
    if (is_sym("-")) {
      next();
      neg = true;
    }
    const Token& t = expect(Tok::Int, "integer");
    try {
      const std::int64_t v = std::stoll(t.text);
      return neg ? -v : v;
    } catch (const std::exception&) {
      throw ParseError("integer out of range", t.span);
    }
  }

  Rational parse_rational_lit() {
    const SourceSpan sp = peek().span;
    std::int64_t num = parse_int();
    std::int64_t den = 1;
    if (is_sym("/")) {
      next();
      den = parse_int();
      if (den == 0) throw ParseError("zero denominator", sp);
    }
    return Rational(num, den);
  }

  bool at_coeff() const {
    if (is_sym("-") || is_sym("{") || peek().kind == Tok::Int) return true;
    return is_ident("i") || is_ident("mu");
  }

  ExactCoeff parse_coeff() {
    ExactCoeff c = ExactCoeff::one();
    bool have = false;
    if (is_sym("{")) {
      next();
      Rational re = parse_rational_lit();
      expect_sym(",");
      Rational im = parse_rational_lit();
      expect_sym("}");
      c = ExactCoeff(re, im);
      have = true;
    } else if (is_sym("-") && is_ident("i", 1)) {
      next();
      next();
      c = ExactCoeff(0, -1);
      have = true;
    } else if (is_sym("-") || peek().kind == Tok::Int) {
      Rational q = parse_rational_lit();
      if (is_ident("i")) {
        next();
        c = ExactCoeff(0, q);
      } else {
        c = ExactCoeff(q);
      }
      have = true;
    } else if (is_ident("i")) {
      next();
      c = ExactCoeff::imag_unit();
      have = true;
    }
    if (is_ident("mu")) {
      const SourceSpan sp = next().span;
      expect_sym("^");
      const std::int64_t e = parse_int();
      if (e % 2 != 0) throw ParseError("mu power must be even", sp);
      c.mu_exp = static_cast<int>(e / 2);
      have = true;
    }
    if (!have) throw ParseError("expected coefficient", peek().span);
    return c;
  }

  // item := '-'? (Int | Ident)
  FreqSpec parse_freq(bool allow_derive) {
    const SourceSpan sp = peek().span;
    const bool paren = is_sym("(");
    if (paren) next();
    std::vector<std::pair<bool, Token>> items;
    do {
      if (!items.empty()) next();  // the comma
      bool neg = false;
      if (is_sym("-")) {
        next();
        neg = true;
      }
      if (peek().kind != Tok::Int && peek().kind != Tok::Ident)
        throw ParseError("expected frequency component", peek().span);
      items.push_back({neg, next()});
    } while (paren && is_sym(","));
    if (paren) expect_sym(")");
    FreqSpec f;
    if (items.size() == 1 && items[0].second.kind == Tok::Ident) {
      const auto& [neg, tok] = items[0];
      auto it = bindings_.find(tok.text);
      if (it != bindings_.end()) {
        f.value = neg ? -it->second : it->second;
        return f;
      }
      if (!allow_derive || neg) throw ParseError("unknown frequency name '" + tok.text + "'", tok.span);
      f.derive_name = tok.text == "_" ? "" : tok.text;
      return f;
    }
    std::vector<std::int64_t> v;
    for (const auto& [neg, tok] : items) {
      if (tok.kind != Tok::Int) throw ParseError("names cannot be mixed with integers in a frequency", tok.span);
      const std::int64_t x = std::stoll(tok.text);
      v.push_back(neg ? -x : x);
    }
    (void)sp;
    f.value = Frequency(v);
    return f;
  }

  void parse_let() {
    next();
    const Token& name = expect(Tok::Ident, "name");
    expect_sym("=");
    FreqSpec f = parse_freq(false);
    bindings_[name.text] = *f.value;
  }

  void parse_pairs(int cls) {
    while (is_sym("(")) {
      const SourceSpan sp = next().span;
      const Token& a = expect(Tok::Ident, "tag");
      expect_sym(",");
      const Token& b = expect(Tok::Ident, "tag");
      expect_sym(")");
      pairs_.push_back({a.text, b.text, cls, sp});
    }
  }

  // ---- trees

  // A leading '-' binds to a numeric or imaginary coefficient when one follows.
  ExactCoeff parse_sign() {
    if (is_sym("+")) {
      next();
      return ExactCoeff::one();
    }
    if (is_sym("-") && peek(1).kind != Tok::Int && !is_ident("i", 1)) {
      next();
      return -ExactCoeff::one();
    }
    return ExactCoeff::one();
  }

  std::vector<TreeTerm> parse_tree_expr(bool top) {
    std::vector<TreeTerm> out;
    do {
      const ExactCoeff sign = parse_sign();
      for (auto& t : parse_tree_term(top)) {
        t.coeff *= sign;
        out.push_back(std::move(t));
      }
    } while (is_sym("+") || is_sym("-"));
    return out;
  }

  std::vector<TreeTerm> parse_tree_term(bool top) {
    const SourceSpan sp = peek().span;
    std::vector<TreeTerm> acc(1);
    bool any = false;
    if (at_coeff()) {
      acc[0].coeff = parse_coeff();
      any = true;
    }
    while (is_ident("I") || is_ident("Ihat") || is_sym("(")) {
      std::vector<TreeTerm> f = parse_tree_factor();
      acc = product<TreeTerm>(acc, f, [](const TreeTerm& a, const TreeTerm& b) {
        TreeTerm r = a;
        r.coeff *= b.coeff;
        r.forest.insert(r.forest.end(), b.forest.begin(), b.forest.end());
        return r;
      });
      any = true;
    }
    if (!any) throw ParseError("expected a term, found '" + peek().text + "'", sp);
    if (is_sym("@")) {
      const SourceSpan at = next().span;
      if (!top) throw ParseError("root tags are only allowed at top level", at);
      const Token& tag = expect(Tok::Ident, "root tag");
      for (auto& t : acc) t.root_tag = tag.text;
    }
    return acc;
  }

  std::vector<TreeTerm> parse_tree_factor() {
    if (is_sym("(")) {
      next();
      auto inner = parse_tree_expr(false);
      expect_sym(")");
      return inner;
    }
    const Token& head = next();
    const SourceSpan sp = head.span;
    const bool hat = head.text == "Ihat";
    expect_sym("[");
    const Token& kind = expect(Tok::Ident, "edge kind");
    if (kind.text != "t1" && kind.text != "t2") throw ParseError("edge kind must be t1 or t2", kind.span);
    expect_sym(",");
    const Token& conj = expect(Tok::Int, "conj bit");
    if (conj.text != "0" && conj.text != "1") throw ParseError("conj bit must be 0 or 1", conj.span);
    expect_sym("]");
    expect_sym("(");
    EdgeDecoration decor{kind.text == "t1" ? EdgeKind::T1 : EdgeKind::T2, conj.text == "1" ? 1 : 0, hat};
    if (decor.kind == EdgeKind::T2 && hat) throw ParseError("hat flag is invalid on a t2 edge", sp);
    FreqSpec fs = parse_freq(decor.kind == EdgeKind::T2);
    std::vector<TreeTerm> kids(1);
    bool has_kids = false;
    if (is_sym(";")) {
      next();
      has_kids = true;
      do {
        auto f = parse_tree_factor();
        kids = product<TreeTerm>(kids, f, [](const TreeTerm& a, const TreeTerm& b) {
          TreeTerm r = a;
          r.coeff *= b.coeff;
          r.forest.insert(r.forest.end(), b.forest.begin(), b.forest.end());
          return r;
        });
      } while (is_ident("I") || is_ident("Ihat") || is_sym("("));
    }
    expect_sym(")");
    std::string tag;
    SourceSpan tag_span = sp;
    if (is_sym("#")) {
      next();
      const Token& t = expect(Tok::Ident, "tag");
      tag = t.text;
      tag_span = t.span;
    }
    if (decor.kind == EdgeKind::T1 && has_kids) throw ParseError("t1 edges end in a leaf", sp);
    if (decor.kind == EdgeKind::T2 && !has_kids) throw ParseError("t2 edge without children", sp);

    std::vector<TreeTerm> out;
    for (auto& k : kids) {
      Node n;
      n.decor = decor;
      n.tag = tag;
      if (decor.kind == EdgeKind::T1) {
        n.freq = *fs.value;
        if (!tag.empty() && !labels_.count(tag)) labels_[tag] = tag_span;
      } else {
        n.children = std::move(k.forest);
        std::size_t dim = 0;
        for (const auto& c : n.children) dim = std::max(dim, c.freq.dim());
        for (const auto& c : n.children)
          if (c.freq.dim() != dim) throw ParseError("children of one node disagree in dimension", sp);
        const Frequency expect = kirchhoff_frequency(decor, n.children, dim);
        if (fs.value) {
          if (*fs.value != expect)
            throw ParseError("Kirchhoff relation violated at node " + fs.value->str() + ", children give " +
                                 expect.str(),
                             sp);
          n.freq = *fs.value;
        } else {
          n.freq = expect;
          if (!fs.derive_name.empty()) {
            auto it = bindings_.find(fs.derive_name);
            if (it != bindings_.end() && it->second != expect)
              throw ParseError("name '" + fs.derive_name + "' derived inconsistently", sp);
            bindings_[fs.derive_name] = expect;
          }
        }
      }
      TreeTerm t;
      t.coeff = k.coeff;
      t.forest.push_back(std::move(n));
      out.push_back(std::move(t));
    }
    return out;
  }

  TreePoly finish_trees(std::vector<TreeTerm>& terms, std::set<std::string>& used, const SourceSpan& sp) {
    TreePoly out;
    for (auto& t : terms) {
      Node root;
      root.tag = t.root_tag;
      root.children = std::move(t.forest);
      std::map<std::string, int> ids;
      int next_id = 0;
      std::function<void(Node&, bool)> number = [&](Node& n, bool is_root) {
        if (!is_root && n.is_leaf()) {
          n.leaf_id = next_id++;
          if (!n.tag.empty()) {
            if (ids.count(n.tag)) throw ParseError("duplicate tag '" + n.tag + "' in one term", labels_.at(n.tag));
            ids[n.tag] = n.leaf_id;
            n.tag.clear();
          }
          return;
        }
        for (auto& c : n.children) number(c, false);
      };
      number(root, true);
      Pairing p;
      for (const auto& d : pairs_) {
        auto a = ids.find(d.a), b = ids.find(d.b);
        if (a == ids.end() || b == ids.end()) continue;
        try {
          p.add(a->second, b->second, d.cls);
        } catch (const std::exception& e) {
          throw ParseError(e.what(), d.span);
        }
        used.insert(d.a + "\n" + d.b);
      }
      try {
        p.check_disjoint(next_id);
        PairedTree pt;
        pt.tree = canonicalize(std::move(root), &p);
        pt.pairing = p;
        if (model_) validate_pairing(pt, *model_);
        add_term(out, pt, t.coeff);
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(e.what(), sp);
      }
    }
    return out;
  }

  // ---- words

  std::vector<WordTerm> parse_word_expr() {
    std::vector<WordTerm> out;
    do {
      const ExactCoeff sign = parse_sign();
      for (auto& t : parse_word_term()) {
        t.coeff *= sign;
        out.push_back(std::move(t));
      }
    } while (is_sym("+") || is_sym("-"));
    return out;
  }

  std::vector<WordTerm> parse_word_term() {
    const SourceSpan sp = peek().span;
    std::vector<WordTerm> acc(1);
    bool any = false;
    if (at_coeff()) {
      acc[0].coeff = parse_coeff();
      any = true;
    }
    while (is_ident("S") || is_ident("SG") || is_sym("(")) {
      std::vector<WordTerm> f;
      if (is_sym("(")) {
        next();
        f = parse_word_expr();
        expect_sym(")");
      } else {
        f.push_back(parse_letter());
      }
      acc = product<WordTerm>(acc, f, [](const WordTerm& a, const WordTerm& b) {
        WordTerm r = a;
        r.coeff *= b.coeff;
        r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
        r.labels.insert(r.labels.end(), b.labels.begin(), b.labels.end());
        return r;
      });
      any = true;
    }
    if (!any) throw ParseError("expected a term, found '" + peek().text + "'", sp);
    return acc;
  }

  WordTerm parse_letter() {
    const Token& head = next();
    WordTerm t;
    Letter l;
    l.green_node = head.text == "SG";
    expect_sym("[");
    while (!is_sym("]")) {
      const Token& c = expect(Tok::Int, "slot conj bit");
      if (c.text != "0" && c.text != "1") throw ParseError("conj bit must be 0 or 1", c.span);
      Slot s;
      s.conj = c.text == "1";
      if (is_ident("h")) {
        next();
        s.hat = true;
      }
      if (!is_sym("(")) throw ParseError("slot frequency must be parenthesized", peek().span);
      s.freq = *parse_freq(false).value;
      std::string label;
      if (is_sym("#")) {
        next();
        const Token& lt = expect(Tok::Ident, "slot tag");
        label = lt.text;
        if (!labels_.count(label)) labels_[label] = lt.span;
      }
      l.slots.push_back(s);
      t.labels.push_back(label);
    }
    expect_sym("]");
    if (l.slots.empty()) throw ParseError("empty letter", head.span);
    if (is_sym("#")) {
      next();
      l.tag = expect(Tok::Ident, "letter tag").text;
    }
    t.letters.push_back(std::move(l));
    return t;
  }

  WordPoly finish_words(std::vector<WordTerm>& terms, std::set<std::string>& used, const SourceSpan& sp) {
    WordPoly out;
    const Model model = model_.value_or(Model::NLS);
    for (auto& t : terms) {
      Word w;
      w.model = model;
      w.letters = std::move(t.letters);
      std::map<std::string, int> ids;
      for (std::size_t i = 0; i < t.labels.size(); ++i) {
        const auto& lab = t.labels[i];
        if (lab.empty()) continue;
        if (ids.count(lab)) throw ParseError("duplicate tag '" + lab + "' in one term", labels_.at(lab));
        ids[lab] = static_cast<int>(i);
      }
      for (const auto& d : pairs_) {
        auto a = ids.find(d.a), b = ids.find(d.b);
        if (a == ids.end() || b == ids.end()) continue;
        try {
          w.pairing.add(a->second, b->second, d.cls);
        } catch (const std::exception& e) {
          throw ParseError(e.what(), d.span);
        }
        used.insert(d.a + "\n" + d.b);
      }
      try {
        w.pairing.check_disjoint(static_cast<int>(w.num_slots()));
        for (const auto& l : w.letters)
          if (l.green_node && model != Model::Wave) throw std::invalid_argument("green node letters are wave only");
        add_term(out, canonical_word(std::move(w)), t.coeff);
      } catch (const std::exception& e) {
        throw ParseError(e.what(), sp);
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------- printing

std::string coeff_text(const ExactCoeff& c) {
  std::string s = ExactCoeff(c.re, c.im).str();
  if (c.mu_exp != 0) s += " mu^" + std::to_string(2 * c.mu_exp);
  return s;
}

void print_node(const Node& n, std::string& out, const std::map<int, std::string>& labels) {
  out += n.decor.hat ? "Ihat[" : "I[";
  out += n.decor.kind == EdgeKind::T1 ? "t1," : "t2,";
  out += std::to_string(n.decor.conj) + "](" + n.freq.str();
  if (!n.is_leaf()) {
    out += ";";
    for (const auto& c : n.children) {
      out += " ";
      print_node(c, out, labels);
    }
  }
  out += ")";
  if (n.is_leaf()) {
    auto it = labels.find(n.leaf_id);
    if (it != labels.end()) out += "#" + it->second;
  } else if (!n.tag.empty()) {
    out += "#" + n.tag;
  }
}

std::string tree_body(const DecoratedTree& t, const std::map<int, std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < t.root.children.size(); ++i) {
    if (i) out += " ";
    print_node(t.root.children[i], out, labels);
  }
  if (!t.root.tag.empty()) out += (out.empty() ? "@" : " @") + t.root.tag;
  return out;
}

std::string letter_text(const Letter& l, std::size_t offset, const std::map<int, std::string>& labels) {
  std::string out = l.green_node ? "SG[" : "S[";
  for (std::size_t i = 0; i < l.slots.size(); ++i) {
    const Slot& s = l.slots[i];
    if (i) out += " ";
    out += std::to_string(s.conj);
    if (s.hat) out += "h";
    out += s.freq.str();
    auto it = labels.find(static_cast<int>(offset + i));
    if (it != labels.end()) out += "#" + it->second;
  }
  out += "]";
  if (!l.tag.empty()) out += "#" + l.tag;
  return out;
}

std::string word_body(const Word& w, const std::map<int, std::string>& labels) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += " ";
    out += letter_text(w.letters[i], w.slot_offset(i), labels);
  }
  return out;
}

std::map<int, std::string> pair_labels(const Pairing& p, const std::string& prefix) {
  std::map<int, std::string> m;
  for (const auto* s : {&p.class1, &p.class2})
    for (auto [a, b] : *s) {
      m[a] = prefix + std::to_string(a);
      m[b] = prefix + std::to_string(b);
    }
  return m;
}

void pair_lines(const std::vector<std::string>& p1, const std::vector<std::string>& p2, std::string& out) {
  if (!p1.empty()) {
    out += "pair1:";
    for (const auto& x : p1) out += " " + x;
    out += "\n";
  }
  if (!p2.empty()) {
    out += "pair2:";
    for (const auto& x : p2) out += " " + x;
    out += "\n";
  }
}

void collect_pairs(const Pairing& p, const std::map<int, std::string>& labels, std::vector<std::string>& p1,
                   std::vector<std::string>& p2) {
  for (auto [a, b] : p.class1) p1.push_back("(" + labels.at(a) + "," + labels.at(b) + ")");
  for (auto [a, b] : p.class2) p2.push_back("(" + labels.at(a) + "," + labels.at(b) + ")");
}

}  // namespace

Document parse_document(const std::string& text) { return Parser(text).run(); }

TreePoly parse_tree(const std::string& text) {
  Document d = parse_document(text);
  if (!d.trees) throw ParseError("document holds words, not trees", SourceSpan{});
  return *d.trees;
}

WordPoly parse_word(const std::string& text) {
  Document d = parse_document(text);
  if (!d.words) throw ParseError("document holds trees, not words", SourceSpan{});
  return *d.words;
}

std::string print_tree(const TreePoly& p) {
  std::string out = "tree:\n";
  std::vector<std::string> p1, p2;
  int term = 0;
  for (const auto& [t, c] : p) {
    auto labels = pair_labels(t.pairing, "p" + std::to_string(term) + "_");
    std::string body = tree_body(t.tree, labels);
    out += "+ " + coeff_text(c) + (body.empty() ? "" : " " + body) + "\n";
    collect_pairs(t.pairing, labels, p1, p2);
    ++term;
  }
  if (p.empty()) out += "+ 0\n";
  pair_lines(p1, p2, out);
  return out;
}

std::string print_tree(const PairedTree& t) {
  TreePoly p;
  p[t] = ExactCoeff::one();
  return print_tree(p);
}

std::string print_word(const WordPoly& p) {
  Model model = p.empty() ? Model::NLS : p.begin()->first.model;
  std::string out = "model: " + to_string(model) + "\nword:\n";
  std::vector<std::string> p1, p2;
  int term = 0;
  for (const auto& [w, c] : p) {
    auto labels = pair_labels(w.pairing, "s" + std::to_string(term) + "_");
    std::string body = word_body(w, labels);
    out += "+ " + coeff_text(c) + (body.empty() ? "" : " " + body) + "\n";
    collect_pairs(w.pairing, labels, p1, p2);
    ++term;
  }
  if (p.empty()) out += "+ 0\n";
  pair_lines(p1, p2, out);
  return out;
}

std::string print_word(const Word& w) { return print_word(single(w)); }

std::string tree_expr(const DecoratedTree& t) {
  std::string s = tree_body(t, {});
  return s.empty() ? "1" : s;
}

std::string word_expr(const Word& w) {
  std::string s = word_body(w, {});
  return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- JSON

using nlohmann::json;

namespace {

json pairing_json(const Pairing& p) {
  json j;
  j["class1"] = json::array();
  j["class2"] = json::array();
  for (auto [a, b] : p.class1) j["class1"].push_back({a, b});
  for (auto [a, b] : p.class2) j["class2"].push_back({a, b});
  return j;
}

Pairing pairing_from(const json& j) {
  Pairing p;
  for (int cls : {1, 2}) {
    const char* key = cls == 1 ? "class1" : "class2";
    if (!j.contains(key)) continue;
    for (const auto& e : j.at(key)) {
      if (!e.is_array() || e.size() != 2) throw SchemaError("pairing entries are two-element arrays");
      p.add(e[0].get<int>(), e[1].get<int>(), cls);
    }
  }
  return p;
}

json freq_json(const Frequency& f) { return f.c; }

Frequency freq_from(const json& j) { return Frequency(j.get<std::vector<std::int64_t>>()); }

json node_json(const Node& n, bool is_root) {
  json j;
  if (!is_root) {
    j["kind"] = n.decor.kind == EdgeKind::T1 ? "t1" : "t2";
    j["conj"] = n.decor.conj;
    j["hat"] = n.decor.hat;
    j["freq"] = freq_json(n.freq);
    if (n.is_leaf()) j["leaf_id"] = n.leaf_id;
  }
  if (!n.tag.empty()) j["tag"] = n.tag;
  if (!n.is_leaf() || is_root) {
    j["children"] = json::array();
    for (const auto& c : n.children) j["children"].push_back(node_json(c, false));
  }
  return j;
}

Node node_from(const json& j, bool is_root) {
  Node n;
  if (!is_root) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "t1" && kind != "t2") throw SchemaError("edge kind must be t1 or t2");
    n.decor.kind = kind == "t1" ? EdgeKind::T1 : EdgeKind::T2;
    n.decor.conj = j.at("conj").get<int>();
    n.decor.hat = j.value("hat", false);
    n.freq = freq_from(j.at("freq"));
    n.leaf_id = j.value("leaf_id", -1);
  }
  n.tag = j.value("tag", std::string());
  if (j.contains("children"))
    for (const auto& c : j.at("children")) n.children.push_back(node_from(c, false));
  return n;
}

void check_header(const json& j, const std::string& kind) {
  if (!j.is_object() || !j.contains("schema")) throw SchemaError("missing schema field");
  if (j.at("schema") != kSchema)
    throw SchemaError("schema version mismatch: expected " + std::string(kSchema) + ", got " +
                      j.at("schema").dump());
  if (j.value("kind", std::string()) != kind) throw SchemaError("expected kind " + kind);
}

}  // namespace

json coeff_to_json(const ExactCoeff& c) {
  return {{"re", to_string(c.re)}, {"im", to_string(c.im)}, {"mu", 2 * c.mu_exp}};
}

ExactCoeff coeff_from_json(const json& j) {
  try {
    ExactCoeff c(parse_rational(j.at("re").get<std::string>()), parse_rational(j.at("im").get<std::string>()));
    const int mu = j.value("mu", 0);
    if (mu % 2 != 0) throw SchemaError("mu power must be even");
    c.mu_exp = mu / 2;
    return c;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad coefficient: ") + e.what());
  }
}

json to_json(const TreePoly& p) {
  json j{{"schema", kSchema}, {"kind", "treepoly"}, {"terms", json::array()}};
  for (const auto& [t, c] : p)
    j["terms"].push_back({{"coeff", coeff_to_json(c)},
                          {"dim", t.tree.dim},
                          {"root", node_json(t.tree.root, true)},
                          {"pairing", pairing_json(t.pairing)}});
  return j;
}

json to_json(const WordPoly& p) {
  json j{{"schema", kSchema}, {"kind", "wordpoly"}, {"terms", json::array()}};
  j["model"] = to_string(p.empty() ? Model::NLS : p.begin()->first.model);
  for (const auto& [w, c] : p) {
    json letters = json::array();
    for (const auto& l : w.letters) {
      json slots = json::array();
      for (const auto& s : l.slots) slots.push_back({{"conj", s.conj}, {"hat", s.hat}, {"freq", freq_json(s.freq)}});
      json jl{{"slots", slots}, {"green_node", l.green_node}};
      if (!l.tag.empty()) jl["tag"] = l.tag;
      letters.push_back(jl);
    }
    j["terms"].push_back({{"coeff", coeff_to_json(c)}, {"letters", letters}, {"pairing", pairing_json(w.pairing)}});
  }
  return j;
}

TreePoly tree_from_json(const json& j) {
  check_header(j, "treepoly");
  TreePoly out;
  try {
    for (const auto& term : j.at("terms")) {
      Node root = node_from(term.at("root"), true);
      Pairing p = pairing_from(term.value("pairing", json::object()));
      PairedTree pt;
      pt.tree = canonicalize(root, nullptr);  // counts leaves and checks ids
      const int n = pt.tree.num_leaves();
      try {
        p.check_disjoint(n);
      } catch (const std::exception& e) {
        throw SchemaError(std::string("dangling pairing ids: ") + e.what());
      }
      pt.tree = canonicalize(std::move(root), &p);
      pt.tree.dim = std::max<std::size_t>(pt.tree.dim, term.value("dim", std::size_t{0}));
      pt.pairing = p;
      add_term(out, pt, coeff_from_json(term.at("coeff")));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed tree JSON: ") + e.what());
  }
  return out;
}

WordPoly word_from_json(const json& j) {
  check_header(j, "wordpoly");
  WordPoly out;
  try {
    const Model model = parse_model(j.value("model", std::string("nls")));
    for (const auto& term : j.at("terms")) {
      Word w;
      w.model = model;
      for (const auto& jl : term.at("letters")) {
        Letter l;
        l.tag = jl.value("tag", std::string());
        l.green_node = jl.value("green_node", false);
        for (const auto& js : jl.at("slots")) {
          Slot s;
          s.conj = js.at("conj").get<int>();
          s.hat = js.value("hat", false);
          s.freq = freq_from(js.at("freq"));
          l.slots.push_back(s);
        }
        w.letters.push_back(l);
      }
      w.pairing = pairing_from(term.value("pairing", json::object()));
      try {
        w.pairing.check_disjoint(static_cast<int>(w.num_slots()));
      } catch (const std::exception& e) {
        throw SchemaError(std::string("dangling pairing ids: ") + e.what());
      }
      add_term(out, canonical_word(std::move(w)), coeff_from_json(term.at("coeff")));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed word JSON: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------- DOT

namespace {

// styling constants
constexpr const char* kGreenLeaf = "style=filled, fillcolor=green, color=darkgreen";
constexpr const char* kPlainLeaf = "style=filled, fillcolor=white";
constexpr const char* kPairEdge = "style=dashed, color=gray40, constraint=false";
constexpr const char* kGreenPairEdge = "style=dashed, color=darkgreen, constraint=false";

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string to_dot(const PairedTree& t, const std::string& name) {
  std::ostringstream o;
  o << "graph " << quote(name) << " {\n  node [shape=circle, fontsize=10];\n";
  int next = 0;
  std::map<int, int> leaf_node;
  std::function<int(const Node&, bool)> rec = [&](const Node& n, bool is_root) {
    const int id = next++;
    if (is_root) {
      o << "  n" << id << " [shape=point, label=" << quote(n.tag) << "];\n";
    } else if (n.is_leaf()) {
      o << "  n" << id << " [label=" << quote(n.freq.str()) << ", " << (n.decor.hat ? kGreenLeaf : kPlainLeaf)
        << "];\n";
      leaf_node[n.leaf_id] = id;
    } else {
      o << "  n" << id << " [shape=point, xlabel=" << quote(n.tag.empty() ? n.freq.str() : n.tag) << "];\n";
    }
    for (const auto& c : n.children) {
      const int cid = rec(c, false);
      o << "  n" << id << " -- n" << cid << " [style=" << (c.decor.conj ? "dotted" : "solid")
        << (c.decor.kind == EdgeKind::T2 ? ", penwidth=2" : "") << "];\n";
    }
    return id;
  };
  rec(t.tree.root, true);
  for (auto [a, b] : t.pairing.class1)
    o << "  n" << leaf_node[a] << " -- n" << leaf_node[b] << " [" << kGreenPairEdge << "];\n";
  for (auto [a, b] : t.pairing.class2)
    o << "  n" << leaf_node[a] << " -- n" << leaf_node[b] << " [" << kPairEdge << "];\n";
  o << "}\n";
  return o.str();
}

std::string to_dot(const Word& w, const std::string& name) {
  std::ostringstream o;
  o << "graph " << quote(name) << " {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  int slot = 0;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    const Letter& l = w.letters[i];
    o << "  subgraph cluster_" << i << " {\n    label=" << quote(l.tag) << ";\n";
    o << "    r" << i << " [shape=point" << (l.green_node ? ", color=darkgreen, width=0.2" : "") << "];\n";
    for (const auto& s : l.slots) {
      o << "    s" << slot << " [label=" << quote((s.conj ? "-" : "") + s.freq.str()) << ", "
        << (s.hat ? kGreenLeaf : kPlainLeaf) << "];\n";
      o << "    r" << i << " -- s" << slot << (s.conj ? " [style=dotted]" : "") << ";\n";
      ++slot;
    }
    o << "  }\n";
  }
  for (auto [a, b] : w.pairing.class1) o << "  s" << a << " -- s" << b << " [" << kGreenPairEdge << "];\n";
  for (auto [a, b] : w.pairing.class2) o << "  s" << a << " -- s" << b << " [" << kPairEdge << "];\n";
  o << "}\n";
  return o.str();
}

}  // namespace arborify
