#pragma once

#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace arborify {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(const std::string& msg, SourceSpan s)
      : std::runtime_error(std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + msg), span(s) {}
};

// A parsed .arb document: either a tree polynomial or a word polynomial.
struct Document {
  std::optional<Model> model;
  std::optional<TreePoly> trees;
  std::optional<WordPoly> words;
  std::map<std::string, Frequency> bindings;
};

Document parse_document(const std::string& text);
TreePoly parse_tree(const std::string& text);
// Model defaults to the document's "model:" stanza, else NLS.
WordPoly parse_word(const std::string& text);

// Canonical text; parse(print(x)) == x and print(parse(print(x))) == print(x).
std::string print_tree(const TreePoly& p);
std::string print_word(const WordPoly& p);
std::string print_tree(const PairedTree& t);
std::string print_word(const Word& w);

// One-line expressions without stanzas (pairings omitted).
std::string tree_expr(const DecoratedTree& t);
std::string word_expr(const Word& w);

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSchema = "arborify/v1";

nlohmann::json coeff_to_json(const ExactCoeff& c);
ExactCoeff coeff_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TreePoly& p);
nlohmann::json to_json(const WordPoly& p);
TreePoly tree_from_json(const nlohmann::json& j);
WordPoly word_from_json(const nlohmann::json& j);

// Hat leaves and green slots are drawn green; pairs are dashed edges.
std::string to_dot(const PairedTree& t, const std::string& name = "tree");
std::string to_dot(const Word& w, const std::string& name = "word");

}  // namespace arborify
