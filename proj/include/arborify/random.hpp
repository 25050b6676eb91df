#pragma once

#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include <random>

namespace arborify {

using Rng = std::mt19937_64;

// Uniform lattice point with Euclidean norm at most kmax.
Frequency random_frequency(Rng& rng, std::size_t d, int kmax);

// Fully paired tree: cubic t2 nodes, root arity 2 or 4, at most max_t2 t2 edges.
// NLS pairs share a frequency with opposite conj; wave pairs carry k and -k.
PairedTree random_paired_tree(Rng& rng, Model model, std::size_t d, int kmax, int max_t2 = 3);

// Tree with at most max_nodes nodes (root included) and distinct leaf frequencies, unpaired.
PairedTree random_distinct_tree(Rng& rng, Model model, int max_nodes = 8);

// Word of up to max_len letters with random slots and a random partial pairing.
// Every letter gets a unique tag from tag_prefix so letters are pairwise distinct.
Word random_word(Rng& rng, Model model, int max_len, const std::string& tag_prefix);

}  // namespace arborify
