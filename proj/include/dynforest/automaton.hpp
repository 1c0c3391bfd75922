#pragma once

#include "dynforest/forest.hpp"

namespace dynforest {

// Deterministic complete word automaton whose input letters are the tree
// states of the surrounding forest automaton.
struct WordAutomaton {
  int32_t num_states = 0;
  int32_t num_inputs = 0;
  int32_t initial = 0;
  std::vector<char> final_state;       // size num_states
  std::vector<int32_t> delta;          // num_states x num_inputs

  int32_t next(int32_t state, int32_t input) const {
    return delta[state * num_inputs + input];
  }
  bool is_final(int32_t state) const { return final_state[state] != 0; }
};

// Forest automaton: a word automaton over tree states plus a vertical
// transition assigning a tree state to (word state of the children, label).
// A forest is accepted iff the word automaton accepts the root states read
// left to right; the empty forest is accepted iff the initial word state is
// final.
struct ForestAutomaton {
  Alphabet alphabet;
  std::vector<std::string> tree_state_names;
  std::vector<std::string> word_state_names;
  WordAutomaton horizontal;            // inputs are tree states
  std::vector<int32_t> vertical;       // word_states x letters -> tree state

  int32_t num_tree_states() const {
    return static_cast<int32_t>(tree_state_names.size());
  }
  int32_t num_word_states() const { return horizontal.num_states; }
  int32_t tree_state(int32_t word_state, int32_t letter) const {
    return vertical[word_state * alphabet.size() + letter];
  }
};

// Text format, line oriented, '#' starts a comment:
//   alphabet: a b
//   tree-states: q0 q1
//   word-states: p0 p1
//   word-initial: p0
//   word-final: p0
//   word-delta: p0 q0 -> p0
//   delta: p0 a -> q1
// Both transition tables must be total; duplicates are rejected.
ForestAutomaton parse_automaton(std::string_view text);
std::string serialize_automaton(const ForestAutomaton& a);

struct Run {
  // Tree state of each node.
  std::vector<int32_t> state;
  // Word state reached after reading the children of each node
  // (the initial word state for leaves).
  std::vector<int32_t> chain_state;
  // Word state after reading all root states.
  int32_t root_chain_state = 0;
  bool accepted = false;
};

Run run(const ForestAutomaton& a, const Forest& f);
bool accepts(const ForestAutomaton& a, const Forest& f);

}  // namespace dynforest
