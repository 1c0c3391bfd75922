#include "dynforest/automaton.hpp"

#include <sstream>

namespace dynforest {

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int32_t lookup(const std::vector<std::string>& names, const std::string& name,
               const char* what, std::size_t line_no) {
  for (int32_t i = 0; i < static_cast<int32_t>(names.size()); ++i)
    if (names[i] == name) return i;
  throw ParseError("unknown " + std::string(what) + " " + name, line_no);
}

}  // namespace

ForestAutomaton parse_automaton(std::string_view text) {
  std::vector<std::string> alphabet_names, tree_names, word_names;
  std::string initial_name;
  std::vector<std::string> final_names;
  // raw transition lines kept until all name sections are known
  struct RawDelta {
    std::vector<std::string> toks;
    std::size_t line_no;
    bool vertical;
  };
  std::vector<RawDelta> raw;
  bool have_initial = false, have_final = false;

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      if (!split_tokens(line).empty())
        throw ParseError("expected 'key: value' line", line_no);
      continue;
    }
    std::string key = line.substr(0, colon);
    // strip surrounding whitespace from the key
    auto keytoks = split_tokens(key);
    if (keytoks.size() != 1) throw ParseError("bad section key", line_no);
    key = keytoks[0];
    std::string value = line.substr(colon + 1);
    auto toks = split_tokens(value);
    if (key == "alphabet") {
      alphabet_names = toks;
    } else if (key == "tree-states") {
      tree_names = toks;
    } else if (key == "word-states") {
      word_names = toks;
    } else if (key == "word-initial") {
      if (toks.size() != 1)
        throw ParseError("word-initial takes one state", line_no);
      initial_name = toks[0];
      have_initial = true;
    } else if (key == "word-final") {
      final_names = toks;
      have_final = true;
    } else if (key == "word-delta") {
      raw.push_back({toks, line_no, false});
    } else if (key == "delta") {
      raw.push_back({toks, line_no, true});
    } else {
      throw ParseError("unknown section " + key, line_no);
    }
  }
  if (alphabet_names.empty()) throw ParseError("missing alphabet", 0);
  if (tree_names.empty()) throw ParseError("missing tree-states", 0);
  if (word_names.empty()) throw ParseError("missing word-states", 0);
  if (!have_initial) throw ParseError("missing word-initial", 0);
  if (!have_final) throw ParseError("missing word-final", 0);

  ForestAutomaton a;
  a.alphabet = Alphabet(alphabet_names);
  a.tree_state_names = tree_names;
  a.word_state_names = word_names;
  int32_t nq = static_cast<int32_t>(tree_names.size());
  int32_t np = static_cast<int32_t>(word_names.size());
  a.horizontal.num_states = np;
  a.horizontal.num_inputs = nq;
  a.horizontal.initial = lookup(word_names, initial_name, "word state", 0);
  a.horizontal.final_state.assign(np, 0);
  for (const auto& name : final_names)
    a.horizontal.final_state[lookup(word_names, name, "word state", 0)] = 1;
  a.horizontal.delta.assign(static_cast<std::size_t>(np) * nq, kNone);
  a.vertical.assign(static_cast<std::size_t>(np) * a.alphabet.size(), kNone);

  for (const auto& r : raw) {
    if (r.toks.size() != 4 || r.toks[2] != "->")
      throw ParseError("transition must read 'p x -> y'", r.line_no);
    int32_t p = lookup(word_names, r.toks[0], "word state", r.line_no);
    if (r.vertical) {
      auto letter = a.alphabet.find(r.toks[1]);
      if (!letter) throw ParseError("unknown letter " + r.toks[1], r.line_no);
      int32_t q = lookup(tree_names, r.toks[3], "tree state", r.line_no);
      auto& cell = a.vertical[p * a.alphabet.size() + *letter];
      if (cell != kNone)
        throw ParseError("duplicate delta for " + r.toks[0] + " " + r.toks[1],
                         r.line_no);
      cell = q;
    } else {
      int32_t q = lookup(tree_names, r.toks[1], "tree state", r.line_no);
      int32_t t = lookup(word_names, r.toks[3], "word state", r.line_no);
      auto& cell = a.horizontal.delta[p * nq + q];
      if (cell != kNone)
        throw ParseError("duplicate word-delta for " + r.toks[0] + " " +
                             r.toks[1],
                         r.line_no);
      cell = t;
    }
  }
  for (int32_t p = 0; p < np; ++p) {
    for (int32_t q = 0; q < nq; ++q)
      if (a.horizontal.next(p, q) == kNone)
        throw ParseError("missing word-delta for " + word_names[p] + " " +
                             tree_names[q],
                         0);
    for (int32_t x = 0; x < a.alphabet.size(); ++x)
      if (a.tree_state(p, x) == kNone)
        throw ParseError("missing delta for " + word_names[p] + " " +
                             a.alphabet.name(x),
                         0);
  }
  return a;
}

std::string serialize_automaton(const ForestAutomaton& a) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ' ';
      s += v[i];
    }
    return s;
  };
  out << "alphabet: " << join(a.alphabet.names()) << '\n';
  out << "tree-states: " << join(a.tree_state_names) << '\n';
  out << "word-states: " << join(a.word_state_names) << '\n';
  out << "word-initial: " << a.word_state_names[a.horizontal.initial] << '\n';
  out << "word-final:";
  for (int32_t p = 0; p < a.num_word_states(); ++p)
    if (a.horizontal.is_final(p)) out << ' ' << a.word_state_names[p];
  out << '\n';
  for (int32_t p = 0; p < a.num_word_states(); ++p)
    for (int32_t q = 0; q < a.num_tree_states(); ++q)
      out << "word-delta: " << a.word_state_names[p] << ' '
          << a.tree_state_names[q] << " -> "
          << a.word_state_names[a.horizontal.next(p, q)] << '\n';
  for (int32_t p = 0; p < a.num_word_states(); ++p)
    for (int32_t x = 0; x < a.alphabet.size(); ++x)
      out << "delta: " << a.word_state_names[p] << ' ' << a.alphabet.name(x)
          << " -> " << a.tree_state_names[a.tree_state(p, x)] << '\n';
  return out.str();
}

Run run(const ForestAutomaton& a, const Forest& f) {
  Run r;
  int32_t n = f.size();
  r.state.assign(n, kNone);
  r.chain_state.assign(n, a.horizontal.initial);
  r.root_chain_state = a.horizontal.initial;
  int32_t cur = f.shape.first_root();
  std::vector<int32_t> path;
  while (cur != kNone || !path.empty()) {
    while (cur != kNone) {
      path.push_back(cur);
      cur = f.shape.first_child[cur];
    }
    int32_t u = path.back();
    path.pop_back();
    if (f.labels[u] == kHole)
      throw std::invalid_argument("cannot run automaton on a context");
    r.state[u] = a.tree_state(r.chain_state[u], f.labels[u]);
    int32_t* target =
        path.empty() ? &r.root_chain_state : &r.chain_state[path.back()];
    *target = a.horizontal.next(*target, r.state[u]);
    cur = f.shape.next_sibling[u];
  }
  r.accepted = a.horizontal.is_final(r.root_chain_state);
  return r;
}

bool accepts(const ForestAutomaton& a, const Forest& f) {
  return run(a, f).accepted;
}

}  // namespace dynforest
