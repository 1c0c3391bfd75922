#include "dynforest/langspec.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dynforest/workload.hpp"

namespace dynforest {

namespace {

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw ParseError("spec line " + std::to_string(lineno) + ": " + msg, 0);
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

int parse_int(const std::string& w, int lineno) {
  size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(w, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != w.size()) fail(lineno, "expected an integer, got '" + w + "'");
  return value;
}

// formula tokens: names, ! & | ( )
std::vector<std::string> formula_tokens(const std::string& text, int lineno) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '!' || c == '&' || c == '|' || c == '(' || c == ')') {
      out.push_back(std::string(1, c));
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else {
      fail(lineno, std::string("unexpected character '") + c + "' in formula");
    }
  }
  return out;
}

struct FormulaParser {
  const std::vector<std::string>& toks;
  const std::vector<std::string>& names;
  int lineno;
  size_t pos = 0;

  bool peek(const std::string& t) const {
    return pos < toks.size() && toks[pos] == t;
  }
  std::unique_ptr<BoolExpr> parse_or() {
    auto e = parse_and();
    while (peek("|")) {
      ++pos;
      auto n = std::make_unique<BoolExpr>();
      n->kind = BoolExpr::kOr;
      n->lhs = std::move(e);
      n->rhs = parse_and();
      e = std::move(n);
    }
    return e;
  }
  std::unique_ptr<BoolExpr> parse_and() {
    auto e = parse_not();
    while (peek("&")) {
      ++pos;
      auto n = std::make_unique<BoolExpr>();
      n->kind = BoolExpr::kAnd;
      n->lhs = std::move(e);
      n->rhs = parse_not();
      e = std::move(n);
    }
    return e;
  }
  std::unique_ptr<BoolExpr> parse_not() {
    if (peek("!")) {
      ++pos;
      auto n = std::make_unique<BoolExpr>();
      n->kind = BoolExpr::kNot;
      n->lhs = parse_not();
      return n;
    }
    return parse_atom();
  }
  std::unique_ptr<BoolExpr> parse_atom() {
    if (peek("(")) {
      ++pos;
      auto e = parse_or();
      if (!peek(")")) fail(lineno, "missing ')' in formula");
      ++pos;
      return e;
    }
    if (pos >= toks.size()) fail(lineno, "formula ends unexpectedly");
    const std::string& t = toks[pos];
    auto it = std::find(names.begin(), names.end(), t);
    if (it == names.end())
      fail(lineno, "unknown component '" + t + "' in formula");
    ++pos;
    auto n = std::make_unique<BoolExpr>();
    n->kind = BoolExpr::kVar;
    n->var = static_cast<int32_t>(it - names.begin());
    return n;
  }
};

}  // namespace

BooleanSpec parse_boolean_spec(std::string_view text) {
  BooleanSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool saw_alphabet = false, saw_formula = false;

  // State of the block under construction.
  bool in_block = false;
  std::string block_name, block_kind;
  CommutativeComponent comm;
  std::vector<int32_t> singleton_sub;
  std::string singleton_target;
  int block_line = 0;

  auto finish_block = [&]() {
    if (block_kind == "commutative") {
      if (comm.letters.empty())
        fail(block_line, "commutative component without letters");
      for (const auto& t : comm.accept) {
        if (t.size() != comm.letters.size())
          fail(block_line, "accept tuple arity does not match letter count");
        for (size_t i = 0; i < t.size(); ++i)
          if (t[i] < 0 || t[i] >= comm.thresholds[i] + comm.moduli[i])
            fail(block_line, "accept coordinate out of range");
      }
      spec.components.push_back(std::move(comm));
    } else {
      if (singleton_target.empty())
        fail(block_line, "singleton component without a target");
      SingletonComponent s;
      s.subalphabet = std::move(singleton_sub);
      s.target = parse_forest(singleton_target, spec.alphabet);
      std::vector<char> in_sub(spec.alphabet.size(), 0);
      for (int32_t l : s.subalphabet) in_sub[l] = 1;
      for (int32_t l : s.target.labels)
        if (!in_sub[l])
          fail(block_line, "target uses a letter outside the subalphabet");
      spec.components.push_back(std::move(s));
    }
    spec.names.push_back(block_name);
    comm = {};
    singleton_sub.clear();
    singleton_target.clear();
    in_block = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<std::string> w = words(line);
    if (w.empty()) continue;

    if (!in_block) {
      if (w[0] == "alphabet:") {
        if (saw_alphabet) fail(lineno, "duplicate alphabet line");
        spec.alphabet = Alphabet(
            std::vector<std::string>(w.begin() + 1, w.end()));
        saw_alphabet = true;
      } else if (w[0] == "component") {
        if (!saw_alphabet) fail(lineno, "alphabet must come first");
        if (w.size() != 3 ||
            (w[2] != "commutative" && w[2] != "singleton"))
          fail(lineno, "expected 'component <name> commutative|singleton'");
        if (std::find(spec.names.begin(), spec.names.end(), w[1]) !=
            spec.names.end())
          fail(lineno, "duplicate component '" + w[1] + "'");
        in_block = true;
        block_name = w[1];
        block_kind = w[2];
        block_line = lineno;
      } else if (w[0] == "formula:") {
        if (saw_formula) fail(lineno, "duplicate formula line");
        std::string rest = line.substr(line.find("formula:") + 8);
        auto toks = formula_tokens(rest, lineno);
        FormulaParser p{toks, spec.names, lineno};
        spec.formula = p.parse_or();
        if (p.pos != toks.size())
          fail(lineno, "trailing input after formula");
        saw_formula = true;
      } else {
        fail(lineno, "unexpected '" + w[0] + "'");
      }
      continue;
    }

    if (w[0] == "end") {
      if (w.size() != 1) fail(lineno, "trailing input after 'end'");
      finish_block();
    } else if (block_kind == "commutative" && w[0] == "letter") {
      if (w.size() != 6 || w[2] != "threshold" || w[4] != "modulus")
        fail(lineno, "expected 'letter <a> threshold <t> modulus <p>'");
      auto id = spec.alphabet.find(w[1]);
      if (!id) fail(lineno, "unknown letter '" + w[1] + "'");
      if (std::find(comm.letters.begin(), comm.letters.end(), *id) !=
          comm.letters.end())
        fail(lineno, "duplicate letter '" + w[1] + "'");
      int t = parse_int(w[3], lineno), p = parse_int(w[5], lineno);
      if (t < 0) fail(lineno, "negative threshold");
      if (p < 1) fail(lineno, "modulus must be at least 1");
      comm.letters.push_back(*id);
      comm.thresholds.push_back(t);
      comm.moduli.push_back(p);
    } else if (block_kind == "commutative" && w[0] == "accept:") {
      std::vector<int32_t> tuple;
      for (size_t i = 1; i < w.size(); ++i)
        tuple.push_back(parse_int(w[i], lineno));
      comm.accept.push_back(std::move(tuple));
    } else if (block_kind == "singleton" && w[0] == "subalphabet:") {
      for (size_t i = 1; i < w.size(); ++i) {
        auto id = spec.alphabet.find(w[i]);
        if (!id) fail(lineno, "unknown letter '" + w[i] + "'");
        singleton_sub.push_back(*id);
      }
    } else if (block_kind == "singleton" && w[0] == "target:") {
      singleton_target = line.substr(line.find("target:") + 7);
      // Allow "target:" with an empty forest.
      if (singleton_target.find_first_not_of(" \t") == std::string::npos)
        singleton_target = " ";
    } else {
      fail(lineno, "unexpected '" + w[0] + "' inside a component block");
    }
  }
  if (in_block) fail(lineno, "unterminated component block");
  if (!saw_alphabet) fail(lineno, "missing alphabet line");
  if (!saw_formula) fail(lineno, "missing formula line");
  return spec;
}

bool eval_bool_expr(const BoolExpr& e, const std::vector<char>& vars) {
  switch (e.kind) {
    case BoolExpr::kVar:
      return vars[e.var] != 0;
    case BoolExpr::kNot:
      return !eval_bool_expr(*e.lhs, vars);
    case BoolExpr::kAnd:
      return eval_bool_expr(*e.lhs, vars) && eval_bool_expr(*e.rhs, vars);
    case BoolExpr::kOr:
      return eval_bool_expr(*e.lhs, vars) || eval_bool_expr(*e.rhs, vars);
  }
  throw std::logic_error("bad formula node");
}

namespace {

bool component_accepts(const Component& comp, const Forest& f) {
  if (const auto* c = std::get_if<CommutativeComponent>(&comp)) {
    ParikhVector pv = parikh(f);
    std::vector<int32_t> tuple;
    for (size_t i = 0; i < c->letters.size(); ++i)
      tuple.push_back(c->coord(i, pv.counts[c->letters[i]]));
    return std::find(c->accept.begin(), c->accept.end(), tuple) !=
           c->accept.end();
  }
  const auto& s = std::get<SingletonComponent>(comp);
  std::vector<bool> keep(f.alphabet.size(), false);
  for (int32_t l : s.subalphabet) keep[l] = true;
  Forest proj = project(f, keep);
  return proj.shape.parent == s.target.shape.parent &&
         proj.labels == s.target.labels;
}

}  // namespace

bool spec_accepts(const BooleanSpec& spec, const Forest& f) {
  if (!(f.alphabet == spec.alphabet))
    throw std::invalid_argument("forest alphabet does not match the spec");
  std::vector<char> vars;
  for (const Component& c : spec.components)
    vars.push_back(component_accepts(c, f) ? 1 : 0);
  return eval_bool_expr(*spec.formula, vars);
}

std::optional<std::string> spec_automaton_mismatch(const BooleanSpec& spec,
                                                   const ForestAutomaton& a,
                                                   int32_t max_nodes) {
  if (!(spec.alphabet == a.alphabet))
    return "the spec and the automaton use different alphabets";
  std::optional<std::string> found;
  for_each_forest(spec.alphabet, max_nodes, [&](const Forest& f) {
    if (found) return;
    bool want = accepts(a, f);
    bool got = spec_accepts(spec, f);
    if (want != got)
      found = "disagreement on '" + serialize_forest(f) + "': automaton " +
              (want ? "accepts" : "rejects") + ", spec " +
              (got ? "accepts" : "rejects");
  });
  return found;
}

}  // namespace dynforest
