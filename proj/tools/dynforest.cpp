// Command line front end: membership checks, algebra dumps, workload
// generation, and maintained membership bits under relabel scripts.
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dynforest/algebra.hpp"
#include "dynforest/automaton.hpp"
#include "dynforest/langspec.hpp"
#include "dynforest/maintain.hpp"
#include "dynforest/workload.hpp"
#include "dynforest/zg.hpp"

namespace {

using namespace dynforest;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

int32_t cap_from_env() {
  const char* raw = std::getenv("DYNFOREST_CAP");
  if (!raw) return kDefaultAlgebraCap;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (!end || *end != '\0' || v < 1)
    throw std::runtime_error("DYNFOREST_CAP must be a positive integer");
  return static_cast<int32_t>(v);
}

bool looks_like_spec(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "component" || word == "formula:") return true;
    if (word == "tree-states:") return false;
  }
  return false;
}

struct Language {
  std::optional<ForestAutomaton> automaton;
  std::optional<BooleanSpec> spec;

  const Alphabet& alphabet() const {
    return spec ? spec->alphabet : automaton->alphabet;
  }
};

Language load_language(const std::string& path) {
  std::string text = read_file(path);
  Language lang;
  if (looks_like_spec(text))
    lang.spec = parse_boolean_spec(text);
  else
    lang.automaton = parse_automaton(text);
  return lang;
}

std::string identity_line(const IdentityResult& r) {
  return "identity " + r.name + ": " + (r.holds ? "holds" : "fails");
}

int run_check(const std::string& automaton_path,
              const std::string& forest_path) {
  ForestAutomaton a = parse_automaton(read_file(automaton_path));
  Forest f = parse_forest(read_file(forest_path), a.alphabet);
  bool ok = accepts(a, f);
  std::cout << (ok ? "accepted" : "rejected") << "\n";
  return ok ? 0 : 1;
}

int run_algebra(const std::string& automaton_path, bool syntactic, bool zg) {
  ForestAutomaton a = parse_automaton(read_file(automaton_path));
  Recognizer rec = transition_algebra(a, cap_from_env());
  if (syntactic) rec = minimize_to_syntactic(rec);
  assign_names(rec);
  std::cout << dump_algebra(rec);
  if (zg) {
    ZGReport report = zg_report(rec.algebra);
    std::cout << "zg: " << (report.zg ? "yes" : "no");
    if (report.witness)
      std::cout << " (violated by v=" << rec.algebra.v_names[report.witness->first]
                << " w=" << rec.algebra.v_names[report.witness->second] << ")";
    std::cout << "\n";
    for (const IdentityResult& r : report.identities)
      std::cout << identity_line(r) << "\n";
  }
  return 0;
}

std::unique_ptr<Maintainer> make_maintainer(const std::string& strategy,
                                            const Language& lang,
                                            const Forest& forest,
                                            std::optional<int32_t> k,
                                            bool prefill) {
  if (strategy == "naive")
    return std::make_unique<NaiveMaintainer>(forest, *lang.automaton);
  if (strategy == "general")
    return std::make_unique<GeneralMaintainer>(forest, *lang.automaton, k,
                                               cap_from_env(), prefill);
  throw std::runtime_error("unknown strategy '" + strategy + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "regular forest languages: membership, algebra, and maintained "
      "membership under node relabelings"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand(
      "check", "test one forest for membership (exit 0 = accepted, 1 = "
               "rejected, 2 = error)");
  std::string check_automaton, check_forest;
  check->add_option("automaton", check_automaton, "automaton file")
      ->required();
  check->add_option("forest", check_forest, "forest term file, - for stdin")
      ->required();

  auto* algebra = app.add_subcommand(
      "algebra", "print the transition algebra of an automaton");
  std::string algebra_automaton;
  bool algebra_syntactic = false, algebra_zg = false;
  algebra->add_option("automaton", algebra_automaton, "automaton file")
      ->required();
  algebra->add_flag("--syntactic", algebra_syntactic,
                    "quotient to the syntactic algebra first");
  algebra->add_flag("--zg", algebra_zg,
                    "append the commutation report and the identity suite");

  auto* maintain = app.add_subcommand(
      "maintain", "run an update script, printing the membership bit after "
                  "the build and after every update");
  std::string m_lang, m_forest, m_updates, m_strategy = "auto", m_reference;
  bool m_verify = false, m_prefill = false;
  int32_t m_k = 0, m_equiv = 7;
  maintain->add_option("language", m_lang,
                       "automaton file or boolean spec file")->required();
  maintain->add_option("--forest", m_forest, "forest term file")->required();
  maintain->add_option("--updates", m_updates, "update script")->required();
  maintain->add_option("--automaton", m_reference,
                       "reference automaton for a spec language");
  maintain->add_option("--strategy", m_strategy,
                       "naive, general, o1 or auto");
  maintain->add_option("--k", m_k, "cluster size bound override");
  maintain->add_option("--equiv-size", m_equiv,
                       "bound for the spec/automaton equivalence check");
  maintain->add_flag("--verify", m_verify,
                     "recheck every bit against a reference");
  maintain->add_flag("--prefill", m_prefill,
                     "precompute the small-forest tables eagerly");

  auto* gen = app.add_subcommand("gen", "generate a forest and updates");
  std::string g_kind = "random", g_alphabet = "a,b";
  std::string g_forest = "-", g_updates;
  int32_t g_n = 0, g_count = 0;
  uint64_t g_seed = 1;
  gen->add_option("--kind", g_kind, "random, chain, star, binary or comb");
  gen->add_option("--n", g_n, "node count")->required();
  gen->add_option("--seed", g_seed, "rng seed");
  gen->add_option("--alphabet", g_alphabet, "comma separated letters");
  gen->add_option("--updates", g_count, "number of updates to draw");
  gen->add_option("--out-forest", g_forest, "forest output path");
  gen->add_option("--out-updates", g_updates, "updates output path");

  auto* bench = app.add_subcommand(
      "bench", "per-strategy step statistics over an update script");
  std::string b_lang, b_forest, b_updates, b_strategies = "naive,general";
  std::string b_reference;
  bool b_prefill = false;
  int32_t b_k = 0;
  bench->add_option("language", b_lang, "automaton or boolean spec file")
      ->required();
  bench->add_option("--forest", b_forest, "forest term file")->required();
  bench->add_option("--updates", b_updates, "update script")->required();
  bench->add_option("--strategies", b_strategies, "comma separated list");
  bench->add_option("--automaton", b_reference,
                    "reference automaton for a spec language");
  bench->add_option("--k", b_k, "cluster size bound override");
  bench->add_flag("--prefill", b_prefill,
                  "precompute the small-forest tables eagerly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (check->parsed()) return run_check(check_automaton, check_forest);
    if (algebra->parsed())
      return run_algebra(algebra_automaton, algebra_syntactic, algebra_zg);

    if (gen->parsed()) {
      std::vector<std::string> letters;
      std::istringstream ls(g_alphabet);
      std::string piece;
      while (std::getline(ls, piece, ',')) letters.push_back(piece);
      Alphabet alphabet(letters);
      Forest f = random_forest(g_kind, g_n, g_seed, alphabet);
      write_file(g_forest, serialize_forest(f) + "\n");
      if (g_count > 0) {
        if (g_updates.empty())
          throw std::runtime_error("--updates requires --out-updates");
        write_file(g_updates,
                   write_updates(random_updates(f, g_count, g_seed + 1),
                                 alphabet));
      }
      return 0;
    }

    if (maintain->parsed() || bench->parsed()) {
      bool is_bench = bench->parsed();
      const std::string& lang_path = is_bench ? b_lang : m_lang;
      const std::string& forest_path = is_bench ? b_forest : m_forest;
      const std::string& updates_path = is_bench ? b_updates : m_updates;
      const std::string& ref_path = is_bench ? b_reference : m_reference;
      int32_t k_raw = is_bench ? b_k : m_k;
      bool prefill = is_bench ? b_prefill : m_prefill;

      Language lang = load_language(lang_path);
      std::optional<int32_t> k;
      if (k_raw > 0) k = k_raw;
      if (!ref_path.empty()) {
        if (!lang.spec)
          throw std::runtime_error(
              "--automaton only applies to spec languages");
        lang.automaton = parse_automaton(read_file(ref_path));
        auto mismatch =
            spec_automaton_mismatch(*lang.spec, *lang.automaton, m_equiv);
        if (mismatch)
          throw std::runtime_error("spec/automaton equivalence check: " +
                                   *mismatch);
      }
      Forest forest =
          parse_forest(read_file(forest_path), lang.alphabet());
      std::vector<Update> updates =
          parse_updates(read_file(updates_path), lang.alphabet());

      auto build = [&](const std::string& name) -> std::unique_ptr<Maintainer> {
        std::string s = name;
        if (s == "auto") s = lang.spec ? "o1" : "general";
        if (s == "o1") {
          if (!lang.spec)
            throw std::runtime_error("strategy o1 requires a boolean spec");
          // BooleanSpec is move-only; give the maintainer its own copy.
          return std::make_unique<BooleanMaintainer>(
              forest, parse_boolean_spec(read_file(lang_path)));
        }
        if (!lang.automaton)
          throw std::runtime_error("strategy " + s +
                                   " requires an automaton (see --automaton)");
        return make_maintainer(s, lang, forest, k, prefill);
      };

      if (!is_bench) {
        auto m = build(m_strategy);
        std::unique_ptr<Maintainer> ref;
        if (m_verify && lang.automaton && m->strategy() != "naive")
          ref = std::make_unique<NaiveMaintainer>(forest, *lang.automaton);
        auto reference_bit = [&]() -> std::optional<bool> {
          if (!m_verify) return std::nullopt;
          if (ref) return ref->current();
          if (lang.spec) return spec_accepts(*lang.spec, forest);
          return std::nullopt;
        };
        auto check_bit = [&](bool bit) {
          auto want = reference_bit();
          if (want && *want != bit)
            throw std::runtime_error("verification failed: maintained bit " +
                                     std::to_string(bit) + ", reference " +
                                     std::to_string(*want));
        };
        std::cout << (m->current() ? 1 : 0) << "\n";
        check_bit(m->current());
        for (const Update& u : updates) {
          bool bit = m->relabel(u.node, u.letter);
          forest.labels[u.node] = u.letter;
          if (ref) ref->relabel(u.node, u.letter);
          check_bit(bit);
          std::cout << (bit ? 1 : 0) << "\n";
        }
        return 0;
      }

      std::vector<std::string> strategies;
      std::istringstream ss(b_strategies);
      std::string name_piece;
      while (std::getline(ss, name_piece, ',')) strategies.push_back(name_piece);
      std::optional<bool> final_bit;
      for (const std::string& name : strategies) {
        auto m = build(name);
        std::vector<uint64_t> steps;
        steps.reserve(updates.size());
        bool bit = m->current();
        for (const Update& u : updates) {
          bit = m->relabel(u.node, u.letter);
          steps.push_back(m->last_update().steps);
        }
        std::sort(steps.begin(), steps.end());
        auto pct = [&](double q) -> uint64_t {
          if (steps.empty()) return 0;
          return steps[static_cast<size_t>(q * (steps.size() - 1))];
        };
        std::cout << "strategy=" << m->strategy()
                  << " build=" << m->build_steps();
        if (auto* g = dynamic_cast<GeneralMaintainer*>(m.get()))
          std::cout << " levels=" << g->num_levels();
        else
          std::cout << " levels=-";
        std::cout << " p50=" << pct(0.50) << " p99=" << pct(0.99)
                  << " max=" << (steps.empty() ? 0 : steps.back())
                  << " final_bit=" << (bit ? 1 : 0) << "\n";
        if (final_bit && *final_bit != bit)
          throw std::runtime_error(
              "strategies disagree on the final membership bit");
        final_bit = bit;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
