#include "arborify/arborify.hpp"
#include "arborify/checks.hpp"
#include "arborify/evaluation.hpp"
#include "arborify/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace arborify;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Inputs {
  std::vector<std::string> exprs;
  std::vector<std::string> files;

  void attach(CLI::App* app) {
    app->add_option("-e,--expr", exprs, "inline DSL text");
    app->add_option("files", files, ".arb input files")->check(CLI::ExistingFile);
  }
  std::vector<Document> load() const {
    std::vector<Document> docs;
    for (const auto& e : exprs) docs.push_back(parse_document(e));
    for (const auto& f : files) docs.push_back(parse_document(read_file(f)));
    if (docs.empty()) throw UsageError("no input: give -e EXPR or a FILE");
    return docs;
  }
};

Model doc_model(const Document& d, const std::string& flag) {
  if (!flag.empty()) return parse_model(flag);
  return d.model.value_or(Model::NLS);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string complex_text(Complex z) {
  std::ostringstream o;
  o << std::setprecision(17) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return o.str();
}

EtaMode parse_eta(const std::string& s) {
  if (s == "error") return EtaMode::Error;
  if (s == "ones") return EtaMode::Ones;
  if (s == "sample") return EtaMode::Sample;
  throw UsageError("--eta must be error, ones or sample");
}

// Complex Gaussian draws with E|eta|^2 = 1, one per frequency, in frequency order.
void sample_eta(EvalParams& p, const std::vector<Frequency>& freqs) {
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::set<Frequency> seen(freqs.begin(), freqs.end());
  for (const auto& k : seen) {
    const double re = g(rng);
    p.eta[k] = Complex(re, g(rng));
  }
}

void collect(const Node& n, std::vector<Frequency>& out) {
  if (n.is_leaf()) out.push_back(n.freq);
  for (const auto& c : n.children) collect(c, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decorated trees, arborification and word evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false, strict = false, timing = false;
  std::uint64_t seed = 42;
  app.add_flag("--json", as_json, "JSON report");
  app.add_flag("--strict", strict, "numeric warnings are errors (exit 3)");
  app.add_flag("--timing", timing, "include wall time");
  app.add_option("--seed", seed, "random seed")->capture_default_str();

  auto* parse_cmd = app.add_subcommand("parse", "parse and print in canonical form");
  Inputs parse_in;
  parse_in.attach(parse_cmd);

  auto* arb_cmd = app.add_subcommand("arborify", "map trees to words");
  Inputs arb_in;
  arb_in.attach(arb_cmd);
  std::string arb_model, via = "recursive";
  arb_cmd->add_option("--model", arb_model)->check(CLI::IsMember({"nls", "wave"}));
  arb_cmd->add_option("--via", via)->check(CLI::IsMember({"recursive", "coproduct", "both"}))->capture_default_str();

  auto* shuf_cmd = app.add_subcommand("shuffle", "shuffle product of two word polynomials");
  Inputs shuf_in;
  shuf_in.attach(shuf_cmd);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a tree or word polynomial");
  Inputs eval_in;
  eval_in.attach(eval_cmd);
  std::string eval_model, eta = "error";
  EvalParams ep;
  eval_cmd->add_option("--model", eval_model)->check(CLI::IsMember({"nls", "wave"}));
  eval_cmd->add_option("--t", ep.t)->capture_default_str();
  eval_cmd->add_option("--L", ep.L)->capture_default_str();
  eval_cmd->add_option("--mu", ep.mu)->capture_default_str();
  eval_cmd->add_option("--N", ep.N)->capture_default_str();
  eval_cmd->add_option("--quad", ep.quad_order)->capture_default_str();
  eval_cmd->add_option("--eta", eta, "error, ones or sample")->capture_default_str();
  eval_cmd->add_flag("--self-check", ep.self_check, "compare with half quadrature order");

  auto* ver_cmd = app.add_subcommand("verify", "run numeric and symbolic checks");
  std::vector<std::string> checks;
  VerifyOptions vo;
  ver_cmd->add_option("checks", checks, "check names or 'all'")->required();
  ver_cmd->add_option("--trials", vo.trials)->capture_default_str();
  ver_cmd->add_option("--tol", vo.tol, "override the per-check tolerance");
  ver_cmd->add_option("--N", vo.N)->capture_default_str();
  ver_cmd->add_option("--t", vo.t)->capture_default_str();
  ver_cmd->add_option("--quad", vo.quad)->capture_default_str();

  auto* render_cmd = app.add_subcommand("render", "render trees or words");
  Inputs render_in;
  render_in.attach(render_cmd);
  bool dot = false;
  render_cmd->add_flag("--dot", dot, "Graphviz output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  json report{{"schema", "arborify-report/v1"}, {"seed", seed}};
  json cmd = json::array();
  for (int i = 1; i < argc; ++i) cmd.push_back(argv[i]);
  report["command"] = cmd;
  std::ostringstream text;
  Status overall = Status::Pass;
  const auto worse = [&](Status s) {
    if (s == Status::Fail || (s == Status::Warn && overall == Status::Pass)) overall = s;
  };

  try {
    if (*parse_cmd) {
      json out = json::array();
      for (const auto& d : parse_in.load()) {
        if (d.trees) {
          text << print_tree(*d.trees);
          out.push_back(to_json(*d.trees));
        } else {
          text << print_word(*d.words);
          out.push_back(to_json(*d.words));
        }
      }
      report["result"] = out;
    } else if (*arb_cmd) {
      json out = json::array();
      for (const auto& d : arb_in.load()) {
        if (!d.trees) throw UsageError("arborify expects a tree polynomial");
        const Model m = doc_model(d, arb_model);
        std::vector<WordPoly> results;
        if (via != "coproduct") results.push_back(arborify::arborify(*d.trees, m));
        if (via != "recursive") {
          WordPoly cp;
          for (const auto& [t, c] : *d.trees) cp += scale(arborify_cp(t, m), c);
          results.push_back(cp);
        }
        for (const auto& w : results) {
          text << print_word(w);
          out.push_back(to_json(w));
        }
        if (results.size() == 2 && !(results[0] == results[1])) {
          worse(Status::Fail);
          text << "recursive and coproduct results differ\n";
        }
      }
      report["result"] = out;
    } else if (*shuf_cmd) {
      const auto docs = shuf_in.load();
      if (docs.size() != 2 || !docs[0].words || !docs[1].words)
        throw UsageError("shuffle expects exactly two word polynomials");
      const WordPoly w = shuffle(*docs[0].words, *docs[1].words);
      text << print_word(w);
      report["result"] = to_json(w);
    } else if (*eval_cmd) {
      ep.seed = seed;
      ep.eta_mode = parse_eta(eta);
      json out = json::array();
      for (const auto& d : eval_in.load()) {
        EvalParams p = ep;
        EvalStats st;
        Complex v;
        std::vector<Frequency> freqs;
        if (d.trees) {
          for (const auto& [t, c] : *d.trees) collect(t.tree.root, freqs);
          if (!d.trees->empty()) p.d = d.trees->begin()->first.tree.dim;
        } else {
          for (const auto& [w, c] : *d.words)
            for (const auto& l : w.letters)
              for (const auto& s : l.slots) {
                freqs.push_back(s.freq);
                p.d = s.freq.dim();
              }
        }
        if (p.eta_mode == EtaMode::Sample) sample_eta(p, freqs);
        if (d.trees)
          v = eval_treepoly(*d.trees, p, doc_model(d, eval_model), &st);
        else
          v = eval_wordpoly(*d.words, p, &st);
        if (st.warning) worse(Status::Warn);
        text << complex_text(v) << (st.warning ? "  (quadrature warning)" : "") << "\n";
        out.push_back({{"value", complex_json(v)}, {"warning", st.warning}});
      }
      report["result"] = out;
    } else if (*ver_cmd) {
      vo.seed = seed;
      std::vector<std::string> names;
      for (const auto& c : checks) {
        if (c == "all")
          names.insert(names.end(), check_names().begin(), check_names().end());
        else if (std::find(check_names().begin(), check_names().end(), c) == check_names().end())
          throw UsageError("unknown check '" + c + "'");
        else
          names.push_back(c);
      }
      json arr = json::array();
      text << std::left << std::setw(24) << "check" << std::setw(8) << "status" << std::setw(12) << "residual"
           << std::setw(12) << "tol" << "detail\n";
      for (const auto& n : names)
        for (const auto& r : run_check(n, vo)) {
          worse(r.status);
          arr.push_back({{"name", r.name},
                         {"status", to_string(r.status)},
                         {"residual", r.residual},
                         {"tol", r.tol},
                         {"detail", r.detail}});
          std::ostringstream res, tol;
          res << std::setprecision(3) << std::scientific << r.residual;
          tol << std::setprecision(3) << std::scientific << r.tol;
          text << std::setw(24) << r.name << std::setw(8) << to_string(r.status) << std::setw(12) << res.str()
               << std::setw(12) << tol.str() << r.detail << "\n";
        }
      report["checks"] = arr;
    } else if (*render_cmd) {
      json out = json::array();
      int idx = 0;
      for (const auto& d : render_in.load()) {
        if (d.trees)
          for (const auto& [t, c] : *d.trees) {
            const std::string g = to_dot(t, "tree" + std::to_string(idx++));
            text << g;
            out.push_back(g);
          }
        else
          for (const auto& [w, c] : *d.words) {
            const std::string g = to_dot(w, "word" + std::to_string(idx++));
            text << g;
            out.push_back(g);
          }
      }
      report["result"] = out;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  report["status"] = to_string(overall);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (timing) report["wall_time_s"] = wall;
  if (as_json) {
    std::cout << json_text(report);
  } else {
    std::cout << text.str();
    if (*ver_cmd) std::cout << "overall: " << to_string(overall) << "\n";
    if (timing) std::cout << "wall time: " << wall << " s\n";
  }
  if (overall == Status::Fail) return 1;
  if (overall == Status::Warn && strict) return 3;
  return 0;
}
