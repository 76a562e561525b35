// dlnl: batch front end over proof, derivation, judgment and sequent files.
//
// Exit status: 0 ok / proved / holds, 1 verification failure / unprovable /
// refuted, 2 parse or usage error.

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "dlnl/cut_elim.hpp"
#include "dlnl/error.hpp"
#include "dlnl/reduction.hpp"
#include "dlnl/search.hpp"
#include "dlnl/semantics.hpp"
#include "dlnl/sexpr.hpp"
#include "dlnl/translate.hpp"

using namespace dlnl;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2 };

bool g_json = false;
bool g_color = false;

bool want_color() {
  const char* v = std::getenv("DLNL_COLOR");
  std::string s = v ? v : "auto";
  if (s == "always") return true;
  if (s == "never") return false;
  return isatty(STDERR_FILENO);
}

// A failure while reading input is a parse error (exit 2), anything after
// that is a verification failure (exit 1).
struct Failure {
  Exit code;
  std::string file;
  Error err;
};

std::string diagnostic(const Failure& f) {
  const Error& e = f.err;
  if (g_json) {
    json j{{"ok", false}, {"file", f.file}, {"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    if (!e.path().empty() || f.code == kFail) j["path"] = e.path();
    if (e.line()) {
      j["line"] = e.line();
      j["col"] = e.col();
    }
    return j.dump() + "\n";
  }
  std::ostringstream o;
  o << f.file;
  if (e.line()) o << ":" << e.line() << ":" << e.col();
  o << ": " << (g_color ? "\033[31merror\033[0m" : "error") << "[" << error_kind_name(e.kind()) << "]: " << e.what();
  if (f.code == kFail) o << " (at node " << (e.path().empty() ? "root" : e.path()) << ")";
  return o.str() + "\n";
}

int report(const Failure& f) {
  std::cerr << diagnostic(f);
  return f.code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Usage, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Result line: plain text, or a JSON object with the same facts.
void emit(const std::string& text, json j = {}) {
  if (g_json) {
    j["ok"] = true;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << text << "\n";
  }
}

// Run `load` then `work`; errors in the first are exit 2, in the second exit 1.
template <class T, class Load, class Work>
int run(const std::string& file, Load load, Work work) {
  T x;
  try {
    x = load(slurp(file));
  } catch (const Error& e) {
    return report({kUsage, file, e});
  }
  try {
    return work(x);
  } catch (const Error& e) {
    return report({e.kind() == ErrorKind::Usage ? kUsage : kFail, file, e});
  }
}

// Per-file checks run in parallel; output keeps the argument order.
int check_files(const std::vector<std::string>& files, const std::function<std::pair<int, std::string>(const std::string&)>& one) {
  std::vector<std::future<std::pair<int, std::string>>> jobs;
  for (auto& f : files) jobs.push_back(std::async(std::launch::async, one, f));
  int worst = kOk;
  for (auto& j : jobs) {
    auto [code, out] = j.get();
    if (code == kOk) std::cout << out;
    else std::cerr << out;
    worst = std::max(worst, code);
  }
  return worst;
}

template <class Load, class Check>
std::pair<int, std::string> check_one(const std::string& file, Load load, Check check) {
  try {
    auto x = load(slurp(file));
    try {
      std::string s = check(x);
      if (g_json) return {kOk, json{{"ok", true}, {"file", file}, {"conclusion", s}}.dump() + "\n"};
      return {kOk, (file + ": " + s + "\n")};
    } catch (const Error& e) {
      return {kFail, diagnostic({kFail, file, e})};
    }
  } catch (const Error& e) {
    return {kUsage, diagnostic({kUsage, file, e})};
  }
}

// A sequent given inline, or the name of a file holding one.
Sequent sequent_arg(const std::string& s) {
  std::ifstream in(s);
  return parse_sequent(in ? slurp(s) : s);
}

std::string fmt_one(const Sexp& e, const std::string& text) {
  const std::string_view h = e.head();
  if (h == "proof") return print_proof(proof_from_sexp(e));
  if (h == "ndproof") return print_nd(nd_from_sexp(e));
  if (h == "seqC" || h == "seqL") return print_sequent(parse_sequent(text));
  if (h == "judgC" || h == "judgL") return print_judgment(judgment_from_sexp(e));
  return print_term(parse_term(text));
}

// The source text of each top-level expression, for parsers that take text.
std::vector<std::string> split_top(const std::string& src) {
  std::vector<std::string> out;
  int d = 0;
  std::size_t start = std::string::npos;
  bool comment = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (comment) {
      comment = c != '\n';
      continue;
    }
    if (c == ';') {
      comment = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (d == 0 && start != std::string::npos) {
        out.push_back(src.substr(start, i - start));
        start = std::string::npos;
      }
      continue;
    }
    if (start == std::string::npos) start = i;
    if (c == '(') ++d;
    if (c == ')' && --d == 0) {
      out.push_back(src.substr(start, i + 1 - start));
      start = std::string::npos;
    }
  }
  if (start != std::string::npos) out.push_back(src.substr(start));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checker, normalizer and search for dual linear/non-linear logic"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "JSON-lines output and diagnostics");

  std::vector<std::string> files;
  std::string file, out_path, seq, lattice = "chain3";
  bool to_seq = false, to_nd = false;
  std::size_t fuel = 10000;
  int depth_bound = 8;

  auto* check = app.add_subcommand("check", "check sequent-calculus proofs");
  check->add_option("FILE", files, "proof files")->required();
  auto* nd_check = app.add_subcommand("nd-check", "check natural deduction derivations");
  nd_check->add_option("FILE", files, "derivation files")->required();
  auto* type_check = app.add_subcommand("type-check", "type-check term-annotated derivations");
  type_check->add_option("FILE", files, "derivation files")->required();
  auto* cut_elim = app.add_subcommand("cut-eliminate", "cut-free proof of the same endsequent");
  cut_elim->add_option("FILE", file)->required();
  cut_elim->add_option("-o", out_path, "write the proof here instead of stdout");
  auto* translate = app.add_subcommand("translate", "natural deduction <-> sequent calculus");
  translate->add_option("FILE", file)->required();
  auto* dir = translate->add_option_group("direction");
  dir->add_flag("--to-seq", to_seq, "derivation to sequent proof");
  dir->add_flag("--to-nd", to_nd, "sequent proof to derivation");
  dir->require_option(1);
  auto* normalize_cmd = app.add_subcommand("normalize", "normalize a typing judgment or derivation");
  normalize_cmd->add_option("FILE", file)->required();
  normalize_cmd->add_option("--fuel", fuel, "maximum number of steps")->capture_default_str();
  auto* search_cmd = app.add_subcommand("search", "bounded search for a cut-free proof");
  search_cmd->add_option("SEQ", seq, "sequent, inline or a file")->required();
  search_cmd->add_option("--depth", depth_bound, "bound on logical rules per branch")->capture_default_str()->check(CLI::PositiveNumber);
  auto* refute_cmd = app.add_subcommand("refute", "look for a falsifying valuation");
  refute_cmd->add_option("SEQ", seq, "sequent, inline or a file")->required();
  refute_cmd->add_option("--lattice", lattice)->capture_default_str()->check(CLI::IsMember(lattice_names()));
  auto* fmt = app.add_subcommand("fmt", "print a file in canonical form");
  fmt->add_option("FILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  g_color = want_color();

  if (*check) {
    return check_files(files, [](const std::string& f) {
      return check_one(f, [](const std::string& s) { return parse_proof(s); },
                       [](const ProofPtr& p) { return show_sequent(check_proof(p)); });
    });
  }
  if (*nd_check) {
    return check_files(files, [](const std::string& f) {
      return check_one(f, [](const std::string& s) { return parse_nd(s); },
                       [](const NdPtr& p) { return show_sequent(check_nd(p)); });
    });
  }
  if (*type_check) {
    return check_files(files, [](const std::string& f) {
      return check_one(f, [](const std::string& s) { return parse_nd(s); },
                       [](const NdPtr& p) { return show_judgment(check_typing(p)); });
    });
  }
  if (*cut_elim) {
    return run<ProofPtr>(file, [](const std::string& s) { return parse_proof(s); }, [&](const ProofPtr& p) {
      check_proof(p);
      std::vector<int> ranks;
      ProofPtr q = eliminate(p, &ranks);
      const std::string text = print_proof(q);
      if (!out_path.empty()) {
        std::ofstream o(out_path);
        if (!o) throw Error(ErrorKind::Usage, "cannot write " + out_path);
        o << text << "\n";
      }
      json j{{"conclusion", show_sequent(q->conclusion)}, {"ranks", ranks}};
      if (out_path.empty()) j["proof"] = text;
      if (!out_path.empty()) emit(show_sequent(q->conclusion), j);
      else emit(text, j);
      return kOk;
    });
  }
  if (*translate) {
    if (to_seq) {
      return run<NdPtr>(file, [](const std::string& s) { return parse_nd(s); }, [](const NdPtr& p) {
        check_derivation(p);
        ProofPtr q = nd_to_seq(p);
        emit(print_proof(q), {{"proof", print_proof(q, false)}});
        return kOk;
      });
    }
    return run<ProofPtr>(file, [](const std::string& s) { return parse_proof(s); }, [](const ProofPtr& p) {
      check_proof(p);
      NdPtr q = seq_to_nd(p);
      emit(print_nd(q), {{"derivation", print_nd(q, false)}});
      return kOk;
    });
  }
  if (*normalize_cmd) {
    return run<Judgment>(file, [](const std::string& s) {
      Sexp e = read_one_sexp(s);
      if (e.head() == "ndproof") return check_typing(nd_from_sexp(e));
      return judgment_from_sexp(e);
    }, [&](const Judgment& j) {
      Fresh fresh;
      Normalized n = normalize(j, fuel, fresh);
      if (n.exhausted) throw Error(ErrorKind::FuelExhausted, "no normal form within " + std::to_string(fuel) + " steps");
      std::vector<std::string> trace;
      for (auto t : n.trace) trace.push_back(redex_tag_name(t));
      emit(print_judgment(n.result), {{"judgment", print_judgment(n.result)}, {"steps", n.steps}, {"trace", trace}});
      return kOk;
    });
  }
  if (*search_cmd) {
    Sequent s;
    try {
      s = sequent_arg(seq);
    } catch (const Error& e) {
      return report({kUsage, seq, e});
    }
    {
      SearchStats st;
      auto p = search(s, depth_bound, &st);
      if (!p) {
        if (g_json) std::cerr << json{{"ok", false}, {"kind", "Exhausted"}, {"bound", depth_bound}, {"nodes", st.nodes}}.dump() << "\n";
        else std::cerr << "Exhausted: no cut-free proof of " << show_sequent(s) << " within bound " << depth_bound << "\n";
        return kFail;
      }
      emit(print_proof(*p), {{"proof", print_proof(*p, false)}, {"nodes", st.nodes}});
      return kOk;
    }
  }
  if (*refute_cmd) {
    Sequent s;
    try {
      s = sequent_arg(seq);
    } catch (const Error& e) {
      return report({kUsage, seq, e});
    }
    try {
      const Lattice& l = lattice_by_name(lattice);
      auto v = refute(s, l);
      if (!v) {
        emit(show_sequent(s) + " holds in " + lattice, {{"holds", true}, {"lattice", lattice}});
        return kOk;
      }
      json val;
      std::string text;
      for (auto& [a, e] : *v) {
        val[a] = l.show(e);
        text += (text.empty() ? "" : " ") + a + "=" + l.show(e);
      }
      if (g_json) std::cerr << json{{"ok", false}, {"kind", "Refuted"}, {"lattice", lattice}, {"valuation", val}}.dump() << "\n";
      else std::cerr << "Refuted in " << lattice << ": " << text << "\n";
      return kFail;
    } catch (const Error& e) {
      return report({kFail, seq, e});
    }
  }
  if (*fmt) {
    return run<std::string>(file, [](const std::string& s) {
      std::string out;
      for (const std::string& part : split_top(s)) {
        if (!out.empty()) out += "\n";
        out += fmt_one(read_one_sexp(part), part) + "\n";
      }
      return out;
    }, [](const std::string& out) {
      std::cout << out;
      return kOk;
    });
  }
  return kUsage;
}
