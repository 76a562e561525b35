#include "dlnl/sexpr.hpp"

#include "dlnl/error.hpp"

namespace dlnl {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Sort: return "SortError";
    case ErrorKind::RuleMismatch: return "RuleMismatch";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::AdditiveContext: return "AdditiveContextError";
    case ErrorKind::Binder: return "BinderError";
    case ErrorKind::NotARedex: return "NotARedex";
    case ErrorKind::NotACommute: return "NotACommute";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::UnboundAtom: return "UnboundAtom";
    case ErrorKind::TooManyAtoms: return "TooManyAtoms";
    case ErrorKind::Usage: return "UsageError";
  }
  return "Error";
}

void sexp_error(const Sexp& at, const std::string& msg) {
  throw Error(ErrorKind::Parse, msg, {}, at.line, at.col);
}

namespace {

struct Reader {
  std::string_view s;
  std::size_t i = 0;
  int line = 1, col = 1;

  void advance() {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  void skip() {
    while (i < s.size()) {
      char c = s[i];
      if (c == ';') {
        while (i < s.size() && s[i] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void error(const std::string& msg) { throw Error(ErrorKind::Parse, msg, {}, line, col); }

  Sexp read() {
    skip();
    if (i >= s.size()) error("unexpected end of input");
    Sexp out;
    out.line = line;
    out.col = col;
    if (s[i] == '(') {
      out.is_list = true;
      advance();
      for (;;) {
        skip();
        if (i >= s.size()) error("unclosed '('");
        if (s[i] == ')') {
          advance();
          break;
        }
        out.items.push_back(read());
      }
      return out;
    }
    if (s[i] == ')') error("unexpected ')'");
    std::size_t start = i;
    while (i < s.size()) {
      char c = s[i];
      if (c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
      advance();
    }
    out.atom = std::string(s.substr(start, i - start));
    return out;
  }
};

}  // namespace

std::vector<Sexp> read_sexps(std::string_view text) {
  Reader r{text};
  std::vector<Sexp> out;
  for (;;) {
    r.skip();
    if (r.i >= text.size()) break;
    out.push_back(r.read());
  }
  return out;
}

Sexp read_one_sexp(std::string_view text) {
  Reader r{text};
  Sexp e = r.read();
  r.skip();
  if (r.i < text.size()) r.error("trailing input after expression");
  return e;
}

}  // namespace dlnl
