#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dlnl {

// Minimal S-expression reader for the prefix file formats. `;` starts a
// comment that runs to end of line.
struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0, col = 0;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  // The head symbol of a list, or "" if this is an atom or an empty list.
  std::string_view head() const {
    if (!is_list || items.empty() || items[0].is_list) return {};
    return items[0].atom;
  }
};

std::vector<Sexp> read_sexps(std::string_view text);
Sexp read_one_sexp(std::string_view text);

[[noreturn]] void sexp_error(const Sexp& at, const std::string& msg);

}  // namespace dlnl
