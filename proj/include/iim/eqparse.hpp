#pragma once

// Text format for dependency systems (".iim"):
//
//   # comment
//   A: gen_1 gen_2          layer declarations
//   B: tower_1
//   a1 <- b1*b2 + b3        equation: minterms joined by '+', members by '*'
//
// Undeclared names take their layer from a leading 'a' or 'b'.

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iim/model.hpp"

namespace iim {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

namespace detail {

enum class Tok { ident, arrow, plus, star, colon };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    const std::size_t col = i + 1;
    if (c == '<' && i + 1 < line.size() && line[i + 1] == '-') {
      out.push_back({Tok::arrow, "<-", col});
      i += 2;
    } else if (c == '+') {
      out.push_back({Tok::plus, "+", col});
      ++i;
    } else if (c == '*') {
      out.push_back({Tok::star, "*", col});
      ++i;
    } else if (c == ':') {
      out.push_back({Tok::colon, ":", col});
      ++i;
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      std::string text(line.substr(i, j - i));
      if (!is_identifier(text))
        throw ParseError(line_no, col, "invalid identifier '" + text + "'");
      out.push_back({Tok::ident, std::move(text), col});
      i = j;
    } else {
      throw ParseError(line_no, col, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

struct Ref {
  std::string name;
  std::size_t line;
  std::size_t column;
};

struct ParsedEquation {
  Ref target;
  std::vector<std::vector<Ref>> minterms;
};

}  // namespace detail

/// Parses rule-file text. Equation order does not matter; declarations may
/// appear anywhere in the file.
inline DependencySystem parse_text(std::string_view input) {
  using detail::Tok;
  std::map<std::string, std::pair<Layer, detail::Ref>> declared;
  std::vector<detail::Ref> decl_order;
  std::vector<detail::ParsedEquation> equations;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    const auto eol = input.find('\n', pos);
    std::string_view line = input.substr(pos, eol == std::string_view::npos ? input.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? input.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto toks = detail::tokenize_line(line, line_no);
    if (toks.empty()) continue;
    const auto end_col = line.size() == 0 ? 1 : line.size();

    if (toks.size() >= 2 && toks[0].kind == Tok::ident && toks[1].kind == Tok::colon) {
      if (toks[0].text != "A" && toks[0].text != "B")
        throw ParseError(line_no, toks[0].column, "unknown layer '" + toks[0].text + "'");
      const Layer layer = toks[0].text == "A" ? Layer::A : Layer::B;
      for (std::size_t k = 2; k < toks.size(); ++k) {
        if (toks[k].kind != Tok::ident)
          throw ParseError(line_no, toks[k].column, "expected identifier in declaration");
        detail::Ref ref{toks[k].text, line_no, toks[k].column};
        auto [it, inserted] = declared.emplace(toks[k].text, std::make_pair(layer, ref));
        if (!inserted && it->second.first != layer)
          throw ParseError(line_no, toks[k].column,
                           "'" + toks[k].text + "' declared in both layers");
        if (inserted) decl_order.push_back(ref);
      }
      continue;
    }

    if (toks[0].kind != Tok::ident)
      throw ParseError(line_no, toks[0].column, "expected identifier at start of line");
    if (toks.size() < 2 || toks[1].kind != Tok::arrow)
      throw ParseError(line_no, toks.size() < 2 ? toks[0].column : toks[1].column,
                       toks.size() >= 2 && toks[1].kind == Tok::ident
                           ? "expected '<-' after target (juxtaposition is not conjunction)"
                           : "expected '<-' after target");

    detail::ParsedEquation eq{{toks[0].text, line_no, toks[0].column}, {}};
    if (toks.size() == 2) throw ParseError(line_no, toks[1].column, "empty right-hand side");

    std::vector<detail::Ref> current;
    bool expect_ident = true;
    std::size_t last_col = toks[1].column;
    for (std::size_t k = 2; k < toks.size(); ++k) {
      const auto& t = toks[k];
      if (expect_ident) {
        if (t.kind != Tok::ident) {
          throw ParseError(line_no, t.column,
                           current.empty() ? "empty minterm" : "expected identifier after '*'");
        }
        current.push_back({t.text, line_no, t.column});
        expect_ident = false;
      } else if (t.kind == Tok::star) {
        expect_ident = true;
      } else if (t.kind == Tok::plus) {
        eq.minterms.push_back(std::move(current));
        current.clear();
        expect_ident = true;
      } else if (t.kind == Tok::ident) {
        throw ParseError(line_no, t.column, "expected '+' or '*' between identifiers");
      } else {
        throw ParseError(line_no, t.column, "unexpected '" + t.text + "'");
      }
      last_col = t.column;
    }
    if (expect_ident) {
      throw ParseError(line_no, std::min<std::size_t>(last_col, end_col),
                       current.empty() ? "empty minterm" : "expected identifier after '*'");
    }
    eq.minterms.push_back(std::move(current));
    equations.push_back(std::move(eq));
  }

  SystemBuilder builder;
  auto add = [&](const detail::Ref& ref) {
    if (builder.contains(ref.name)) return;
    if (auto it = declared.find(ref.name); it != declared.end()) {
      builder.add_entity(ref.name, it->second.first);
    } else if (ref.name.front() == 'a') {
      builder.add_entity(ref.name, Layer::A);
    } else if (ref.name.front() == 'b') {
      builder.add_entity(ref.name, Layer::B);
    } else {
      throw ParseError(ref.line, ref.column,
                       "cannot determine layer of '" + ref.name + "'; declare it with A: or B:");
    }
  };
  for (const auto& ref : decl_order) add(ref);

  std::unordered_map<std::string, std::size_t> lhs_line;
  for (const auto& eq : equations) {
    if (auto [it, inserted] = lhs_line.emplace(eq.target.name, eq.target.line); !inserted) {
      throw ParseError(eq.target.line, eq.target.column,
                       "duplicate left-hand side " + eq.target.name + " (first on line " +
                           std::to_string(it->second) + ")");
    }
    add(eq.target);
    std::vector<std::vector<std::string>> mts;
    for (const auto& mt : eq.minterms) {
      std::vector<std::string> names;
      for (const auto& m : mt) {
        add(m);
        names.push_back(m.name);
      }
      mts.push_back(std::move(names));
    }
    builder.add_equation(eq.target.name, mts);
  }
  return builder.build();
}

inline DependencySystem parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

/// Renders one equation as "target <- m1 + m2" with '*'-joined members.
inline std::string format_equation(const DependencySystem& system, const LiveEquation& eq) {
  std::string s = system.name(eq.target) + " <-";
  for (std::size_t j = 0; j < eq.minterms.size(); ++j) {
    s += j == 0 ? " " : " + ";
    const auto& members = eq.minterms[j].members;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k) s += '*';
      s += system.name(members[k]);
    }
  }
  return s;
}

/// Canonical text: sorted layer declarations, then equations by target.
inline std::string serialize_text(const DependencySystem& system) {
  constexpr std::size_t kWrap = 96;
  std::string out;
  for (Layer layer : {Layer::A, Layer::B}) {
    std::string line;
    for (const auto& e : system.entities()) {
      if (e.layer != layer) continue;
      if (!line.empty() && line.size() + 1 + e.name.size() > kWrap) {
        out += line + '\n';
        line.clear();
      }
      if (line.empty()) line = std::string(to_string(layer)) + ":";
      line += ' ' + e.name;
    }
    if (!line.empty()) out += line + '\n';
  }
  if (!system.equations().empty()) {
    if (!out.empty()) out += '\n';
    for (const auto& eq : system.equations()) out += format_equation(system, eq) + '\n';
  }
  return out;
}

inline void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace iim
