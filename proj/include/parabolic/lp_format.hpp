// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "parabolic/milp.hpp"

namespace parabolic {

namespace detail {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void append_expr(std::string& out, const std::vector<LinTerm>& terms,
                        const MilpModel& model) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coeff == 0) continue;
    const double a = std::abs(t.coeff);
    if (first) {
      out += t.coeff < 0 ? "- " : "";
      first = false;
    } else {
      out += t.coeff < 0 ? " - " : " + ";
    }
    if (a != 1.0) {
      out += fmt_num(a);
      out += ' ';
    }
    out += model.vars[t.var].name;
  }
  if (first) out += "0 dummy_zero";
}

}  // namespace detail

// CPLEX LP text: Minimize / Subject To / Bounds / Binaries / End, variables
// in declaration order. Round-trips through parse_lp.
inline std::string export_lp(const MilpModel& model) {
  std::string out;
  out += "\\ generated LP model\n";
  out += "Minimize\n obj: ";
  detail::append_expr(out, model.objective, model);
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < model.cons.size(); ++i) {
    const auto& c = model.cons[i];
    out += ' ';
    out += c.name.empty() ? "c" + std::to_string(i) : c.name;
    out += ": ";
    detail::append_expr(out, c.terms, model);
    switch (c.sense) {
      case Sense::le: out += " <= "; break;
      case Sense::ge: out += " >= "; break;
      case Sense::eq: out += " = "; break;
    }
    out += detail::fmt_num(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : model.vars) {
    out += ' ';
    out += std::isfinite(v.lb) ? detail::fmt_num(v.lb) : "-inf";
    out += " <= " + v.name + " <= ";
    out += std::isfinite(v.ub) ? detail::fmt_num(v.ub) : "+inf";
    out += '\n';
  }
  bool any_bin = false;
  for (const auto& v : model.vars)
    if (v.kind == VarKind::binary) any_bin = true;
  if (any_bin) {
    out += "Binaries\n";
    int col = 0;
    for (const auto& v : model.vars) {
      if (v.kind != VarKind::binary) continue;
      if (col == 0) out += ' ';
      out += v.name;
      col += static_cast<int>(v.name.size()) + 1;
      if (col > 70) {
        out += '\n';
        col = 0;
      } else {
        out += ' ';
      }
    }
    if (col != 0) out += '\n';
  }
  out += "End\n";
  return out;
}

namespace detail {

struct LpToken {
  enum Kind { word, number, op, end } kind = end;
  std::string text;
  double value = 0;
};

class LpLexer {
public:
  explicit LpLexer(const std::string& src) : src_(src) {}

  LpToken next() {
    skip_ws();
    LpToken t;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (c == '<' || c == '>' || c == '=' || c == ':' || c == '+' || c == '-') {
      t.kind = LpToken::op;
      t.text = c;
      ++pos_;
      if ((c == '<' || c == '>') && pos_ < src_.size() && src_[pos_] == '=')
        ++pos_;  // <= and >= collapse to < and >
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      t.kind = LpToken::number;
      t.value = std::stod(src_.substr(pos_), &used);
      t.text = src_.substr(pos_, used);
      pos_ += used;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_' || src_[pos_] == '.' || src_[pos_] == '(' ||
              src_[pos_] == ')'))
        ++pos_;
      t.kind = LpToken::word;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    throw schema_error(std::string("lp parse: unexpected character '") + c +
                       "'");
  }

private:
  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '\\') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline bool is_keyword(const LpToken& t, const char* kw) {
  return t.kind == LpToken::word && lower(t.text) == kw;
}

}  // namespace detail

inline void finish_constraint(MilpModel& model, std::vector<LinTerm> terms,
                              double constant, detail::LpToken& tok,
                              detail::LpLexer& lex, const std::string& name);

// Parses the subset of the LP format emitted by export_lp (plus the usual
// bound syntax variations). Unknown variables get default bounds [0, +inf).
inline MilpModel parse_lp(const std::string& text) {
  using detail::LpToken;
  detail::LpLexer lex(text);
  MilpModel model;
  std::map<std::string, int> index;
  auto var_of = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const int id = model.add_var(name, VarKind::continuous, 0.0, kInf);
    index.emplace(name, id);
    return id;
  };

  LpToken tok = lex.next();
  auto expect_section = [&](const char* what) {
    if (tok.kind == LpToken::end)
      throw schema_error(std::string("lp parse: missing section ") + what);
  };
  expect_section("Minimize");
  {
    std::string head = detail::lower(tok.text);
    if (head == "maximize" || head == "max")
      throw schema_error("lp parse: only minimization is supported");
    if (head != "minimize" && head != "min")
      throw schema_error("lp parse: expected Minimize");
    tok = lex.next();
  }

  // Reads one linear expression; leaves the terminating token in `tok`.
  auto parse_expr = [&](std::vector<LinTerm>& terms, double& constant) {
    double sign = 1;
    bool pending_coeff = false;
    double coeff = 1;
    for (;;) {
      if (tok.kind == LpToken::op && (tok.text == "+" || tok.text == "-")) {
        if (pending_coeff) {
          constant += sign * coeff;
          pending_coeff = false;
        }
        sign = tok.text == "-" ? -sign : sign;
        tok = lex.next();
        continue;
      }
      if (tok.kind == LpToken::number) {
        if (pending_coeff) {
          constant += sign * coeff;
        }
        coeff = tok.value;
        pending_coeff = true;
        tok = lex.next();
        continue;
      }
      if (tok.kind == LpToken::word) {
        const std::string low = detail::lower(tok.text);
        if (low == "subject" || low == "st" || low == "s.t." ||
            low == "bounds" || low == "binaries" || low == "binary" ||
            low == "bin" || low == "end" || low == "generals" ||
            low == "general")
          break;
        terms.push_back({var_of(tok.text), sign * (pending_coeff ? coeff : 1)});
        pending_coeff = false;
        sign = 1;
        coeff = 1;
        tok = lex.next();
        continue;
      }
      break;
    }
    if (pending_coeff) constant += sign * coeff;
  };

  // Objective (optional label).
  {
    std::vector<LinTerm> terms;
    double constant = 0;
    if (tok.kind == LpToken::word && !detail::is_keyword(tok, "subject") &&
        !detail::is_keyword(tok, "st") && !detail::is_keyword(tok, "s.t.")) {
      LpToken after = lex.next();
      if (after.kind == LpToken::op && after.text == ":") {
        tok = lex.next();
      } else {
        // No label: the word already was the first variable.
        terms.push_back({var_of(tok.text), 1.0});
        tok = after;
      }
    }
    parse_expr(terms, constant);
    model.objective = terms;
    model.objective_offset = constant;
  }

  if (!detail::is_keyword(tok, "subject") && !detail::is_keyword(tok, "st") &&
      !detail::is_keyword(tok, "s.t."))
    throw schema_error("lp parse: expected Subject To");
  if (detail::is_keyword(tok, "subject")) {
    tok = lex.next();  // "To"
  }
  tok = lex.next();

  while (tok.kind != LpToken::end && !detail::is_keyword(tok, "bounds") &&
         !detail::is_keyword(tok, "binaries") &&
         !detail::is_keyword(tok, "binary") && !detail::is_keyword(tok, "bin") &&
         !detail::is_keyword(tok, "end")) {
    std::string name;
    if (tok.kind == LpToken::word) {
      LpToken after = lex.next();
      if (after.kind == LpToken::op && after.text == ":") {
        name = tok.text;
        tok = lex.next();
      } else {
        std::vector<LinTerm> terms;
        terms.push_back({var_of(tok.text), 1.0});
        double constant = 0;
        tok = after;
        parse_expr(terms, constant);
        finish_constraint(model, std::move(terms), constant, tok, lex, name);
        tok = lex.next();
        continue;
      }
    }
    std::vector<LinTerm> terms;
    double constant = 0;
    parse_expr(terms, constant);
    finish_constraint(model, std::move(terms), constant, tok, lex, name);
    tok = lex.next();
  }

  // Bounds
  if (detail::is_keyword(tok, "bounds")) {
    tok = lex.next();
    while (tok.kind != LpToken::end && !detail::is_keyword(tok, "binaries") &&
           !detail::is_keyword(tok, "binary") &&
           !detail::is_keyword(tok, "bin") && !detail::is_keyword(tok, "end")) {
      double sign = 1;
      auto read_value = [&]() -> double {
        double s = 1;
        while (tok.kind == LpToken::op && (tok.text == "+" || tok.text == "-")) {
          if (tok.text == "-") s = -s;
          tok = lex.next();
        }
        if (tok.kind == LpToken::number) {
          const double v = s * tok.value;
          tok = lex.next();
          return std::abs(v) >= 1e30 ? (v > 0 ? kInf : -kInf) : v;
        }
        if (tok.kind == LpToken::word && detail::lower(tok.text) == "inf") {
          tok = lex.next();
          return s > 0 ? kInf : -kInf;
        }
        throw schema_error("lp parse: malformed bound value");
      };
      (void)sign;
      if (tok.kind == LpToken::word && detail::lower(tok.text) != "inf") {
        // forms: "x <= u", "x >= l", "x = v", "x free"
        const int v = var_of(tok.text);
        tok = lex.next();
        if (tok.kind == LpToken::word && detail::lower(tok.text) == "free") {
          model.vars[v].lb = -kInf;
          model.vars[v].ub = kInf;
          tok = lex.next();
        } else if (tok.kind == LpToken::op) {
          const std::string op = tok.text;
          tok = lex.next();
          const double val = read_value();
          if (op == "<")
            model.vars[v].ub = val;
          else if (op == ">")
            model.vars[v].lb = val;
          else if (op == "=") {
            model.vars[v].lb = val;
            model.vars[v].ub = val;
          } else
            throw schema_error("lp parse: malformed bound line");
        } else
          throw schema_error("lp parse: malformed bound line");
      } else {
        // form: "l <= x <= u"
        const double lo = read_value();
        if (!(tok.kind == LpToken::op && tok.text == "<"))
          throw schema_error("lp parse: malformed bound line");
        tok = lex.next();
        if (tok.kind != LpToken::word)
          throw schema_error("lp parse: malformed bound line");
        const int v = var_of(tok.text);
        model.vars[v].lb = lo;
        tok = lex.next();
        if (tok.kind == LpToken::op && tok.text == "<") {
          tok = lex.next();
          model.vars[v].ub = read_value();
        }
      }
    }
  }

  if (detail::is_keyword(tok, "binaries") || detail::is_keyword(tok, "binary") ||
      detail::is_keyword(tok, "bin")) {
    tok = lex.next();
    while (tok.kind == LpToken::word && !detail::is_keyword(tok, "end")) {
      const int v = var_of(tok.text);
      model.vars[v].kind = VarKind::binary;
      if (model.vars[v].lb < 0) model.vars[v].lb = 0;
      if (model.vars[v].ub > 1) model.vars[v].ub = 1;
      tok = lex.next();
    }
  }

  if (!detail::is_keyword(tok, "end"))
    throw schema_error("lp parse: expected End");
  return model;
}

inline void finish_constraint(MilpModel& model, std::vector<LinTerm> terms,
                              double constant, detail::LpToken& tok,
                              detail::LpLexer& lex, const std::string& name) {
  using detail::LpToken;
  if (tok.kind != LpToken::op || (tok.text != "<" && tok.text != ">" &&
                                  tok.text != "="))
    throw schema_error("lp parse: constraint without relational operator");
  Sense sense = tok.text == "<" ? Sense::le
                                : (tok.text == ">" ? Sense::ge : Sense::eq);
  tok = lex.next();
  double sign = 1;
  while (tok.kind == LpToken::op && (tok.text == "+" || tok.text == "-")) {
    if (tok.text == "-") sign = -sign;
    tok = lex.next();
  }
  if (tok.kind != LpToken::number)
    throw schema_error("lp parse: constraint without numeric rhs");
  const double rhs = sign * tok.value - constant;
  model.add_con(name.empty() ? "c" + std::to_string(model.cons.size()) : name,
                std::move(terms), sense, rhs);
}

// --- plain solution files -------------------------------------------------
// Lines of "name value" plus "objective <v>" and "status <word>".

struct SolutionFile {
  std::string status;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, double> values;
};

inline SolutionFile parse_solution_file(const std::string& text) {
  SolutionFile out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key[0] == '#') continue;
    if (key == "status") {
      if (!(ls >> out.status))
        throw schema_error("solution file: malformed status line " +
                           std::to_string(lineno));
    } else if (key == "objective") {
      if (!(ls >> out.objective))
        throw schema_error("solution file: malformed objective line " +
                           std::to_string(lineno));
    } else {
      double v;
      if (!(ls >> v))
        throw schema_error("solution file: malformed value line " +
                           std::to_string(lineno));
      out.values[key] = v;
    }
  }
  return out;
}

inline std::string write_solution_file(const MilpModel& model,
                                       const MilpSolution& sol) {
  std::string out = "status ";
  out += to_string(sol.status);
  out += "\nobjective " + detail::fmt_num(sol.objective) + "\n";
  for (std::size_t j = 0; j < model.vars.size() && j < sol.assignment.size();
       ++j)
    out += model.vars[j].name + " " + detail::fmt_num(sol.assignment[j]) + "\n";
  return out;
}

// Maps a parsed solution file onto a model's variable order.
inline std::vector<double> apply_solution(const MilpModel& model,
                                          const SolutionFile& sol) {
  std::vector<double> x(model.vars.size(), 0.0);
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    auto it = sol.values.find(model.vars[j].name);
    if (it == sol.values.end())
      throw input_error("solution file: missing variable " +
                        model.vars[j].name);
    x[j] = it->second;
  }
  return x;
}

}  // namespace parabolic
