// Copyright 2026 The qctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qctl/networks.hpp"

#include <cctype>
#include <sstream>

namespace qctl::networks {

SLHTriple::SLHTriple(CMat s_in, std::vector<CMat> l_in, CMat h_in)
    : s(std::move(s_in)), l(std::move(l_in)), h(std::move(h_in)) {
  if (s.rows() != s.cols()) throw ValidationError("SLHTriple: S not square");
  if (!is_unitary(s)) throw ValidationError("SLHTriple: S not unitary within 1e-9");
  if (!is_hermitian(h)) throw ValidationError("SLHTriple: H not Hermitian within 1e-9");
  if (static_cast<int>(l.size()) != s.rows())
    throw ValidationError("SLHTriple: coupling vector length must equal the port count");
  for (const auto& op : l)
    if (op.rows() != h.rows() || op.cols() != h.cols())
      throw ValidationError("SLHTriple: coupling operator dimension mismatch");
}

SLHTriple SLHTriple::identity(int ports, int dim) {
  return SLHTriple(CMat::Identity(ports, ports),
                   std::vector<CMat>(ports, CMat::Zero(dim, dim)),
                   CMat::Zero(dim, dim));
}

SLHTriple slh_series(const SLHTriple& g2, const SLHTriple& g1) {
  if (g1.ports() != g2.ports())
    throw ValidationError("slh_series: port count mismatch");
  if (g1.dim() != g2.dim())
    throw ValidationError("slh_series: system space mismatch");
  const int np = g1.ports();
  const CMat s = g2.s * g1.s;
  std::vector<CMat> l;
  l.reserve(np);
  for (int i = 0; i < np; ++i) {
    CMat li = g2.l[i];
    for (int j = 0; j < np; ++j) li += g2.s(i, j) * g1.l[j];
    l.push_back(li);
  }
  CMat x = CMat::Zero(g1.dim(), g1.dim());
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      x += g2.l[i].adjoint() * g2.s(i, j) * g1.l[j];
  // Hermitian combination of the interconnection term.
  const CMat h = g1.h + g2.h + (x - x.adjoint()) / (2.0 * kI);
  return SLHTriple(s, l, hermitize(h));
}

SLHTriple slh_concat(const SLHTriple& g1, const SLHTriple& g2) {
  if (g1.dim() != g2.dim())
    throw ValidationError("slh_concat: system space mismatch");
  const int n1 = g1.ports(), n2 = g2.ports();
  CMat s = CMat::Zero(n1 + n2, n1 + n2);
  s.topLeftCorner(n1, n1) = g1.s;
  s.bottomRightCorner(n2, n2) = g2.s;
  std::vector<CMat> l = g1.l;
  l.insert(l.end(), g2.l.begin(), g2.l.end());
  return SLHTriple(s, l, g1.h + g2.h);
}

bool NetworkExpression::same_tree(const NetworkExpression& other) const {
  if (kind != other.kind || name != other.name ||
      children.size() != other.children.size())
    return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!children[i].same_tree(other.children[i])) return false;
  return true;
}

namespace {

struct Token {
  enum class Kind { name, semicolon, plus, lparen, rparen, end };
  Kind kind;
  std::string text;
  int line, column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= text_.size()) return {Token::Kind::end, "", line_, col_};
    const int line = line_, col = col_;
    const char c = text_[pos_];
    if (c == ';') { advance(); return {Token::Kind::semicolon, ";", line, col}; }
    if (c == '+') { advance(); return {Token::Kind::plus, "+", line, col}; }
    if (c == '(') { advance(); return {Token::Kind::lparen, "(", line, col}; }
    if (c == ')') { advance(); return {Token::Kind::rparen, ")", line, col}; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        name.push_back(text_[pos_]);
        advance();
      }
      return {Token::Kind::name, name, line, col};
    }
    throw ValidationError("parse error at line " + std::to_string(line) +
                          ", column " + std::to_string(col) +
                          ": unexpected character '" + std::string(1, c) + "'");
  }

 private:
  void advance() { ++pos_; ++col_; }
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  NetworkExpression parse() {
    NetworkExpression e = expr();
    expect(Token::Kind::end, "extra input after the expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const Token& tok, const std::string& message) {
    throw ValidationError("parse error at line " + std::to_string(tok.line) +
                          ", column " + std::to_string(tok.column) + ": " +
                          message);
  }

  void shift() { tok_ = lexer_.next(); }

  void expect(Token::Kind kind, const std::string& what) {
    if (tok_.kind != kind) fail(tok_, what);
  }

  NetworkExpression expr() {
    NetworkExpression first = term();
    if (tok_.kind != Token::Kind::semicolon) return first;
    NetworkExpression node;
    node.kind = NetworkExpression::Kind::series;
    node.line = first.line;
    node.column = first.column;
    node.children.push_back(std::move(first));
    while (tok_.kind == Token::Kind::semicolon) {
      shift();
      node.children.push_back(term());
    }
    return node;
  }

  NetworkExpression term() {
    NetworkExpression first = atom();
    if (tok_.kind != Token::Kind::plus) return first;
    NetworkExpression node;
    node.kind = NetworkExpression::Kind::concat;
    node.line = first.line;
    node.column = first.column;
    node.children.push_back(std::move(first));
    while (tok_.kind == Token::Kind::plus) {
      shift();
      node.children.push_back(atom());
    }
    return node;
  }

  NetworkExpression atom() {
    if (tok_.kind == Token::Kind::name) {
      NetworkExpression leaf;
      leaf.kind = NetworkExpression::Kind::leaf;
      leaf.name = tok_.text;
      leaf.line = tok_.line;
      leaf.column = tok_.column;
      shift();
      return leaf;
    }
    if (tok_.kind == Token::Kind::lparen) {
      shift();
      NetworkExpression inner = expr();
      expect(Token::Kind::rparen, "expected ')'");
      shift();
      return inner;
    }
    fail(tok_, "expected a component name or '('");
  }

  Lexer lexer_;
  Token tok_{Token::Kind::end, "", 1, 1};
};

void print_rec(const NetworkExpression& e, std::ostringstream& out,
               bool parenthesize) {
  if (e.kind == NetworkExpression::Kind::leaf) {
    out << e.name;
    return;
  }
  if (parenthesize) out << "(";
  const char* sep = e.kind == NetworkExpression::Kind::series ? " ; " : " + ";
  for (size_t i = 0; i < e.children.size(); ++i) {
    if (i) out << sep;
    const auto& child = e.children[i];
    // A series child of a series, or any composite child of a concat, needs
    // parentheses to reparse to the same tree.
    const bool wrap =
        e.kind == NetworkExpression::Kind::series
            ? child.kind == NetworkExpression::Kind::series
            : child.kind != NetworkExpression::Kind::leaf;
    print_rec(child, out, wrap);
  }
  if (parenthesize) out << ")";
}

}  // namespace

NetworkExpression parse_network(const std::string& text) {
  return Parser(text).parse();
}

std::string print_network(const NetworkExpression& expr) {
  std::ostringstream out;
  print_rec(expr, out, false);
  return out.str();
}

SLHTriple reduce(const NetworkExpression& expr, const ComponentTable& table) {
  switch (expr.kind) {
    case NetworkExpression::Kind::leaf: {
      auto it = table.find(expr.name);
      if (it == table.end())
        throw ValidationError("undefined component '" + expr.name +
                              "' at line " + std::to_string(expr.line) +
                              ", column " + std::to_string(expr.column));
      return it->second;
    }
    case NetworkExpression::Kind::series: {
      SLHTriple acc = reduce(expr.children.front(), table);
      for (size_t i = 1; i < expr.children.size(); ++i) {
        const auto& child = expr.children[i];
        try {
          // Signal order: the accumulated output feeds the next component.
          acc = slh_series(reduce(child, table), acc);
        } catch (const ValidationError& err) {
          throw ValidationError(std::string(err.what()) +
                                " (series node at line " +
                                std::to_string(child.line) + ", column " +
                                std::to_string(child.column) + ")");
        }
      }
      return acc;
    }
    case NetworkExpression::Kind::concat: {
      SLHTriple acc = reduce(expr.children.front(), table);
      for (size_t i = 1; i < expr.children.size(); ++i)
        acc = slh_concat(acc, reduce(expr.children[i], table));
      return acc;
    }
  }
  throw ValidationError("reduce: malformed expression tree");
}

dynamics::LindbladModel slh_to_mme(const SLHTriple& g) {
  std::vector<CMat> noise;
  for (const auto& op : g.l)
    if (op.norm() > 0) noise.push_back(op);
  return dynamics::LindbladModel(g.h, noise);
}

}  // namespace qctl::networks
