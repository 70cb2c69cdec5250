#pragma once

// Concrete syntax: lexer and recursive-descent parser for terms, types,
// kinds, and context files.
//
// Precedence, loosest to tightest: ascription `e :: T`; abstractions
// (bodies extend as far right as possible); application (left-associative);
// atoms. Arrows `->`/`=>` are right-associative and looser than type
// application. Line comments start with `--`.

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "fcci/diag.hpp"
#include "fcci/syntax.hpp"

namespace fcci {

struct SourceUnit {
  std::string path;
  TermPtr body;
};

namespace lex {

enum class Tok : uint8_t {
  Ident, IntLit,
  KwLet, KwIn, KwForall, KwInt,
  LParen, RParen, LBracket, RBracket,
  Lambda, TyLambda, Dot, Colon, ColonColon,
  Arrow, FatArrow, Star, At, Eq, Comma,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  long long value = 0;
  Span span;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwInt: return "'Int'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Lambda: return "'\\'";
    case Tok::TyLambda: return "'/\\'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::ColonColon: return "'::'";
    case Tok::Arrow: return "'->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::Star: return "'*'";
    case Tok::At: return "'@'";
    case Tok::Eq: return "'='";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline Result<std::vector<Token>> tokenize(const std::string& text,
                                           const std::string& file) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto here = [&]() { return Span{line, col, line, col + 1}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, Span sp, std::string s = {}, long long v = 0) {
    out.push_back(Token{kind, std::move(s), v, sp});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Span sp = here();
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      sp.end_col = sp.col + 2;
      push(Tok::Arrow, sp);
      advance(2);
      continue;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      sp.end_col = sp.col + 2;
      push(Tok::FatArrow, sp);
      advance(2);
      continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == ':') {
      sp.end_col = sp.col + 2;
      push(Tok::ColonColon, sp);
      advance(2);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '\\') {
      sp.end_col = sp.col + 2;
      push(Tok::TyLambda, sp);
      advance(2);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, sp); advance(1); continue;
      case ')': push(Tok::RParen, sp); advance(1); continue;
      case '[': push(Tok::LBracket, sp); advance(1); continue;
      case ']': push(Tok::RBracket, sp); advance(1); continue;
      case '\\': push(Tok::Lambda, sp); advance(1); continue;
      case '.': push(Tok::Dot, sp); advance(1); continue;
      case ':': push(Tok::Colon, sp); advance(1); continue;
      case '*': push(Tok::Star, sp); advance(1); continue;
      case '@': push(Tok::At, sp); advance(1); continue;
      case '=': push(Tok::Eq, sp); advance(1); continue;
      case ',': push(Tok::Comma, sp); advance(1); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      std::string digits = text.substr(i, j - i);
      sp.end_col = sp.col + static_cast<int>(digits.size());
      long long v = 0;
      try {
        v = std::stoll(digits);
      } catch (...) {
        return make_error("E001", "integer literal out of range", sp, file);
      }
      push(Tok::IntLit, sp, digits, v);
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_' || text[j] == '\''))
        ++j;
      std::string word = text.substr(i, j - i);
      sp.end_col = sp.col + static_cast<int>(word.size());
      Tok kind = Tok::Ident;
      if (word == "let") kind = Tok::KwLet;
      else if (word == "in") kind = Tok::KwIn;
      else if (word == "forall") kind = Tok::KwForall;
      else if (word == "Int") kind = Tok::KwInt;
      push(kind, sp, word);
      advance(j - i);
      continue;
    }
    return make_error("E001", std::string("unexpected character '") + c + "'",
                      sp, file);
  }
  Span endsp{line, col, line, col};
  push(Tok::End, endsp);
  return out;
}

}  // namespace lex

// Names in scope while parsing, innermost last. Type and term variables
// occupy separate namespaces, mirroring the two index sorts.
struct ParseScope {
  std::vector<std::string> type_names;
  std::vector<std::string> term_names;

  static ParseScope of_context(const Context& ctx) {
    ParseScope s;
    for (const auto& e : ctx.entries) {
      if (const auto* tb = std::get_if<TypeBinding>(&e))
        s.type_names.push_back(tb->name);
      else
        s.term_names.push_back(std::get<TermBinding>(e).name);
    }
    return s;
  }
};

namespace detail {

class Parser {
 public:
  Parser(std::vector<lex::Token> toks, std::string file, ParseScope scope)
      : toks_(std::move(toks)), file_(std::move(file)), scope_(std::move(scope)) {}

  Result<TermPtr> parse_whole_term() {
    auto t = parse_term();
    if (!t.ok()) return t;
    if (auto d = expect_end()) return *d;
    return t;
  }
  Result<TypePtr> parse_whole_type() {
    auto t = parse_type();
    if (!t.ok()) return t;
    if (auto d = expect_end()) return *d;
    return t;
  }
  Result<KindPtr> parse_whole_kind() {
    auto k = parse_kind();
    if (!k.ok()) return k;
    if (auto d = expect_end()) return *d;
    return k;
  }

  // --- context files: one or more declarations, newline- or comma-separated.
  Result<Context> parse_context_decls() {
    Context ctx;
    while (peek().kind != lex::Tok::End) {
      if (peek().kind == lex::Tok::Comma) {
        ++pos_;
        continue;
      }
      auto d = parse_context_decl(ctx);
      if (d) return *d;
    }
    return ctx;
  }

 private:
  std::vector<lex::Token> toks_;
  std::string file_;
  ParseScope scope_;
  size_t pos_ = 0;

  const lex::Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    if (i >= toks_.size()) i = toks_.size() - 1;
    return toks_[i];
  }
  const lex::Token& next() {
    const lex::Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(lex::Tok k) const { return peek().kind == k; }

  Diagnostic err_here(const std::string& msg) const {
    return make_error("E001", msg, peek().span, file_);
  }
  std::optional<Diagnostic> expect(lex::Tok k, const char* what) {
    if (!at(k))
      return err_here(std::string("expected ") + what + ", found " +
                      lex::tok_name(peek().kind));
    ++pos_;
    return std::nullopt;
  }
  std::optional<Diagnostic> expect_end() {
    if (!at(lex::Tok::End))
      return err_here(std::string("expected end of input, found ") +
                      lex::tok_name(peek().kind));
    return std::nullopt;
  }

  // --- kinds -------------------------------------------------------------
  Result<KindPtr> parse_kind() {
    auto atom = parse_kind_atom();
    if (!atom.ok()) return atom;
    if (at(lex::Tok::Arrow)) {
      ++pos_;
      auto rhs = parse_kind();
      if (!rhs.ok()) return rhs;
      return k_arrow(atom.value(), rhs.value());
    }
    return atom;
  }
  Result<KindPtr> parse_kind_atom() {
    if (at(lex::Tok::Star)) {
      ++pos_;
      return k_star();
    }
    if (at(lex::Tok::LParen)) {
      ++pos_;
      auto k = parse_kind();
      if (!k.ok()) return k;
      if (auto d = expect(lex::Tok::RParen, "')'")) return *d;
      return k;
    }
    return err_here(std::string("expected a kind, found ") +
                    lex::tok_name(peek().kind));
  }

  // --- types -------------------------------------------------------------
  Result<TypePtr> parse_type() {
    if (at(lex::Tok::KwForall)) return parse_forall();
    if (at(lex::Tok::Lambda)) return parse_type_lambda();
    auto lhs = parse_type_app();
    if (!lhs.ok()) return lhs;
    if (at(lex::Tok::Arrow) || at(lex::Tok::FatArrow)) {
      Form form = at(lex::Tok::Arrow) ? Form::Explicit : Form::Implicit;
      ++pos_;
      auto rhs = parse_type();
      if (!rhs.ok()) return rhs;
      return t_pi(form, lhs.value(), rhs.value());
    }
    return lhs;
  }

  Result<TypePtr> parse_forall() {
    ++pos_;  // 'forall'
    bool implicit;
    if (at(lex::Tok::LParen)) implicit = false;
    else if (at(lex::Tok::LBracket)) implicit = true;
    else return err_here("expected '(' or '[' after 'forall'");
    ++pos_;
    if (!at(lex::Tok::Ident)) return err_here("expected a type variable name");
    std::string name = next().text;
    KindPtr kind = k_star();
    if (at(lex::Tok::Colon)) {
      ++pos_;
      auto k = parse_kind();
      if (!k.ok()) return k.error();
      kind = k.value();
    }
    if (auto d = expect(implicit ? lex::Tok::RBracket : lex::Tok::RParen,
                        implicit ? "']'" : "')'"))
      return *d;
    if (auto d = expect(lex::Tok::Dot, "'.'")) return *d;
    scope_.type_names.push_back(name);
    auto body = parse_type();
    scope_.type_names.pop_back();
    if (!body.ok()) return body;
    return t_all(implicit ? Form::Implicit : Form::Explicit, name, kind,
                 body.value());
  }

  Result<TypePtr> parse_type_lambda() {
    ++pos_;  // '\'
    if (!at(lex::Tok::Ident)) return err_here("expected a type variable name");
    std::string name = next().text;
    if (auto d = expect(lex::Tok::Colon, "':'")) return *d;
    auto k = parse_kind();
    if (!k.ok()) return k.error();
    if (auto d = expect(lex::Tok::Dot, "'.'")) return *d;
    scope_.type_names.push_back(name);
    auto body = parse_type();
    scope_.type_names.pop_back();
    if (!body.ok()) return body;
    return t_lam(name, k.value(), body.value());
  }

  bool starts_type_atom() const {
    return at(lex::Tok::KwInt) || at(lex::Tok::Ident) || at(lex::Tok::LParen);
  }

  Result<TypePtr> parse_type_app() {
    auto head = parse_type_atom();
    if (!head.ok()) return head;
    TypePtr acc = head.value();
    while (starts_type_atom()) {
      auto arg = parse_type_atom();
      if (!arg.ok()) return arg;
      acc = t_app(acc, arg.value());
    }
    return acc;
  }

  Result<TypePtr> parse_type_atom() {
    if (at(lex::Tok::KwInt)) {
      ++pos_;
      return t_int();
    }
    if (at(lex::Tok::Ident)) {
      std::string name = next().text;
      for (int i = static_cast<int>(scope_.type_names.size()) - 1; i >= 0; --i) {
        if (scope_.type_names[static_cast<size_t>(i)] == name)
          return t_var(static_cast<int>(scope_.type_names.size()) - 1 - i, name);
      }
      return t_free(name);
    }
    if (at(lex::Tok::LParen)) {
      ++pos_;
      auto t = parse_type();
      if (!t.ok()) return t;
      if (auto d = expect(lex::Tok::RParen, "')'")) return *d;
      return t;
    }
    return err_here(std::string("expected a type, found ") +
                    lex::tok_name(peek().kind));
  }

  // --- terms -------------------------------------------------------------
  Result<TermPtr> parse_term() {
    auto head = parse_abs_term();
    if (!head.ok()) return head;
    TermPtr acc = head.value();
    while (at(lex::Tok::ColonColon)) {
      Span sp = peek().span;
      ++pos_;
      auto ty = parse_type();
      if (!ty.ok()) return ty.error();
      Span full = acc->span.valid() ? acc->span : sp;
      full.end_line = sp.end_line;
      full.end_col = sp.end_col;
      acc = e_asc(acc, ty.value(), full);
    }
    return acc;
  }

  Result<TermPtr> parse_abs_term() {
    if (at(lex::Tok::Lambda)) return parse_term_lambda();
    if (at(lex::Tok::TyLambda)) return parse_term_tylambda();
    if (at(lex::Tok::KwLet)) return parse_let();
    return parse_app_term();
  }

  Result<TermPtr> parse_term_lambda() {
    Span sp = peek().span;
    ++pos_;  // '\'
    bool implicit;
    if (at(lex::Tok::LParen)) implicit = false;
    else if (at(lex::Tok::LBracket)) implicit = true;
    else return err_here("expected '(' or '[' after '\\'");
    ++pos_;
    if (!at(lex::Tok::Ident)) return err_here("expected a variable name");
    std::string name = next().text;
    if (auto d = expect(lex::Tok::Colon, "':'")) return *d;
    auto ann = parse_type();
    if (!ann.ok()) return ann.error();
    if (auto d = expect(implicit ? lex::Tok::RBracket : lex::Tok::RParen,
                        implicit ? "']'" : "')'"))
      return *d;
    if (auto d = expect(lex::Tok::Dot, "'.'")) return *d;
    scope_.term_names.push_back(name);
    auto body = parse_term();
    scope_.term_names.pop_back();
    if (!body.ok()) return body;
    return e_abs(implicit ? Form::Implicit : Form::Explicit, name, ann.value(),
                 body.value(), sp);
  }

  Result<TermPtr> parse_term_tylambda() {
    Span sp = peek().span;
    ++pos_;  // '/\'
    bool implicit;
    if (at(lex::Tok::LParen)) implicit = false;
    else if (at(lex::Tok::LBracket)) implicit = true;
    else return err_here("expected '(' or '[' after '/\\'");
    ++pos_;
    if (!at(lex::Tok::Ident)) return err_here("expected a type variable name");
    std::string name = next().text;
    KindPtr kind = k_star();
    if (at(lex::Tok::Colon)) {
      ++pos_;
      auto k = parse_kind();
      if (!k.ok()) return k.error();
      kind = k.value();
    }
    if (auto d = expect(implicit ? lex::Tok::RBracket : lex::Tok::RParen,
                        implicit ? "']'" : "')'"))
      return *d;
    if (auto d = expect(lex::Tok::Dot, "'.'")) return *d;
    scope_.type_names.push_back(name);
    auto body = parse_term();
    scope_.type_names.pop_back();
    if (!body.ok()) return body;
    return e_tyabs(implicit ? Form::Implicit : Form::Explicit, name, kind,
                   body.value(), sp);
  }

  // let <x:T> = e1 in e2  desugars to  (\<x:T>. e2) <e1>
  Result<TermPtr> parse_let() {
    Span sp = peek().span;
    ++pos_;  // 'let'
    bool implicit;
    if (at(lex::Tok::LParen)) implicit = false;
    else if (at(lex::Tok::LBracket)) implicit = true;
    else return err_here("expected '(' or '[' after 'let'");
    ++pos_;
    if (!at(lex::Tok::Ident)) return err_here("expected a variable name");
    std::string name = next().text;
    if (auto d = expect(lex::Tok::Colon, "':'")) return *d;
    auto ann = parse_type();
    if (!ann.ok()) return ann.error();
    if (auto d = expect(implicit ? lex::Tok::RBracket : lex::Tok::RParen,
                        implicit ? "']'" : "')'"))
      return *d;
    if (auto d = expect(lex::Tok::Eq, "'='")) return *d;
    auto bound = parse_term();
    if (!bound.ok()) return bound;
    if (auto d = expect(lex::Tok::KwIn, "'in'")) return *d;
    scope_.term_names.push_back(name);
    auto body = parse_term();
    scope_.term_names.pop_back();
    if (!body.ok()) return body;
    Form form = implicit ? Form::Implicit : Form::Explicit;
    TermPtr fn = e_abs(form, name, ann.value(), body.value(), sp);
    return e_app(form, fn, bound.value(), sp);
  }

  bool starts_term_atom() const {
    return at(lex::Tok::Ident) || at(lex::Tok::IntLit) || at(lex::Tok::LParen);
  }

  Result<TermPtr> parse_app_term() {
    auto head = parse_term_atom();
    if (!head.ok()) return head;
    TermPtr acc = head.value();
    for (;;) {
      if (starts_term_atom()) {
        Span sp = peek().span;
        auto arg = parse_term_atom();
        if (!arg.ok()) return arg;
        acc = e_app(Form::Explicit, acc, arg.value(), join(acc->span, sp));
        continue;
      }
      if (at(lex::Tok::LBracket)) {
        Span sp = peek().span;
        ++pos_;
        auto arg = parse_term();
        if (!arg.ok()) return arg;
        if (auto d = expect(lex::Tok::RBracket, "']'")) return *d;
        acc = e_app(Form::Implicit, acc, arg.value(), join(acc->span, sp));
        continue;
      }
      if (at(lex::Tok::At)) {
        Span sp = peek().span;
        ++pos_;
        bool implicit;
        if (at(lex::Tok::LParen)) implicit = false;
        else if (at(lex::Tok::LBracket)) implicit = true;
        else return err_here("expected '(' or '[' after '@'");
        ++pos_;
        auto ty = parse_type();
        if (!ty.ok()) return ty.error();
        if (auto d = expect(implicit ? lex::Tok::RBracket : lex::Tok::RParen,
                            implicit ? "']'" : "')'"))
          return *d;
        acc = e_tyapp(implicit ? Form::Implicit : Form::Explicit, acc,
                      ty.value(), join(acc->span, sp));
        continue;
      }
      break;
    }
    return acc;
  }

  Result<TermPtr> parse_term_atom() {
    if (at(lex::Tok::IntLit)) {
      const lex::Token& t = next();
      return e_lit(t.value, t.span);
    }
    if (at(lex::Tok::Ident)) {
      const lex::Token& t = next();
      for (int i = static_cast<int>(scope_.term_names.size()) - 1; i >= 0; --i) {
        if (scope_.term_names[static_cast<size_t>(i)] == t.text)
          return e_var(static_cast<int>(scope_.term_names.size()) - 1 - i,
                       t.text, t.span);
      }
      return e_free(t.text, t.span);
    }
    if (at(lex::Tok::LParen)) {
      ++pos_;
      auto e = parse_term();
      if (!e.ok()) return e;
      if (auto d = expect(lex::Tok::RParen, "')'")) return *d;
      return e;
    }
    return err_here(std::string("expected a term, found ") +
                    lex::tok_name(peek().kind));
  }

  static Span join(Span a, Span b) {
    if (!a.valid()) return b;
    if (!b.valid()) return a;
    a.end_line = b.end_line;
    a.end_col = b.end_col;
    return a;
  }

  // --- context declarations ---------------------------------------------
  // `(x : SORT)` or `[x : SORT]` where SORT is a kind (type binding) or a
  // type (term binding). Kinds and types share no tokens at the start of a
  // declaration body (`*`/parenthesized arrows of `*` vs. everything else),
  // so we try the kind reading first on the bracketed token range.
  std::optional<Diagnostic> parse_context_decl(Context& ctx) {
    bool implicit;
    if (at(lex::Tok::LParen)) implicit = false;
    else if (at(lex::Tok::LBracket)) implicit = true;
    else return err_here("expected '(' or '[' to start a context entry");
    lex::Tok close = implicit ? lex::Tok::RBracket : lex::Tok::RParen;
    ++pos_;
    if (!at(lex::Tok::Ident)) return err_here("expected a name");
    std::string name = next().text;
    if (auto d = expect(lex::Tok::Colon, "':'")) return *d;

    // Find the matching close bracket to delimit the sort text.
    size_t start = pos_;
    int depth = 0;
    size_t end = start;
    for (; end < toks_.size(); ++end) {
      lex::Tok k = toks_[end].kind;
      if (k == lex::Tok::LParen || k == lex::Tok::LBracket) ++depth;
      else if (k == lex::Tok::RParen || k == lex::Tok::RBracket) {
        if (depth == 0) break;
        --depth;
      } else if (k == lex::Tok::End) {
        break;
      }
    }
    if (end >= toks_.size() || toks_[end].kind != close)
      return make_error("E001", "unterminated context entry",
                        toks_[end < toks_.size() ? end : toks_.size() - 1].span,
                        file_);

    std::vector<lex::Token> sub(toks_.begin() + static_cast<long>(start),
                                toks_.begin() + static_cast<long>(end));
    sub.push_back(lex::Token{lex::Tok::End, "", 0, toks_[end].span});

    Form form = implicit ? Form::Implicit : Form::Explicit;
    Parser kind_parser(sub, file_, ParseScope{});
    if (auto k = kind_parser.parse_whole_kind(); k.ok()) {
      ctx.push_type(form, name, k.value());
    } else {
      Parser type_parser(sub, file_, ParseScope::of_context(ctx));
      auto t = type_parser.parse_whole_type();
      if (!t.ok()) return t.error();
      ctx.push_term(form, name, t.value());
    }
    pos_ = end + 1;
    return std::nullopt;
  }
};

}  // namespace detail

inline Result<SourceUnit> parse_unit(const std::string& text,
                                     const std::string& path,
                                     const ParseScope& scope = {}) {
  auto toks = lex::tokenize(text, path);
  if (!toks.ok()) return toks.error();
  detail::Parser p(std::move(toks.value()), path, scope);
  auto body = p.parse_whole_term();
  if (!body.ok()) return body.error();
  return SourceUnit{path, body.value()};
}

inline Result<TermPtr> parse_term_text(const std::string& text,
                                       const ParseScope& scope = {},
                                       const std::string& path = "<term>") {
  auto toks = lex::tokenize(text, path);
  if (!toks.ok()) return toks.error();
  detail::Parser p(std::move(toks.value()), path, scope);
  return p.parse_whole_term();
}

inline Result<TypePtr> parse_type_text(const std::string& text,
                                       const ParseScope& scope = {},
                                       const std::string& path = "<type>") {
  auto toks = lex::tokenize(text, path);
  if (!toks.ok()) return toks.error();
  detail::Parser p(std::move(toks.value()), path, scope);
  return p.parse_whole_type();
}

inline Result<KindPtr> parse_kind_text(const std::string& text,
                                       const std::string& path = "<kind>") {
  auto toks = lex::tokenize(text, path);
  if (!toks.ok()) return toks.error();
  detail::Parser p(std::move(toks.value()), path, ParseScope{});
  return p.parse_whole_kind();
}

// Context files: a sequence of `(x : T)` / `[x : T]` / `(a : K)` / `[a : K]`
// declarations separated by whitespace, newlines, or commas. Later entries
// may refer to names bound earlier.
inline Result<Context> parse_context_text(const std::string& text,
                                          const std::string& path = "<context>") {
  auto toks = lex::tokenize(text, path);
  if (!toks.ok()) return toks.error();
  detail::Parser p(std::move(toks.value()), path, ParseScope{});
  return p.parse_context_decls();
}

}  // namespace fcci
