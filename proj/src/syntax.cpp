#include "acpkit/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <vector>

#include "acpkit/errors.hpp"

namespace acp {
namespace {

enum class Tok {
  Ident,
  Plus,
  Dot,
  ParBar,    // ||
  LMerge,    // |_
  Bar,       // |
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Eq,
  Lt,
  Gt,
  Delta,     // delta, δ
  Encap,     // encap, ∂
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

const std::set<std::string, std::less<>> kKeywords = {"act", "comm", "proc", "root", "delta",
                                                      "encap"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    i += n;
    col += n;
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (starts("//")) {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t l0 = line, c0 = col;
    // Unicode aliases occupy one column.
    auto push = [&](Tok k, std::string text, std::size_t bytes) {
      const bool ascii = text.size() == bytes;
      out.push_back({k, std::move(text), l0, c0});
      i += bytes;
      col += ascii ? bytes : 1;
    };
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = word == "delta" ? Tok::Delta : word == "encap" ? Tok::Encap : Tok::Ident;
      out.push_back({k, word, l0, c0});
      advance(j - i);
      continue;
    }
    if (starts("||")) { push(Tok::ParBar, "||", 2); continue; }
    if (starts("|_")) { push(Tok::LMerge, "|_", 2); continue; }
    if (starts("\xCE\xB4")) { push(Tok::Delta, "delta", 2); continue; }      // δ
    if (starts("\xC2\xB7")) { push(Tok::Dot, ".", 2); continue; }            // ·
    if (starts("\xE2\x88\xA5")) { push(Tok::ParBar, "||", 3); continue; }    // ∥
    if (starts("\xE2\xAB\xA6")) { push(Tok::LMerge, "|_", 3); continue; }    // ⫦
    if (starts("\xE2\x88\x82")) { push(Tok::Encap, "encap", 3); continue; }  // ∂
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '.': k = Tok::Dot; break;
      case '|': k = Tok::Bar; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '=': k = Tok::Eq; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      default:
        throw ParseError(ParseError::Kind::Syntax, line, col,
                         std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), l0, c0});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const char* describe(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Dot: return "'.'";
    case Tok::ParBar: return "'||'";
    case Tok::LMerge: return "'|_'";
    case Tok::Bar: return "'|'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Delta: return "'delta'";
    case Tok::Encap: return "'encap'";
    case Tok::End: return "end of input";
  }
  return "token";
}

std::optional<Op> merge_op(Tok k) {
  switch (k) {
    case Tok::ParBar: return Op::Par;
    case Tok::LMerge: return Op::LeftMerge;
    case Tok::Bar: return Op::CommMerge;
    default: return std::nullopt;
  }
}

class Parser {
 public:
  Parser(std::vector<Token> toks, ActionSet alphabet)
      : toks_(std::move(toks)), alphabet_(std::move(alphabet)) {}

  SpecFile file() {
    // Recursion variables may be used before their equation, so the
    // `proc` heads are collected up front.
    std::set<std::string> procs;
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::Ident && toks_[i].text == "proc" &&
          toks_[i + 1].kind == Tok::Ident) {
        procs.insert(toks_[i + 1].text);
      }
    }
    scopes_.push_back(procs);

    SpecFile out;
    out.comm = CommFn(alphabet_);
    std::vector<Equation> eqs;
    while (peek().kind != Tok::End) {
      const Token& kw = expect(Tok::Ident, "declaration keyword");
      if (kw.text == "act") {
        // Already collected by declared_actions().
        expect_action_name();
        while (accept(Tok::Comma)) expect_action_name();
        expect(Tok::Semi, "';'");
      } else if (kw.text == "comm") {
        Action a = expect_action_name();
        expect(Tok::Bar, "'|'");
        Action b = expect_action_name();
        expect(Tok::Eq, "'='");
        MaybeAction c;
        if (!accept(Tok::Delta)) c = expect_action_name();
        expect(Tok::Semi, "';'");
        out.comm.set(a, b, c);
      } else if (kw.text == "proc") {
        const Token& name = expect(Tok::Ident, "process variable");
        check_variable_name(name);
        expect(Tok::Eq, "'='");
        Term rhs = term();
        expect(Tok::Semi, "';'");
        eqs.push_back({name.text, std::move(rhs)});
      } else if (kw.text == "root") {
        const Token& name = expect(Tok::Ident, "root variable");
        if (out.root) fail(name, "duplicate root directive");
        if (!procs.count(name.text)) fail(name, "root " + name.text + " has no proc equation");
        out.root = name.text;
        expect(Tok::Semi, "';'");
      } else {
        fail(kw, "expected 'act', 'comm', 'proc' or 'root', found '" + kw.text + "'");
      }
    }
    out.spec = RecSpec(std::move(eqs));
    return out;
  }

  Term single_term(bool allow_free) {
    allow_free_ = allow_free;
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg,
                         ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, at.line, at.col, msg);
  }

  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) {
      const Token& t = peek();
      fail(t, "expected " + what + ", found " +
                  (t.kind == Tok::Ident ? "'" + t.text + "'" : std::string(describe(t.kind))));
    }
    return next();
  }

  Action expect_action_name() {
    const Token& t = expect(Tok::Ident, "action name");
    if (!alphabet_.count(Action(t.text))) {
      fail(t, "undeclared action '" + t.text + "'", ParseError::Kind::UndeclaredAction);
    }
    return Action(t.text);
  }

  void check_variable_name(const Token& t) const {
    if (kKeywords.count(t.text)) fail(t, "'" + t.text + "' is a keyword");
    if (alphabet_.count(Action(t.text))) {
      fail(t, "'" + t.text + "' is declared as an action and cannot name a process");
    }
  }

  Term term() {
    Term acc = merge_expr();
    while (accept(Tok::Plus)) acc = Term::alt(std::move(acc), merge_expr());
    return acc;
  }

  Term merge_expr() {
    Term acc = seq_expr();
    std::optional<Op> chain;
    while (auto op = merge_op(peek().kind)) {
      if (chain && *chain != *op) {
        fail(peek(), "different merge operators need parentheses",
             ParseError::Kind::MixedMergeWithoutParens);
      }
      chain = op;
      next();
      acc = Term::binary(*op, std::move(acc), seq_expr());
    }
    return acc;
  }

  Term seq_expr() {
    Term head = primary();
    if (accept(Tok::Dot)) return Term::seq(std::move(head), seq_expr());
    return head;
  }

  Term primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Delta:
        next();
        return Term::delta();
      case Tok::LParen: {
        next();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Encap: {
        next();
        expect(Tok::LParen, "'('");
        expect(Tok::LBrace, "'{'");
        ActionSet blocked;
        if (peek().kind != Tok::RBrace) {
          blocked.insert(expect_action_name());
          while (accept(Tok::Comma)) blocked.insert(expect_action_name());
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::Comma, "','");
        Term body = term();
        expect(Tok::RParen, "')'");
        return Term::encap(std::move(blocked), std::move(body));
      }
      case Tok::Lt:
        return inline_rec();
      case Tok::Ident: {
        next();
        if (alphabet_.count(Action(t.text))) return Term::action(t.text);
        if (kKeywords.count(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        if (allow_free_ || (!scopes_.empty() && scopes_.back().count(t.text))) {
          return Term::var(t.text);
        }
        fail(t, "undeclared action '" + t.text + "' (and no process variable of that name)",
             ParseError::Kind::UndeclaredAction);
      }
      default:
        break;
    }
    fail(t, std::string("expected a term, found ") + describe(t.kind));
  }

  // `<X | X = t, Y = u>`; the scope of the equations is exactly their own
  // left-hand sides.
  Term inline_rec() {
    expect(Tok::Lt, "'<'");
    const Token& root = expect(Tok::Ident, "recursion variable");
    expect(Tok::Bar, "'|'");

    std::set<std::string> bound;
    int depth = 0;
    bool at_eq_start = true;
    for (std::size_t i = pos_; i + 1 < toks_.size(); ++i) {
      const Tok k = toks_[i].kind;
      if (depth == 0 && at_eq_start && k == Tok::Ident && toks_[i + 1].kind == Tok::Eq) {
        bound.insert(toks_[i].text);
      }
      at_eq_start = false;
      if (k == Tok::LParen || k == Tok::LBrace || k == Tok::Lt) ++depth;
      if (k == Tok::RParen || k == Tok::RBrace) --depth;
      if (k == Tok::Gt) {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && k == Tok::Comma) at_eq_start = true;
    }

    scopes_.push_back(bound);
    std::vector<Equation> eqs;
    do {
      const Token& name = expect(Tok::Ident, "recursion variable");
      check_variable_name(name);
      expect(Tok::Eq, "'='");
      eqs.push_back({name.text, term()});
    } while (accept(Tok::Comma));
    expect(Tok::Gt, "'>'");
    scopes_.pop_back();

    RecSpec spec(std::move(eqs));
    if (!spec.defines(root.text)) {
      fail(root, "recursion constant <" + root.text + " | ...> does not define " + root.text);
    }
    return Term::rec(root.text, std::move(spec));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ActionSet alphabet_;
  std::vector<std::set<std::string>> scopes_;
  bool allow_free_ = false;
};

ActionSet declared_actions(const std::vector<Token>& toks) {
  ActionSet out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != Tok::Ident || toks[i].text != "act") continue;
    if (i > 0 && toks[i - 1].kind != Tok::Semi) continue;
    for (std::size_t j = i + 1; j < toks.size() && toks[j].kind != Tok::Semi; ++j) {
      if (toks[j].kind == Tok::Ident) {
        if (kKeywords.count(toks[j].text)) {
          throw ParseError(ParseError::Kind::Syntax, toks[j].line, toks[j].col,
                           "'" + toks[j].text + "' is a keyword");
        }
        out.insert(Action(toks[j].text));
      }
    }
  }
  return out;
}

enum class Prec { Alt = 1, Merge = 2, Seq = 3, Atom = 4 };

Prec prec(const Term& t) {
  switch (t.op()) {
    case Op::Alt: return Prec::Alt;
    case Op::Par:
    case Op::LeftMerge:
    case Op::CommMerge: return Prec::Merge;
    case Op::Seq: return Prec::Seq;
    default: return Prec::Atom;
  }
}

const char* op_symbol(Op op) {
  switch (op) {
    case Op::Alt: return " + ";
    case Op::Seq: return " . ";
    case Op::Par: return " || ";
    case Op::LeftMerge: return " |_ ";
    case Op::CommMerge: return " | ";
    default: return "";
  }
}

void print(std::ostream& os, const Term& t);

void print_wrapped(std::ostream& os, const Term& t, bool parens) {
  if (parens) os << '(';
  print(os, t);
  if (parens) os << ')';
}

void print_spec_body(std::ostream& os, const RecSpec& spec) {
  bool first = true;
  for (const auto& e : spec.equations()) {
    if (!first) os << ", ";
    first = false;
    os << e.var << " = ";
    print(os, e.rhs);
  }
}

void print(std::ostream& os, const Term& t) {
  switch (t.op()) {
    case Op::Inaction:
      os << "delta";
      return;
    case Op::Action:
      os << t.action_name().name;
      return;
    case Op::Var:
      os << t.var_name();
      return;
    case Op::Encap: {
      os << "encap({";
      bool first = true;
      for (const auto& a : t.blocked()) {
        if (!first) os << ", ";
        first = false;
        os << a.name;
      }
      os << "}, ";
      print(os, t.body());
      os << ')';
      return;
    }
    case Op::Rec:
      os << '<' << t.var_name() << " | ";
      print_spec_body(os, t.spec());
      os << '>';
      return;
    case Op::Alt:
      print_wrapped(os, t.left(), false);
      os << op_symbol(Op::Alt);
      print_wrapped(os, t.right(), prec(t.right()) <= Prec::Alt);
      return;
    case Op::Seq:
      print_wrapped(os, t.left(), prec(t.left()) <= Prec::Seq);
      os << op_symbol(Op::Seq);
      print_wrapped(os, t.right(), prec(t.right()) < Prec::Seq);
      return;
    default: {
      const bool left_same_op = t.left().op() == t.op();
      print_wrapped(os, t.left(), prec(t.left()) < Prec::Merge ||
                                      (prec(t.left()) == Prec::Merge && !left_same_op));
      os << op_symbol(t.op());
      print_wrapped(os, t.right(), prec(t.right()) <= Prec::Merge);
      return;
    }
  }
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  for (char c : s) {
    if (!ident_char(c)) return false;
  }
  return !kKeywords.count(s);
}

SpecFile parse_spec_file(std::string_view text) {
  auto toks = lex(text);
  ActionSet alphabet = declared_actions(toks);
  return Parser(std::move(toks), std::move(alphabet)).file();
}

Term parse_term(std::string_view text, const ActionSet& alphabet, bool allow_free_vars) {
  return Parser(lex(text), alphabet).single_term(allow_free_vars);
}

std::string pretty(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::string pretty(const RecSpec& spec) {
  std::ostringstream os;
  print_spec_body(os, spec);
  return os.str();
}

std::string pretty(const SpecFile& file) {
  std::ostringstream os;
  if (!file.alphabet().empty()) {
    os << "act ";
    bool first = true;
    for (const auto& a : file.alphabet()) {
      if (!first) os << ", ";
      first = false;
      os << a.name;
    }
    os << ";\n";
  }
  for (const auto& [key, result] : file.comm.table()) {
    os << "comm " << key.first.name << " | " << key.second.name << " = " << to_string(result)
       << ";\n";
  }
  for (const auto& e : file.spec.equations()) {
    os << "proc " << e.var << " = ";
    print(os, e.rhs);
    os << ";\n";
  }
  if (file.root) os << "root " << *file.root << ";\n";
  return os.str();
}

}  // namespace acp
