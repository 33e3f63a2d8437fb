#include "banglab/syntax.hpp"

#include <cctype>

namespace banglab {

namespace {

enum class Tok { Lam, Dot, LParen, RParen, LBrack, RBrack, Arrow, Bang, Der, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, int l, int c) { out.push_back({k, std::move(text), l, c}); };
  while (i < src.size()) {
    char ch = src[i];
    int l = line, c = col;
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      ++col;
      continue;
    }
    if (src.compare(i, 2, "\xce\xbb") == 0) {  // UTF-8 lambda
      push(Tok::Lam, "\\", l, c);
      i += 2;
      ++col;
      continue;
    }
    if (src.compare(i, 3, "\xe2\x86\x90") == 0) {  // UTF-8 left arrow
      push(Tok::Arrow, "<-", l, c);
      i += 3;
      ++col;
      continue;
    }
    switch (ch) {
      case '\\':
        push(Tok::Lam, "\\", l, c);
        break;
      case '.':
        push(Tok::Dot, ".", l, c);
        break;
      case '(':
        push(Tok::LParen, "(", l, c);
        break;
      case ')':
        push(Tok::RParen, ")", l, c);
        break;
      case '[':
        push(Tok::LBrack, "[", l, c);
        break;
      case ']':
        push(Tok::RBrack, "]", l, c);
        break;
      case '!':
        push(Tok::Bang, "!", l, c);
        break;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '-') {
          push(Tok::Arrow, "<-", l, c);
          i += 2;
          col += 2;
          continue;
        }
        throw ParseError("unexpected '<'", l, c);
      default:
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
          std::size_t j = i;
          while (j < src.size() &&
                 (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
            ++j;
          std::string word = src.substr(i, j - i);
          push(word == "der" ? Tok::Der : Tok::Ident, word, l, c);
          col += static_cast<int>(j - i);
          i = j;
          continue;
        }
        throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
    ++i;
    ++col;
  }
  push(Tok::End, "", line, col);
  return out;
}

class Parser {
 public:
  Parser(const std::string& src, bool allow_hole) : toks_(lex(src)), allow_hole_(allow_hole) {}

  Term parse_all() {
    Term t = term();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    if (allow_hole_ && holes_ != 1) fail("context must contain exactly one hole []");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t j = std::min(pos_ + k, toks_.size() - 1);
    return toks_[j];
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return take();
  }

  bool is_hole_start() const {
    return allow_hole_ && peek().kind == Tok::LBrack && peek(1).kind == Tok::RBrack;
  }
  bool starts_prefix() const {
    Tok k = peek().kind;
    return k == Tok::Bang || k == Tok::Der || k == Tok::Ident || k == Tok::LParen || is_hole_start();
  }

  Term term() {
    if (peek().kind == Tok::Lam) return lam();
    Term t = prefix();
    while (true) {
      if (starts_prefix()) {
        t = Term::app(t, prefix());
      } else if (peek().kind == Tok::Lam) {
        t = Term::app(t, lam());
        break;
      } else {
        break;
      }
    }
    return t;
  }

  Term lam() {
    expect(Tok::Lam, "'\\'");
    std::string x = expect(Tok::Ident, "binder name").text;
    expect(Tok::Dot, "'.'");
    Term body = term();
    return Term::abs(x, body);
  }

  Term prefix() {
    if (peek().kind == Tok::Bang) {
      take();
      return Term::bang(prefix());
    }
    if (peek().kind == Tok::Der) {
      take();
      return Term::der(prefix());
    }
    return postfix();
  }

  Term postfix() {
    Term t = atom();
    while (peek().kind == Tok::LBrack && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Arrow) {
      take();
      std::string x = take().text;
      take();
      Term u = term();
      expect(Tok::RBrack, "']'");
      t = Term::sub(t, x, u);
    }
    return t;
  }

  Term atom() {
    if (is_hole_start()) {
      take();
      take();
      ++holes_;
      return Term::hole();
    }
    if (peek().kind == Tok::Ident) return Term::var(take().text);
    if (peek().kind == Tok::LParen) {
      take();
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (peek().kind == Tok::End) fail("unexpected end of input");
    fail("unexpected '" + peek().text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool allow_hole_;
  int holes_ = 0;
};

enum class Level { Top, AppFun, Prefix, SubBody };

bool needs_parens(Kind k, Level lv) {
  switch (k) {
    case Kind::Abs:
      return lv != Level::Top;
    case Kind::App:
      return lv == Level::Prefix || lv == Level::SubBody;
    case Kind::Bang:
    case Kind::Der:
      return lv == Level::SubBody;
    default:
      return false;
  }
}

// Chooses printed names for binders: the hint unless it would clash with a
// free name or a visible binder. Binders above a hole keep their hint.
class Namer {
 public:
  explicit Namer(const Term& root) : free_(free_vars(root)) {}

  std::string bind(const Term& binder) {
    std::string n;
    if (binder.has_hole()) {
      n = binder.name().empty() ? "x" : binder.name();
    } else {
      n = fresh_name(binder.name(), [&](const std::string& c) {
        if (free_.count(c)) return true;
        for (const auto& s : stack_)
          if (s == c) return true;
        return false;
      });
    }
    stack_.push_back(n);
    return n;
  }
  void unbind() { stack_.pop_back(); }
  std::string lookup(std::uint32_t idx) const {
    if (idx < stack_.size()) return stack_[stack_.size() - 1 - idx];
    return "#" + std::to_string(idx - stack_.size());
  }

 private:
  std::set<std::string> free_;
  std::vector<std::string> stack_;
};

void print_rec(const Term& t, Level lv, Namer& nm, std::string& out) {
  bool par = needs_parens(t.kind(), lv);
  if (par) out += '(';
  switch (t.kind()) {
    case Kind::Var:
      out += t.name();
      break;
    case Kind::BVar:
      out += nm.lookup(t.index());
      break;
    case Kind::Hole:
      out += "[]";
      break;
    case Kind::Abs: {
      std::string x = nm.bind(t);
      out += '\\';
      out += x;
      out += '.';
      print_rec(t.body(), Level::Top, nm, out);
      nm.unbind();
      break;
    }
    case Kind::App:
      print_rec(t.fun(), Level::AppFun, nm, out);
      out += ' ';
      print_rec(t.arg(), Level::Prefix, nm, out);
      break;
    case Kind::Sub: {
      std::string arg;
      print_rec(t.arg(), Level::Top, nm, arg);
      std::string x = nm.bind(t);
      print_rec(t.body(), Level::SubBody, nm, out);
      nm.unbind();
      out += '[';
      out += x;
      out += "<-";
      out += arg;
      out += ']';
      break;
    }
    case Kind::Bang:
      out += '!';
      print_rec(t.inner(), Level::Prefix, nm, out);
      break;
    case Kind::Der:
      out += "der ";
      print_rec(t.inner(), Level::Prefix, nm, out);
      break;
  }
  if (par) out += ')';
}

nlohmann::json json_rec(const Term& t, Namer& nm) {
  using nlohmann::json;
  switch (t.kind()) {
    case Kind::Var:
      return json{{"k", "var"}, {"name", t.name()}};
    case Kind::BVar:
      return json{{"k", "var"}, {"name", nm.lookup(t.index())}};
    case Kind::Hole:
      return json{{"k", "hole"}};
    case Kind::Abs: {
      std::string x = nm.bind(t);
      json b = json_rec(t.body(), nm);
      nm.unbind();
      return json{{"k", "abs"}, {"x", x}, {"body", b}};
    }
    case Kind::App:
      return json{{"k", "app"}, {"fun", json_rec(t.fun(), nm)}, {"arg", json_rec(t.arg(), nm)}};
    case Kind::Sub: {
      json a = json_rec(t.arg(), nm);
      std::string x = nm.bind(t);
      json b = json_rec(t.body(), nm);
      nm.unbind();
      return json{{"k", "sub"}, {"body", b}, {"x", x}, {"arg", a}};
    }
    case Kind::Bang:
      return json{{"k", "bang"}, {"t", json_rec(t.inner(), nm)}};
    case Kind::Der:
      return json{{"k", "der"}, {"t", json_rec(t.inner(), nm)}};
  }
  return json();
}

void hole_path_rec(const Term& t, Path& p) {
  if (t.kind() == Kind::Hole) return;
  for (int i = 0; i < t.arity(); ++i) {
    if (t.child(i).has_hole()) {
      p.push_back(i);
      hole_path_rec(t.child(i), p);
      return;
    }
  }
}

int count_holes(const Term& t) {
  if (t.kind() == Kind::Hole) return 1;
  if (!t.has_hole()) return 0;
  int n = 0;
  for (int i = 0; i < t.arity(); ++i) n += count_holes(t.child(i));
  return n;
}

}  // namespace

Term parse_term(const std::string& src) { return Parser(src, false).parse_all(); }

std::string print_term(const Term& t) {
  Namer nm(t);
  std::string out;
  print_rec(t, Level::Top, nm, out);
  return out;
}

const char* ctx_kind_name(CtxKind k) {
  switch (k) {
    case CtxKind::List:
      return "list";
    case CtxKind::Surface:
      return "surface";
    case CtxKind::Full:
      return "full";
    case CtxKind::Testing:
      return "testing";
  }
  return "full";
}

bool spine_fits(CtxKind kind, const Term& spine) {
  if (count_holes(spine) != 1) return false;
  const Term* cur = &spine;
  bool fun_of_app = false;  // for Testing: an Abs is allowed only as a function
  while (cur->kind() != Kind::Hole) {
    int i = cur->child(0).has_hole() ? 0 : 1;
    Kind k = cur->kind();
    switch (kind) {
      case CtxKind::List:
        if (!(k == Kind::Sub && i == 0)) return false;
        break;
      case CtxKind::Surface:
        if (k == Kind::Bang) return false;
        break;
      case CtxKind::Full:
        break;
      case CtxKind::Testing:
        if (k == Kind::App && i == 0) {
          cur = &cur->child(0);
          fun_of_app = true;
          continue;
        }
        if (k == Kind::Abs && fun_of_app) {
          fun_of_app = false;
          cur = &cur->child(0);
          continue;
        }
        return false;
    }
    fun_of_app = false;
    cur = &cur->child(i);
  }
  return true;
}

CtxKind tightest_kind(const Term& spine) {
  for (CtxKind k : {CtxKind::List, CtxKind::Testing, CtxKind::Surface})
    if (spine_fits(k, spine)) return k;
  return CtxKind::Full;
}

Ctx::Ctx(CtxKind kind, Term spine) : kind_(kind), spine_(std::move(spine)) {
  if (!spine_fits(kind, spine_))
    throw std::invalid_argument(std::string("spine is not a ") + ctx_kind_name(kind) + " context");
}

Path Ctx::hole_path() const {
  Path p;
  hole_path_rec(spine_, p);
  return p;
}

Ctx parse_ctx(const std::string& src, CtxKind kind) { return Ctx(kind, Parser(src, true).parse_all()); }

std::string print_ctx(const Ctx& c) { return print_term(c.spine()); }

Term plug_spine(const Term& spine, const Term& t) {
  std::vector<std::string> names;  // binders above the hole, outermost first
  std::function<Term(const Term&)> go = [&](const Term& s) -> Term {
    if (s.kind() == Kind::Hole) {
      Term u = t;
      std::uint32_t level = 0;
      for (auto it = names.rbegin(); it != names.rend(); ++it, ++level) u = close(u, *it, level);
      return u;
    }
    int i = s.child(0).has_hole() ? 0 : 1;
    bool binder = s.is_binder() && i == 0;
    if (binder) names.push_back(s.name());
    Term c = go(s.child(i));
    if (binder) names.pop_back();
    if (i == 0) return with_children(s, c, s.arity() == 2 ? s.child(1) : Term());
    return with_children(s, s.child(0), c);
  };
  if (!spine.has_hole()) throw std::invalid_argument("context has no hole");
  return go(spine);
}

Term plug(const Ctx& c, const Term& t) { return plug_spine(c.spine(), t); }

std::optional<std::pair<Ctx, Term>> match_list_bang(const Term& t) {
  auto [core, k] = peel_list(t);
  if (core.kind() != Kind::Bang) return std::nullopt;
  std::set<std::string> fv = free_vars(t);
  // Name the closure binders, outermost first, avoiding free names.
  std::vector<std::string> names;
  const Term* cur = &t;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::string n = fresh_name(cur->name(), [&](const std::string& c) {
      if (fv.count(c)) return true;
      for (const auto& m : names)
        if (m == c) return true;
      return false;
    });
    names.push_back(n);
    cur = &cur->body();
  }
  Term s = core.inner();
  for (std::uint32_t i = 0; i < k; ++i) s = instantiate(s, Term::var(names[k - 1 - i]));
  std::function<Term(const Term&, std::uint32_t)> spine = [&](const Term& u, std::uint32_t i) -> Term {
    if (i == k) return Term::hole();
    return Term::raw_sub(spine(u.body(), i + 1), names[i], u.arg());
  };
  return std::make_pair(Ctx(CtxKind::List, spine(t, 0)), s);
}

nlohmann::json term_to_json(const Term& t) {
  Namer nm(t);
  return json_rec(t, nm);
}

Term term_from_json(const nlohmann::json& j) {
  std::string k = j.at("k").get<std::string>();
  if (k == "var") return Term::var(j.at("name").get<std::string>());
  if (k == "hole") return Term::hole();
  if (k == "abs") return Term::abs(j.at("x").get<std::string>(), term_from_json(j.at("body")));
  if (k == "app") return Term::app(term_from_json(j.at("fun")), term_from_json(j.at("arg")));
  if (k == "sub")
    return Term::sub(term_from_json(j.at("body")), j.at("x").get<std::string>(), term_from_json(j.at("arg")));
  if (k == "bang") return Term::bang(term_from_json(j.at("t")));
  if (k == "der") return Term::der(term_from_json(j.at("t")));
  throw std::invalid_argument("unknown term tag '" + k + "'");
}

}  // namespace banglab
