#include "slimc/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace slimc {

static FRef mk(FK k) {
  auto n = std::make_shared<FNode>();
  n->k = k;
  return n;
}
static FRef mk1(FK k, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = k;
  n->a = std::move(a);
  return n;
}
static FRef mk2(FK k, FRef a, FRef b) {
  auto n = std::make_shared<FNode>();
  n->k = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

FRef f_true() { return mk(FK::True); }
FRef f_false() { return mk(FK::False); }
FRef f_atom(const std::string& p) {
  auto n = std::make_shared<FNode>();
  n->k = FK::Atom;
  n->name = p;
  return n;
}
FRef f_not(FRef a) { return mk1(FK::Not, std::move(a)); }
FRef f_or(FRef a, FRef b) { return mk2(FK::Or, std::move(a), std::move(b)); }
FRef f_and(FRef a, FRef b) { return mk2(FK::And, std::move(a), std::move(b)); }
FRef f_implies(FRef a, FRef b) { return mk2(FK::Implies, std::move(a), std::move(b)); }
FRef f_exists_strat(const std::string& var, const std::string& obs, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::ExistsStrat;
  n->name = var;
  n->aux = obs;
  n->a = std::move(a);
  return n;
}
FRef f_forall_strat(const std::string& var, const std::string& obs, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::ForallStrat;
  n->name = var;
  n->aux = obs;
  n->a = std::move(a);
  return n;
}
FRef f_bind(const std::string& agent, const std::string& var, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::Bind;
  n->name = agent;
  n->aux = var;
  n->a = std::move(a);
  return n;
}
FRef f_unbind(const std::string& agent, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::Unbind;
  n->name = agent;
  n->a = std::move(a);
  return n;
}
FRef f_eout(FRef a) { return mk1(FK::EOut, std::move(a)); }
FRef f_aout(FRef a) { return mk1(FK::AOut, std::move(a)); }
FRef f_epath(FRef a) { return mk1(FK::Epath, std::move(a)); }
FRef f_apath(FRef a) { return mk1(FK::Apath, std::move(a)); }
FRef f_exists_prop(const std::string& atom, const IndexSet& cobs, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::ExistsProp;
  n->name = atom;
  n->cobs = cobs;
  n->a = std::move(a);
  return n;
}
FRef f_forall_prop(const std::string& atom, const IndexSet& cobs, FRef a) {
  auto n = std::make_shared<FNode>();
  n->k = FK::ForallProp;
  n->name = atom;
  n->cobs = cobs;
  n->a = std::move(a);
  return n;
}
FRef f_next(FRef a) { return mk1(FK::Next, std::move(a)); }
FRef f_until(FRef a, FRef b) { return mk2(FK::Until, std::move(a), std::move(b)); }
FRef f_finally(FRef a) { return mk1(FK::Finally, std::move(a)); }
FRef f_globally(FRef a) { return mk1(FK::Globally, std::move(a)); }

static FRef clone_with(const FNode& src, FRef a, FRef b) {
  auto n = std::make_shared<FNode>(src);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

// --- lexer ------------------------------------------------------------------

namespace {

enum class Tk {
  End,
  Ident,
  Num,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Colon,
  Question,
  Arrow,
  Bar,
  Amp,
  Bang,
  LAngle2,
  RAngle2,
  LBrack2,
  RBrack2,
  Eq,
};

struct Token {
  Tk k;
  std::string text;
  int pos;
};

std::string locate(const std::string& text, int pos) {
  int line = 1, col = 1;
  for (int i = 0; i < pos && i < static_cast<int>(text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else
      ++col;
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void syntax_error(const std::string& text, int pos, const std::string& msg) {
  fail(errc::input, "syntax error at " + locate(text, pos) + ": " + msg);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tk k, std::string t, int p) { out.push_back({k, std::move(t), p}); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int p = static_cast<int>(i);
    if (c == '@') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == ':' || s[j] == '.' || s[j] == '#'))
        ++j;
      push(Tk::Ident, s.substr(i, j - i), p);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '#'))
        ++j;
      while (j < s.size() && s[j] == '\'') ++j;
      push(Tk::Ident, s.substr(i, j - i), p);
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tk::Num, s.substr(i, j - i), p);
      i = j;
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "->") {
      push(Tk::Arrow, two, p);
      i += 2;
      continue;
    }
    if (two == "<<") {
      push(Tk::LAngle2, two, p);
      i += 2;
      continue;
    }
    if (two == ">>") {
      push(Tk::RAngle2, two, p);
      i += 2;
      continue;
    }
    if (two == "[[") {
      push(Tk::LBrack2, two, p);
      i += 2;
      continue;
    }
    if (two == "]]") {
      push(Tk::RBrack2, two, p);
      i += 2;
      continue;
    }
    switch (c) {
      case '(': push(Tk::LParen, "(", p); break;
      case ')': push(Tk::RParen, ")", p); break;
      case '{': push(Tk::LBrace, "{", p); break;
      case '}': push(Tk::RBrace, "}", p); break;
      case ',': push(Tk::Comma, ",", p); break;
      case '.': push(Tk::Dot, ".", p); break;
      case ':': push(Tk::Colon, ":", p); break;
      case '?': push(Tk::Question, "?", p); break;
      case '|': push(Tk::Bar, "|", p); break;
      case '&': push(Tk::Amp, "&", p); break;
      case '!': push(Tk::Bang, "!", p); break;
      case '=': push(Tk::Eq, "=", p); break;
      default: syntax_error(s, p, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tk::End, "", static_cast<int>(s.size())});
  return out;
}

bool is_keyword(const std::string& t) {
  return t == "true" || t == "false" || t == "exists" || t == "forall" || t == "obs" ||
         t == "E" || t == "A" || t == "X" || t == "F" || t == "G" || t == "U";
}

// --- parser -----------------------------------------------------------------

struct Parser {
  const std::string& text;
  std::vector<Token> toks;
  std::size_t at = 0;
  bool sl_dialect;

  Parser(const std::string& t, bool sl) : text(t), toks(lex(t)), sl_dialect(sl) {}

  const Token& peek(int k = 0) const {
    std::size_t i = at + k;
    return i < toks.size() ? toks[i] : toks.back();
  }
  Token take() { return toks[at < toks.size() - 1 ? at++ : at]; }
  bool accept(Tk k) {
    if (peek().k == k) {
      ++at;
      return true;
    }
    return false;
  }
  void expect(Tk k, const std::string& what) {
    if (!accept(k)) syntax_error(text, peek().pos, "expected " + what);
  }
  std::string expect_ident(const std::string& what) {
    if (peek().k != Tk::Ident || is_keyword(peek().text))
      syntax_error(text, peek().pos, "expected " + what);
    return take().text;
  }

  FRef with_span(FRef f, int b) {
    auto n = std::make_shared<FNode>(*f);
    n->span_begin = b;
    n->span_end = peek().pos;
    return n;
  }

  FRef parse_implies() {
    FRef l = parse_or();
    if (accept(Tk::Arrow)) return f_implies(l, parse_implies());
    return l;
  }
  FRef parse_or() {
    FRef l = parse_and();
    while (accept(Tk::Bar)) l = f_or(l, parse_and());
    return l;
  }
  FRef parse_and() {
    FRef l = parse_until();
    while (accept(Tk::Amp)) l = f_and(l, parse_until());
    return l;
  }
  FRef parse_until() {
    FRef l = parse_unary();
    if (peek().k == Tk::Ident && peek().text == "U") {
      take();
      return f_until(l, parse_until());
    }
    return l;
  }

  FRef parse_unary() {
    int b = peek().pos;
    if (accept(Tk::Bang)) return with_span(f_not(parse_unary()), b);
    if (peek().k == Tk::Ident) {
      const std::string& t = peek().text;
      if (t == "X") {
        take();
        return with_span(f_next(parse_unary()), b);
      }
      if (t == "F") {
        take();
        return with_span(f_finally(parse_unary()), b);
      }
      if (t == "G") {
        take();
        return with_span(f_globally(parse_unary()), b);
      }
      if (t == "E") {
        take();
        FRef a = parse_unary();
        return with_span(sl_dialect ? f_eout(a) : f_epath(a), b);
      }
      if (t == "A") {
        take();
        FRef a = parse_unary();
        return with_span(sl_dialect ? f_aout(a) : f_apath(a), b);
      }
      if (t == "exists" || t == "forall") {
        if (sl_dialect)
          syntax_error(text, peek().pos, "propositional quantifier is not part of the strategy-logic grammar");
        bool ex = t == "exists";
        take();
        std::string p = expect_ident("quantified atom name");
        if (peek().k != Tk::Ident || peek().text != "obs")
          syntax_error(text, peek().pos, "expected 'obs'");
        take();
        expect(Tk::Eq, "'='");
        expect(Tk::LBrace, "'{'");
        IndexSet cobs;
        if (peek().k != Tk::RBrace) {
          for (;;) {
            if (peek().k != Tk::Num) syntax_error(text, peek().pos, "expected component index");
            int v = std::stoi(take().text);
            require(v >= 1, errc::input, "component indices are 1-based");
            cobs.push_back(v);
            if (!accept(Tk::Comma)) break;
          }
        }
        expect(Tk::RBrace, "'}'");
        expect(Tk::Dot, "'.'");
        std::sort(cobs.begin(), cobs.end());
        cobs.erase(std::unique(cobs.begin(), cobs.end()), cobs.end());
        FRef body = parse_implies();
        return with_span(ex ? f_exists_prop(p, cobs, body) : f_forall_prop(p, cobs, body), b);
      }
      if (t == "true") {
        take();
        return with_span(f_true(), b);
      }
      if (t == "false") {
        take();
        return with_span(f_false(), b);
      }
      if (is_keyword(t)) syntax_error(text, peek().pos, "unexpected keyword '" + t + "'");
      take();
      return with_span(f_atom(t), b);
    }
    if (peek().k == Tk::LAngle2 || peek().k == Tk::LBrack2) {
      if (!sl_dialect)
        syntax_error(text, peek().pos, "strategy quantifier is not part of the QCTL grammar");
      bool ex = peek().k == Tk::LAngle2;
      take();
      std::string var = expect_ident("strategy variable");
      expect(Tk::Colon, "':'");
      std::string obs = expect_ident("observation symbol");
      expect(ex ? Tk::RAngle2 : Tk::RBrack2, ex ? "'>>'" : "']]'");
      FRef a = parse_unary();
      return with_span(ex ? f_exists_strat(var, obs, a) : f_forall_strat(var, obs, a), b);
    }
    if (peek().k == Tk::LParen) {
      // binder lookahead: ( ident , ident-or-? )
      if (sl_dialect && peek(1).k == Tk::Ident && !is_keyword(peek(1).text) &&
          peek(2).k == Tk::Comma &&
          ((peek(3).k == Tk::Ident && !is_keyword(peek(3).text)) || peek(3).k == Tk::Question) &&
          peek(4).k == Tk::RParen) {
        take();
        std::string agent = take().text;
        take();  // comma
        bool unbind = peek().k == Tk::Question;
        std::string var = take().text;
        take();  // rparen
        FRef a = parse_unary();
        return with_span(unbind ? f_unbind(agent, a) : f_bind(agent, var, a), b);
      }
      take();
      FRef a = parse_implies();
      expect(Tk::RParen, "')'");
      return a;
    }
    syntax_error(text, peek().pos, "expected a formula");
  }
};

// --- stratification ----------------------------------------------------------

void check_path(const std::string& text, const FRef& f, bool sl);

void check_state(const std::string& text, const FRef& f, bool sl) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::Atom: return;
    case FK::Not:
    case FK::Or:
    case FK::And:
    case FK::Implies:
      check_state(text, f->a, sl);
      if (f->b) check_state(text, f->b, sl);
      return;
    case FK::ExistsStrat:
    case FK::ForallStrat:
    case FK::Bind:
    case FK::Unbind:
    case FK::ExistsProp:
    case FK::ForallProp: check_state(text, f->a, sl); return;
    case FK::EOut:
    case FK::AOut:
    case FK::Epath:
    case FK::Apath: check_path(text, f->a, sl); return;
    case FK::Next:
    case FK::Until:
    case FK::Finally:
    case FK::Globally:
      fail(errc::input, "stratification error at " + locate(text, std::max(f->span_begin, 0)) +
                            ": temporal operator outside a path context");
  }
}

void check_path(const std::string& text, const FRef& f, bool sl) {
  switch (f->k) {
    case FK::True:
    case FK::False:
    case FK::Atom: return;
    case FK::Not:
    case FK::Or:
    case FK::And:
    case FK::Implies:
    case FK::Until:
      check_path(text, f->a, sl);
      if (f->b) check_path(text, f->b, sl);
      return;
    case FK::Next:
    case FK::Finally:
    case FK::Globally: check_path(text, f->a, sl); return;
    default: check_state(text, f, sl); return;
  }
}

// --- alpha renaming -----------------------------------------------------------

void collect_names(const FRef& f, std::set<std::string>& names) {
  if (!f) return;
  if (!f->name.empty()) names.insert(f->name);
  if (!f->aux.empty()) names.insert(f->aux);
  collect_names(f->a, names);
  collect_names(f->b, names);
}

std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  for (int k = 2;; ++k) {
    std::string cand = base + "#" + std::to_string(k);
    if (taken.insert(cand).second) return cand;
  }
}

struct SlRenamer {
  std::set<std::string> taken;
  std::set<std::string> quantified_before;

  FRef walk(const FRef& f, std::map<std::string, std::string> env) {
    if (!f) return f;
    switch (f->k) {
      case FK::ExistsStrat:
      case FK::ForallStrat: {
        std::string nm = f->name;
        std::string use = nm;
        if (!quantified_before.insert(nm).second) use = fresh_name(nm, taken);
        env[nm] = use;
        FRef a = walk(f->a, env);
        auto n = std::make_shared<FNode>(*f);
        n->name = use;
        n->a = a;
        return n;
      }
      case FK::Bind: {
        auto n = std::make_shared<FNode>(*f);
        auto it = env.find(f->aux);
        if (it != env.end()) n->aux = it->second;
        n->a = walk(f->a, env);
        return n;
      }
      default: {
        if (!f->a && !f->b) return f;
        return clone_with(*f, walk(f->a, env), walk(f->b, env));
      }
    }
  }
};

void collect_free_atoms(const FRef& f, std::set<std::string> scope, std::set<std::string>& fr) {
  if (!f) return;
  if (f->k == FK::Atom) {
    if (!scope.count(f->name)) fr.insert(f->name);
    return;
  }
  if (f->k == FK::ExistsProp || f->k == FK::ForallProp) {
    auto sc = scope;
    sc.insert(f->name);
    collect_free_atoms(f->a, sc, fr);
    return;
  }
  collect_free_atoms(f->a, scope, fr);
  collect_free_atoms(f->b, scope, fr);
}

struct QRenamer {
  std::set<std::string> taken;
  std::set<std::string> free_atoms;
  std::set<std::string> quantified_before;

  FRef walk(const FRef& f, std::map<std::string, std::string> env) {
    if (!f) return f;
    switch (f->k) {
      case FK::ExistsProp:
      case FK::ForallProp: {
        std::string nm = f->name;
        std::string use = nm;
        bool clash = free_atoms.count(nm) || quantified_before.count(nm);
        quantified_before.insert(nm);
        if (clash) use = fresh_name(nm, taken);
        env[nm] = use;
        FRef a = walk(f->a, env);
        auto n = std::make_shared<FNode>(*f);
        n->name = use;
        n->a = a;
        return n;
      }
      case FK::Atom: {
        auto it = env.find(f->name);
        if (it == env.end() || it->second == f->name) return f;
        auto n = std::make_shared<FNode>(*f);
        n->name = it->second;
        return n;
      }
      default: {
        if (!f->a && !f->b) return f;
        return clone_with(*f, walk(f->a, env), walk(f->b, env));
      }
    }
  }
};

}  // namespace

FormulaSL parse_sl(const std::string& text) {
  Parser p(text, true);
  FRef f = p.parse_implies();
  if (p.peek().k != Tk::End) syntax_error(text, p.peek().pos, "trailing input");
  check_state(text, f, true);
  SlRenamer r;
  collect_names(f, r.taken);
  return FormulaSL{r.walk(f, {})};
}

FormulaQ parse_q(const std::string& text) {
  Parser p(text, false);
  FRef f = p.parse_implies();
  if (p.peek().k != Tk::End) syntax_error(text, p.peek().pos, "trailing input");
  check_state(text, f, false);
  QRenamer r;
  collect_names(f, r.taken);
  collect_free_atoms(f, {}, r.free_atoms);
  return FormulaQ{r.walk(f, {})};
}

// --- printing ---------------------------------------------------------------

namespace {

int prec_of(FK k) {
  switch (k) {
    case FK::Implies: return 1;
    case FK::Or: return 2;
    case FK::And: return 3;
    case FK::Until: return 4;
    default: return 5;
  }
}

void print(std::ostringstream& o, const FRef& f, bool sl, int parent_prec) {
  int pr = prec_of(f->k);
  bool paren = pr < 5 && pr < parent_prec;
  if (paren) o << "(";
  switch (f->k) {
    case FK::True: o << "true"; break;
    case FK::False: o << "false"; break;
    case FK::Atom: o << f->name; break;
    case FK::Not:
      o << "!";
      print(o, f->a, sl, 5);
      break;
    case FK::Or:
      print(o, f->a, sl, pr + 1);
      o << " | ";
      print(o, f->b, sl, pr);
      break;
    case FK::And:
      print(o, f->a, sl, pr + 1);
      o << " & ";
      print(o, f->b, sl, pr);
      break;
    case FK::Implies:
      print(o, f->a, sl, pr + 1);
      o << " -> ";
      print(o, f->b, sl, pr);
      break;
    case FK::ExistsStrat:
      o << "<<" << f->name << ":" << f->aux << ">> ";
      print(o, f->a, sl, 5);
      break;
    case FK::ForallStrat:
      o << "[[" << f->name << ":" << f->aux << "]] ";
      print(o, f->a, sl, 5);
      break;
    case FK::Bind:
      o << "(" << f->name << "," << f->aux << ") ";
      print(o, f->a, sl, 5);
      break;
    case FK::Unbind:
      o << "(" << f->name << ",?) ";
      print(o, f->a, sl, 5);
      break;
    case FK::EOut:
    case FK::Epath:
      o << "E ";
      print(o, f->a, sl, 5);
      break;
    case FK::AOut:
    case FK::Apath:
      o << "A ";
      print(o, f->a, sl, 5);
      break;
    case FK::ExistsProp:
    case FK::ForallProp: {
      o << (f->k == FK::ExistsProp ? "exists " : "forall ") << f->name << " obs={";
      for (std::size_t i = 0; i < f->cobs.size(); ++i) o << (i ? "," : "") << f->cobs[i];
      o << "}. ";
      print(o, f->a, sl, 1);
      break;
    }
    case FK::Next:
      o << "X ";
      print(o, f->a, sl, 5);
      break;
    case FK::Until:
      print(o, f->a, sl, pr + 1);
      o << " U ";
      print(o, f->b, sl, pr);
      break;
    case FK::Finally:
      o << "F ";
      print(o, f->a, sl, 5);
      break;
    case FK::Globally:
      o << "G ";
      print(o, f->a, sl, 5);
      break;
  }
  if (paren) o << ")";
}

}  // namespace

std::string to_string_sl(const FRef& f) {
  std::ostringstream o;
  print(o, f, true, 0);
  return o.str();
}
std::string to_string_q(const FRef& f) {
  std::ostringstream o;
  print(o, f, false, 0);
  return o.str();
}

// --- free variables -----------------------------------------------------------

namespace {
void free_vars_walk(const FRef& f, std::set<std::string> bound, std::set<std::string>& out) {
  if (!f) return;
  switch (f->k) {
    case FK::ExistsStrat:
    case FK::ForallStrat: {
      bound.insert(f->name);
      free_vars_walk(f->a, bound, out);
      return;
    }
    case FK::Bind:
      if (!bound.count(f->aux)) out.insert(f->aux);
      free_vars_walk(f->a, bound, out);
      return;
    default:
      free_vars_walk(f->a, bound, out);
      free_vars_walk(f->b, bound, out);
      return;
  }
}
}  // namespace

std::set<std::string> free_vars(const FormulaSL& f) {
  std::set<std::string> out;
  free_vars_walk(f.root, {}, out);
  return out;
}

bool is_sentence(const FormulaSL& f) { return free_vars(f).empty(); }

// --- hierarchy ----------------------------------------------------------------

namespace {

std::string index_set_str(const IndexSet& s) {
  std::string o = "{";
  for (std::size_t i = 0; i < s.size(); ++i) o += (i ? "," : "") + std::to_string(s[i]);
  return o + "}";
}

std::string q_desc(const FNode& f) {
  return std::string(f.k == FK::ExistsProp ? "exists " : "forall ") + f.name + " obs=" +
         index_set_str(f.cobs);
}

bool hier_q_walk(const FRef& f, std::vector<const FNode*>& outer,
                 std::optional<HierarchyViolation>& bad) {
  if (!f || bad) return bad.has_value();
  if (f->k == FK::ExistsProp || f->k == FK::ForallProp) {
    for (const FNode* o : outer) {
      if (!subset(o->cobs, f->cobs)) {
        bad = HierarchyViolation{q_desc(*o), q_desc(*f)};
        return true;
      }
    }
    outer.push_back(f.get());
    hier_q_walk(f->a, outer, bad);
    outer.pop_back();
    return bad.has_value();
  }
  hier_q_walk(f->a, outer, bad);
  hier_q_walk(f->b, outer, bad);
  return bad.has_value();
}

std::string sq_desc(const FNode& f) {
  return std::string(f.k == FK::ExistsStrat ? "<<" : "[[") + f.name + ":" + f.aux +
         (f.k == FK::ExistsStrat ? ">>" : "]]");
}

bool hier_sl_walk(const Cgs& g, const FRef& f, std::vector<const FNode*>& outer,
                  std::optional<HierarchyViolation>& bad) {
  if (!f || bad) return bad.has_value();
  if (f->k == FK::ExistsStrat || f->k == FK::ForallStrat) {
    const Partition& inner = g.obs_part(f->aux);
    for (const FNode* o : outer) {
      if (!inner.subset_of(g.obs_part(o->aux))) {
        bad = HierarchyViolation{sq_desc(*o), sq_desc(*f)};
        return true;
      }
    }
    outer.push_back(f.get());
    hier_sl_walk(g, f->a, outer, bad);
    outer.pop_back();
    return bad.has_value();
  }
  hier_sl_walk(g, f->a, outer, bad);
  hier_sl_walk(g, f->b, outer, bad);
  return bad.has_value();
}

}  // namespace

std::optional<HierarchyViolation> hierarchy_violation_q(const FormulaQ& f) {
  std::vector<const FNode*> outer;
  std::optional<HierarchyViolation> bad;
  hier_q_walk(f.root, outer, bad);
  return bad;
}

bool check_hierarchical_q(const FormulaQ& f) { return !hierarchy_violation_q(f).has_value(); }

std::optional<HierarchyViolation> hierarchy_violation_instance(const Cgs& g, const FormulaSL& f) {
  std::vector<const FNode*> outer;
  std::optional<HierarchyViolation> bad;
  hier_sl_walk(g, f.root, outer, bad);
  return bad;
}

bool check_hierarchical_instance(const Cgs& g, const FormulaSL& f) {
  return !hierarchy_violation_instance(g, f).has_value();
}

// --- I_phi and depth measures ---------------------------------------------------

namespace {
void collect_cobs(const FRef& f, std::optional<IndexSet>& acc) {
  if (!f) return;
  if (f->k == FK::ExistsProp || f->k == FK::ForallProp) {
    if (!acc)
      acc = f->cobs;
    else
      acc = intersect(*acc, f->cobs);
  }
  collect_cobs(f->a, acc);
  collect_cobs(f->b, acc);
}
}  // namespace

IndexSet i_phi_node(const FRef& f, int n) {
  std::optional<IndexSet> acc;
  collect_cobs(f, acc);
  return acc ? *acc : full_index_set(n);
}

IndexSet i_phi(const FormulaQ& f, int n) { return i_phi_node(f.root, n); }

int max_obs_index_q(const FormulaQ& f) {
  int mx = 0;
  std::function<void(const FRef&)> walk = [&](const FRef& g) {
    if (!g) return;
    if ((g->k == FK::ExistsProp || g->k == FK::ForallProp) && !g->cobs.empty())
      mx = std::max(mx, g->cobs.back());
    walk(g->a);
    walk(g->b);
  };
  walk(f.root);
  return mx;
}

std::string to_string(const SimDepth& d) {
  return "(" + std::to_string(d.depth) + ", " + (d.flavor == Flavor::nd ? "nd" : "alt") + ")";
}

bool path_is_ltl(const FRef& psi) {
  if (!psi) return true;
  switch (psi->k) {
    case FK::True:
    case FK::False:
    case FK::Atom: return true;
    case FK::Not:
    case FK::Or:
    case FK::And:
    case FK::Implies:
    case FK::Next:
    case FK::Until:
    case FK::Finally:
    case FK::Globally: return path_is_ltl(psi->a) && (!psi->b || path_is_ltl(psi->b));
    default: return false;
  }
}

std::vector<FRef> max_state_subformulas(const FRef& psi) {
  std::vector<FRef> out;
  std::set<std::string> seen;
  std::function<void(const FRef&)> walk = [&](const FRef& f) {
    if (!f) return;
    switch (f->k) {
      case FK::Not:
      case FK::Or:
      case FK::And:
      case FK::Implies:
      case FK::Next:
      case FK::Until:
      case FK::Finally:
      case FK::Globally:
        walk(f->a);
        walk(f->b);
        return;
      default: {
        std::string key = to_string_q(f);
        if (seen.insert(key).second) out.push_back(f);
        return;
      }
    }
  };
  walk(psi);
  return out;
}

namespace {

// Simulation depth for QCTLsi with strict subsentences optionally treated as
// atoms (used by the simulation-number computation).
struct QDepth {
  int n;
  const std::set<const FNode*>* stop = nullptr;

  bool stopped(const FRef& f) const { return stop && stop->count(f.get()); }

  IndexSet iphi(const FRef& f) const {
    std::optional<IndexSet> acc;
    std::function<void(const FRef&)> walk = [&](const FRef& g) {
      if (!g || stopped(g)) return;
      if (g->k == FK::ExistsProp || g->k == FK::ForallProp) {
        if (!acc)
          acc = g->cobs;
        else
          acc = intersect(*acc, g->cobs);
      }
      walk(g->a);
      walk(g->b);
    };
    walk(f);
    return acc ? *acc : full_index_set(n);
  }

  SimDepth state(const FRef& f) const {
    if (stopped(f)) return {0, Flavor::nd};
    switch (f->k) {
      case FK::True:
      case FK::False:
      case FK::Atom: return {0, Flavor::nd};
      case FK::Not: return {state(f->a).depth, Flavor::alt};
      case FK::Or: {
        SimDepth a = state(f->a), b = state(f->b);
        return {std::max(a.depth, b.depth),
                a.flavor == Flavor::nd && b.flavor == Flavor::nd ? Flavor::nd : Flavor::alt};
      }
      case FK::And: {
        SimDepth a = state(f->a), b = state(f->b);
        if (f->det_intersect) return {std::max(a.depth, b.depth), b.flavor};
        return {std::max(a.depth, b.depth), Flavor::alt};
      }
      case FK::Implies: {
        SimDepth a = state(f->a), b = state(f->b);
        return {std::max(a.depth, b.depth), Flavor::alt};
      }
      case FK::Epath:
      case FK::Apath: {
        if (path_is_ltl(f->a))
          return {0, f->k == FK::Epath ? Flavor::nd : Flavor::alt};
        int k = 0;
        for (const FRef& m : max_state_subformulas(f->a)) k = std::max(k, state(m).depth);
        return {k, Flavor::alt};
      }
      case FK::ExistsProp: {
        SimDepth a = state(f->a);
        int k = (a.flavor == Flavor::nd && f->cobs == iphi(f->a)) ? a.depth : a.depth + 1;
        return {k, Flavor::nd};
      }
      case FK::ForallProp: {
        // ¬ exists^co ¬φ: the negated body is alternating, so one simulation.
        SimDepth a = state(f->a);
        return {a.depth + 1, Flavor::alt};
      }
      default: fail(errc::internal, "temporal operator reached by state-depth computation");
    }
  }
};

}  // namespace

SimDepth sim_depth_q(const FormulaQ& f, int n) { return QDepth{n}.state(f.root); }

namespace {

// SLi simulation depth. The no-increment side condition mirrors the
// quantifier observations used by the reduction: obs_tilde(o) must equal the
// intersection of obs_tilde over observations occurring in the body (with
// the empty intersection standing for full information, index n+1 included).
struct SlDepth {
  const Cgs& g;
  int n;  // number of observation symbols
  const std::set<const FNode*>* stop = nullptr;

  bool stopped(const FRef& f) const { return stop && stop->count(f.get()); }

  IndexSet otilde_inter(const FRef& f) const {
    std::optional<IndexSet> acc;
    std::function<void(const FRef&)> walk = [&](const FRef& h) {
      if (!h || stopped(h)) return;
      if (h->k == FK::ExistsStrat || h->k == FK::ForallStrat) {
        IndexSet t = obs_tilde(g, h->aux);
        if (!acc)
          acc = t;
        else
          acc = intersect(*acc, t);
      }
      walk(h->a);
      walk(h->b);
    };
    walk(f);
    return acc ? *acc : full_index_set(n + 1);
  }

  SimDepth state(const FRef& f) const {
    if (stopped(f)) return {0, Flavor::nd};
    switch (f->k) {
      case FK::True:
      case FK::False:
      case FK::Atom: return {0, Flavor::nd};
      case FK::Not: return {state(f->a).depth, Flavor::alt};
      case FK::Or: {
        SimDepth a = state(f->a), b = state(f->b);
        return {std::max(a.depth, b.depth),
                a.flavor == Flavor::nd && b.flavor == Flavor::nd ? Flavor::nd : Flavor::alt};
      }
      case FK::And:
      case FK::Implies: {
        SimDepth a = state(f->a), b = state(f->b);
        return {std::max(a.depth, b.depth), Flavor::alt};
      }
      case FK::Bind:
      case FK::Unbind: return state(f->a);
      case FK::EOut:
      case FK::AOut: {
        if (path_is_ltl(f->a)) return {0, f->k == FK::EOut ? Flavor::nd : Flavor::alt};
        int k = 0;
        for (const FRef& m : max_state_subformulas(f->a)) k = std::max(k, state(m).depth);
        return {k, Flavor::alt};
      }
      case FK::ExistsStrat: {
        SimDepth a = state(f->a);
        int k = (a.flavor == Flavor::nd && obs_tilde(g, f->aux) == otilde_inter(f->a))
                    ? a.depth
                    : a.depth + 1;
        return {k, Flavor::nd};
      }
      case FK::ForallStrat: {
        SimDepth a = state(f->a);
        return {a.depth + 1, Flavor::alt};
      }
      default: fail(errc::internal, "not a strategy-logic state formula");
    }
  }
};

}  // namespace

IndexSet obs_tilde(const Cgs& g, const std::string& obs) {
  const Partition& p = g.obs_part(obs);
  IndexSet out;
  for (std::size_t j = 0; j < g.obs.size(); ++j)
    if (p.subset_of(g.obs[j].second)) out.push_back(static_cast<int>(j) + 1);
  if (p.is_identity()) out.push_back(static_cast<int>(g.obs.size()) + 1);
  return out;
}

SimDepth sim_depth_sl(const FormulaSL& f, const Cgs& g) {
  return SlDepth{g, static_cast<int>(g.obs.size())}.state(f.root);
}

// --- subsentences / simulation number ---------------------------------------------

namespace {

void collect_atoms(const FRef& f, std::set<std::string>& atoms,
                   std::set<std::string>& quantified) {
  if (!f) return;
  if (f->k == FK::Atom) atoms.insert(f->name);
  if (f->k == FK::ExistsProp || f->k == FK::ForallProp) quantified.insert(f->name);
  collect_atoms(f->a, atoms, quantified);
  collect_atoms(f->b, atoms, quantified);
}

bool is_state_node(const FRef& f, bool in_path) { return !in_path; }

// Collect QCTL subsentence nodes: state subformulas in which no atom
// quantified in the whole formula occurs free.
void q_subsentences(const FRef& f, bool in_path, const std::set<std::string>& apq,
                    std::vector<FRef>& out) {
  if (!f) return;
  bool state_ctx = !in_path;
  bool next_in_path = in_path;
  switch (f->k) {
    case FK::Epath:
    case FK::Apath: next_in_path = true; break;
    case FK::ExistsProp:
    case FK::ForallProp:
    case FK::ExistsStrat:
    case FK::ForallStrat:
    case FK::Bind:
    case FK::Unbind:
    case FK::EOut:
    case FK::AOut: next_in_path = f->k == FK::EOut || f->k == FK::AOut; break;
    case FK::Next:
    case FK::Until:
    case FK::Finally:
    case FK::Globally: next_in_path = true; break;
    default: break;
  }
  if (state_ctx) {
    std::set<std::string> atoms, q_inside;
    collect_atoms(f, atoms, q_inside);
    bool closed = true;
    for (const auto& p : apq)
      if (atoms.count(p) && !q_inside.count(p)) {
        closed = false;
        break;
      }
    if (closed) out.push_back(f);
  }
  q_subsentences(f->a, next_in_path, apq, out);
  q_subsentences(f->b, next_in_path, apq, out);
}

}  // namespace

SimNumber sim_number_q(const FormulaQ& f, int n) {
  std::set<std::string> atoms, apq;
  collect_atoms(f.root, atoms, apq);
  std::vector<FRef> subs;
  q_subsentences(f.root, false, apq, subs);
  // Φ itself is always a subsentence (assuming AP_q ∩ AP_free = ∅, which the
  // parser normalization guarantees).
  std::set<const FNode*> sub_set;
  for (const auto& s : subs) sub_set.insert(s.get());
  SimNumber out;
  for (const auto& s : subs) {
    std::set<const FNode*> stop;
    for (const FNode* p : sub_set)
      if (p != s.get()) stop.insert(p);
    QDepth d{n, &stop};
    SimDepth sd = d.state(s);
    out.subsentences.push_back({to_string_q(s), sd});
    out.number = std::max(out.number, sd.depth);
  }
  return out;
}

namespace {

void sl_free_vars_node(const FRef& f, std::set<std::string> bound, std::set<std::string>& out) {
  if (!f) return;
  switch (f->k) {
    case FK::ExistsStrat:
    case FK::ForallStrat:
      bound.insert(f->name);
      sl_free_vars_node(f->a, bound, out);
      return;
    case FK::Bind:
      if (!bound.count(f->aux)) out.insert(f->aux);
      sl_free_vars_node(f->a, bound, out);
      return;
    default:
      sl_free_vars_node(f->a, bound, out);
      sl_free_vars_node(f->b, bound, out);
      return;
  }
}

// Does φ rebind or unbind every agent in `pending` before any outcome
// quantifier is reached?
bool independent_walk(const FRef& f, std::set<std::string> pending) {
  if (!f) return true;
  switch (f->k) {
    case FK::EOut:
    case FK::AOut: return pending.empty();
    case FK::Bind:
    case FK::Unbind: {
      pending.erase(f->name);
      return independent_walk(f->a, pending);
    }
    default:
      return independent_walk(f->a, pending) && (!f->b || independent_walk(f->b, pending));
  }
}

// Collect independent subsentence nodes of an SLi sentence, together with the
// agents bound at each point.
void sl_subsentences(const FRef& f, std::set<std::string> bound_agents, std::vector<FRef>& out) {
  if (!f) return;
  std::set<std::string> fv;
  sl_free_vars_node(f, {}, fv);
  bool is_path = f->k == FK::Next || f->k == FK::Until || f->k == FK::Finally ||
                 f->k == FK::Globally;
  if (!is_path && fv.empty() && independent_walk(f, bound_agents)) out.push_back(f);
  switch (f->k) {
    case FK::Bind: {
      auto b = bound_agents;
      b.insert(f->name);
      sl_subsentences(f->a, b, out);
      return;
    }
    case FK::Unbind: {
      auto b = bound_agents;
      b.erase(f->name);
      sl_subsentences(f->a, b, out);
      return;
    }
    default:
      sl_subsentences(f->a, bound_agents, out);
      sl_subsentences(f->b, bound_agents, out);
      return;
  }
}

}  // namespace

SimNumber sim_number_sl(const FormulaSL& f, const Cgs& g) {
  require(is_sentence(f), errc::input, "simulation number is defined for sentences only");
  std::vector<FRef> subs;
  sl_subsentences(f.root, {}, subs);
  std::set<const FNode*> sub_set;
  for (const auto& s : subs) sub_set.insert(s.get());
  SimNumber out;
  for (const auto& s : subs) {
    std::set<const FNode*> stop;
    for (const FNode* p : sub_set)
      if (p != s.get()) stop.insert(p);
    SlDepth d{g, static_cast<int>(g.obs.size()), &stop};
    SimDepth sd = d.state(s);
    out.subsentences.push_back({to_string_sl(s), sd});
    out.number = std::max(out.number, sd.depth);
  }
  return out;
}

// --- misc measures ---------------------------------------------------------------

int e_depth(const FRef& f) {
  if (!f) return 0;
  int sub = std::max(e_depth(f->a), e_depth(f->b));
  if (f->k == FK::Epath || f->k == FK::Apath || f->k == FK::EOut || f->k == FK::AOut)
    return sub + 1;
  return sub;
}

int ex_depth(const FRef& f) {
  if (!f) return 0;
  int sub = std::max(ex_depth(f->a), ex_depth(f->b));
  if (f->k == FK::ExistsProp || f->k == FK::ForallProp) return sub + 1;
  return sub;
}

int formula_size(const FRef& f) {
  if (!f) return 0;
  return 1 + formula_size(f->a) + formula_size(f->b);
}

std::optional<int> x_only_depth(const FRef& f) {
  if (!f) return 0;
  if (f->k == FK::Until || f->k == FK::Finally || f->k == FK::Globally) return std::nullopt;
  auto a = x_only_depth(f->a);
  if (!a) return std::nullopt;
  auto b = x_only_depth(f->b);
  if (!b) return std::nullopt;
  int sub = std::max(*a, *b);
  return f->k == FK::Next ? sub + 1 : sub;
}

}  // namespace slimc
