#include "cefr/python/parser.hpp"

#include <array>
#include <string>
#include <vector>

namespace cefr::python {

namespace {

constexpr int kMaxNesting = 1000;

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",   "True",    "and",      "as",       "assert", "async",
    "await",  "break",  "class",   "continue", "def",      "del",    "elif",
    "else",   "except", "finally", "for",      "from",     "global", "if",
    "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",   "raise",  "return",  "try",      "while",    "with",   "yield"};

bool is_keyword(std::string_view word) {
  for (auto kw : kKeywords) {
    if (kw == word) return true;
  }
  return false;
}

constexpr std::array<std::string_view, 13> kAugAssignOps = {
    "+=", "-=", "*=", "/=", "//=", "%=", "@=", "&=", "|=", "^=", ">>=", "<<=",
    "**="};

NodePtr make(NodeType type, int line) { return std::make_unique<Node>(type, line); }

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  NodePtr module() {
    auto mod = make(NodeType::Module, 1);
    while (!at(TokenType::End)) {
      if (at(TokenType::Newline)) {
        ++pos_;
        continue;
      }
      statement(mod->children);
    }
    return mod;
  }

  // Parses "( expression )" produced for an f-string replacement field.
  NodePtr fstring_field() {
    expect_op("(");
    NodePtr e = at_kw("yield") ? yield_expr() : star_expressions();
    expect_op(")");
    if (at(TokenType::Newline)) ++pos_;
    if (!at(TokenType::End)) fail("f-string: invalid expression");
    return e;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  class DepthGuard {
   public:
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNesting) p_.fail("too many nested expressions");
    }
    ~DepthGuard() { --p_.depth_; }
    DepthGuard(const DepthGuard&) = delete;
    DepthGuard& operator=(const DepthGuard&) = delete;

   private:
    Parser& p_;
  };

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  int line() const { return peek().line; }
  bool at(TokenType type) const { return peek().type == type; }
  bool at_op(std::string_view op, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == TokenType::Op && t.text == op;
  }
  bool at_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == TokenType::Name && t.text == kw;
  }
  bool at_identifier(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == TokenType::Name && !is_keyword(t.text);
  }
  bool accept_op(std::string_view op) {
    if (!at_op(op)) return false;
    ++pos_;
    return true;
  }
  bool accept_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    ++pos_;
    return true;
  }
  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("expected '" + std::string(op) + "'");
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("expected '" + std::string(kw) + "'");
  }
  std::string identifier() {
    if (!at_identifier()) fail("expected an identifier");
    return tokens_[pos_++].text;
  }
  void expect(TokenType type, const char* what) {
    if (!at(type)) fail(std::string("expected ") + what);
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string where;
    if (!t.text.empty()) where = " near '" + t.text + "'";
    throw ParseError(t.line, "invalid syntax: " + message + where);
  }

  bool starts_expression(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    switch (t.type) {
      case TokenType::Number:
      case TokenType::String:
        return true;
      case TokenType::Name:
        return !is_keyword(t.text) || t.text == "not" || t.text == "lambda" ||
               t.text == "await" || t.text == "None" || t.text == "True" ||
               t.text == "False";
      case TokenType::Op:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "-" || t.text == "+" || t.text == "~" ||
               t.text == "..." || t.text == "*";
      default:
        return false;
    }
  }

  // ---- statements ----------------------------------------------------------

  void statement(std::vector<NodePtr>& out) {
    DepthGuard guard(*this);
    const Token& t = peek();
    if (t.type == TokenType::Op && t.text == "@") {
      out.push_back(decorated());
      return;
    }
    if (t.type == TokenType::Name) {
      const std::string& w = t.text;
      if (w == "def") return out.push_back(funcdef({}, false));
      if (w == "class") return out.push_back(classdef({}));
      if (w == "if") return out.push_back(if_stmt());
      if (w == "while") return out.push_back(while_stmt());
      if (w == "for") return out.push_back(for_stmt(false));
      if (w == "try") return out.push_back(try_stmt());
      if (w == "with") return out.push_back(with_stmt(false));
      if (w == "async") return out.push_back(async_stmt({}));
      if (w == "match") {
        if (auto m = try_match_stmt()) return out.push_back(std::move(m));
      }
    }
    simple_stmts(out);
  }

  void simple_stmts(std::vector<NodePtr>& out) {
    while (true) {
      out.push_back(simple_stmt());
      if (accept_op(";")) {
        if (at(TokenType::Newline)) break;
        continue;
      }
      break;
    }
    expect(TokenType::Newline, "newline");
  }

  void block(Node& owner) {
    expect_op(":");
    if (at(TokenType::Newline)) {
      ++pos_;
      expect(TokenType::Indent, "an indented block");
      while (!at(TokenType::Dedent)) {
        if (at(TokenType::End)) fail("unexpected end of input");
        statement(owner.children);
      }
      ++pos_;
    } else {
      simple_stmts(owner.children);
    }
  }

  NodePtr simple_stmt() {
    const int ln = line();
    const Token& t = peek();
    if (t.type == TokenType::Name) {
      const std::string& w = t.text;
      if (w == "pass") return (++pos_, make(NodeType::Pass, ln));
      if (w == "break") return (++pos_, make(NodeType::Break, ln));
      if (w == "continue") return (++pos_, make(NodeType::Continue, ln));
      if (w == "return") {
        ++pos_;
        auto n = make(NodeType::Return, ln);
        if (starts_expression()) n->add(star_expressions());
        return n;
      }
      if (w == "raise") {
        ++pos_;
        auto n = make(NodeType::Raise, ln);
        if (starts_expression()) {
          n->add(expression());
          if (accept_kw("from")) n->add(expression());
        }
        return n;
      }
      if (w == "global" || w == "nonlocal") {
        ++pos_;
        auto n = make(w == "global" ? NodeType::Global : NodeType::Nonlocal, ln);
        do {
          auto name = make(NodeType::Name, line());
          name->name = identifier();
          n->add(std::move(name));
        } while (accept_op(","));
        return n;
      }
      if (w == "del") {
        ++pos_;
        auto n = make(NodeType::Delete, ln);
        do {
          if (!starts_expression()) break;
          auto target = bitwise_or();
          set_context(*target, Context::Del);
          n->add(std::move(target));
        } while (accept_op(","));
        if (n->children.empty()) fail("expected a deletion target");
        return n;
      }
      if (w == "assert") {
        ++pos_;
        auto n = make(NodeType::Assert, ln);
        n->add(expression());
        if (accept_op(",")) n->add(expression());
        return n;
      }
      if (w == "import") return import_name();
      if (w == "from") return import_from();
      if (w == "type" && at_identifier(1) && (at_op("=", 2) || at_op("[", 2))) {
        return type_alias();
      }
    }
    return expression_statement();
  }

  NodePtr expression_statement() {
    const int ln = line();
    NodePtr first = at_kw("yield") ? yield_expr() : star_expressions();
    if (at_op(":")) {
      ++pos_;
      const NodeType tt = first->type;
      if (tt != NodeType::Name && tt != NodeType::Attribute &&
          tt != NodeType::Subscript) {
        fail("only single target (not tuple) can be annotated");
      }
      set_context(*first, Context::Store);
      auto n = make(NodeType::AnnAssign, ln);
      n->add(std::move(first));
      auto ann = make(NodeType::Annotation, line());
      ann->add(expression());
      n->add(std::move(ann));
      if (accept_op("=")) n->add(at_kw("yield") ? yield_expr() : star_expressions());
      return n;
    }
    for (auto op : kAugAssignOps) {
      if (at_op(op)) {
        ++pos_;
        const NodeType tt = first->type;
        if (tt != NodeType::Name && tt != NodeType::Attribute &&
            tt != NodeType::Subscript) {
          fail("illegal expression for augmented assignment");
        }
        set_context(*first, Context::Store);
        auto n = make(NodeType::AugAssign, ln);
        n->name = std::string(op);
        n->add(std::move(first));
        n->add(at_kw("yield") ? yield_expr() : star_expressions());
        return n;
      }
    }
    if (at_op("=")) {
      auto n = make(NodeType::Assign, ln);
      NodePtr current = std::move(first);
      while (accept_op("=")) {
        set_context(*current, Context::Store);
        n->add(std::move(current));
        current = at_kw("yield") ? yield_expr() : star_expressions();
      }
      n->add(std::move(current));
      return n;
    }
    if (first->type == NodeType::Starred) fail("can't use starred expression here");
    auto n = make(NodeType::ExprStmt, ln);
    n->add(std::move(first));
    return n;
  }

  NodePtr import_name() {
    auto n = make(NodeType::Import, line());
    ++pos_;
    do {
      auto alias = make(NodeType::Alias, line());
      alias->name = dotted_name();
      if (accept_kw("as")) alias->value = identifier();
      n->add(std::move(alias));
    } while (accept_op(","));
    return n;
  }

  std::string dotted_name() {
    std::string name = identifier();
    while (accept_op(".")) name += "." + identifier();
    return name;
  }

  NodePtr import_from() {
    auto n = make(NodeType::ImportFrom, line());
    ++pos_;
    std::string module;
    while (at_op(".") || at_op("...")) module += tokens_[pos_++].text;
    if (!at_kw("import")) module += dotted_name();
    if (module.empty()) fail("expected a module name");
    n->name = module;
    expect_kw("import");
    if (accept_op("*")) {
      auto alias = make(NodeType::Alias, line());
      alias->name = "*";
      n->add(std::move(alias));
      return n;
    }
    const bool parenthesized = accept_op("(");
    do {
      if (parenthesized && at_op(")")) break;
      auto alias = make(NodeType::Alias, line());
      alias->name = identifier();
      if (accept_kw("as")) alias->value = identifier();
      n->add(std::move(alias));
    } while (accept_op(","));
    if (n->children.empty()) fail("expected names to import");
    if (parenthesized) expect_op(")");
    return n;
  }

  NodePtr type_alias() {
    auto n = make(NodeType::TypeAlias, line());
    ++pos_;
    auto name = make(NodeType::Name, line());
    name->name = identifier();
    name->ctx = Context::Store;
    n->add(std::move(name));
    if (at_op("[")) type_params(*n);
    expect_op("=");
    n->add(expression());
    return n;
  }

  void type_params(Node& owner) {
    expect_op("[");
    do {
      if (at_op("]")) break;
      auto p = make(NodeType::TypeParam, line());
      if (accept_op("*")) {
        p->name = identifier();
      } else if (accept_op("**")) {
        p->name = identifier();
      } else {
        p->name = identifier();
        if (accept_op(":")) p->add(expression());
      }
      if (accept_op("=")) p->add(at_op("*") ? star_expression() : expression());
      owner.add(std::move(p));
    } while (accept_op(","));
    expect_op("]");
  }

  NodePtr decorated() {
    std::vector<NodePtr> decorators;
    while (at_op("@")) {
      auto d = make(NodeType::Decorator, line());
      ++pos_;
      d->add(named_expression());
      expect(TokenType::Newline, "newline after decorator");
      decorators.push_back(std::move(d));
    }
    if (at_kw("def")) return funcdef(std::move(decorators), false);
    if (at_kw("class")) return classdef(std::move(decorators));
    if (at_kw("async") && at_kw("def", 1)) return async_stmt(std::move(decorators));
    fail("expected a function or class definition after decorator");
  }

  NodePtr async_stmt(std::vector<NodePtr> decorators) {
    ++pos_;
    if (at_kw("def")) return funcdef(std::move(decorators), true);
    if (!decorators.empty()) fail("expected 'def'");
    if (at_kw("for")) return for_stmt(true);
    if (at_kw("with")) return with_stmt(true);
    fail("expected 'def', 'for' or 'with' after 'async'");
  }

  NodePtr funcdef(std::vector<NodePtr> decorators, bool is_async) {
    auto n = make(is_async ? NodeType::AsyncFunctionDef : NodeType::FunctionDef,
                  line());
    expect_kw("def");
    n->name = identifier();
    for (auto& d : decorators) n->add(std::move(d));
    if (at_op("[")) type_params(*n);
    expect_op("(");
    n->add(parameters(true, ")"));
    expect_op(")");
    if (accept_op("->")) {
      auto r = make(NodeType::Returns, line());
      r->add(expression());
      n->add(std::move(r));
    }
    block(*n);
    return n;
  }

  // Parses a parameter list up to (not including) `closing`.
  NodePtr parameters(bool annotations, std::string_view closing) {
    auto args = make(NodeType::Arguments, line());
    bool seen_default = false;
    bool seen_star = false;
    bool bare_star_pending = false;
    bool seen_kwargs = false;
    bool seen_slash = false;
    while (!at_op(closing)) {
      if (seen_kwargs) fail("arguments cannot follow var-keyword argument");
      if (accept_op("/")) {
        if (seen_slash || seen_star || args->children.empty()) {
          fail("/ must be ahead of *");
        }
        seen_slash = true;
      } else if (at_op("*")) {
        ++pos_;
        if (seen_star) fail("* argument may appear only once");
        seen_star = true;
        if (at_identifier()) {
          auto a = make(NodeType::Arg, line());
          a->name = identifier();
          a->sub = static_cast<std::uint8_t>(ArgKind::VarArgs);
          if (annotations && accept_op(":")) {
            auto ann = make(NodeType::Annotation, line());
            ann->add(at_op("*") ? star_expression() : expression());
            a->add(std::move(ann));
          }
          args->add(std::move(a));
        } else {
          bare_star_pending = true;
        }
      } else if (accept_op("**")) {
        auto a = make(NodeType::Arg, line());
        a->name = identifier();
        a->sub = static_cast<std::uint8_t>(ArgKind::KwArgs);
        if (annotations && accept_op(":")) {
          auto ann = make(NodeType::Annotation, line());
          ann->add(expression());
          a->add(std::move(ann));
        }
        if (bare_star_pending) fail("named arguments must follow bare *");
        args->add(std::move(a));
        seen_kwargs = true;
      } else {
        auto a = make(NodeType::Arg, line());
        a->name = identifier();
        a->sub = static_cast<std::uint8_t>(seen_star ? ArgKind::KeywordOnly
                                                     : ArgKind::Positional);
        bare_star_pending = false;
        if (annotations && accept_op(":")) {
          auto ann = make(NodeType::Annotation, line());
          ann->add(expression());
          a->add(std::move(ann));
        }
        if (accept_op("=")) {
          auto d = make(NodeType::Default, line());
          d->add(expression());
          a->add(std::move(d));
          if (!seen_star) seen_default = true;
        } else if (seen_default && !seen_star) {
          fail("non-default argument follows default argument");
        }
        args->add(std::move(a));
      }
      if (!accept_op(",")) break;
    }
    if (bare_star_pending) fail("named arguments must follow bare *");
    return args;
  }

  NodePtr classdef(std::vector<NodePtr> decorators) {
    auto n = make(NodeType::ClassDef, line());
    expect_kw("class");
    n->name = identifier();
    for (auto& d : decorators) n->add(std::move(d));
    if (at_op("[")) type_params(*n);
    if (at_op("(")) {
      auto bases = make(NodeType::ClassArgs, line());
      ++pos_;
      call_arguments(*bases);
      n->add(std::move(bases));
    }
    block(*n);
    return n;
  }

  NodePtr if_stmt() {
    auto n = make(NodeType::If, line());
    ++pos_;
    n->add(named_expression());
    block(*n);
    while (at_kw("elif")) {
      auto e = make(NodeType::Elif, line());
      ++pos_;
      e->add(named_expression());
      block(*e);
      n->add(std::move(e));
    }
    else_clause(*n);
    return n;
  }

  void else_clause(Node& owner) {
    if (!at_kw("else")) return;
    auto e = make(NodeType::Else, line());
    ++pos_;
    block(*e);
    owner.add(std::move(e));
  }

  NodePtr while_stmt() {
    auto n = make(NodeType::While, line());
    ++pos_;
    n->add(named_expression());
    block(*n);
    else_clause(*n);
    return n;
  }

  NodePtr for_stmt(bool is_async) {
    auto n = make(is_async ? NodeType::AsyncFor : NodeType::For, line());
    expect_kw("for");
    n->add(target_list(Context::Store));
    expect_kw("in");
    n->add(star_expressions());
    block(*n);
    else_clause(*n);
    return n;
  }

  NodePtr try_stmt() {
    auto n = make(NodeType::Try, line());
    ++pos_;
    block(*n);
    bool handlers = false;
    while (at_kw("except")) {
      handlers = true;
      auto h = make(NodeType::ExceptHandler, line());
      ++pos_;
      if (accept_op("*")) h->sub = 1;
      if (!at_op(":")) {
        h->add(expression());
        if (at_op(",")) fail("multiple exception types must be parenthesized");
        if (accept_kw("as")) h->name = identifier();
      } else if (h->sub == 1) {
        fail("expected exception type after 'except*'");
      }
      block(*h);
      n->add(std::move(h));
    }
    if (handlers) else_clause(*n);
    if (at_kw("finally")) {
      auto f = make(NodeType::Finally, line());
      ++pos_;
      block(*f);
      n->add(std::move(f));
    } else if (!handlers) {
      fail("expected 'except' or 'finally' block");
    }
    return n;
  }

  NodePtr with_stmt(bool is_async) {
    auto n = make(is_async ? NodeType::AsyncWith : NodeType::With, line());
    expect_kw("with");
    bool parenthesized = false;
    if (at_op("(")) {
      const std::size_t saved = pos_;
      std::vector<NodePtr> items;
      try {
        ++pos_;
        do {
          if (at_op(")") && !items.empty()) break;
          items.push_back(with_item());
        } while (accept_op(","));
        expect_op(")");
        if (!at_op(":")) fail("expected ':'");
        parenthesized = true;
      } catch (const ParseError&) {
        pos_ = saved;
      }
      if (parenthesized) {
        for (auto& item : items) n->add(std::move(item));
      }
    }
    if (!parenthesized) {
      do {
        n->add(with_item());
      } while (accept_op(","));
    }
    block(*n);
    return n;
  }

  NodePtr with_item() {
    auto item = make(NodeType::WithItem, line());
    item->add(expression());
    if (accept_kw("as")) {
      NodePtr target = at_op("*") ? star_expression() : single_target();
      set_context(*target, Context::Store);
      item->add(std::move(target));
    }
    return item;
  }

  NodePtr single_target() { return bitwise_or(); }

  // Targets of for loops, comprehensions and del: stops before 'in'.
  NodePtr target_list(Context ctx) {
    const int ln = line();
    std::vector<NodePtr> items;
    bool trailing_comma = false;
    do {
      if (!starts_expression()) break;
      trailing_comma = false;
      if (at_op("*")) {
        auto s = make(NodeType::Starred, line());
        ++pos_;
        s->add(bitwise_or());
        items.push_back(std::move(s));
      } else {
        items.push_back(bitwise_or());
      }
      trailing_comma = at_op(",");
    } while (accept_op(","));
    if (items.empty()) fail("expected a target");
    NodePtr target;
    if (items.size() == 1 && !trailing_comma) {
      target = std::move(items.front());
    } else {
      target = make(NodeType::Tuple, ln);
      for (auto& item : items) target->add(std::move(item));
    }
    set_context(*target, ctx);
    return target;
  }

  void set_context(Node& node, Context ctx) {
    switch (node.type) {
      case NodeType::Name:
      case NodeType::Attribute:
      case NodeType::Subscript:
        node.ctx = ctx;
        return;
      case NodeType::Tuple:
      case NodeType::List:
        node.ctx = ctx;
        for (auto& child : node.children) set_context(*child, ctx);
        return;
      case NodeType::Starred:
        if (ctx == Context::Del) break;
        node.ctx = ctx;
        set_context(*node.children.front(), ctx);
        return;
      default:
        break;
    }
    throw ParseError(node.line, std::string("cannot ") +
                                    (ctx == Context::Del ? "delete " : "assign to ") +
                                    std::string(to_string(node.type)));
  }

  // ---- match statement -----------------------------------------------------

  NodePtr try_match_stmt() {
    const std::size_t saved = pos_;
    // "match" followed by something that cannot begin a subject is a name.
    if (!starts_expression(1) || at_op("=", 1)) return nullptr;
    try {
      auto n = make(NodeType::Match, line());
      ++pos_;
      n->add(match_subject());
      expect_op(":");
      expect(TokenType::Newline, "newline");
      expect(TokenType::Indent, "an indented block");
      while (at_kw("case")) {
        auto c = make(NodeType::MatchCase, line());
        ++pos_;
        c->add(case_patterns());
        if (accept_kw("if")) c->add(named_expression());
        block(*c);
        n->add(std::move(c));
      }
      if (n->children.size() < 2) fail("expected 'case'");
      expect(TokenType::Dedent, "end of match block");
      return n;
    } catch (const ParseError&) {
      // Only fall back when the prefix is not clearly a match statement.
      pos_ = saved;
      if (looks_like_match_statement()) throw;
      return nullptr;
    }
  }

  // A "match ...:" line followed by an indented "case" is unambiguous.
  bool looks_like_match_statement() const {
    int depth = 0;
    for (std::size_t i = pos_ + 1; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.type == TokenType::Newline) {
        return i + 2 < tokens_.size() && tokens_[i - 1].type == TokenType::Op &&
               tokens_[i - 1].text == ":" && depth == 0 &&
               tokens_[i + 1].type == TokenType::Indent &&
               tokens_[i + 2].type == TokenType::Name &&
               tokens_[i + 2].text == "case";
      }
      if (t.type == TokenType::Op) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      }
      if (t.type == TokenType::End) return false;
    }
    return false;
  }

  NodePtr match_subject() {
    const int ln = line();
    NodePtr first = at_op("*") ? star_expression() : named_expression();
    if (!at_op(",")) {
      if (first->type == NodeType::Starred) fail("starred subject needs a comma");
      return first;
    }
    auto tuple = make(NodeType::Tuple, ln);
    tuple->add(std::move(first));
    while (accept_op(",")) {
      if (at_op(":")) break;
      tuple->add(at_op("*") ? star_expression() : named_expression());
    }
    return tuple;
  }

  NodePtr pattern_node(int ln, std::string name = {}) {
    auto p = make(NodeType::Pattern, ln);
    p->name = std::move(name);
    return p;
  }

  NodePtr case_patterns() {
    const int ln = line();
    NodePtr first = maybe_star_pattern();
    if (!at_op(",")) return first;
    auto seq = pattern_node(ln);
    seq->add(std::move(first));
    while (accept_op(",")) {
      if (at_op(":") || at_kw("if")) break;
      seq->add(maybe_star_pattern());
    }
    return seq;
  }

  NodePtr maybe_star_pattern() {
    if (at_op("*")) {
      const int ln = line();
      ++pos_;
      std::string name = identifier();
      return pattern_node(ln, name == "_" ? std::string{} : name);
    }
    return pattern();
  }

  NodePtr pattern() {
    DepthGuard guard(*this);
    const int ln = line();
    NodePtr p = or_pattern();
    if (accept_kw("as")) {
      std::string name = identifier();
      if (name == "_") fail("cannot use '_' as a target");
      auto as = pattern_node(ln, name);
      as->add(std::move(p));
      return as;
    }
    return p;
  }

  NodePtr or_pattern() {
    const int ln = line();
    NodePtr first = closed_pattern();
    if (!at_op("|")) return first;
    auto alt = pattern_node(ln);
    alt->add(std::move(first));
    while (accept_op("|")) alt->add(closed_pattern());
    return alt;
  }

  NodePtr signed_number() {
    const int ln = line();
    NodePtr value;
    if (at_op("-")) {
      ++pos_;
      if (!at(TokenType::Number)) fail("expected a number");
      value = make(NodeType::UnaryOp, ln);
      value->name = "-";
      value->add(number());
    } else {
      value = number();
    }
    if (at_op("+") || at_op("-")) {
      auto bin = make(NodeType::BinOp, ln);
      bin->name = tokens_[pos_++].text;
      bin->add(std::move(value));
      if (!at(TokenType::Number)) fail("expected an imaginary number");
      bin->add(number());
      value = std::move(bin);
    }
    return value;
  }

  NodePtr number() {
    auto c = make(NodeType::Constant, line());
    c->sub = static_cast<std::uint8_t>(ConstantKind::Number);
    c->value = tokens_[pos_++].text;
    return c;
  }

  NodePtr closed_pattern() {
    DepthGuard guard(*this);
    const int ln = line();
    const Token& t = peek();
    if (t.type == TokenType::Number || at_op("-")) {
      auto p = pattern_node(ln);
      p->add(signed_number());
      return p;
    }
    if (t.type == TokenType::String) {
      auto p = pattern_node(ln);
      p->add(strings());
      return p;
    }
    if (at_kw("None") || at_kw("True") || at_kw("False")) {
      auto p = pattern_node(ln);
      auto c = make(NodeType::Constant, ln);
      c->sub = static_cast<std::uint8_t>(ConstantKind::Singleton);
      c->value = tokens_[pos_++].text;
      p->add(std::move(c));
      return p;
    }
    if (at_identifier()) {
      std::string first = identifier();
      NodePtr ref = make(NodeType::Name, ln);
      ref->name = first;
      bool dotted = false;
      while (accept_op(".")) {
        dotted = true;
        auto attr = make(NodeType::Attribute, ln);
        attr->name = identifier();
        attr->add(std::move(ref));
        ref = std::move(attr);
      }
      if (at_op("(")) return class_pattern(std::move(ref), ln);
      if (dotted) {
        auto p = pattern_node(ln);
        p->add(std::move(ref));
        return p;
      }
      return pattern_node(ln, first == "_" ? std::string{} : first);
    }
    if (accept_op("(")) {
      if (accept_op(")")) return pattern_node(ln);
      NodePtr first = maybe_star_pattern();
      if (accept_op(")")) return first;
      auto seq = pattern_node(ln);
      seq->add(std::move(first));
      while (accept_op(",")) {
        if (at_op(")")) break;
        seq->add(maybe_star_pattern());
      }
      expect_op(")");
      return seq;
    }
    if (accept_op("[")) {
      auto seq = pattern_node(ln);
      while (!at_op("]")) {
        seq->add(maybe_star_pattern());
        if (!accept_op(",")) break;
      }
      expect_op("]");
      return seq;
    }
    if (accept_op("{")) {
      auto mapping = pattern_node(ln);
      while (!at_op("}")) {
        if (accept_op("**")) {
          mapping->add(pattern_node(line(), identifier()));
        } else {
          if (peek().type == TokenType::Number || at_op("-")) {
            mapping->add(signed_number());
          } else if (peek().type == TokenType::String) {
            mapping->add(strings());
          } else if (at_kw("None") || at_kw("True") || at_kw("False")) {
            auto c = make(NodeType::Constant, line());
            c->sub = static_cast<std::uint8_t>(ConstantKind::Singleton);
            c->value = tokens_[pos_++].text;
            mapping->add(std::move(c));
          } else {
            NodePtr ref = make(NodeType::Name, line());
            ref->name = identifier();
            if (!at_op(".")) fail("mapping pattern keys must be literals or dotted names");
            while (accept_op(".")) {
              auto attr = make(NodeType::Attribute, ref->line);
              attr->name = identifier();
              attr->add(std::move(ref));
              ref = std::move(attr);
            }
            mapping->add(std::move(ref));
          }
          expect_op(":");
          mapping->add(pattern());
        }
        if (!accept_op(",")) break;
      }
      expect_op("}");
      return mapping;
    }
    fail("invalid pattern");
  }

  NodePtr class_pattern(NodePtr cls, int ln) {
    expect_op("(");
    auto p = pattern_node(ln);
    p->add(std::move(cls));
    bool keywords = false;
    while (!at_op(")")) {
      if (at_identifier() && at_op("=", 1)) {
        keywords = true;
        ++pos_;
        ++pos_;
        p->add(pattern());
      } else {
        if (keywords) fail("positional patterns follow keyword patterns");
        p->add(pattern());
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return p;
  }

  // ---- expressions ---------------------------------------------------------

  NodePtr star_expressions() {
    const int ln = line();
    NodePtr first = star_expression();
    if (!at_op(",")) return first;
    auto tuple = make(NodeType::Tuple, ln);
    tuple->add(std::move(first));
    while (accept_op(",")) {
      if (!starts_expression()) break;
      tuple->add(star_expression());
    }
    return tuple;
  }

  NodePtr star_expression() {
    if (at_op("*")) {
      auto s = make(NodeType::Starred, line());
      ++pos_;
      s->add(bitwise_or());
      return s;
    }
    return expression();
  }

  NodePtr star_named_expression() {
    if (at_op("*")) {
      auto s = make(NodeType::Starred, line());
      ++pos_;
      s->add(bitwise_or());
      return s;
    }
    return named_expression();
  }

  NodePtr named_expression() {
    if (at_identifier() && at_op(":=", 1)) {
      auto n = make(NodeType::NamedExpr, line());
      auto target = make(NodeType::Name, line());
      target->name = identifier();
      target->ctx = Context::Store;
      ++pos_;
      n->add(std::move(target));
      n->add(expression());
      return n;
    }
    NodePtr e = expression();
    if (at_op(":=")) fail("cannot use assignment expressions with this target");
    return e;
  }

  NodePtr expression() {
    DepthGuard guard(*this);
    if (at_kw("lambda")) return lambdef();
    const int ln = line();
    NodePtr body = disjunction();
    if (!at_kw("if")) return body;
    ++pos_;
    auto n = make(NodeType::IfExp, ln);
    n->add(std::move(body));
    n->add(disjunction());
    expect_kw("else");
    n->add(expression());
    return n;
  }

  NodePtr lambdef() {
    auto n = make(NodeType::Lambda, line());
    ++pos_;
    n->add(parameters(false, ":"));
    expect_op(":");
    n->add(expression());
    return n;
  }

  NodePtr yield_expr() {
    const int ln = line();
    expect_kw("yield");
    if (accept_kw("from")) {
      auto n = make(NodeType::YieldFrom, ln);
      n->add(expression());
      return n;
    }
    auto n = make(NodeType::Yield, ln);
    if (starts_expression()) n->add(star_expressions());
    return n;
  }

  NodePtr bool_chain(std::string_view op, NodePtr (Parser::*next)()) {
    const int ln = line();
    NodePtr first = (this->*next)();
    if (!at_kw(op)) return first;
    auto n = make(NodeType::BoolOp, ln);
    n->name = std::string(op);
    n->add(std::move(first));
    while (accept_kw(op)) n->add((this->*next)());
    return n;
  }

  NodePtr disjunction() { return bool_chain("or", &Parser::conjunction); }
  NodePtr conjunction() { return bool_chain("and", &Parser::inversion); }

  NodePtr inversion() {
    if (at_kw("not")) {
      DepthGuard guard(*this);
      auto n = make(NodeType::UnaryOp, line());
      ++pos_;
      n->name = "not";
      n->add(inversion());
      return n;
    }
    return comparison();
  }

  bool comparison_operator() {
    static constexpr std::array<std::string_view, 6> ops = {"<",  ">",  "==",
                                                            ">=", "<=", "!="};
    for (auto op : ops) {
      if (accept_op(op)) return true;
    }
    if (accept_kw("in")) return true;
    if (at_kw("not") && at_kw("in", 1)) {
      pos_ += 2;
      return true;
    }
    if (accept_kw("is")) {
      accept_kw("not");
      return true;
    }
    return false;
  }

  NodePtr comparison() {
    const int ln = line();
    NodePtr first = bitwise_or();
    if (!comparison_operator()) return first;
    auto n = make(NodeType::Compare, ln);
    n->add(std::move(first));
    do {
      n->add(bitwise_or());
    } while (comparison_operator());
    return n;
  }

  template <std::size_t N>
  NodePtr binary_chain(const std::array<std::string_view, N>& ops,
                       NodePtr (Parser::*next)()) {
    const int ln = line();
    NodePtr left = (this->*next)();
    while (true) {
      const std::string_view* matched = nullptr;
      for (const auto& op : ops) {
        if (at_op(op)) {
          matched = &op;
          break;
        }
      }
      if (!matched) return left;
      auto n = make(NodeType::BinOp, ln);
      n->name = std::string(*matched);
      ++pos_;
      n->add(std::move(left));
      n->add((this->*next)());
      left = std::move(n);
    }
  }

  NodePtr bitwise_or() {
    static constexpr std::array<std::string_view, 1> ops = {"|"};
    return binary_chain(ops, &Parser::bitwise_xor);
  }
  NodePtr bitwise_xor() {
    static constexpr std::array<std::string_view, 1> ops = {"^"};
    return binary_chain(ops, &Parser::bitwise_and);
  }
  NodePtr bitwise_and() {
    static constexpr std::array<std::string_view, 1> ops = {"&"};
    return binary_chain(ops, &Parser::shift_expr);
  }
  NodePtr shift_expr() {
    static constexpr std::array<std::string_view, 2> ops = {"<<", ">>"};
    return binary_chain(ops, &Parser::sum);
  }
  NodePtr sum() {
    static constexpr std::array<std::string_view, 2> ops = {"+", "-"};
    return binary_chain(ops, &Parser::term);
  }
  NodePtr term() {
    static constexpr std::array<std::string_view, 5> ops = {"*", "/", "//", "%",
                                                            "@"};
    return binary_chain(ops, &Parser::factor);
  }

  NodePtr factor() {
    if (at_op("+") || at_op("-") || at_op("~")) {
      DepthGuard guard(*this);
      auto n = make(NodeType::UnaryOp, line());
      n->name = tokens_[pos_++].text;
      n->add(factor());
      return n;
    }
    return power();
  }

  NodePtr power() {
    const int ln = line();
    NodePtr base = await_primary();
    if (!at_op("**")) return base;
    auto n = make(NodeType::BinOp, ln);
    n->name = "**";
    ++pos_;
    n->add(std::move(base));
    n->add(factor());
    return n;
  }

  NodePtr await_primary() {
    if (at_kw("await")) {
      DepthGuard guard(*this);
      auto n = make(NodeType::Await, line());
      ++pos_;
      n->add(primary());
      return n;
    }
    return primary();
  }

  NodePtr primary() {
    // Trailers start where the atom starts, including any parenthesis.
    const int ln = line();
    NodePtr node = atom();
    while (true) {
      if (accept_op(".")) {
        auto attr = make(NodeType::Attribute, ln);
        attr->name = identifier();
        attr->add(std::move(node));
        node = std::move(attr);
      } else if (accept_op("(")) {
        auto call = make(NodeType::Call, ln);
        call->add(std::move(node));
        call_arguments(*call);
        node = std::move(call);
      } else if (accept_op("[")) {
        auto sub = make(NodeType::Subscript, ln);
        sub->add(std::move(node));
        sub->add(slices());
        expect_op("]");
        node = std::move(sub);
      } else {
        return node;
      }
    }
  }

  // After '('; consumes ')'.
  void call_arguments(Node& call) {
    const int open_line = tokens_[pos_ - 1].line;
    bool keyword_seen = false;
    bool double_star_seen = false;
    std::size_t count = 0;
    while (!at_op(")")) {
      ++count;
      if (at_op("*")) {
        auto s = make(NodeType::Starred, line());
        ++pos_;
        s->add(expression());
        if (double_star_seen) {
          fail("iterable argument unpacking follows keyword argument unpacking");
        }
        call.add(std::move(s));
      } else if (at_op("**")) {
        auto k = make(NodeType::Keyword, line());
        ++pos_;
        k->add(expression());
        call.add(std::move(k));
        keyword_seen = double_star_seen = true;
      } else if (at_identifier() && at_op("=", 1)) {
        auto k = make(NodeType::Keyword, line());
        k->name = identifier();
        ++pos_;
        k->add(expression());
        call.add(std::move(k));
        keyword_seen = true;
      } else {
        NodePtr arg = named_expression();
        if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
          arg = comprehension(NodeType::GeneratorExp, std::move(arg), nullptr);
          if (count != 1 || !at_op(")")) {
            fail("generator expression must be parenthesized");
          }
          // A bare generator argument shares the call's parentheses.
          arg->line = open_line;
        } else if (at_op("=")) {
          fail("expression cannot contain assignment");
        }
        if (keyword_seen) {
          fail(double_star_seen
                   ? "positional argument follows keyword argument unpacking"
                   : "positional argument follows keyword argument");
        }
        call.add(std::move(arg));
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
  }

  NodePtr slices() {
    const int ln = line();
    NodePtr first = slice_item();
    if (!at_op(",")) return first;
    auto tuple = make(NodeType::Tuple, ln);
    tuple->add(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      tuple->add(slice_item());
    }
    return tuple;
  }

  NodePtr slice_item() {
    const int ln = line();
    if (at_op("*")) return star_expression();
    NodePtr lower;
    if (!at_op(":")) {
      lower = named_expression();
      if (!at_op(":")) return lower;
    }
    auto s = make(NodeType::Slice, ln);
    if (lower) s->add(std::move(lower));
    expect_op(":");
    if (!at_op(":") && !at_op("]") && !at_op(",")) s->add(expression());
    if (accept_op(":")) {
      if (!at_op("]") && !at_op(",")) s->add(expression());
    }
    return s;
  }

  NodePtr comprehension(NodeType type, NodePtr element, NodePtr value) {
    auto n = make(type, element->line);
    n->add(std::move(element));
    if (value) n->add(std::move(value));
    while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      auto c = make(NodeType::Comprehension, line());
      if (accept_kw("async")) c->sub = 1;
      expect_kw("for");
      c->add(target_list(Context::Store));
      expect_kw("in");
      c->add(disjunction());
      while (accept_kw("if")) c->add(disjunction());
      n->add(std::move(c));
    }
    return n;
  }

  bool at_comprehension() const {
    return at_kw("for") || (at_kw("async") && at_kw("for", 1));
  }

  NodePtr atom() {
    DepthGuard guard(*this);
    const Token& t = peek();
    const int ln = t.line;
    switch (t.type) {
      case TokenType::Number:
        return number();
      case TokenType::String:
        return strings();
      case TokenType::Name: {
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          auto c = make(NodeType::Constant, ln);
          c->sub = static_cast<std::uint8_t>(ConstantKind::Singleton);
          c->value = t.text;
          ++pos_;
          return c;
        }
        if (is_keyword(t.text)) fail("unexpected keyword");
        auto name = make(NodeType::Name, ln);
        name->name = t.text;
        ++pos_;
        return name;
      }
      case TokenType::Op:
        break;
      default:
        fail("unexpected token");
    }
    if (accept_op("...")) {
      auto c = make(NodeType::Constant, ln);
      c->sub = static_cast<std::uint8_t>(ConstantKind::Ellipsis);
      c->value = "...";
      return c;
    }
    if (accept_op("(")) return parenthesized(ln);
    if (accept_op("[")) {
      auto list = make(NodeType::List, ln);
      if (accept_op("]")) return list;
      NodePtr first = star_named_expression();
      if (at_comprehension()) {
        if (first->type == NodeType::Starred) {
          fail("iterable unpacking cannot be used in comprehension");
        }
        auto comp = comprehension(NodeType::ListComp, std::move(first), nullptr);
        comp->line = ln;
        expect_op("]");
        return comp;
      }
      list->add(std::move(first));
      while (accept_op(",")) {
        if (at_op("]")) break;
        list->add(star_named_expression());
      }
      expect_op("]");
      return list;
    }
    if (accept_op("{")) return braces(ln);
    fail("unexpected token");
  }

  NodePtr parenthesized(int ln) {
    if (accept_op(")")) return make(NodeType::Tuple, ln);
    if (at_kw("yield")) {
      NodePtr y = yield_expr();
      expect_op(")");
      return y;
    }
    NodePtr first = star_named_expression();
    if (at_comprehension()) {
      if (first->type == NodeType::Starred) {
        fail("iterable unpacking cannot be used in comprehension");
      }
      auto gen = comprehension(NodeType::GeneratorExp, std::move(first), nullptr);
      gen->line = ln;
      expect_op(")");
      return gen;
    }
    if (!at_op(",")) {
      expect_op(")");
      if (first->type == NodeType::Starred) fail("cannot use starred expression here");
      return first;
    }
    auto tuple = make(NodeType::Tuple, ln);
    tuple->add(std::move(first));
    while (accept_op(",")) {
      if (at_op(")")) break;
      tuple->add(star_named_expression());
    }
    expect_op(")");
    return tuple;
  }

  NodePtr braces(int ln) {
    if (accept_op("}")) return make(NodeType::Dict, ln);
    if (at_op("**")) return dict_items(make(NodeType::Dict, ln));
    NodePtr first = star_named_expression();
    if (first->type != NodeType::Starred && accept_op(":")) {
      NodePtr value = expression();
      if (at_comprehension()) {
        auto comp = comprehension(NodeType::DictComp, std::move(first),
                                  std::move(value));
        comp->line = ln;
        expect_op("}");
        return comp;
      }
      auto dict = make(NodeType::Dict, ln);
      dict->add(std::move(first));
      dict->add(std::move(value));
      if (!accept_op(",")) {
        expect_op("}");
        return dict;
      }
      return dict_items(std::move(dict));
    }
    if (at_comprehension()) {
      if (first->type == NodeType::Starred) {
        fail("iterable unpacking cannot be used in comprehension");
      }
      auto comp = comprehension(NodeType::SetComp, std::move(first), nullptr);
      comp->line = ln;
      expect_op("}");
      return comp;
    }
    auto set = make(NodeType::Set, ln);
    set->add(std::move(first));
    while (accept_op(",")) {
      if (at_op("}")) break;
      set->add(star_named_expression());
    }
    expect_op("}");
    return set;
  }

  NodePtr dict_items(NodePtr dict) {
    while (!at_op("}")) {
      if (at_op("**")) {
        auto d = make(NodeType::DoubleStarred, line());
        ++pos_;
        d->add(bitwise_or());
        dict->add(std::move(d));
      } else {
        dict->add(expression());
        expect_op(":");
        dict->add(expression());
      }
      if (!accept_op(",")) break;
    }
    expect_op("}");
    return dict;
  }

  NodePtr strings() {
    const int ln = line();
    bool any_bytes = false;
    bool any_text = false;
    std::vector<const Token*> parts;
    while (at(TokenType::String)) {
      const Token& t = tokens_[pos_++];
      (t.is_bytes ? any_bytes : any_text) = true;
      parts.push_back(&t);
    }
    if (any_bytes && any_text) fail("cannot mix bytes and nonbytes literals");
    bool formatted = false;
    for (const Token* t : parts) formatted = formatted || t->is_fstring;
    if (!formatted) {
      auto c = make(NodeType::Constant, ln);
      c->sub = static_cast<std::uint8_t>(any_bytes ? ConstantKind::Bytes
                                                   : ConstantKind::String);
      for (const Token* t : parts) c->value += t->text;
      return c;
    }
    auto f = make(NodeType::FormattedString, ln);
    for (const Token* t : parts) {
      for (const FStringField& field : t->fields) {
        f->add(parse_field(field));
      }
    }
    return f;
  }

  NodePtr parse_field(const FStringField& field) {
    if (depth_ > kMaxNesting / 2) fail("f-string nested too deeply");
    Parser sub(tokenize("(" + field.expression + "\n)", field.line));
    sub.depth_ = depth_ + 1;
    return sub.fstring_field();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Node::~Node() {
  std::vector<NodePtr> pending;
  for (auto& child : children)
    if (child) pending.push_back(std::move(child));
  while (!pending.empty()) {
    NodePtr node = std::move(pending.back());
    pending.pop_back();
    for (auto& child : node->children)
      if (child) pending.push_back(std::move(child));
  }
}

bool is_statement(NodeType type) {
  switch (type) {
    case NodeType::FunctionDef:
    case NodeType::AsyncFunctionDef:
    case NodeType::ClassDef:
    case NodeType::Return:
    case NodeType::Delete:
    case NodeType::Assign:
    case NodeType::AugAssign:
    case NodeType::AnnAssign:
    case NodeType::TypeAlias:
    case NodeType::For:
    case NodeType::AsyncFor:
    case NodeType::While:
    case NodeType::If:
    case NodeType::With:
    case NodeType::AsyncWith:
    case NodeType::Match:
    case NodeType::Raise:
    case NodeType::Try:
    case NodeType::Assert:
    case NodeType::Import:
    case NodeType::ImportFrom:
    case NodeType::Global:
    case NodeType::Nonlocal:
    case NodeType::ExprStmt:
    case NodeType::Pass:
    case NodeType::Break:
    case NodeType::Continue:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(NodeType type) {
  switch (type) {
    case NodeType::Name: return "name";
    case NodeType::Constant: return "literal";
    case NodeType::Call: return "function call";
    case NodeType::BinOp:
    case NodeType::UnaryOp: return "expression";
    case NodeType::BoolOp: return "expression";
    case NodeType::Compare: return "comparison";
    case NodeType::Lambda: return "lambda";
    case NodeType::IfExp: return "conditional expression";
    case NodeType::Dict: return "dict literal";
    case NodeType::Set: return "set display";
    case NodeType::ListComp: return "list comprehension";
    case NodeType::SetComp: return "set comprehension";
    case NodeType::DictComp: return "dict comprehension";
    case NodeType::GeneratorExp: return "generator expression";
    case NodeType::Await: return "await expression";
    case NodeType::Yield:
    case NodeType::YieldFrom: return "yield expression";
    case NodeType::FormattedString: return "f-string expression";
    case NodeType::NamedExpr: return "named expression";
    case NodeType::Starred: return "starred";
    default: return "expression";
  }
}

NodePtr parse_module(std::string_view source) {
  return Parser(tokenize(source)).module();
}

}  // namespace cefr::python
