#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cefr::python {

// A uniform syntax-tree node. Child order per node type:
//
//   Module            statements
//   FunctionDef       Decorator* TypeParam* Arguments Returns? statements
//   ClassDef          Decorator* TypeParam* ClassArgs? statements
//   ClassArgs         base expressions, Keyword*
//   Arguments         Arg*            (Arg: Annotation? Default?)
//   If / Elif         test statements [Elif* Else?]
//   For               target iter statements Else?
//   While             test statements Else?
//   Try               statements ExceptHandler* Else? Finally?
//   ExceptHandler     type? statements          (name = bound name)
//   With              WithItem* statements      (WithItem: expr target?)
//   Match             subject MatchCase*        (MatchCase: Pattern guard? statements)
//   Assign            targets... value
//   AugAssign         target value              (name = operator)
//   AnnAssign         target Annotation value?
//   Call              func args... Keyword*     (Keyword name empty for **)
//   Dict              key value ... | DoubleStarred
//   ListComp etc.     element(s) Comprehension* (Comprehension: target iter ifs...)
//   Lambda            Arguments body
//   Global/Nonlocal   Name*
enum class NodeType : std::uint8_t {
  Module,
  // statements
  FunctionDef,
  AsyncFunctionDef,
  ClassDef,
  Return,
  Delete,
  Assign,
  AugAssign,
  AnnAssign,
  TypeAlias,
  For,
  AsyncFor,
  While,
  If,
  Elif,
  Else,
  Finally,
  With,
  AsyncWith,
  WithItem,
  Match,
  MatchCase,
  Pattern,
  Raise,
  Try,
  ExceptHandler,
  Assert,
  Import,
  ImportFrom,
  Alias,
  Global,
  Nonlocal,
  ExprStmt,
  Pass,
  Break,
  Continue,
  // expressions
  BoolOp,
  NamedExpr,
  BinOp,
  UnaryOp,
  Lambda,
  IfExp,
  Dict,
  Set,
  ListComp,
  SetComp,
  DictComp,
  GeneratorExp,
  Comprehension,
  Await,
  Yield,
  YieldFrom,
  Compare,
  Call,
  Keyword,
  FormattedString,
  Constant,
  Attribute,
  Subscript,
  Starred,
  DoubleStarred,
  Name,
  List,
  Tuple,
  Slice,
  // definition pieces
  Decorator,
  TypeParam,
  ClassArgs,
  Arguments,
  Arg,
  Annotation,
  Default,
  Returns,
};

enum class Context : std::uint8_t { Load, Store, Del };

enum class ArgKind : std::uint8_t { Positional, VarArgs, KeywordOnly, KwArgs };

enum class ConstantKind : std::uint8_t { Number, String, Bytes, Ellipsis, Singleton };

struct Node {
  NodeType type = NodeType::Module;
  int line = 0;
  Context ctx = Context::Load;
  /// ArgKind for Arg, ConstantKind for Constant, 1 for async comprehensions
  /// and except* handlers, 0 otherwise.
  std::uint8_t sub = 0;
  /// Identifier, attribute, operator, module or parameter name by type.
  std::string name;
  /// Alias target for Alias, literal text for Constant.
  std::string value;
  std::vector<std::unique_ptr<Node>> children;

  Node() = default;
  Node(NodeType t, int l) : type(t), line(l) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;
  // Tears the subtree down iteratively; very long operator chains would
  // otherwise recurse once per node.
  ~Node();

  Node* add(std::unique_ptr<Node> child) {
    children.push_back(std::move(child));
    return children.back().get();
  }

  bool is_string_constant() const {
    return type == NodeType::Constant &&
           sub == static_cast<std::uint8_t>(ConstantKind::String);
  }
};

using NodePtr = std::unique_ptr<Node>;

bool is_statement(NodeType type);

std::string_view to_string(NodeType type);

}  // namespace cefr::python
