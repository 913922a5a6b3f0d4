#include "cefr/analyzer.hpp"

#include <memory>
#include <unordered_set>

#include "cefr/construct_kinds.hpp"
#include "cefr/python/parser.hpp"

namespace cefr {

namespace {

using python::ArgKind;
using python::Context;
using python::Node;
using python::NodeType;

// ---- scope analysis ----------------------------------------------------------
//
// Resolves free variables the way the compiler's symbol table does, to tell
// closures (nested functions that capture a name bound in an enclosing
// function) apart from plain nested functions. Also records which functions
// contain yield.

enum class ScopeKind { Module, Function, Lambda, Class, Comprehension };

struct Scope {
  ScopeKind kind = ScopeKind::Module;
  const Node* node = nullptr;
  Scope* parent = nullptr;
  std::unordered_set<std::string> bound;
  std::unordered_set<std::string> used;
  std::unordered_set<std::string> globals;
  std::unordered_set<std::string> nonlocals;
  std::unordered_set<std::string> free;

  bool function_like() const {
    return kind == ScopeKind::Function || kind == ScopeKind::Lambda ||
           kind == ScopeKind::Comprehension;
  }
  bool binds_locally(const std::string& name) const {
    return bound.contains(name) && !globals.contains(name) &&
           !nonlocals.contains(name);
  }
};

struct ScopeFacts {
  std::unordered_set<const Node*> closures;
  std::unordered_set<const Node*> generators;
};

class ScopeAnalysis {
 public:
  ScopeFacts run(const Node& module) {
    postponed_annotations_ = has_future_annotations(module);
    Scope* root = new_scope(ScopeKind::Module, &module, nullptr);
    for (const auto& stmt : module.children) pending_.push_back({stmt.get(), root});
    while (!pending_.empty()) {
      const auto [node, scope] = pending_.back();
      pending_.pop_back();
      visit(*node, *scope);
    }
    resolve_free_names();
    ScopeFacts facts;
    facts.generators = std::move(generators_);
    for (const auto& scope : scopes_) {
      if (scope->kind == ScopeKind::Function && captures_enclosing(*scope)) {
        facts.closures.insert(scope->node);
      }
    }
    return facts;
  }

 private:
  struct Item {
    const Node* node;
    Scope* scope;
  };

  Scope* new_scope(ScopeKind kind, const Node* node, Scope* parent) {
    auto scope = std::make_unique<Scope>();
    scope->kind = kind;
    scope->node = node;
    scope->parent = parent;
    scopes_.push_back(std::move(scope));
    return scopes_.back().get();
  }

  static bool has_future_annotations(const Node& module) {
    bool docstring_allowed = true;
    for (const auto& stmt : module.children) {
      if (docstring_allowed && stmt->type == NodeType::ExprStmt &&
          stmt->children[0]->is_string_constant()) {
        docstring_allowed = false;
        continue;
      }
      if (stmt->type != NodeType::ImportFrom || stmt->name != "__future__") break;
      docstring_allowed = false;
      for (const auto& alias : stmt->children) {
        if (alias->name == "annotations") return true;
      }
    }
    return false;
  }

  void push(const Node* node, Scope* scope) { pending_.push_back({node, scope}); }

  void push_children(const Node& node, Scope* scope) {
    for (const auto& child : node.children) push(child.get(), scope);
  }

  void bind_parameters(const Node& arguments, Scope& inner, Scope* outer) {
    for (const auto& arg : arguments.children) {
      inner.bound.insert(arg->name);
      // Annotations and defaults are evaluated in the defining scope.
      push_children(*arg, outer);
    }
  }

  void visit(const Node& node, Scope& scope) {
    switch (node.type) {
      case NodeType::FunctionDef:
      case NodeType::AsyncFunctionDef: {
        scope.bound.insert(node.name);
        Scope* inner = new_scope(ScopeKind::Function, &node, &scope);
        for (const auto& child : node.children) {
          switch (child->type) {
            case NodeType::Decorator:
            case NodeType::TypeParam:
            case NodeType::Returns:
              push(child.get(), &scope);
              break;
            case NodeType::Arguments:
              bind_parameters(*child, *inner, &scope);
              break;
            default:
              push(child.get(), inner);
          }
        }
        return;
      }
      case NodeType::Lambda: {
        Scope* inner = new_scope(ScopeKind::Lambda, &node, &scope);
        bind_parameters(*node.children[0], *inner, &scope);
        push(node.children[1].get(), inner);
        return;
      }
      case NodeType::ClassDef: {
        scope.bound.insert(node.name);
        Scope* inner = new_scope(ScopeKind::Class, &node, &scope);
        for (const auto& child : node.children) {
          const bool header = child->type == NodeType::Decorator ||
                              child->type == NodeType::TypeParam ||
                              child->type == NodeType::ClassArgs;
          push(child.get(), header ? &scope : inner);
        }
        return;
      }
      case NodeType::ListComp:
      case NodeType::SetComp:
      case NodeType::DictComp:
      case NodeType::GeneratorExp: {
        Scope* inner = new_scope(ScopeKind::Comprehension, &node, &scope);
        bool first = true;
        for (const auto& child : node.children) {
          if (child->type != NodeType::Comprehension) {
            push(child.get(), inner);
            continue;
          }
          for (std::size_t i = 0; i < child->children.size(); ++i) {
            // The outermost iterable is evaluated in the enclosing scope.
            push(child->children[i].get(), first && i == 1 ? &scope : inner);
          }
          first = false;
        }
        return;
      }
      case NodeType::Name:
        if (node.ctx == Context::Load) {
          scope.used.insert(node.name);
        } else {
          scope.bound.insert(node.name);
        }
        return;
      case NodeType::NamedExpr: {
        Scope* target = &scope;
        while (target->kind == ScopeKind::Comprehension && target->parent) {
          target = target->parent;
        }
        target->bound.insert(node.children[0]->name);
        push(node.children[1].get(), &scope);
        return;
      }
      case NodeType::Global:
        for (const auto& name : node.children) scope.globals.insert(name->name);
        return;
      case NodeType::Nonlocal:
        for (const auto& name : node.children) scope.nonlocals.insert(name->name);
        return;
      case NodeType::Alias:
        if (node.name == "*") return;
        if (!node.value.empty()) {
          scope.bound.insert(node.value);
        } else {
          scope.bound.insert(node.name.substr(0, node.name.find('.')));
        }
        return;
      case NodeType::ExceptHandler:
      case NodeType::Pattern:
        if (!node.name.empty()) scope.bound.insert(node.name);
        push_children(node, &scope);
        return;
      case NodeType::Annotation:
      case NodeType::Returns:
        // Postponed annotations are stored as strings, never evaluated.
        if (!postponed_annotations_) push_children(node, &scope);
        return;
      case NodeType::Yield:
      case NodeType::YieldFrom:
        if (scope.kind == ScopeKind::Function) generators_.insert(scope.node);
        push_children(node, &scope);
        return;
      default:
        push_children(node, &scope);
    }
  }

  void resolve_free_names() {
    // Children are created after their parents, so a reverse sweep sees every
    // child before its parent.
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      Scope& scope = **it;
      if (scope.kind == ScopeKind::Module) continue;
      std::unordered_set<std::string> candidates = scope.used;
      std::unordered_set<std::string> from_children;
      for (const auto& name : scope.free) from_children.insert(name);
      scope.free.clear();
      if (scope.kind == ScopeKind::Class) {
        for (const auto& name : candidates) {
          if (!scope.bound.contains(name) && !scope.globals.contains(name)) {
            scope.free.insert(name);
          }
        }
        scope.free.insert(from_children.begin(), from_children.end());
      } else {
        candidates.insert(from_children.begin(), from_children.end());
        for (const auto& name : candidates) {
          if (!scope.binds_locally(name) && !scope.globals.contains(name)) {
            scope.free.insert(name);
          }
        }
      }
      scope.free.insert(scope.nonlocals.begin(), scope.nonlocals.end());
      if (scope.parent && scope.parent->kind != ScopeKind::Module) {
        scope.parent->free.insert(scope.free.begin(), scope.free.end());
      }
    }
  }

  static bool captures_enclosing(const Scope& scope) {
    for (const auto& name : scope.free) {
      for (const Scope* outer = scope.parent; outer; outer = outer->parent) {
        if (outer->kind == ScopeKind::Module) break;
        if (outer->kind == ScopeKind::Class) continue;
        if (outer->globals.contains(name)) break;
        if (outer->binds_locally(name)) return true;
      }
    }
    return false;
  }

  std::vector<std::unique_ptr<Scope>> scopes_;
  std::vector<Item> pending_;
  std::unordered_set<const Node*> generators_;
  bool postponed_annotations_ = false;
};

// ---- classification ----------------------------------------------------------

bool is_name(const Node& node, std::string_view name) {
  return node.type == NodeType::Name && node.name == name;
}

bool is_property_decorator(const Node& decorator) {
  const Node& expr = *decorator.children.front();
  if (expr.type == NodeType::Name) {
    return expr.name == "property" || expr.name == "cached_property" ||
           expr.name == "abstractproperty";
  }
  if (expr.type == NodeType::Attribute) {
    return expr.name == "setter" || expr.name == "getter" ||
           expr.name == "deleter" || expr.name == "cached_property";
  }
  return false;
}

std::string_view classify_function(const Node& node, const Node* parent,
                                   const ScopeFacts& facts) {
  const bool method = parent && parent->type == NodeType::ClassDef;
  const std::string& name = node.name;
  if (method) {
    if (name == "__new__") return kinds::kDunderNew;
    if (name == "__get__" || name == "__set__" || name == "__delete__") {
      return kinds::kDescriptorDefinition;
    }
    if (name == "__enter__" || name == "__exit__" || name == "__aenter__" ||
        name == "__aexit__") {
      return kinds::kContextManagerDefinition;
    }
  }
  for (const auto& child : node.children) {
    if (child->type == NodeType::Decorator && is_property_decorator(*child)) {
      return kinds::kPropertyDefinition;
    }
  }
  if (facts.generators.contains(&node)) return kinds::kGeneratorFunction;
  if (facts.closures.contains(&node)) return kinds::kClosure;
  return kinds::kFunctionDefinition;
}

std::string_view classify_class(const Node& node) {
  std::size_t bases = 0;
  bool metaclass = false;
  for (const auto& child : node.children) {
    if (child->type != NodeType::ClassArgs) continue;
    for (const auto& arg : child->children) {
      if (arg->type == NodeType::Keyword) {
        metaclass = metaclass || arg->name == "metaclass";
      } else if (is_name(*arg, "type")) {
        metaclass = true;
        ++bases;
      } else if (!is_name(*arg, "object")) {
        ++bases;
      }
    }
  }
  if (metaclass) return kinds::kMetaclass;
  if (bases >= 2) return kinds::kMultipleInheritance;
  if (bases == 1) return kinds::kClassInheritance;
  return kinds::kClassDefinition;
}

std::string_view classify_call(const Node& node) {
  const Node& func = *node.children.front();
  if (func.type == NodeType::Name &&
      (func.name == "getattr" || func.name == "setattr" ||
       func.name == "hasattr" || func.name == "delattr")) {
    return kinds::kDynamicAttributeAccess;
  }
  if (func.type == NodeType::Attribute && func.name == "format" &&
      func.children.front()->is_string_constant()) {
    return kinds::kStringFormatting;
  }
  return kinds::kFunctionCall;
}

// Returns the kind for `node`, or an empty view when it matches none.
std::string_view classify_node(const Node& node, const Node* parent,
                               const ScopeFacts& facts) {
  switch (node.type) {
    case NodeType::Assign:
      return kinds::kSimpleAssignment;
    case NodeType::AnnAssign:
      return node.children.size() > 2 ? kinds::kSimpleAssignment
                                       : std::string_view{};
    case NodeType::AugAssign:
      return kinds::kAugmentedAssignment;
    case NodeType::If:
      return kinds::kIfStatement;
    case NodeType::Elif:
      return kinds::kElifClause;
    case NodeType::Else:
      return kinds::kElseClause;
    case NodeType::For:
    case NodeType::AsyncFor:
      return kinds::kForStatement;
    case NodeType::While:
      return kinds::kWhileStatement;
    case NodeType::FunctionDef:
      return classify_function(node, parent, facts);
    case NodeType::AsyncFunctionDef:
      return kinds::kAsyncFunction;
    case NodeType::ClassDef:
      return classify_class(node);
    case NodeType::Call:
      return classify_call(node);
    case NodeType::Import:
    case NodeType::ImportFrom:
      return kinds::kImportStatement;
    case NodeType::Return:
      return kinds::kReturnStatement;
    case NodeType::BinOp:
      if (node.name == "%" && node.children.front()->is_string_constant()) {
        return kinds::kStringFormatting;
      }
      return kinds::kArithmeticExpression;
    case NodeType::Compare:
      return kinds::kComparisonExpression;
    case NodeType::List:
      if (node.ctx == Context::Store) return kinds::kTupleUnpacking;
      if (node.ctx == Context::Del) return {};
      for (const auto& child : node.children) {
        if (child->type == NodeType::List && child->ctx == Context::Load) {
          return kinds::kNestedList;
        }
      }
      return kinds::kListLiteral;
    case NodeType::Tuple:
      if (node.ctx == Context::Store) return kinds::kTupleUnpacking;
      if (node.ctx == Context::Del) return {};
      return kinds::kTupleLiteral;
    case NodeType::Dict:
      return kinds::kDictLiteral;
    case NodeType::Set:
      return kinds::kSetLiteral;
    case NodeType::FormattedString:
      return kinds::kStringFormatting;
    case NodeType::Arg: {
      for (const auto& child : node.children) {
        if (child->type == NodeType::Default) return kinds::kDefaultParameter;
      }
      const auto kind = static_cast<ArgKind>(node.sub);
      if (kind == ArgKind::VarArgs) return kinds::kStarArgsParameter;
      if (kind == ArgKind::KwArgs) return kinds::kKwArgsParameter;
      return {};
    }
    case NodeType::Slice:
      return kinds::kSliceExpression;
    case NodeType::Break:
      return kinds::kBreakStatement;
    case NodeType::Continue:
      return kinds::kContinueStatement;
    case NodeType::Try:
      return kinds::kTryExcept;
    case NodeType::With:
    case NodeType::AsyncWith:
      return kinds::kWithStatement;
    case NodeType::Lambda:
      return kinds::kLambdaExpression;
    case NodeType::Raise:
      return kinds::kRaiseStatement;
    case NodeType::Global:
      return kinds::kGlobalStatement;
    case NodeType::Nonlocal:
      return kinds::kNonlocalStatement;
    case NodeType::ListComp:
      return kinds::kListComprehension;
    case NodeType::DictComp:
      return kinds::kDictComprehension;
    case NodeType::SetComp:
      return kinds::kSetComprehension;
    case NodeType::GeneratorExp:
      return kinds::kGeneratorExpression;
    case NodeType::Decorator:
      return kinds::kDecorator;
    case NodeType::IfExp:
      return kinds::kConditionalExpression;
    case NodeType::Assert:
      return kinds::kAssertStatement;
    case NodeType::YieldFrom:
      return kinds::kYieldFrom;
    case NodeType::Await:
      return kinds::kAwaitExpression;
    default:
      return {};
  }
}

}  // namespace

std::vector<Occurrence> count_constructs(std::string_view source) {
  const python::NodePtr module = python::parse_module(source);
  const ScopeFacts facts = ScopeAnalysis{}.run(*module);

  std::vector<Occurrence> occurrences;
  struct Item {
    const Node* node;
    const Node* parent;
  };
  std::vector<Item> stack;
  for (auto it = module->children.rbegin(); it != module->children.rend(); ++it) {
    stack.push_back({it->get(), module.get()});
  }
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const std::string_view kind = classify_node(*item.node, item.parent, facts);
    if (!kind.empty()) occurrences.push_back({kind, item.node->line});
    const auto& children = item.node->children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      stack.push_back({it->get(), item.node});
    }
  }
  return occurrences;
}

AnalysisResult analyze_source(std::string_view source, const Catalog& catalog) {
  AnalysisResult result;
  try {
    result.occurrences = count_constructs(source);
  } catch (const python::ParseError& e) {
    result.parse_ok = false;
    result.diagnostic = e.what();
    return result;
  }
  for (const Occurrence& occurrence : result.occurrences) {
    if (const auto level = catalog.classify(occurrence.kind)) {
      ++result.vector[*level];
    } else {
      ++result.unclassified_count;
    }
  }
  return result;
}

}  // namespace cefr
