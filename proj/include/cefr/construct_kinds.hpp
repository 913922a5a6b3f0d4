#pragma once

#include <array>
#include <string_view>

// Stable construct-kind tokens emitted by the analyzer. These strings appear
// in catalog files and in JSON output, so they must never be renamed.
namespace cefr::kinds {

inline constexpr std::string_view kSimpleAssignment = "simple_assignment";
inline constexpr std::string_view kIfStatement = "if_statement";
inline constexpr std::string_view kForStatement = "for_statement";
inline constexpr std::string_view kWhileStatement = "while_statement";
inline constexpr std::string_view kFunctionDefinition = "function_definition";
inline constexpr std::string_view kFunctionCall = "function_call";
inline constexpr std::string_view kImportStatement = "import_statement";
inline constexpr std::string_view kReturnStatement = "return_statement";
inline constexpr std::string_view kArithmeticExpression = "arithmetic_expression";
inline constexpr std::string_view kComparisonExpression = "comparison_expression";
inline constexpr std::string_view kListLiteral = "list_literal";

inline constexpr std::string_view kNestedList = "nested_list";
inline constexpr std::string_view kDictLiteral = "dict_literal";
inline constexpr std::string_view kSetLiteral = "set_literal";
inline constexpr std::string_view kTupleLiteral = "tuple_literal";
inline constexpr std::string_view kElifClause = "elif_clause";
inline constexpr std::string_view kElseClause = "else_clause";
inline constexpr std::string_view kStringFormatting = "string_formatting";
inline constexpr std::string_view kDefaultParameter = "default_parameter";
inline constexpr std::string_view kTupleUnpacking = "tuple_unpacking";
inline constexpr std::string_view kSliceExpression = "slice_expression";
inline constexpr std::string_view kAugmentedAssignment = "augmented_assignment";

inline constexpr std::string_view kBreakStatement = "break_statement";
inline constexpr std::string_view kContinueStatement = "continue_statement";
inline constexpr std::string_view kTryExcept = "try_except";
inline constexpr std::string_view kWithStatement = "with_statement";
inline constexpr std::string_view kLambdaExpression = "lambda_expression";
inline constexpr std::string_view kClassDefinition = "class_definition";
inline constexpr std::string_view kStarArgsParameter = "star_args_parameter";
inline constexpr std::string_view kKwArgsParameter = "kw_args_parameter";
inline constexpr std::string_view kRaiseStatement = "raise_statement";
inline constexpr std::string_view kGlobalStatement = "global_statement";
inline constexpr std::string_view kNonlocalStatement = "nonlocal_statement";

inline constexpr std::string_view kListComprehension = "list_comprehension";
inline constexpr std::string_view kDictComprehension = "dict_comprehension";
inline constexpr std::string_view kSetComprehension = "set_comprehension";
inline constexpr std::string_view kGeneratorExpression = "generator_expression";
inline constexpr std::string_view kDecorator = "decorator";
inline constexpr std::string_view kClassInheritance = "class_inheritance";
inline constexpr std::string_view kConditionalExpression = "conditional_expression";
inline constexpr std::string_view kAssertStatement = "assert_statement";

inline constexpr std::string_view kGeneratorFunction = "generator_function";
inline constexpr std::string_view kYieldFrom = "yield_from";
inline constexpr std::string_view kClosure = "closure";
inline constexpr std::string_view kPropertyDefinition = "property_definition";
inline constexpr std::string_view kContextManagerDefinition =
    "context_manager_definition";
inline constexpr std::string_view kMultipleInheritance = "multiple_inheritance";

inline constexpr std::string_view kMetaclass = "metaclass";
inline constexpr std::string_view kDescriptorDefinition = "descriptor_definition";
inline constexpr std::string_view kAsyncFunction = "async_function";
inline constexpr std::string_view kAwaitExpression = "await_expression";
inline constexpr std::string_view kDynamicAttributeAccess =
    "dynamic_attribute_access";
inline constexpr std::string_view kDunderNew = "dunder_new";

/// Every kind the analyzer can emit.
inline constexpr std::array kAll = {
    kSimpleAssignment,     kIfStatement,
    kForStatement,         kWhileStatement,
    kFunctionDefinition,   kFunctionCall,
    kImportStatement,      kReturnStatement,
    kArithmeticExpression, kComparisonExpression,
    kListLiteral,          kNestedList,
    kDictLiteral,          kSetLiteral,
    kTupleLiteral,         kElifClause,
    kElseClause,           kStringFormatting,
    kDefaultParameter,     kTupleUnpacking,
    kSliceExpression,      kAugmentedAssignment,
    kBreakStatement,       kContinueStatement,
    kTryExcept,            kWithStatement,
    kLambdaExpression,     kClassDefinition,
    kStarArgsParameter,    kKwArgsParameter,
    kRaiseStatement,       kGlobalStatement,
    kNonlocalStatement,    kListComprehension,
    kDictComprehension,    kSetComprehension,
    kGeneratorExpression,  kDecorator,
    kClassInheritance,     kConditionalExpression,
    kAssertStatement,      kGeneratorFunction,
    kYieldFrom,            kClosure,
    kPropertyDefinition,   kContextManagerDefinition,
    kMultipleInheritance,  kMetaclass,
    kDescriptorDefinition, kAsyncFunction,
    kAwaitExpression,      kDynamicAttributeAccess,
    kDunderNew,
};

}  // namespace cefr::kinds
