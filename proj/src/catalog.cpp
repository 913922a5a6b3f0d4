#include "cefr/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cefr {

namespace {

constexpr std::string_view kDefaultCatalog = R"(# Default construct catalog.
# Grammar: one rule per line as "<kind> <LEVEL> <description>".
# Lines starting with '#' are comments; "@version <text>" names the catalog.
@version default-1

simple_assignment A1 Assignment statement (x = 1)
if_statement A1 if statement
for_statement A1 for loop (including async for)
while_statement A1 while loop
function_definition A1 Plain function or method definition
function_call A1 Function call
import_statement A1 import / from-import statement
return_statement A1 return statement
arithmetic_expression A1 Binary arithmetic or bitwise operation
comparison_expression A1 Comparison chain (==, <, in, is, ...)
list_literal A1 List display

nested_list A2 List display directly containing another list display
dict_literal A2 Dict display
set_literal A2 Set display
tuple_literal A2 Tuple display
elif_clause A2 elif clause
else_clause A2 else clause of if, for, while or try
string_formatting A2 f-string, %-formatting or str.format on a literal
default_parameter A2 Parameter with a default value
tuple_unpacking A2 Tuple or list used as an assignment target
slice_expression A2 Slice (a[i:j:k])
augmented_assignment A2 Augmented assignment (x += 1)

break_statement B1 break statement
continue_statement B1 continue statement
try_except B1 try statement
with_statement B1 with statement (including async with)
lambda_expression B1 lambda expression
class_definition B1 Class definition without explicit bases
star_args_parameter B1 *args parameter
kw_args_parameter B1 **kwargs parameter
raise_statement B1 raise statement
global_statement B1 global declaration
nonlocal_statement B1 nonlocal declaration

list_comprehension B2 List comprehension
dict_comprehension B2 Dict comprehension
set_comprehension B2 Set comprehension
generator_expression B2 Generator expression
decorator B2 Decorator application
class_inheritance B2 Class definition with one base class
conditional_expression B2 Conditional expression (a if c else b)
assert_statement B2 assert statement

generator_function C1 Function containing yield
yield_from C1 yield from expression
closure C1 Nested function capturing a name from an enclosing function
property_definition C1 Method decorated as a property or property accessor
context_manager_definition C1 __enter__ / __exit__ (or async variants) method
multiple_inheritance C1 Class definition with two or more base classes

metaclass C2 Metaclass usage (metaclass= keyword or class deriving from type)
descriptor_definition C2 __get__ / __set__ / __delete__ method
async_function C2 async def
await_expression C2 await expression
dynamic_attribute_access C2 getattr / setattr / hasattr / delattr call
dunder_new C2 __new__ override
)";

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_kind_token(std::string_view kind) {
  if (kind.empty()) return false;
  const auto head = kind.front();
  if (!((head >= 'a' && head <= 'z') || head == '_')) return false;
  return std::all_of(kind.begin(), kind.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string normalize_text(std::string_view text) {
  std::string out(trim(text));
  std::replace_if(
      out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r'; },
      ' ');
  return out;
}

// Splits off the first whitespace-delimited word.
std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
  s = trim(s);
  const auto end = s.find_first_of(" \t");
  if (end == std::string_view::npos) return {s, {}};
  return {s.substr(0, end), trim(s.substr(end))};
}

}  // namespace

Catalog::Catalog(std::string version, std::vector<ConstructRule> rules)
    : version_(normalize_text(version)) {
  for (auto& rule : rules) {
    if (!is_kind_token(rule.kind)) {
      throw CatalogError(CatalogError::Reason::Parse,
                         "invalid construct kind '" + rule.kind + "'");
    }
    rule.description = normalize_text(rule.description);
    auto [it, inserted] = rules_.try_emplace(rule.kind, rule);
    if (!inserted) {
      if (it->second.level != rule.level) {
        throw CatalogError(CatalogError::Reason::Duplicate,
                           "construct kind '" + rule.kind +
                               "' is mapped to both " +
                               std::string(to_string(it->second.level)) +
                               " and " + std::string(to_string(rule.level)));
      }
      it->second = rule;
    }
  }
}

std::vector<ConstructRule> Catalog::rules() const {
  std::vector<ConstructRule> out;
  out.reserve(rules_.size());
  for (const auto& [kind, rule] : rules_) out.push_back(rule);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.level < b.level;
  });
  return out;
}

std::optional<Level> Catalog::classify(std::string_view kind) const {
  if (const auto* rule = find(kind)) return rule->level;
  return std::nullopt;
}

const ConstructRule* Catalog::find(std::string_view kind) const {
  const auto it = rules_.find(kind);
  return it == rules_.end() ? nullptr : &it->second;
}

Catalog Catalog::merged_with(const Catalog& overrides) const {
  Catalog out = *this;
  for (const auto& [kind, rule] : overrides.rules_) out.rules_[kind] = rule;
  return out;
}

std::string_view default_catalog_text() { return kDefaultCatalog; }

const Catalog& default_catalog() {
  static const Catalog catalog = parse_catalog(kDefaultCatalog, "<default>");
  return catalog;
}

Catalog parse_catalog(std::string_view text, std::string_view origin) {
  std::string version;
  std::vector<ConstructRule> rules;
  std::size_t line_number = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                              : text.substr(newline + 1);
    ++line_number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    const auto where = [&] {
      return std::string(origin) + ":" + std::to_string(line_number) + ": ";
    };
    auto [first, rest] = split_word(line);
    if (first.front() == '@') {
      if (first != "@version") {
        throw CatalogError(CatalogError::Reason::Parse,
                           where() + "unknown directive '" +
                               std::string(first) + "'");
      }
      version = std::string(rest);
      continue;
    }
    if (!is_kind_token(first)) {
      throw CatalogError(CatalogError::Reason::Parse,
                         where() + "invalid construct kind '" +
                             std::string(first) + "'");
    }
    auto [level_label, description] = split_word(rest);
    const auto level = parse_level(level_label);
    if (!level) {
      throw CatalogError(CatalogError::Reason::Parse,
                         where() + "expected a level A1..C2 after '" +
                             std::string(first) + "'");
    }
    rules.push_back({std::string(first), *level, std::string(description)});
  }
  try {
    return Catalog(std::move(version), std::move(rules));
  } catch (const CatalogError& e) {
    throw CatalogError(e.reason(), std::string(origin) + ": " + e.what());
  }
}

std::string to_catalog_text(const Catalog& catalog) {
  std::ostringstream out;
  if (!catalog.version().empty()) out << "@version " << catalog.version() << '\n';
  for (const auto& rule : catalog.rules()) {
    out << rule.kind << ' ' << to_string(rule.level);
    if (!rule.description.empty()) out << ' ' << rule.description;
    out << '\n';
  }
  return out.str();
}

Catalog load_catalog(const std::optional<std::filesystem::path>& path) {
  if (!path) return default_catalog();
  std::ifstream in(*path, std::ios::binary);
  if (!in) {
    throw CatalogError(CatalogError::Reason::Unreadable,
                       "cannot read catalog file " + path->string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const Catalog overrides = parse_catalog(buffer.str(), path->string());
  Catalog merged = default_catalog().merged_with(overrides);
  const std::string suffix = overrides.version().empty()
                                 ? path->filename().string()
                                 : overrides.version();
  return Catalog(default_catalog().version() + "+" + suffix, merged.rules());
}

}  // namespace cefr
