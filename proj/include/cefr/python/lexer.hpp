#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cefr::python {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class TokenType { Name, Number, String, Op, Newline, Indent, Dedent, End };

/// Expression source of one f-string replacement field.
struct FStringField {
  std::string expression;
  int line = 0;
};

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  int line = 0;
  // String tokens only.
  bool is_bytes = false;
  bool is_fstring = false;
  std::vector<FStringField> fields;
};

/// Tokenizes Python 3 source, producing INDENT/DEDENT/NEWLINE tokens the way
/// the reference tokenizer does. Throws ParseError on lexical errors,
/// including inconsistent tab/space indentation and Python 2-only forms
/// (backticks, `<>`, octal literals with a leading zero, `ur` prefixes).
std::vector<Token> tokenize(std::string_view source, int first_line = 1);

}  // namespace cefr::python
