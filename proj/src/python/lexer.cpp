#include "cefr/python/lexer.hpp"

#include <array>
#include <cctype>

namespace cefr::python {

namespace {

constexpr int kMaxIndentDepth = 100;
constexpr int kMaxBracketDepth = 200;
constexpr int kTabSize = 8;

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

struct StringPrefix {
  bool valid = false;
  bool raw = false;
  bool bytes = false;
  bool fstring = false;
};

StringPrefix classify_prefix(std::string_view word) {
  StringPrefix p;
  if (word.size() > 2) return p;
  bool unicode = false;
  for (char ch : word) {
    switch (std::tolower(static_cast<unsigned char>(ch))) {
      case 'r':
        if (p.raw) return {};
        p.raw = true;
        break;
      case 'b':
        if (p.bytes) return {};
        p.bytes = true;
        break;
      case 'f':
        if (p.fstring) return {};
        p.fstring = true;
        break;
      case 'u':
        if (unicode) return {};
        unicode = true;
        break;
      default:
        return {};
    }
  }
  if (unicode && word.size() > 1) return {};  // "ur" is Python 2 only.
  if (p.bytes && p.fstring) return {};
  p.valid = true;
  return p;
}

class Lexer {
 public:
  Lexer(std::string_view source, int first_line)
      : src_(normalize(source)), line_(first_line) {}

  std::vector<Token> run() {
    while (true) {
      if (at_line_start_ && brackets_.empty()) {
        if (!handle_indentation()) break;
      }
      skip_inline_whitespace();
      if (eof()) break;
      const char c = peek();
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '\\') {
        if (peek(1) == '\n') {
          pos_ += 2;
          ++line_;
          if (eof()) fail("unexpected EOF while parsing");
          continue;
        }
        if (pos_ + 1 >= src_.size()) fail("unexpected EOF while parsing");
        fail("unexpected character after line continuation character");
      }
      if (c == '\n') {
        ++pos_;
        if (brackets_.empty()) {
          emit(TokenType::Newline, "", line_);
          at_line_start_ = true;
        }
        ++line_;
        continue;
      }
      const auto uc = static_cast<unsigned char>(c);
      if (is_name_start(uc)) {
        lex_name();
      } else if (std::isdigit(uc) ||
                 (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number();
      } else if (c == '"' || c == '\'') {
        lex_string(pos_, StringPrefix{true, false, false, false});
      } else {
        lex_operator();
      }
    }
    if (!brackets_.empty()) {
      fail(std::string("'") + brackets_.back().first + "' was never closed",
           brackets_.back().second);
    }
    if (!tokens_.empty() && tokens_.back().type != TokenType::Newline &&
        tokens_.back().type != TokenType::Dedent) {
      emit(TokenType::Newline, "", line_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      alt_indents_.pop_back();
      emit(TokenType::Dedent, "", line_);
    }
    emit(TokenType::End, "", line_);
    return std::move(tokens_);
  }

 private:
  static std::string normalize(std::string_view source) {
    if (source.substr(0, 3) == "\xEF\xBB\xBF") source.remove_prefix(3);
    std::string out;
    out.reserve(source.size() + 1);
    for (std::size_t i = 0; i < source.size(); ++i) {
      const char c = source[i];
      if (c == '\r') {
        out.push_back('\n');
        if (i + 1 < source.size() && source[i + 1] == '\n') ++i;
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  bool eof() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, message);
  }
  [[noreturn]] void fail(const std::string& message, int line) const {
    throw ParseError(line, message);
  }

  void emit(TokenType type, std::string text, int line) {
    Token t;
    t.type = type;
    t.text = std::move(text);
    t.line = line;
    tokens_.push_back(std::move(t));
  }

  void skip_inline_whitespace() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\f') {
        ++pos_;
      } else if (c == '\0') {
        fail("source code cannot contain null bytes");
      } else {
        break;
      }
    }
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') ++pos_;
  }

  // Returns false at end of input.
  bool handle_indentation() {
    while (true) {
      int col = 0;
      int alt_col = 0;
      while (!eof()) {
        const char c = peek();
        if (c == ' ') {
          ++col;
          ++alt_col;
        } else if (c == '\t') {
          col = (col / kTabSize + 1) * kTabSize;
          ++alt_col;
        } else if (c == '\f') {
          col = alt_col = 0;
        } else {
          break;
        }
        ++pos_;
      }
      if (eof()) return false;
      const char c = peek();
      if (c == '#') {
        skip_comment();
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        continue;
      }
      if (c == '\\' && peek(1) == '\n' && tokens_.empty()) {
        pos_ += 2;
        ++line_;
        continue;
      }
      apply_indentation(col, alt_col);
      at_line_start_ = false;
      return true;
    }
  }

  void apply_indentation(int col, int alt_col) {
    if (col == indents_.back()) {
      if (alt_col != alt_indents_.back()) {
        fail("inconsistent use of tabs and spaces in indentation");
      }
    } else if (col > indents_.back()) {
      if (static_cast<int>(indents_.size()) >= kMaxIndentDepth) {
        fail("too many levels of indentation");
      }
      if (alt_col <= alt_indents_.back()) {
        fail("inconsistent use of tabs and spaces in indentation");
      }
      indents_.push_back(col);
      alt_indents_.push_back(alt_col);
      emit(TokenType::Indent, "", line_);
    } else {
      while (indents_.size() > 1 && col < indents_.back()) {
        indents_.pop_back();
        alt_indents_.pop_back();
        emit(TokenType::Dedent, "", line_);
      }
      if (col != indents_.back()) {
        fail("unindent does not match any outer indentation level");
      }
      if (alt_col != alt_indents_.back()) {
        fail("inconsistent use of tabs and spaces in indentation");
      }
    }
  }

  void lex_name() {
    const std::size_t start = pos_;
    while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
    const std::string_view word(src_.data() + start, pos_ - start);
    if (!eof() && (peek() == '"' || peek() == '\'')) {
      const StringPrefix prefix = classify_prefix(word);
      if (prefix.valid) {
        lex_string(start, prefix);
        return;
      }
    }
    emit(TokenType::Name, std::string(word), line_);
  }

  void scan_digits(bool (*is_digit)(char), const char* what) {
    bool last_underscore = false;
    bool any = false;
    while (!eof()) {
      const char c = peek();
      if (is_digit(c)) {
        any = true;
        last_underscore = false;
      } else if (c == '_') {
        if (!any || last_underscore) fail(std::string("invalid ") + what);
        last_underscore = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (last_underscore || !any) fail(std::string("invalid ") + what);
  }

  static bool dec_digit(char c) { return c >= '0' && c <= '9'; }
  static bool hex_digit(char c) {
    return std::isxdigit(static_cast<unsigned char>(c)) != 0;
  }
  static bool oct_digit(char c) { return c >= '0' && c <= '7'; }
  static bool bin_digit(char c) { return c == '0' || c == '1'; }

  void lex_number() {
    const std::size_t start = pos_;
    const int line = line_;
    if (peek() == '0' && std::string_view("xXoObB").find(peek(1)) !=
                             std::string_view::npos && peek(1) != '\0') {
      const char base = static_cast<char>(std::tolower(peek(1)));
      pos_ += 2;
      if (peek() == '_') ++pos_;
      if (base == 'x') {
        scan_digits(&hex_digit, "hexadecimal literal");
      } else if (base == 'o') {
        scan_digits(&oct_digit, "octal literal");
        if (dec_digit(peek())) fail("invalid digit in octal literal");
      } else {
        scan_digits(&bin_digit, "binary literal");
        if (dec_digit(peek())) fail("invalid digit in binary literal");
      }
    } else {
      bool is_float = false;
      bool leading_zero_int = false;
      if (peek() != '.') {
        const std::size_t int_start = pos_;
        scan_digits(&dec_digit, "decimal literal");
        const std::string_view digits(src_.data() + int_start, pos_ - int_start);
        if (digits.size() > 1 && digits.front() == '0' &&
            digits.find_first_not_of("0_") != std::string_view::npos) {
          leading_zero_int = true;
        }
      }
      if (peek() == '.') {
        is_float = true;
        ++pos_;
        if (dec_digit(peek())) scan_digits(&dec_digit, "decimal literal");
      }
      if ((peek() == 'e' || peek() == 'E') &&
          (dec_digit(peek(1)) ||
           ((peek(1) == '+' || peek(1) == '-') && dec_digit(peek(2))))) {
        is_float = true;
        ++pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        scan_digits(&dec_digit, "decimal literal");
      }
      if (peek() == 'j' || peek() == 'J') {
        is_float = true;
        ++pos_;
      }
      if (leading_zero_int && !is_float) {
        fail("leading zeros in decimal integer literals are not permitted; "
             "use an 0o prefix for octal integers");
      }
    }
    emit(TokenType::Number, src_.substr(start, pos_ - start), line);
  }

  // Scans a string body starting at the opening quote; pos_ ends after the
  // closing quote. Collects f-string fields when `fields` is non-null.
  void scan_string_body(const StringPrefix& prefix,
                        std::vector<FStringField>* fields) {
    const char quote = peek();
    const bool triple = peek(1) == quote && peek(2) == quote;
    const int start_line = line_;
    pos_ += triple ? 3 : 1;
    while (true) {
      if (eof()) {
        fail(triple ? "unterminated triple-quoted string literal"
                    : "unterminated string literal",
             start_line);
      }
      const char c = peek();
      if (c == '\\') {
        const char next = peek(1);
        if (prefix.fstring) {
          if (!prefix.raw && next == 'N' && peek(2) == '{') {
            pos_ += 3;
            while (!eof() && peek() != '}' && peek() != quote) ++pos_;
            if (peek() == '}') ++pos_;
            continue;
          }
          if (next == '{' || next == '}') {
            ++pos_;
            continue;
          }
        }
        if (next == '\n') ++line_;
        if (next == '\0' && pos_ + 1 >= src_.size()) {
          ++pos_;
          continue;
        }
        pos_ += 2;
        continue;
      }
      if (c == '\n') {
        if (!triple) fail("unterminated string literal", start_line);
        ++line_;
        ++pos_;
        continue;
      }
      if (c == quote && (!triple || (peek(1) == quote && peek(2) == quote))) {
        pos_ += triple ? 3 : 1;
        return;
      }
      if (prefix.bytes && static_cast<unsigned char>(c) >= 0x80) {
        fail("bytes can only contain ASCII literal characters");
      }
      if (prefix.fstring) {
        if (c == '{') {
          if (peek(1) == '{') {
            pos_ += 2;
          } else {
            scan_fstring_field(quote, triple, fields);
          }
          continue;
        }
        if (c == '}') {
          if (peek(1) == '}') {
            pos_ += 2;
            continue;
          }
          fail("f-string: single '}' is not allowed");
        }
      }
      ++pos_;
    }
  }

  // pos_ is at the '{' opening a replacement field.
  void scan_fstring_field(char quote, bool triple,
                          std::vector<FStringField>* fields) {
    ++pos_;
    const std::size_t start = pos_;
    const int start_line = line_;
    int depth = 0;
    std::size_t expr_end = std::string::npos;
    const auto finish_expression = [&] {
      if (expr_end != std::string::npos) return;
      expr_end = pos_;
      const std::string expr = src_.substr(start, expr_end - start);
      if (expr.find_first_not_of(" \t\n\f") == std::string::npos) {
        fail("f-string: valid expression required before '}'");
      }
      if (fields) fields->push_back({expr, start_line});
    };
    while (true) {
      if (eof()) fail("f-string: expecting '}'", start_line);
      const char c = peek();
      if (expr_end == std::string::npos) {
        if (c == '\n') {
          ++line_;
          ++pos_;
          continue;
        }
        if (is_name_start(static_cast<unsigned char>(c))) {
          const std::size_t word_start = pos_;
          while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) {
            ++pos_;
          }
          if (peek() == '"' || peek() == '\'') {
            const auto prefix = classify_prefix(
                std::string_view(src_.data() + word_start, pos_ - word_start));
            if (prefix.valid) scan_string_body(prefix, nullptr);
          }
          continue;
        }
        if (c == '"' || c == '\'') {
          scan_string_body(StringPrefix{true, false, false, false}, nullptr);
          continue;
        }
        if (c == '(' || c == '[' || c == '{') {
          ++depth;
          ++pos_;
          continue;
        }
        if (c == ')' || c == ']' || (c == '}' && depth > 0)) {
          --depth;
          ++pos_;
          continue;
        }
        if (depth == 0) {
          if (c == '}') {
            finish_expression();
            ++pos_;
            return;
          }
          if (c == '!' && peek(1) != '=') {
            finish_expression();
            ++pos_;
            while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) {
              ++pos_;
            }
            continue;
          }
          if (c == ':') {
            finish_expression();
            ++pos_;
            scan_format_spec(quote, triple, fields);
            return;
          }
          if (c == '=' && peek(1) != '=' && pos_ > start &&
              std::string_view("=!<>").find(src_[pos_ - 1]) ==
                  std::string_view::npos) {
            finish_expression();
            ++pos_;
            continue;
          }
        }
        ++pos_;
        continue;
      }
      // After the expression: only whitespace, a conversion, ':' or '}'.
      if (c == '}') {
        ++pos_;
        return;
      }
      if (c == ':') {
        ++pos_;
        scan_format_spec(quote, triple, fields);
        return;
      }
      if (c == '!') {
        ++pos_;
        while (!eof() && is_name_char(static_cast<unsigned char>(peek()))) ++pos_;
        continue;
      }
      if (c == ' ' || c == '\t') {
        ++pos_;
        continue;
      }
      fail("f-string: expecting '}'");
    }
  }

  // pos_ is just after the ':' of a format spec; consumes the closing '}'.
  void scan_format_spec(char quote, bool triple,
                        std::vector<FStringField>* fields) {
    while (true) {
      if (eof()) fail("f-string: expecting '}'");
      const char c = peek();
      if (c == '{') {
        scan_fstring_field(quote, triple, fields);
        continue;
      }
      if (c == '}') {
        ++pos_;
        return;
      }
      if (c == '\n') {
        if (!triple) fail("unterminated string literal");
        ++line_;
      }
      if (c == quote && !triple) fail("f-string: expecting '}'");
      if (c == '\\') ++pos_;
      ++pos_;
    }
  }

  void lex_string(std::size_t start, const StringPrefix& prefix) {
    const int line = line_;
    Token t;
    t.type = TokenType::String;
    t.line = line;
    t.is_bytes = prefix.bytes;
    t.is_fstring = prefix.fstring;
    scan_string_body(prefix, prefix.fstring ? &t.fields : nullptr);
    t.text = src_.substr(start, pos_ - start);
    tokens_.push_back(std::move(t));
  }

  void lex_operator() {
    static constexpr std::array<std::string_view, 4> three = {"**=", "//=", ">>=",
                                                              "<<="};
    static constexpr std::array<std::string_view, 20> two = {
        "**", "//", ">>", "<<", "<=", ">=", "==", "!=", "->", "+=", "-=",
        "*=", "/=", "%=", "&=", "|=", "^=", "@=", ":=", "<>"};
    const std::string_view rest(src_.data() + pos_, src_.size() - pos_);
    if (rest.substr(0, 3) == "...") {
      emit(TokenType::Op, "...", line_);
      pos_ += 3;
      return;
    }
    for (auto op : three) {
      if (rest.substr(0, 3) == op) {
        emit(TokenType::Op, std::string(op), line_);
        pos_ += 3;
        return;
      }
    }
    for (auto op : two) {
      if (rest.substr(0, 2) == op) {
        if (op == "<>") fail("invalid syntax: '<>' is not a Python 3 operator");
        emit(TokenType::Op, std::string(op), line_);
        pos_ += 2;
        return;
      }
    }
    const char c = peek();
    switch (c) {
      case '(':
      case '[':
      case '{':
        if (static_cast<int>(brackets_.size()) >= kMaxBracketDepth) {
          fail("too many nested parentheses");
        }
        brackets_.emplace_back(c, line_);
        break;
      case ')':
      case ']':
      case '}': {
        const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
        if (brackets_.empty()) fail(std::string("unmatched '") + c + "'");
        if (brackets_.back().first != open) {
          fail(std::string("closing parenthesis '") + c +
               "' does not match opening parenthesis '" +
               brackets_.back().first + "'");
        }
        brackets_.pop_back();
        break;
      }
      case '+': case '-': case '*': case '/': case '%': case '@': case '&':
      case '|': case '^': case '~': case '<': case '>': case ',': case ':':
      case '.': case ';': case '=':
        break;
      default:
        fail(std::string("invalid character '") + c + "'");
    }
    emit(TokenType::Op, std::string(1, c), line_);
    ++pos_;
  }

  std::string src_;
  std::size_t pos_ = 0;
  int line_;
  bool at_line_start_ = true;
  std::vector<int> indents_{0};
  std::vector<int> alt_indents_{0};
  std::vector<std::pair<char, int>> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, int first_line) {
  return Lexer(source, first_line).run();
}

}  // namespace cefr::python
