#include "lexer.h"

#include <cctype>

namespace causalplan::internal {

const char* TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kIdent:
      return "identifier";
    case TokenKind::kInteger:
      return "integer";
    case TokenKind::kSection:
      return "section keyword";
    case TokenKind::kDoubleColon:
      return "'::'";
    case TokenKind::kLParen:
      return "'('";
    case TokenKind::kRParen:
      return "')'";
    case TokenKind::kComma:
      return "','";
    case TokenKind::kSemicolon:
      return "';'";
    case TokenKind::kEquals:
      return "'='";
    case TokenKind::kNotEquals:
      return "'!='";
    case TokenKind::kTilde:
      return "'~'";
    case TokenKind::kAmp:
      return "'&'";
    case TokenKind::kPipe:
      return "'|'";
    case TokenKind::kAt:
      return "'@'";
    case TokenKind::kSlash:
      return "'/'";
    case TokenKind::kDotDot:
      return "'..'";
    case TokenKind::kEnd:
      return "end of input";
    case TokenKind::kError:
      return "invalid character";
  }
  return "?";
}

namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Scanner {
 public:
  Scanner(std::string_view text, const std::string& file)
      : text_(text), file_(file) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    while (true) {
      SkipSpaceAndComments();
      if (pos_ >= text_.size()) break;
      tokens.push_back(Next());
    }
    Token end;
    end.kind = TokenKind::kEnd;
    end.span = Span(line_, col_);
    tokens.push_back(std::move(end));
    return tokens;
  }

 private:
  SourceSpan Span(int start_line, int start_col) const {
    return SourceSpan{file_, start_line, start_col, line_, col_};
  }

  void Advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  char Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else {
        break;
      }
    }
  }

  Token Make(TokenKind kind, std::string text, int line, int col) {
    return Token{kind, std::move(text), Span(line, col)};
  }

  Token Next() {
    const int line = line_;
    const int col = col_;
    const char c = Peek();
    if (IsIdentStart(c)) {
      std::string word;
      while (pos_ < text_.size() && IsIdentChar(Peek())) {
        word.push_back(Peek());
        Advance();
      }
      return Make(TokenKind::kIdent, std::move(word), line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(Peek()))) {
        digits.push_back(Peek());
        Advance();
      }
      return Make(TokenKind::kInteger, std::move(digits), line, col);
    }
    Advance();
    switch (c) {
      case ':':
        if (Peek() == ':') {
          Advance();
          return Make(TokenKind::kDoubleColon, "::", line, col);
        }
        if (IsIdentStart(Peek())) {
          std::string word;
          while (pos_ < text_.size() && IsIdentChar(Peek())) {
            word.push_back(Peek());
            Advance();
          }
          return Make(TokenKind::kSection, std::move(word), line, col);
        }
        return Make(TokenKind::kError, ":", line, col);
      case '(':
        return Make(TokenKind::kLParen, "(", line, col);
      case ')':
        return Make(TokenKind::kRParen, ")", line, col);
      case ',':
        return Make(TokenKind::kComma, ",", line, col);
      case ';':
        return Make(TokenKind::kSemicolon, ";", line, col);
      case '=':
        return Make(TokenKind::kEquals, "=", line, col);
      case '!':
        if (Peek() == '=') {
          Advance();
          return Make(TokenKind::kNotEquals, "!=", line, col);
        }
        return Make(TokenKind::kError, "!", line, col);
      case '~':
        return Make(TokenKind::kTilde, "~", line, col);
      case '&':
        return Make(TokenKind::kAmp, "&", line, col);
      case '|':
        return Make(TokenKind::kPipe, "|", line, col);
      case '@':
        return Make(TokenKind::kAt, "@", line, col);
      case '/':
        return Make(TokenKind::kSlash, "/", line, col);
      case '.':
        if (Peek() == '.') {
          Advance();
          return Make(TokenKind::kDotDot, "..", line, col);
        }
        return Make(TokenKind::kError, ".", line, col);
      default:
        return Make(TokenKind::kError, std::string(1, c), line, col);
    }
  }

  std::string_view text_;
  const std::string& file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> Tokenize(std::string_view text, const std::string& file) {
  return Scanner(text, file).Run();
}

}  // namespace causalplan::internal
