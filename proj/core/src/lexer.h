#ifndef CAUSALPLAN_SRC_LEXER_H_
#define CAUSALPLAN_SRC_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "causalplan/model.h"

namespace causalplan::internal {

enum class TokenKind {
  kIdent,
  kInteger,
  kSection,  // ":sorts", ":laws", ...; text holds the name without ':'
  kDoubleColon,
  kLParen,
  kRParen,
  kComma,
  kSemicolon,
  kEquals,
  kNotEquals,
  kTilde,
  kAmp,
  kPipe,
  kAt,
  kSlash,
  kDotDot,
  kEnd,
  kError,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  SourceSpan span;
};

const char* TokenKindName(TokenKind kind);

// Splits the whole input eagerly. Invalid characters become kError tokens so
// the parser can report them in place. The last token is always kEnd.
std::vector<Token> Tokenize(std::string_view text, const std::string& file);

}  // namespace causalplan::internal

#endif  // CAUSALPLAN_SRC_LEXER_H_
