#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tockcheck/dsl.hpp"

namespace tockcheck::dsl {

enum class TokenKind { ident, integer, punct, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    long long value = 0;
    int line = 1;
    int column = 1;

    std::string describe() const;
};

/// Splits `text` into tokens. A dotted name such as `exax_move.time` is a
/// single identifier token; a `.` not followed by a letter is punctuation.
std::vector<Token> lex(std::string_view text, const std::string& file, std::vector<Diagnostic>& diagnostics);

}  // namespace tockcheck::dsl
