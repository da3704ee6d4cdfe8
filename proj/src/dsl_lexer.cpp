#include "dsl_lexer.hpp"

#include <array>
#include <cctype>

namespace tockcheck::dsl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

constexpr std::array<std::string_view, 9> two_char{"{|", "|}", "->", ":=", "==", "!=", "<=", ">=", ".."};
constexpr std::string_view one_char = "{}()[],;:=<>+-?!.";

}  // namespace

std::string Token::describe() const
{
    switch (kind) {
    case TokenKind::end: return "end of input";
    case TokenKind::integer: return "number " + text;
    case TokenKind::ident: return "'" + text + "'";
    case TokenKind::punct: return "'" + text + "'";
    }
    return text;
}

std::vector<Token> lex(std::string_view text, const std::string& file, std::vector<Diagnostic>& diagnostics)
{
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, column = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (text.substr(i, 2) == "//") {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        if (ident_start(c)) {
            std::size_t j = i;
            while (true) {
                while (j < text.size() && ident_char(text[j])) ++j;
                if (j + 1 < text.size() && text[j] == '.' && ident_start(text[j + 1])) {
                    ++j;
                    continue;
                }
                break;
            }
            t.kind = TokenKind::ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.kind = TokenKind::integer;
            t.text = std::string(text.substr(i, j - i));
            if (t.text.size() > 15) {
                diagnostics.push_back({{file, line, column, int(t.text.size())}, "number " + t.text + " is too large", {}});
                t.value = 0;
            } else {
                t.value = std::stoll(t.text);
            }
            advance(j - i);
            out.push_back(std::move(t));
            continue;
        }
        bool matched = false;
        for (auto p : two_char) {
            if (text.substr(i, 2) == p) {
                t.kind = TokenKind::punct;
                t.text = std::string(p);
                advance(2);
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (one_char.find(c) != std::string_view::npos) {
            t.kind = TokenKind::punct;
            t.text = std::string(1, c);
            advance(1);
            out.push_back(std::move(t));
            continue;
        }
        diagnostics.push_back({{file, line, column, 1}, std::string("unexpected character '") + c + "'", {}});
        advance(1);
    }
    Token end;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

}  // namespace tockcheck::dsl
