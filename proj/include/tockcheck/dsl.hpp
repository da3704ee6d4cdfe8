#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tockcheck/assertions.hpp"
#include "tockcheck/model.hpp"

namespace tockcheck {

/// One syntax or semantic problem. `expected` lists the tokens the parser
/// could have accepted, when the problem is a syntax error.
struct Diagnostic {
    SourceSpan span;
    std::string message;
    std::vector<std::string> expected;

    /// `file:line:column: message`
    std::string to_string() const;
};

class DslError : public std::runtime_error {
public:
    explicit DslError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

struct ParseOptions {
    std::string file = "<input>";
    /// Run the semantic checks after a successful parse.
    bool validate = true;
};

template <typename T>
struct Parsed {
    T value;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

Parsed<ModelFile> parse_model(std::string_view text, const ParseOptions& options = {});

/// Process names in assertions are resolved against `model` (machines and
/// controllers) when it is given.
Parsed<AssertionFile> parse_assertions(std::string_view text, const ModelFile* model = nullptr,
                                       const ParseOptions& options = {});

std::vector<Diagnostic> validate_model(const ModelFile& model);
std::vector<Diagnostic> validate_assertions(const AssertionFile& file, const ModelFile* model);

std::string print_model(const ModelFile& model);
std::string print_assertions(const AssertionFile& file);
std::string print_expr(const Expr& e);
std::string print_event_set(const EventSet& s);

/// Read and parse a file; throws DslError (or std::runtime_error when the
/// file cannot be read).
ModelFile load_model(const std::filesystem::path& path);
AssertionFile load_assertions(const std::filesystem::path& path, const ModelFile& model);

/// Words that can never be used as names.
bool is_reserved_word(std::string_view word);

}  // namespace tockcheck
