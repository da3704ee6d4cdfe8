#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tockcheck/model.hpp"

namespace tockcheck {

class EvalError : public std::runtime_error {
public:
    EvalError(const std::string& what, SourceSpan span) : std::runtime_error(what), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

/// Values are flattened: a scalar is one element, a record one element per
/// leaf field in declaration order. Booleans are 0/1 and enum literals are
/// their declaration index.
using Value = std::vector<long long>;

/// Largest magnitude an intermediate result may reach.
inline constexpr long long eval_bound = 1LL << 20;

/// Resolves type names of one model.
class TypeSystem {
public:
    explicit TypeSystem(const ModelFile& model);

    const ModelFile& model() const { return *model_; }
    /// Domain of each leaf of `t`. Throws std::invalid_argument for unknown
    /// type names.
    std::vector<IntRange> domains(const TypeRef& t) const;
    /// Field path suffix of each leaf: "" for scalars, ".f" / ".f.g" for records.
    std::vector<std::string> paths(const TypeRef& t) const;
    std::optional<long long> enum_literal(const std::string& name) const;
    /// Readable rendering of one leaf value of type `t` (enum literal names,
    /// true/false for booleans).
    std::string render(const TypeRef& t, std::size_t leaf, long long v) const;
    bool is_record(const TypeRef& t) const;

private:
    const TypeDecl* resolve(const TypeRef& t) const;

    const ModelFile* model_;
    std::map<std::string, long long> literals_;
};

class Scope {
public:
    virtual ~Scope() = default;
    virtual std::optional<Value> lookup(const std::string& name) const = 0;
};

class MapScope : public Scope {
public:
    MapScope() = default;
    explicit MapScope(std::map<std::string, Value> values) : values_(std::move(values)) {}
    void set(const std::string& name, Value v) { values_[name] = std::move(v); }
    std::optional<Value> lookup(const std::string& name) const override;

private:
    std::map<std::string, Value> values_;
};

/// Evaluates guards, actions and function bodies. Names resolve against the
/// scope first, then model constants, then enum literals.
class Evaluator {
public:
    /// Evaluates the model's global constants in declaration order.
    explicit Evaluator(const TypeSystem& types);

    const TypeSystem& types() const { return *types_; }
    const std::map<std::string, long long>& constants() const { return constants_; }

    Value eval(const Expr& e, const Scope& scope) const;
    long long scalar(const Expr& e, const Scope& scope) const;
    bool truth(const Expr& e, const Scope& scope) const { return scalar(e, scope) != 0; }

private:
    Value eval(const Expr& e, const Scope& scope, int depth) const;
    long long scalar(const Expr& e, const Scope& scope, int depth) const;

    const TypeSystem* types_;
    std::map<std::string, long long> constants_;
};

/// Evaluates `e` with only integer names bound, outside any model. Booleans
/// come back as 0/1.
long long eval_expr(const Expr& e, const std::map<std::string, long long>& valuation);

/// Names read by `e`, including field paths, excluding function names.
void collect_names(const Expr& e, std::vector<std::string>& out);

namespace ex {

Expr integer(long long v);
Expr boolean(bool b);
Expr name(std::string n);
Expr unary(Expr::Op op, Expr a);
Expr binary(Expr::Op op, Expr a, Expr b);
Expr call(std::string f, std::vector<Expr> args);

inline Expr operator+(Expr a, Expr b) { return binary(Expr::Op::add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return binary(Expr::Op::sub, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return unary(Expr::Op::neg, std::move(a)); }
inline Expr operator!(Expr a) { return unary(Expr::Op::not_, std::move(a)); }
inline Expr eq(Expr a, Expr b) { return binary(Expr::Op::eq, std::move(a), std::move(b)); }
inline Expr ne(Expr a, Expr b) { return binary(Expr::Op::ne, std::move(a), std::move(b)); }
inline Expr operator<(Expr a, Expr b) { return binary(Expr::Op::lt, std::move(a), std::move(b)); }
inline Expr operator<=(Expr a, Expr b) { return binary(Expr::Op::le, std::move(a), std::move(b)); }
inline Expr operator>(Expr a, Expr b) { return binary(Expr::Op::gt, std::move(a), std::move(b)); }
inline Expr operator>=(Expr a, Expr b) { return binary(Expr::Op::ge, std::move(a), std::move(b)); }
inline Expr operator&&(Expr a, Expr b) { return binary(Expr::Op::and_, std::move(a), std::move(b)); }
inline Expr operator||(Expr a, Expr b) { return binary(Expr::Op::or_, std::move(a), std::move(b)); }

}  // namespace ex

}  // namespace tockcheck
