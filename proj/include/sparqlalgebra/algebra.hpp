#ifndef SPARQLALGEBRA_ALGEBRA_HPP
#define SPARQLALGEBRA_ALGEBRA_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sparqlalgebra/term.hpp"

namespace sparqlalg {

/// A query variable, written ?name. Equality and order are by name.
class Variable {
public:
    explicit Variable(std::string name);

    const std::string& name() const { return name_; }
    std::string to_text() const { return "?" + name_; }

    friend bool operator==(const Variable&, const Variable&) = default;
    friend std::strong_ordering operator<=>(const Variable&, const Variable&) = default;

private:
    std::string name_;
};

using VariableSet = std::set<Variable>;

/// A triple-pattern slot: a ground term or a variable.
using TermOrVar = std::variant<Term, Variable>;

bool is_variable(const TermOrVar& tv);
std::string to_text(const TermOrVar& tv);

/// A triple pattern. Subject and predicate slots admit variables and IRIs
/// only; literals are confined to object position.
class TriplePattern {
public:
    TriplePattern(TermOrVar subject, TermOrVar predicate, TermOrVar object);

    const TermOrVar& subject() const { return subject_; }
    const TermOrVar& predicate() const { return predicate_; }
    const TermOrVar& object() const { return object_; }

    VariableSet variables() const;
    bool is_ground() const;

    std::string to_text() const;

    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;

private:
    TermOrVar subject_;
    TermOrVar predicate_;
    TermOrVar object_;
};

enum class ConditionKind { Bound, EqConst, EqVar, Not, Or, And };

class Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

/// A built-in FILTER condition: bound(?X), ?X = c, ?X = ?Y, and the
/// boolean connectives over those.
class Condition {
public:
    ConditionKind kind() const { return kind_; }

    // Bound, EqConst, EqVar
    const Variable& var() const { return *var_; }
    // EqVar only
    const Variable& other_var() const { return *other_var_; }
    // EqConst only
    const Term& constant() const { return *constant_; }
    // Not (left only), Or, And
    const ConditionPtr& left() const { return left_; }
    const ConditionPtr& right() const { return right_; }

    static ConditionPtr bound(Variable v);
    static ConditionPtr eq_const(Variable v, Term c);
    static ConditionPtr eq_var(Variable v1, Variable v2);
    static ConditionPtr negation(ConditionPtr c);
    static ConditionPtr disjunction(ConditionPtr a, ConditionPtr b);
    static ConditionPtr conjunction(ConditionPtr a, ConditionPtr b);

private:
    Condition() = default;

    ConditionKind kind_ = ConditionKind::Bound;
    std::optional<Variable> var_;
    std::optional<Variable> other_var_;
    std::optional<Term> constant_;
    ConditionPtr left_;
    ConditionPtr right_;
};

bool equal(const Condition& a, const Condition& b);
std::string to_text(const Condition& c);

enum class PatternKind { Triple, And, Opt, Union, Filter };

class GraphPattern;
using PatternPtr = std::shared_ptr<const GraphPattern>;

/// A graph pattern: a triple pattern or one of the binary operators
/// AND, OPT, UNION, or FILTER. Nodes are immutable and shared.
class GraphPattern {
public:
    PatternKind kind() const { return kind_; }

    const TriplePattern& triple() const { return *triple_; }
    const PatternPtr& left() const { return left_; }
    const PatternPtr& right() const { return right_; }
    // Filter: the operand is left(), the condition is condition().
    const ConditionPtr& condition() const { return condition_; }

    static PatternPtr triple(TriplePattern t);
    static PatternPtr conj(PatternPtr l, PatternPtr r);
    static PatternPtr opt(PatternPtr l, PatternPtr r);
    static PatternPtr disj(PatternPtr l, PatternPtr r);
    static PatternPtr filter(PatternPtr operand, ConditionPtr cond);

private:
    GraphPattern() = default;

    PatternKind kind_ = PatternKind::Triple;
    std::optional<TriplePattern> triple_;
    PatternPtr left_;
    PatternPtr right_;
    ConditionPtr condition_;
};

bool equal(const GraphPattern& a, const GraphPattern& b);
inline bool equal(const PatternPtr& a, const PatternPtr& b) { return equal(*a, *b); }

/// Serializes a pattern in the fully parenthesized grammar accepted by
/// parse_pattern; parse_pattern(to_text(p)) reproduces p exactly.
std::string to_text(const GraphPattern& p);
inline std::string to_text(const PatternPtr& p) { return to_text(*p); }

/// Parses a fully parenthesized pattern. The AST mirrors the input
/// parenthesization; no reassociation or normalization happens here.
/// Throws ParseError with a character offset.
PatternPtr parse_pattern(const std::string& text);

/// Parses a standalone condition (the FILTER sub-grammar).
ConditionPtr parse_condition(const std::string& text);

VariableSet vars_of_condition(const Condition& c);
/// All variables occurring anywhere in p, including FILTER conditions.
VariableSet vars_of_pattern(const GraphPattern& p);
inline VariableSet vars_of_pattern(const PatternPtr& p) { return vars_of_pattern(*p); }

/// One FILTER node whose condition mentions variables missing from its
/// operand. `path` locates the node: "/" is the root, then "L"/"R" per
/// operator step (a FILTER operand counts as "L").
struct ScopeViolation {
    std::string path;
    std::string filter_text;
    VariableSet out_of_scope;
};

struct ScopeReport {
    std::vector<ScopeViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks var(R) ⊆ var(P) for every FILTER node (P FILTER R).
ScopeReport validate_filter_scope(const GraphPattern& p);
inline ScopeReport validate_filter_scope(const PatternPtr& p) { return validate_filter_scope(*p); }

/// True iff no UNION node occurs in p.
bool is_union_free(const GraphPattern& p);
inline bool is_union_free(const PatternPtr& p) { return is_union_free(*p); }

/// Number of nodes of each operator kind, for structural assertions.
std::size_t count_nodes(const GraphPattern& p, PatternKind kind);

}  // namespace sparqlalg

#endif
