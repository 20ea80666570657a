#ifndef SPARQLALGEBRA_MAPPING_HPP
#define SPARQLALGEBRA_MAPPING_HPP

#include <map>
#include <optional>
#include <set>
#include <string>

#include "sparqlalgebra/algebra.hpp"
#include "sparqlalgebra/term.hpp"

namespace sparqlalg {

/// A mapping named an unbound variable.
class UnboundVariableError : public Error {
public:
    explicit UnboundVariableError(const Variable& v)
        : Error("variable " + v.to_text() + " is unbound"), variable(v) {}
    Variable variable;
};

/// A partial function from variables to terms. Absence from the domain is
/// the only notion of "unbound"; there is no null marker.
class Mapping {
public:
    Mapping() = default;
    explicit Mapping(std::map<Variable, Term> bindings) : bindings_(std::move(bindings)) {}

    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    bool binds(const Variable& v) const { return bindings_.count(v) != 0; }
    const Term* lookup(const Variable& v) const;
    const Term& at(const Variable& v) const;

    VariableSet domain() const;
    const std::map<Variable, Term>& bindings() const { return bindings_; }

    /// Adds a binding; returns false on a conflicting existing binding.
    bool bind(const Variable& v, const Term& t);

    std::string to_text() const;

    friend bool operator==(const Mapping&, const Mapping&) = default;
    friend std::strong_ordering operator<=>(const Mapping&, const Mapping&) = default;

private:
    std::map<Variable, Term> bindings_;
};

/// A set of mappings (set semantics, extensional equality).
using MappingSet = std::set<Mapping>;

/// True iff m1 ∪ m2 is a function: the mappings agree on every shared
/// variable.
bool compatible(const Mapping& m1, const Mapping& m2);

/// m1 ∪ m2 when compatible, nothing otherwise.
std::optional<Mapping> merge(const Mapping& m1, const Mapping& m2);

/// { m1 ∪ m2 | m1 ∈ o1, m2 ∈ o2 compatible }.
MappingSet join(const MappingSet& o1, const MappingSet& o2);

/// Plain set union; member domains may differ.
MappingSet set_union(const MappingSet& o1, const MappingSet& o2);

/// { m ∈ o1 | no member of o2 is compatible with m }. This is the
/// compatibility-based difference, not set subtraction.
MappingSet difference(const MappingSet& o1, const MappingSet& o2);

/// join(o1,o2) ∪ difference(o1,o2).
MappingSet left_outer_join(const MappingSet& o1, const MappingSet& o2);

/// Replaces the variables of t according to m. Throws UnboundVariableError
/// if some variable of t is outside dom(m).
Triple apply_mapping(const Mapping& m, const TriplePattern& t);

/// Tabular rendering: header of sorted variable names, tab-separated
/// cells, empty cell for unbound, rows sorted lexicographically.
std::string to_table(const MappingSet& mappings);

/// JSON rendering: a list of {"?var": "term"} objects in table-row order.
/// Literal values keep their surrounding quotes.
std::string to_structured(const MappingSet& mappings);

}  // namespace sparqlalg

#endif
