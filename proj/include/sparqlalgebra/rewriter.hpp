#ifndef SPARQLALGEBRA_REWRITER_HPP
#define SPARQLALGEBRA_REWRITER_HPP

#include <string>
#include <vector>

#include "sparqlalgebra/algebra.hpp"
#include "sparqlalgebra/term.hpp"

namespace sparqlalg {

/// Rewrites p into a list of patterns whose n-ary union is equivalent to
/// p on every dataset, by distributing AND (both sides), the left side of
/// OPT, and FILTER over UNION. A UNION in the right-hand side of an OPT
/// is not distributable (the bare-mapping case of the left outer join is
/// not branch-wise) and stays in place, so branches are UNION-free
/// exactly when the input has no UNION inside an OPT right-hand side.
/// A UNION-free input comes back as a one-element list.
std::vector<PatternPtr> to_union_normal_form(const PatternPtr& p);

/// One offending OPT occurrence: `variable` occurs in the optional side
/// and somewhere outside the occurrence, but not in the mandatory side.
struct WellDesignedViolation {
    std::string path;  // "/" root, then "L"/"R" steps
    Variable variable;
};

struct WellDesignedReport {
    std::vector<WellDesignedViolation> violations;
    bool is_well_designed() const { return violations.empty(); }
};

/// Checks the well-designedness condition on every OPT occurrence of a
/// UNION-free pattern. Variable occurrences inside FILTER conditions
/// count. Throws UnsupportedError if p contains UNION.
WellDesignedReport is_well_designed(const GraphPattern& p);
inline WellDesignedReport is_well_designed(const PatternPtr& p) { return is_well_designed(*p); }

std::string to_text(const WellDesignedReport& report);
std::string to_text(const ScopeReport& report);

/// The nested normal form: a block of mandatory triple patterns followed
/// by optional sub-forms, each of the same shape.
struct OptNormalForm {
    std::vector<TriplePattern> mandatory;  // non-empty, sorted by serialization
    std::vector<OptNormalForm> optionals;  // in extraction order
};

/// Shape validity: mandatory blocks non-empty, recursively.
bool well_formed(const OptNormalForm& nf);

/// (((t1 AND ... AND tk) OPT O1) ... OPT On), AND chains left-associated.
PatternPtr flatten(const OptNormalForm& nf);

/// Serialization that identifies forms up to AND-commutativity of the
/// mandatory blocks and permutation of the optionals.
std::string canonical_key(const OptNormalForm& nf);

/// Redex choice for one rewrite step.
enum class RewriteStrategy { LeftmostInnermost, LeftmostOutermost };

/// Applies the OPT-extraction rule once, modulo AC of AND: the chosen
/// redex is a maximal AND-tree with an OPT among its collapsed children;
/// the first such child (Y OPT Z) is replaced by Y and the whole tree T
/// becomes (T' OPT Z). Returns nothing when p is already in normal form.
std::optional<PatternPtr> opt_rewrite_step(const PatternPtr& p, RewriteStrategy strategy);

/// [p = p0, p1, ..., pn] with pn in normal form.
std::vector<PatternPtr> opt_rewrite_trajectory(const PatternPtr& p, RewriteStrategy strategy);

/// Termination measure of the rewrite system: the sum, over all OPT
/// occurrences, of the number of maximal AND-trees strictly above them.
/// Invariant under AC of AND and OPT reordering; strictly decreases with
/// every opt_rewrite_step.
std::size_t opt_in_and_measure(const GraphPattern& p);
inline std::size_t opt_in_and_measure(const PatternPtr& p) { return opt_in_and_measure(*p); }

/// Normalizes a UNION-free, FILTER-free, well-designed pattern. Throws
/// PreconditionError (carrying the violation list) when p is not well
/// designed, UnsupportedError when it contains UNION or FILTER.
OptNormalForm to_opt_normal_form(const PatternPtr& p, RewriteStrategy strategy =
                                                          RewriteStrategy::LeftmostInnermost);

struct FilterRewriteOptions {
    /// (P FILTER (R1 || R2)) -> ((P FILTER R1) UNION (P FILTER R2)).
    /// Off by default: it grows the pattern.
    bool split_or = false;
};

/// Applies the FILTER identities exhaustively: nested filters merge into
/// one conjunction, and a filter over a conjunction of triple patterns is
/// pulled above an adjacent conjunction of triple patterns. Any operand
/// that is not an AND-tree of triples blocks the pull-out.
PatternPtr apply_filter_rewrites(const PatternPtr& p, FilterRewriteOptions options = {});

/// ⟦p1⟧ = ⟦p2⟧ on this one dataset.
bool equivalent_on(const PatternPtr& p1, const PatternPtr& p2, const Dataset& d);

}  // namespace sparqlalg

#endif
