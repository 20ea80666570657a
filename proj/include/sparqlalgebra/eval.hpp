#ifndef SPARQLALGEBRA_EVAL_HPP
#define SPARQLALGEBRA_EVAL_HPP

#include <vector>

#include "sparqlalgebra/algebra.hpp"
#include "sparqlalgebra/mapping.hpp"
#include "sparqlalgebra/term.hpp"

namespace sparqlalg {

/// Two-valued condition satisfaction. Unbound variables are handled by
/// the case analysis itself: bound(?X) iff ?X ∈ dom(m); equalities
/// require their variables to be bound; ¬, ∨, ∧ are classical.
bool satisfies(const Mapping& m, const Condition& r);

/// All mappings m with dom(m) = var(t) and m(t) ∈ d.
MappingSet eval_triple(const Dataset& d, const TriplePattern& t);

/// Bottom-up compositional evaluation: AND is join, OPT is left outer
/// join, UNION is set union, FILTER keeps satisfying mappings. Input
/// patterns are expected to pass validate_filter_scope; the evaluation
/// itself is total (satisfaction handles unbound variables), which lets
/// rewritten sub-patterns evaluate even where a distributed condition
/// fell out of scope.
MappingSet eval_compositional(const Dataset& d, const GraphPattern& p);
inline MappingSet eval_compositional(const Dataset& d, const PatternPtr& p) {
    return eval_compositional(d, *p);
}

/// One recorded call of the depth-first evaluator.
struct DepthFirstCall {
    const GraphPattern* pattern;
    MappingSet input;
    MappingSet output;
};

struct DepthFirstOptions {
    /// UNION has no depth-first case. When set, the pattern is first
    /// rewritten to its union normal form and the per-branch results are
    /// unioned; this extension is ours, not standard behavior. A UNION
    /// surviving inside an OPT right-hand side still rejects, since no
    /// sound branch rewrite exists for it.
    bool allow_union = false;
    /// When non-null, every recursive call is recorded here.
    std::vector<DepthFirstCall>* trace = nullptr;
};

/// Depth-first evaluation threading the intermediate mapping set through
/// the parse tree, started on {μ∅}. Throws UnsupportedError on UNION
/// unless options.allow_union is set.
MappingSet eval_depth_first(const Dataset& d, const PatternPtr& p, DepthFirstOptions options = {});

/// The inner recursion with an explicit starting set.
MappingSet eval_depth_first(const Dataset& d, const PatternPtr& p, const MappingSet& omega,
                            DepthFirstOptions options = {});

/// Decides m ∈ eval_compositional(d, p) by enumeration.
bool membership(const Dataset& d, const GraphPattern& p, const Mapping& m);
inline bool membership(const Dataset& d, const PatternPtr& p, const Mapping& m) {
    return membership(d, *p, m);
}

/// Membership without enumerating the evaluation, for patterns built from
/// AND and FILTER only: every triple of p is instantiated through m and
/// checked against d, then the FILTER conditions are checked on m.
/// Requires dom(m) = vars_of_pattern(p) (PreconditionError otherwise) and
/// throws UnsupportedError if p contains OPT or UNION.
bool membership_fast(const Dataset& d, const GraphPattern& p, const Mapping& m);
inline bool membership_fast(const Dataset& d, const PatternPtr& p, const Mapping& m) {
    return membership_fast(d, *p, m);
}

}  // namespace sparqlalg

#endif
