#ifndef SPARQLALGEBRA_REDUCTIONS_HPP
#define SPARQLALGEBRA_REDUCTIONS_HPP

#include <string>
#include <vector>

#include "sparqlalgebra/algebra.hpp"
#include "sparqlalgebra/mapping.hpp"
#include "sparqlalgebra/term.hpp"

namespace sparqlalg {

/// A propositional CNF formula. A clause is a non-empty list of signed
/// 1-based variable indices (negative = negated). The clause list itself
/// may be empty (a vacuously true formula).
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
};

/// A quantified formula ∀x1∃y1 ... ∀xm∃ym ψ with CNF matrix ψ over the 2m
/// prefix variables. Matrix index 2i-1 is x_i, index 2i is y_i.
struct QbfFormula {
    int num_blocks = 0;  // m
    CnfFormula matrix;
};

/// Validates index ranges and clause non-emptiness; throws Error.
void validate(const CnfFormula& f);
void validate(const QbfFormula& f);

/// DIMACS-like input: optional 'c' comment lines, a "p cnf <vars>
/// <clauses>" header, then clauses as signed integers each terminated
/// by 0. Throws ParseError.
CnfFormula parse_dimacs_cnf(const std::string& text);

/// Same, preceded by a block-count line "b <m>"; the header must declare
/// exactly 2m variables.
QbfFormula parse_dimacs_qbf(const std::string& text);

std::string to_dimacs(const CnfFormula& f);
std::string to_dimacs(const QbfFormula& f);

/// An executable hardness-reduction instance: the formula holds iff
/// `target` is a member of the evaluation of `pattern` over `dataset`.
struct ReductionInstance {
    Dataset dataset;
    PatternPtr pattern;
    Mapping target;
};

/// SAT instance over the one-triple dataset {(a,b,c)}: per clause a UNION
/// of one-variable triple patterns, conjoined and filtered so no variable
/// is picked together with its negation, joined with a pattern binding
/// every ?Xi/?Yi. Satisfiable iff target ∈ evaluation. Uses only AND,
/// UNION and FILTER.
ReductionInstance reduce_sat_cnf(const CnfFormula& f);

/// QBF instance over the four-triple dataset {(a,tv,0), (a,tv,1),
/// (a,false,0), (a,true,1)}: the quantifier prefix becomes a ladder of
/// nested OPT blocks over flip variables ?Ai/?Bi, the matrix a
/// conjunction of clause UNIONs. Valid iff {?B0 -> 1} ∈ evaluation.
/// FILTER-free.
ReductionInstance reduce_qbf(const QbfFormula& f);

/// Exhaustive truth-table satisfiability. The cap bounds num_vars
/// (PreconditionError beyond it).
bool brute_force_sat(const CnfFormula& f, int max_vars = 24);

/// Recursive ∀∃ game-tree evaluation. The cap bounds num_blocks.
bool brute_force_qbf(const QbfFormula& f, int max_blocks = 6);

}  // namespace sparqlalg

#endif
