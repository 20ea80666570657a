/*
 * C API for the sparqlalgebra library: graph-pattern parsing, the two
 * evaluation semantics, pattern analysis, normal-form rewriting, and the
 * SAT/QBF reduction generators.
 *
 * All objects are opaque handles created and released through this API.
 * Functions return SA_OK on success; on failure they return an error code
 * and leave a message retrievable with sa_last_error() on the same thread.
 * Strings returned through char** are owned by the caller and must be
 * released with sa_string_free().
 */
#ifndef SPARQL_ALGEBRA_H
#define SPARQL_ALGEBRA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sa_status {
    SA_OK = 0,
    /* Values 2..4 track the CLI exit-code protocol. */
    SA_ERROR_PARSE = 2,        /* malformed input or FILTER scope violation */
    SA_ERROR_UNSUPPORTED = 3,  /* operation undefined for this pattern shape */
    SA_ERROR_PRECONDITION = 4, /* stated precondition does not hold */
    SA_ERROR_INVALID_ARGUMENT = 5,
    SA_ERROR_INTERNAL = 6
} sa_status;

typedef enum sa_semantics {
    SA_SEMANTICS_COMPOSITIONAL = 0,
    SA_SEMANTICS_DEPTH_FIRST = 1
} sa_semantics;

typedef enum sa_format {
    SA_FORMAT_TABLE = 0,     /* header of sorted variables, tab-separated rows */
    SA_FORMAT_STRUCTURED = 1 /* JSON list of {"?var": "term"} objects */
} sa_format;

typedef struct sa_dataset sa_dataset;
typedef struct sa_pattern sa_pattern;
typedef struct sa_solution sa_solution;

/* Message describing the last failure on this thread, or "". */
const char* sa_last_error(void);

void sa_string_free(char* s);

/* -- datasets ---------------------------------------------------------- */

/* One triple per line: three whitespace-separated fields, bare token for
 * an IRI, "..." for a literal; '#' lines and blank lines are ignored. */
sa_status sa_dataset_parse(const char* text, sa_dataset** out);
void sa_dataset_free(sa_dataset* d);
size_t sa_dataset_size(const sa_dataset* d);
sa_status sa_dataset_to_text(const sa_dataset* d, char** out);

/* -- patterns ---------------------------------------------------------- */

/* Fully parenthesized pattern syntax, e.g.
 *   ((?A email ?E) OPT (?A webPage ?W))
 *   ((?X p ?Y) FILTER (bound(?Y) && ?X = c))
 * Parsing is purely syntactic; FILTER scope is checked separately. */
sa_status sa_pattern_parse(const char* text, sa_pattern** out);
void sa_pattern_free(sa_pattern* p);
sa_status sa_pattern_to_text(const sa_pattern* p, char** out);

/* ok=1 and a one-line report when every FILTER condition only mentions
 * variables of its operand; ok=0 and a violation list otherwise. */
sa_status sa_pattern_check_filter_scope(const sa_pattern* p, int* ok, char** report);

/* ok=1 iff the (UNION-free) pattern is well designed; the report lists
 * each offending OPT occurrence. SA_ERROR_UNSUPPORTED on UNION. */
sa_status sa_pattern_check_well_designed(const sa_pattern* p, int* ok, char** report);

int sa_pattern_is_union_free(const sa_pattern* p);

/* -- evaluation -------------------------------------------------------- */

/* Evaluates p over d. Depth-first semantics rejects UNION patterns with
 * SA_ERROR_UNSUPPORTED unless allow_union_in_depth_first is non-zero, in
 * which case the union normal form is evaluated branch-wise. */
sa_status sa_eval(const sa_dataset* d, const sa_pattern* p, sa_semantics semantics,
                  int allow_union_in_depth_first, sa_solution** out);

void sa_solution_free(sa_solution* s);
size_t sa_solution_size(const sa_solution* s);
int sa_solution_equal(const sa_solution* a, const sa_solution* b);
/* Mappings of a that are not members of b (plain set subtraction). */
sa_status sa_solution_subtract(const sa_solution* a, const sa_solution* b, sa_solution** out);
sa_status sa_solution_format(const sa_solution* s, sa_format format, char** out);

/* -- rewriting --------------------------------------------------------- */

/* Union normal form: newline-separated list of UNION-free branches. */
sa_status sa_normalize_union(const sa_pattern* p, char** branches);

/* OPT normal form of a UNION-free, FILTER-free, well-designed pattern,
 * serialized as (((t1 AND ... AND tk) OPT O1) ... OPT On).
 * SA_ERROR_PRECONDITION with the violation report if not well designed. */
sa_status sa_normalize_opt(const sa_pattern* p, char** out);

/* FILTER identities: merges nested filters and pulls filters out of
 * conjunctions of triple patterns; split_or additionally rewrites
 * disjunctive filters into UNIONs. */
sa_status sa_normalize_filter(const sa_pattern* p, int split_or, char** out);

/* -- reduction generators ---------------------------------------------- */

/* Input: DIMACS-like CNF ("p cnf <vars> <clauses>" plus 0-terminated
 * clause lines); the QBF variant is preceded by "b <m>" and must declare
 * 2m variables (index 2i-1 is x_i, index 2i is y_i). Outputs: a dataset
 * file body, a pattern file body, and the target mapping as a JSON
 * object. The formula holds iff the mapping is in the evaluation. */
sa_status sa_reduce_sat(const char* dimacs, char** dataset_text, char** pattern_text,
                        char** mapping_json);
sa_status sa_reduce_qbf(const char* dimacs, char** dataset_text, char** pattern_text,
                        char** mapping_json);

#ifdef __cplusplus
}
#endif

#endif /* SPARQL_ALGEBRA_H */
