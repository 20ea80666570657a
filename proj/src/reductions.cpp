#include "sparqlalgebra/reductions.hpp"

#include <cassert>
#include <cstdlib>
#include <sstream>

namespace sparqlalg {

void validate(const CnfFormula& f) {
    if (f.num_vars <= 0) throw Error("CNF formula needs a positive variable count");
    for (const auto& clause : f.clauses) {
        if (clause.empty()) throw Error("CNF clause must be non-empty");
        for (int lit : clause) {
            int v = std::abs(lit);
            if (lit == 0 || v > f.num_vars)
                throw Error("CNF literal " + std::to_string(lit) + " out of range");
        }
    }
}

void validate(const QbfFormula& f) {
    if (f.num_blocks <= 0) throw Error("QBF formula needs a positive block count");
    if (f.matrix.num_vars != 2 * f.num_blocks)
        throw Error("QBF matrix must range over exactly 2m prefix variables");
    validate(f.matrix);
}

namespace {

struct DimacsHeader {
    int num_vars;
    int num_clauses;
};

// Shared line scanner for the CNF body; `lines` excludes comments/blanks.
std::vector<std::pair<std::string, std::size_t>> content_lines(const std::string& text) {
    std::vector<std::pair<std::string, std::size_t>> lines;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t i = line.find_first_not_of(" \t");
        if (i == std::string::npos || line[i] == 'c') continue;
        lines.emplace_back(line.substr(i), line_no);
    }
    return lines;
}

DimacsHeader parse_header(const std::string& line, std::size_t line_no) {
    std::istringstream in(line);
    std::string p, cnf;
    DimacsHeader h{};
    if (!(in >> p >> cnf >> h.num_vars >> h.num_clauses) || p != "p" || cnf != "cnf")
        throw ParseError("line " + std::to_string(line_no) + ": expected 'p cnf <vars> <clauses>'",
                         line_no);
    std::string rest;
    if (in >> rest)
        throw ParseError("line " + std::to_string(line_no) + ": trailing content in header",
                         line_no);
    return h;
}

CnfFormula parse_cnf_body(const std::vector<std::pair<std::string, std::size_t>>& lines,
                          std::size_t start) {
    if (start >= lines.size())
        throw ParseError("missing 'p cnf' header", lines.empty() ? 0 : lines.back().second);
    DimacsHeader header = parse_header(lines[start].first, lines[start].second);
    CnfFormula f;
    f.num_vars = header.num_vars;
    std::vector<int> clause;
    for (std::size_t i = start + 1; i < lines.size(); ++i) {
        std::istringstream in(lines[i].first);
        int lit;
        while (in >> lit) {
            if (lit == 0) {
                f.clauses.push_back(clause);
                clause.clear();
            } else {
                clause.push_back(lit);
            }
        }
        if (!in.eof())
            throw ParseError("line " + std::to_string(lines[i].second) + ": expected integer",
                             lines[i].second);
    }
    if (!clause.empty())
        throw ParseError("last clause is not terminated by 0", lines.back().second);
    if (static_cast<int>(f.clauses.size()) != header.num_clauses)
        throw ParseError("header declares " + std::to_string(header.num_clauses) +
                             " clauses, found " + std::to_string(f.clauses.size()),
                         lines[start].second);
    try {
        validate(f);
    } catch (const Error& e) {
        throw ParseError(e.what(), lines[start].second);
    }
    return f;
}

}  // namespace

CnfFormula parse_dimacs_cnf(const std::string& text) {
    return parse_cnf_body(content_lines(text), 0);
}

QbfFormula parse_dimacs_qbf(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("missing 'b <m>' block line", 0);
    std::istringstream in(lines[0].first);
    std::string b;
    QbfFormula f;
    if (!(in >> b >> f.num_blocks) || b != "b")
        throw ParseError("line " + std::to_string(lines[0].second) + ": expected 'b <m>'",
                         lines[0].second);
    f.matrix = parse_cnf_body(lines, 1);
    try {
        validate(f);
    } catch (const Error& e) {
        throw ParseError(e.what(), lines[0].second);
    }
    return f;
}

std::string to_dimacs(const CnfFormula& f) {
    std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                      std::to_string(f.clauses.size()) + "\n";
    for (const auto& clause : f.clauses) {
        for (int lit : clause) out += std::to_string(lit) + " ";
        out += "0\n";
    }
    return out;
}

std::string to_dimacs(const QbfFormula& f) {
    return "b " + std::to_string(f.num_blocks) + "\n" + to_dimacs(f.matrix);
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

namespace {

PatternPtr triple_pattern(Term s, Term p, const Variable& v) {
    return GraphPattern::triple(TriplePattern(std::move(s), std::move(p), v));
}

PatternPtr chain(const std::vector<PatternPtr>& parts,
                 PatternPtr (*combine)(PatternPtr, PatternPtr)) {
    assert(!parts.empty());
    PatternPtr out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) out = combine(out, parts[i]);
    return out;
}

Variable positive_var(int index) { return Variable("X" + std::to_string(index)); }
Variable negative_var(int index) { return Variable("Y" + std::to_string(index)); }

}  // namespace

ReductionInstance reduce_sat_cnf(const CnfFormula& f) {
    validate(f);
    const Term a = iri("a"), b = iri("b"), c = iri("c");

    Dataset dataset;
    dataset.insert(Triple(a, b, c));

    // One triple pattern per literal; a clause is the UNION of its
    // literals' patterns, so a clause match picks one literal.
    std::vector<PatternPtr> clause_patterns;
    for (const auto& clause : f.clauses) {
        std::vector<PatternPtr> literals;
        for (int lit : clause)
            literals.push_back(
                triple_pattern(a, b, lit > 0 ? positive_var(lit) : negative_var(-lit)));
        clause_patterns.push_back(chain(literals, &GraphPattern::disj));
    }

    // Bind all 2m variables, and forbid picking a variable together with
    // its negation.
    std::vector<PatternPtr> all_bound;
    ConditionPtr consistent;
    for (int i = 1; i <= f.num_vars; ++i) {
        all_bound.push_back(triple_pattern(a, b, positive_var(i)));
    }
    for (int i = 1; i <= f.num_vars; ++i) {
        all_bound.push_back(triple_pattern(a, b, negative_var(i)));
    }
    for (int i = 1; i <= f.num_vars; ++i) {
        ConditionPtr pair = Condition::disjunction(
            Condition::negation(Condition::bound(positive_var(i))),
            Condition::negation(Condition::bound(negative_var(i))));
        consistent = consistent ? Condition::conjunction(consistent, pair) : pair;
    }

    PatternPtr binder = chain(all_bound, &GraphPattern::conj);
    PatternPtr pattern;
    if (clause_patterns.empty()) {
        // No clauses: the formula is vacuously satisfiable and the filtered
        // part degenerates to nothing, leaving just the binder.
        pattern = binder;
    } else {
        pattern = GraphPattern::conj(
            binder, GraphPattern::filter(chain(clause_patterns, &GraphPattern::conj), consistent));
    }

    Mapping target;
    for (int i = 1; i <= f.num_vars; ++i) {
        target.bind(positive_var(i), c);
        target.bind(negative_var(i), c);
    }
    return {std::move(dataset), std::move(pattern), std::move(target)};
}

ReductionInstance reduce_qbf(const QbfFormula& f) {
    validate(f);
    const Term a = iri("a"), tv = iri("tv"), tru = iri("true"), fls = iri("false");
    const Term zero = iri("0"), one = iri("1");

    Dataset dataset;
    dataset.insert(Triple(a, tv, zero));
    dataset.insert(Triple(a, tv, one));
    dataset.insert(Triple(a, fls, zero));
    dataset.insert(Triple(a, tru, one));

    const int m = f.num_blocks;
    auto x_var = [](int i) { return Variable("X" + std::to_string(i)); };
    auto y_var = [](int i) { return Variable("Y" + std::to_string(i)); };
    auto a_var = [](int i) { return Variable("A" + std::to_string(i)); };
    auto b_var = [](int i) { return Variable("B" + std::to_string(i)); };
    // Matrix index 2i-1 is x_i, 2i is y_i.
    auto matrix_var = [&](int index) {
        return index % 2 == 1 ? x_var((index + 1) / 2) : y_var(index / 2);
    };

    // Clause patterns: a positive literal matches through `true`, a
    // negative one through `false`.
    std::vector<PatternPtr> clause_patterns;
    for (const auto& clause : f.matrix.clauses) {
        std::vector<PatternPtr> literals;
        for (int lit : clause)
            literals.push_back(lit > 0 ? triple_pattern(a, tru, matrix_var(lit))
                                       : triple_pattern(a, fls, matrix_var(-lit)));
        clause_patterns.push_back(chain(literals, &GraphPattern::disj));
    }

    // The ladder blocks. P_i re-binds x1..xi, y1..y(i-1) and flips
    // ?A(i-1) -> 0, ?Ai -> 1; Q_i re-binds x1..xi, y1..yi and flips the
    // ?B counters.
    auto ladder_p = [&](int i) {
        std::vector<PatternPtr> parts;
        for (int j = 1; j <= i; ++j) parts.push_back(triple_pattern(a, tv, x_var(j)));
        for (int j = 1; j <= i - 1; ++j) parts.push_back(triple_pattern(a, tv, y_var(j)));
        parts.push_back(triple_pattern(a, fls, a_var(i - 1)));
        parts.push_back(triple_pattern(a, tru, a_var(i)));
        return chain(parts, &GraphPattern::conj);
    };
    auto ladder_q = [&](int i) {
        std::vector<PatternPtr> parts;
        for (int j = 1; j <= i; ++j) parts.push_back(triple_pattern(a, tv, x_var(j)));
        for (int j = 1; j <= i; ++j) parts.push_back(triple_pattern(a, tv, y_var(j)));
        parts.push_back(triple_pattern(a, fls, b_var(i - 1)));
        parts.push_back(triple_pattern(a, tru, b_var(i)));
        return chain(parts, &GraphPattern::conj);
    };

    // Innermost: (Q_m AND P_psi); an empty matrix leaves just Q_m.
    PatternPtr inner = ladder_q(m);
    if (!clause_patterns.empty())
        inner = GraphPattern::conj(inner, chain(clause_patterns, &GraphPattern::conj));
    PatternPtr nested = GraphPattern::opt(ladder_p(m), inner);
    for (int i = m - 1; i >= 1; --i)
        nested = GraphPattern::opt(ladder_p(i), GraphPattern::opt(ladder_q(i), nested));
    PatternPtr pattern = GraphPattern::opt(triple_pattern(a, tru, b_var(0)), nested);

    // The matrix variables ?Xi/?Yi and the ladder counters ?Ai/?Bi live in
    // disjoint name families.
    assert([&] {
        VariableSet ladder;
        for (int i = 0; i <= m; ++i) {
            ladder.insert(a_var(i));
            ladder.insert(b_var(i));
        }
        for (int i = 1; i <= m; ++i)
            if (ladder.count(x_var(i)) || ladder.count(y_var(i))) return false;
        return true;
    }());

    Mapping target;
    target.bind(b_var(0), one);
    return {std::move(dataset), std::move(pattern), std::move(target)};
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

namespace {

bool clause_satisfied(const std::vector<int>& clause, unsigned long long assignment) {
    for (int lit : clause) {
        int v = std::abs(lit);
        bool value = (assignment >> (v - 1)) & 1ull;
        if (lit > 0 ? value : !value) return true;
    }
    return false;
}

bool matrix_satisfied(const CnfFormula& f, unsigned long long assignment) {
    for (const auto& clause : f.clauses)
        if (!clause_satisfied(clause, assignment)) return false;
    return true;
}

// Walks the ∀x_i ∃y_i prefix; bit 2i-2 of the assignment is x_i and bit
// 2i-1 is y_i, matching the matrix numbering.
bool qbf_valid_rec(const QbfFormula& f, int block, unsigned long long assignment) {
    if (block > f.num_blocks) return matrix_satisfied(f.matrix, assignment);
    unsigned long long x_bit = 1ull << (2 * block - 2);
    unsigned long long y_bit = 1ull << (2 * block - 1);
    for (unsigned long long x : {0ull, x_bit}) {
        bool exists = false;
        for (unsigned long long y : {0ull, y_bit})
            if (qbf_valid_rec(f, block + 1, assignment | x | y)) {
                exists = true;
                break;
            }
        if (!exists) return false;
    }
    return true;
}

}  // namespace

bool brute_force_sat(const CnfFormula& f, int max_vars) {
    validate(f);
    if (f.num_vars > max_vars)
        throw PreconditionError("brute_force_sat cap exceeded: " + std::to_string(f.num_vars) +
                                " > " + std::to_string(max_vars) + " variables");
    unsigned long long count = 1ull << f.num_vars;
    for (unsigned long long assignment = 0; assignment < count; ++assignment)
        if (matrix_satisfied(f, assignment)) return true;
    return false;
}

bool brute_force_qbf(const QbfFormula& f, int max_blocks) {
    validate(f);
    if (f.num_blocks > max_blocks)
        throw PreconditionError("brute_force_qbf cap exceeded: " + std::to_string(f.num_blocks) +
                                " > " + std::to_string(max_blocks) + " blocks");
    return qbf_valid_rec(f, 1, 0);
}

}  // namespace sparqlalg
