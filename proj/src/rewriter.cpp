#include "sparqlalgebra/rewriter.hpp"

#include <algorithm>
#include <cassert>

#include "sparqlalgebra/eval.hpp"

namespace sparqlalg {

// ---------------------------------------------------------------------------
// Union normal form
// ---------------------------------------------------------------------------

namespace {

std::vector<PatternPtr> unf(const PatternPtr& p) {
    switch (p->kind()) {
        case PatternKind::Triple: return {p};
        case PatternKind::Union: {
            std::vector<PatternPtr> branches = unf(p->left());
            std::vector<PatternPtr> right = unf(p->right());
            branches.insert(branches.end(), right.begin(), right.end());
            return branches;
        }
        case PatternKind::Filter: {
            std::vector<PatternPtr> out;
            for (const PatternPtr& b : unf(p->left()))
                out.push_back(GraphPattern::filter(b, p->condition()));
            return out;
        }
        case PatternKind::And: {
            // Join distributes over union in both arguments.
            std::vector<PatternPtr> left = unf(p->left());
            std::vector<PatternPtr> right = unf(p->right());
            std::vector<PatternPtr> out;
            out.reserve(left.size() * right.size());
            for (const PatternPtr& l : left)
                for (const PatternPtr& r : right) out.push_back(GraphPattern::conj(l, r));
            return out;
        }
        case PatternKind::Opt: {
            // The left outer join is linear in its left argument only. On
            // the right, keeping a mapping unextended requires it to be
            // incompatible with every branch at once, so a UNION there
            // cannot be distributed without changing the result; it stays
            // in place (normalized internally into one chain).
            std::vector<PatternPtr> left = unf(p->left());
            std::vector<PatternPtr> right = unf(p->right());
            PatternPtr right_chain = right.front();
            for (std::size_t i = 1; i < right.size(); ++i)
                right_chain = GraphPattern::disj(right_chain, right[i]);
            std::vector<PatternPtr> out;
            out.reserve(left.size());
            for (const PatternPtr& l : left) out.push_back(GraphPattern::opt(l, right_chain));
            return out;
        }
    }
    return {};
}

}  // namespace

std::vector<PatternPtr> to_union_normal_form(const PatternPtr& p) {
    if (is_union_free(*p)) return {p};
    return unf(p);
}

// ---------------------------------------------------------------------------
// Well-designedness
// ---------------------------------------------------------------------------

namespace {

std::string child_path(const std::string& path, char step) {
    return path == "/" ? std::string("/") + step : path + "/" + step;
}

void check_well_designed(const GraphPattern& p, const std::string& path, const VariableSet& outside,
                         std::vector<WellDesignedViolation>& out) {
    switch (p.kind()) {
        case PatternKind::Triple: return;
        case PatternKind::Union: throw UnsupportedError("well-designedness requires a UNION-free pattern");
        case PatternKind::Filter: {
            VariableSet inner_outside = outside;
            VariableSet cond_vars = vars_of_condition(*p.condition());
            inner_outside.insert(cond_vars.begin(), cond_vars.end());
            check_well_designed(*p.left(), child_path(path, 'L'), inner_outside, out);
            return;
        }
        case PatternKind::And:
        case PatternKind::Opt: {
            VariableSet left_vars = vars_of_pattern(*p.left());
            VariableSet right_vars = vars_of_pattern(*p.right());
            if (p.kind() == PatternKind::Opt) {
                for (const Variable& v : right_vars)
                    if (outside.count(v) && !left_vars.count(v)) out.push_back({path, v});
            }
            VariableSet left_outside = outside;
            left_outside.insert(right_vars.begin(), right_vars.end());
            check_well_designed(*p.left(), child_path(path, 'L'), left_outside, out);
            VariableSet right_outside = outside;
            right_outside.insert(left_vars.begin(), left_vars.end());
            check_well_designed(*p.right(), child_path(path, 'R'), right_outside, out);
            return;
        }
    }
}

}  // namespace

WellDesignedReport is_well_designed(const GraphPattern& p) {
    WellDesignedReport report;
    check_well_designed(p, "/", {}, report.violations);
    return report;
}

std::string to_text(const WellDesignedReport& report) {
    if (report.is_well_designed()) return "well designed: yes\n";
    std::string out = "well designed: no\n";
    for (const WellDesignedViolation& v : report.violations)
        out += "  OPT at " + v.path + ": " + v.variable.to_text() +
               " occurs in the optional side and outside, but not in the mandatory side\n";
    return out;
}

std::string to_text(const ScopeReport& report) {
    if (report.ok()) return "filter scope: ok\n";
    std::string out = "filter scope: " + std::to_string(report.violations.size()) + " violation" +
                      (report.violations.size() == 1 ? "" : "s") + "\n";
    for (const ScopeViolation& v : report.violations) {
        out += "  FILTER at " + v.path + " (" + v.filter_text + "): out of scope:";
        for (const Variable& var : v.out_of_scope) out += " " + var.to_text();
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// OPT normal form: rewrite system and decomposition
// ---------------------------------------------------------------------------

namespace {

using Path = std::vector<char>;  // 'L'/'R' steps from the root

void collect_and_leaves(const PatternPtr& p, std::vector<PatternPtr>& out) {
    if (p->kind() == PatternKind::And) {
        collect_and_leaves(p->left(), out);
        collect_and_leaves(p->right(), out);
        return;
    }
    out.push_back(p);
}

bool and_tree_has_opt_leaf(const GraphPattern& p) {
    if (p.kind() != PatternKind::And) return p.kind() == PatternKind::Opt;
    return and_tree_has_opt_leaf(*p.left()) || and_tree_has_opt_leaf(*p.right());
}

// Redexes are maximal AND-trees (AND nodes whose parent is not AND) with an
// OPT among their collapsed children, listed in pre-order.
void collect_redexes(const GraphPattern& p, bool parent_is_and, Path& path,
                     std::vector<Path>& out) {
    if (p.kind() == PatternKind::And && !parent_is_and && and_tree_has_opt_leaf(p))
        out.push_back(path);
    bool is_and = p.kind() == PatternKind::And;
    switch (p.kind()) {
        case PatternKind::Triple: return;
        case PatternKind::Filter:
            path.push_back('L');
            collect_redexes(*p.left(), false, path, out);
            path.pop_back();
            return;
        default:
            path.push_back('L');
            collect_redexes(*p.left(), is_and, path, out);
            path.pop_back();
            path.push_back('R');
            collect_redexes(*p.right(), is_and, path, out);
            path.pop_back();
            return;
    }
}

bool is_strict_prefix(const Path& a, const Path& b) {
    return a.size() < b.size() && std::equal(a.begin(), a.end(), b.begin());
}

PatternPtr and_chain(const std::vector<PatternPtr>& parts) {
    assert(!parts.empty());
    PatternPtr chain = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) chain = GraphPattern::conj(chain, parts[i]);
    return chain;
}

// One rule application at the AND-tree rooted here: the first OPT child
// (Y OPT Z) joins the tree as Y, and Z moves above the whole tree.
PatternPtr extract_first_opt(const PatternPtr& block) {
    std::vector<PatternPtr> leaves;
    collect_and_leaves(block, leaves);
    auto it = std::find_if(leaves.begin(), leaves.end(),
                           [](const PatternPtr& l) { return l->kind() == PatternKind::Opt; });
    assert(it != leaves.end());
    PatternPtr optional = (*it)->right();
    *it = (*it)->left();
    return GraphPattern::opt(and_chain(leaves), optional);
}

PatternPtr rebuild_at(const PatternPtr& p, const Path& path, std::size_t depth,
                      PatternPtr (*transform)(const PatternPtr&)) {
    if (depth == path.size()) return transform(p);
    if (path[depth] == 'L') {
        PatternPtr left = rebuild_at(p->left(), path, depth + 1, transform);
        switch (p->kind()) {
            case PatternKind::And: return GraphPattern::conj(left, p->right());
            case PatternKind::Opt: return GraphPattern::opt(left, p->right());
            case PatternKind::Union: return GraphPattern::disj(left, p->right());
            case PatternKind::Filter: return GraphPattern::filter(left, p->condition());
            default: break;
        }
    } else {
        PatternPtr right = rebuild_at(p->right(), path, depth + 1, transform);
        switch (p->kind()) {
            case PatternKind::And: return GraphPattern::conj(p->left(), right);
            case PatternKind::Opt: return GraphPattern::opt(p->left(), right);
            case PatternKind::Union: return GraphPattern::disj(p->left(), right);
            default: break;
        }
    }
    assert(false && "path does not match pattern shape");
    return p;
}

}  // namespace

std::optional<PatternPtr> opt_rewrite_step(const PatternPtr& p, RewriteStrategy strategy) {
    std::vector<Path> redexes;
    Path path;
    collect_redexes(*p, false, path, redexes);
    if (redexes.empty()) return std::nullopt;

    const Path* chosen = nullptr;
    if (strategy == RewriteStrategy::LeftmostOutermost) {
        // Pre-order visits ancestors first, so the first redex is outermost.
        chosen = &redexes.front();
    } else {
        for (const Path& candidate : redexes) {
            bool has_inner = false;
            for (const Path& other : redexes)
                if (is_strict_prefix(candidate, other)) {
                    has_inner = true;
                    break;
                }
            if (!has_inner) {
                chosen = &candidate;
                break;
            }
        }
    }
    assert(chosen);
    return rebuild_at(p, *chosen, 0, &extract_first_opt);
}

std::vector<PatternPtr> opt_rewrite_trajectory(const PatternPtr& p, RewriteStrategy strategy) {
    std::vector<PatternPtr> steps{p};
    while (auto next = opt_rewrite_step(steps.back(), strategy)) steps.push_back(*next);
    return steps;
}

namespace {

std::size_t measure_rec(const GraphPattern& p, std::size_t blocks_above, bool parent_is_and) {
    switch (p.kind()) {
        case PatternKind::Triple: return 0;
        case PatternKind::And: {
            std::size_t blocks = parent_is_and ? blocks_above : blocks_above + 1;
            return measure_rec(*p.left(), blocks, true) + measure_rec(*p.right(), blocks, true);
        }
        case PatternKind::Opt:
            return blocks_above + measure_rec(*p.left(), blocks_above, false) +
                   measure_rec(*p.right(), blocks_above, false);
        case PatternKind::Union:
            return measure_rec(*p.left(), blocks_above, false) +
                   measure_rec(*p.right(), blocks_above, false);
        case PatternKind::Filter: return measure_rec(*p.left(), blocks_above, false);
    }
    return 0;
}

OptNormalForm decompose(const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return {{p.triple()}, {}};
        case PatternKind::And: {
            OptNormalForm left = decompose(*p.left());
            OptNormalForm right = decompose(*p.right());
            assert(left.optionals.empty() && right.optionals.empty());
            left.mandatory.insert(left.mandatory.end(), right.mandatory.begin(),
                                  right.mandatory.end());
            return left;
        }
        case PatternKind::Opt: {
            OptNormalForm form = decompose(*p.left());
            form.optionals.push_back(decompose(*p.right()));
            return form;
        }
        default:
            assert(false && "normal form contains only AND, OPT and triples");
            return {};
    }
}

void sort_mandatory(OptNormalForm& nf) {
    std::sort(nf.mandatory.begin(), nf.mandatory.end(),
              [](const TriplePattern& a, const TriplePattern& b) { return a.to_text() < b.to_text(); });
    for (OptNormalForm& o : nf.optionals) sort_mandatory(o);
}

}  // namespace

std::size_t opt_in_and_measure(const GraphPattern& p) { return measure_rec(p, 0, false); }

bool well_formed(const OptNormalForm& nf) {
    if (nf.mandatory.empty()) return false;
    return std::all_of(nf.optionals.begin(), nf.optionals.end(),
                       [](const OptNormalForm& o) { return well_formed(o); });
}

PatternPtr flatten(const OptNormalForm& nf) {
    assert(!nf.mandatory.empty());
    std::vector<PatternPtr> triples;
    triples.reserve(nf.mandatory.size());
    for (const TriplePattern& t : nf.mandatory) triples.push_back(GraphPattern::triple(t));
    PatternPtr out = and_chain(triples);
    for (const OptNormalForm& o : nf.optionals) out = GraphPattern::opt(out, flatten(o));
    return out;
}

std::string canonical_key(const OptNormalForm& nf) {
    std::vector<std::string> mandatory;
    mandatory.reserve(nf.mandatory.size());
    for (const TriplePattern& t : nf.mandatory) mandatory.push_back(t.to_text());
    std::sort(mandatory.begin(), mandatory.end());
    std::vector<std::string> optionals;
    optionals.reserve(nf.optionals.size());
    for (const OptNormalForm& o : nf.optionals) optionals.push_back(canonical_key(o));
    std::sort(optionals.begin(), optionals.end());
    std::string out = "M[";
    for (const std::string& m : mandatory) out += m + ";";
    out += "]O[";
    for (const std::string& o : optionals) out += o + ";";
    return out + "]";
}

OptNormalForm to_opt_normal_form(const PatternPtr& p, RewriteStrategy strategy) {
    if (!is_union_free(*p))
        throw UnsupportedError("OPT normal form is defined for UNION-free patterns");
    if (count_nodes(*p, PatternKind::Filter) != 0)
        throw UnsupportedError("OPT normal form is defined for FILTER-free patterns");
    WellDesignedReport report = is_well_designed(*p);
    if (!report.is_well_designed())
        throw PreconditionError("pattern is not well designed\n" + to_text(report));
    std::vector<PatternPtr> trajectory = opt_rewrite_trajectory(p, strategy);
    OptNormalForm nf = decompose(*trajectory.back());
    sort_mandatory(nf);
    return nf;
}

// ---------------------------------------------------------------------------
// FILTER identities
// ---------------------------------------------------------------------------

namespace {

bool conjunction_of_triples(const GraphPattern& p) {
    if (p.kind() == PatternKind::Triple) return true;
    if (p.kind() != PatternKind::And) return false;
    return conjunction_of_triples(*p.left()) && conjunction_of_triples(*p.right());
}

PatternPtr filter_rewrite_pass(const PatternPtr& p, const FilterRewriteOptions& options,
                               bool& changed) {
    switch (p->kind()) {
        case PatternKind::Triple: return p;
        case PatternKind::Opt:
        case PatternKind::Union: {
            PatternPtr left = filter_rewrite_pass(p->left(), options, changed);
            PatternPtr right = filter_rewrite_pass(p->right(), options, changed);
            if (left == p->left() && right == p->right()) return p;
            return p->kind() == PatternKind::Opt ? GraphPattern::opt(left, right)
                                                 : GraphPattern::disj(left, right);
        }
        case PatternKind::And: {
            PatternPtr left = filter_rewrite_pass(p->left(), options, changed);
            PatternPtr right = filter_rewrite_pass(p->right(), options, changed);
            // Pull a filter above the conjunction when both operands are
            // conjunctions of triple patterns.
            if (left->kind() == PatternKind::Filter && conjunction_of_triples(*left->left()) &&
                conjunction_of_triples(*right)) {
                changed = true;
                return GraphPattern::filter(GraphPattern::conj(left->left(), right),
                                            left->condition());
            }
            if (right->kind() == PatternKind::Filter && conjunction_of_triples(*right->left()) &&
                conjunction_of_triples(*left)) {
                changed = true;
                return GraphPattern::filter(GraphPattern::conj(left, right->left()),
                                            right->condition());
            }
            if (left == p->left() && right == p->right()) return p;
            return GraphPattern::conj(left, right);
        }
        case PatternKind::Filter: {
            PatternPtr inner = filter_rewrite_pass(p->left(), options, changed);
            if (inner->kind() == PatternKind::Filter) {
                changed = true;
                return GraphPattern::filter(
                    inner->left(), Condition::conjunction(inner->condition(), p->condition()));
            }
            if (options.split_or && p->condition()->kind() == ConditionKind::Or) {
                changed = true;
                return GraphPattern::disj(
                    GraphPattern::filter(inner, p->condition()->left()),
                    GraphPattern::filter(inner, p->condition()->right()));
            }
            if (inner == p->left()) return p;
            return GraphPattern::filter(inner, p->condition());
        }
    }
    return p;
}

}  // namespace

PatternPtr apply_filter_rewrites(const PatternPtr& p, FilterRewriteOptions options) {
    PatternPtr current = p;
    for (;;) {
        bool changed = false;
        current = filter_rewrite_pass(current, options, changed);
        if (!changed) return current;
    }
}

bool equivalent_on(const PatternPtr& p1, const PatternPtr& p2, const Dataset& d) {
    return eval_compositional(d, *p1) == eval_compositional(d, *p2);
}

}  // namespace sparqlalg
