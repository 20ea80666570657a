#include "sparqlalgebra/eval.hpp"

#include "sparqlalgebra/rewriter.hpp"

namespace sparqlalg {

bool satisfies(const Mapping& m, const Condition& r) {
    switch (r.kind()) {
        case ConditionKind::Bound: return m.binds(r.var());
        case ConditionKind::EqConst: {
            const Term* t = m.lookup(r.var());
            return t && *t == r.constant();
        }
        case ConditionKind::EqVar: {
            const Term* a = m.lookup(r.var());
            const Term* b = m.lookup(r.other_var());
            return a && b && *a == *b;
        }
        case ConditionKind::Not: return !satisfies(m, *r.left());
        case ConditionKind::Or: return satisfies(m, *r.left()) || satisfies(m, *r.right());
        case ConditionKind::And: return satisfies(m, *r.left()) && satisfies(m, *r.right());
    }
    return false;
}

namespace {

bool match_slot(const TermOrVar& slot, const Term& value, Mapping& m) {
    if (const auto* v = std::get_if<Variable>(&slot)) return m.bind(*v, value);
    return std::get<Term>(slot) == value;
}

}  // namespace

MappingSet eval_triple(const Dataset& d, const TriplePattern& t) {
    MappingSet out;
    for (const Triple& data : d.triples()) {
        Mapping m;
        if (match_slot(t.subject(), data.subject(), m) &&
            match_slot(t.predicate(), data.predicate(), m) &&
            match_slot(t.object(), data.object(), m))
            out.insert(std::move(m));
    }
    return out;
}

MappingSet eval_compositional(const Dataset& d, const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return eval_triple(d, p.triple());
        case PatternKind::And:
            return join(eval_compositional(d, *p.left()), eval_compositional(d, *p.right()));
        case PatternKind::Opt:
            return left_outer_join(eval_compositional(d, *p.left()),
                                   eval_compositional(d, *p.right()));
        case PatternKind::Union:
            return set_union(eval_compositional(d, *p.left()), eval_compositional(d, *p.right()));
        case PatternKind::Filter: {
            // Satisfaction is total, so out-of-scope conditions still have a
            // defined value here; rewriting (distributing FILTER over UNION)
            // relies on that. The scope rule is enforced on input patterns
            // at the API boundary instead.
            MappingSet out;
            for (const Mapping& m : eval_compositional(d, *p.left()))
                if (satisfies(m, *p.condition())) out.insert(m);
            return out;
        }
    }
    return {};
}

namespace {

MappingSet eval_df_rec(const Dataset& d, const PatternPtr& p, const MappingSet& omega,
                       const DepthFirstOptions& options) {
    auto record = [&](MappingSet result) {
        if (options.trace) options.trace->push_back({p.get(), omega, result});
        return result;
    };
    if (omega.empty()) return record({});
    switch (p->kind()) {
        case PatternKind::Triple: return record(join(omega, eval_triple(d, p->triple())));
        case PatternKind::And:
            return record(eval_df_rec(d, p->right(), eval_df_rec(d, p->left(), omega, options),
                                      options));
        case PatternKind::Opt: {
            MappingSet left = eval_df_rec(d, p->left(), omega, options);
            MappingSet right = eval_df_rec(d, p->right(), left, options);
            return record(left_outer_join(left, right));
        }
        case PatternKind::Filter: {
            MappingSet out;
            for (const Mapping& m : eval_df_rec(d, p->left(), omega, options))
                if (satisfies(m, *p->condition())) out.insert(m);
            return record(std::move(out));
        }
        case PatternKind::Union:
            throw UnsupportedError("depth-first evaluation has no UNION case");
    }
    return {};
}

}  // namespace

MappingSet eval_depth_first(const Dataset& d, const PatternPtr& p, const MappingSet& omega,
                            DepthFirstOptions options) {
    if (is_union_free(*p)) return eval_df_rec(d, p, omega, options);
    if (!options.allow_union)
        throw UnsupportedError(
            "depth-first evaluation has no UNION case (pass allow_union to evaluate the union "
            "normal form branch-wise)");
    // Extension: rewrite to union normal form and union the per-branch
    // depth-first results.
    MappingSet out;
    for (const PatternPtr& branch : to_union_normal_form(p))
        out = set_union(out, eval_df_rec(d, branch, omega, options));
    return out;
}

MappingSet eval_depth_first(const Dataset& d, const PatternPtr& p, DepthFirstOptions options) {
    return eval_depth_first(d, p, MappingSet{Mapping{}}, options);
}

bool membership(const Dataset& d, const GraphPattern& p, const Mapping& m) {
    return eval_compositional(d, p).count(m) != 0;
}

namespace {

void check_and_filter_only(const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return;
        case PatternKind::And:
            check_and_filter_only(*p.left());
            check_and_filter_only(*p.right());
            return;
        case PatternKind::Filter: check_and_filter_only(*p.left()); return;
        case PatternKind::Opt:
            throw UnsupportedError("membership_fast does not support OPT");
        case PatternKind::Union:
            throw UnsupportedError("membership_fast does not support UNION");
    }
}

// A mapping may legally send a subject- or predicate-position variable to
// a literal; the instantiation is then no RDF triple and cannot be in the
// dataset.
bool instantiates_into(const Dataset& d, const Mapping& m, const TriplePattern& t) {
    auto resolve = [&m](const TermOrVar& tv) -> const Term& {
        if (const auto* v = std::get_if<Variable>(&tv)) return m.at(*v);
        return std::get<Term>(tv);
    };
    const Term& subject = resolve(t.subject());
    const Term& predicate = resolve(t.predicate());
    if (subject.kind() != TermKind::Iri || predicate.kind() != TermKind::Iri) return false;
    return d.contains(Triple(subject, predicate, resolve(t.object())));
}

// Both checks run over the instantiated expression bottom-up: every triple
// must land in the dataset, every FILTER condition must hold under m.
bool fast_check(const Dataset& d, const GraphPattern& p, const Mapping& m) {
    switch (p.kind()) {
        case PatternKind::Triple: return instantiates_into(d, m, p.triple());
        case PatternKind::And: return fast_check(d, *p.left(), m) && fast_check(d, *p.right(), m);
        case PatternKind::Filter:
            return fast_check(d, *p.left(), m) && satisfies(m, *p.condition());
        default: return false;
    }
}

}  // namespace

bool membership_fast(const Dataset& d, const GraphPattern& p, const Mapping& m) {
    check_and_filter_only(p);
    if (m.domain() != vars_of_pattern(p))
        throw PreconditionError("membership_fast requires dom(m) = var(p)");
    return fast_check(d, p, m);
}

}  // namespace sparqlalg
