#include <doctest.h>

#include "example_data.hpp"
#include "generators.hpp"
#include "sparqlalgebra/eval.hpp"
#include "sparqlalgebra/rewriter.hpp"

using namespace sparqlalg;

namespace {

const Dataset& example_dataset() {
    static const Dataset d = parse_dataset(example::kDatasetText);
    return d;
}

MappingSet eval_branches(const Dataset& d, const std::vector<PatternPtr>& branches) {
    MappingSet out;
    for (const PatternPtr& b : branches) out = set_union(out, eval_compositional(d, b));
    return out;
}

}  // namespace

TEST_CASE("union normal form of the running examples") {
    std::vector<PatternPtr> branches = to_union_normal_form(parse_pattern(example::kP4));
    REQUIRE(branches.size() == 2);
    CHECK(to_text(branches[0]) == "((?A name ?N) AND (?A email ?E))");
    CHECK(to_text(branches[1]) == "((?A name ?N) AND (?A webPage ?W))");

    PatternPtr p1 = parse_pattern(example::kP1);
    std::vector<PatternPtr> unchanged = to_union_normal_form(p1);
    REQUIRE(unchanged.size() == 1);
    CHECK(equal(unchanged[0], p1));

    std::vector<PatternPtr> opt_left =
        to_union_normal_form(parse_pattern("(((?X p a) UNION (?X p b)) OPT (?X q ?Y))"));
    REQUIRE(opt_left.size() == 2);
    CHECK(to_text(opt_left[0]) == "((?X p a) OPT (?X q ?Y))");
    CHECK(to_text(opt_left[1]) == "((?X p b) OPT (?X q ?Y))");
}

namespace {

// A UNION occurrence reachable from the root without crossing into the
// right-hand side of an OPT; the normal form lifts exactly these.
bool union_outside_opt_right(const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return false;
        case PatternKind::Union: return true;
        case PatternKind::Filter: return union_outside_opt_right(*p.left());
        case PatternKind::And:
            return union_outside_opt_right(*p.left()) || union_outside_opt_right(*p.right());
        case PatternKind::Opt: return union_outside_opt_right(*p.left());
    }
    return false;
}

}  // namespace

TEST_CASE("union normal form is sound") {
    testgen::Rng rng(testgen::env_seed(501));
    for (int i = 0; i < 300; ++i) {
        Dataset d = testgen::random_dataset(rng);
        PatternPtr p = testgen::random_pattern(rng, {.max_depth = 4});
        std::vector<PatternPtr> branches = to_union_normal_form(p);
        std::size_t unions = count_nodes(*p, PatternKind::Union);
        CHECK(branches.size() <= (std::size_t{1} << unions));
        for (const PatternPtr& b : branches) {
            // No liftable UNION may remain in any branch; without OPT
            // nodes the branches are fully UNION-free.
            CHECK_FALSE(union_outside_opt_right(*b));
            if (count_nodes(*p, PatternKind::Opt) == 0) CHECK(is_union_free(b));
        }
        CHECK(eval_branches(d, branches) == eval_compositional(d, p));
    }
}

TEST_CASE("OPT does not distribute over UNION on the right") {
    // Keeping a mapping unextended requires incompatibility with every
    // union branch at once; branch-wise evaluation loses that conjunction.
    Dataset d = parse_dataset("a p b\na q c");
    PatternPtr p1 = parse_pattern("(a p ?X)");
    PatternPtr p2 = parse_pattern("(a q ?X)");
    PatternPtr p3 = parse_pattern("(a q ?Y)");
    PatternPtr nested = GraphPattern::opt(p1, GraphPattern::disj(p2, p3));
    PatternPtr distributed =
        GraphPattern::disj(GraphPattern::opt(p1, p2), GraphPattern::opt(p1, p3));
    CHECK_FALSE(equivalent_on(nested, distributed, d));
    MappingSet lhs = eval_compositional(d, nested);
    CHECK(lhs.size() == 1);  // only the extended mapping
    CHECK(eval_compositional(d, distributed).size() == 2);  // plus the bare one

    // The normal form therefore leaves this UNION in place and stays sound.
    std::vector<PatternPtr> branches = to_union_normal_form(nested);
    REQUIRE(branches.size() == 1);
    CHECK(eval_compositional(d, branches[0]) == lhs);
}

TEST_CASE("well-designedness of the running examples") {
    WellDesignedReport nested = is_well_designed(parse_pattern(example::kNestedOpt));
    REQUIRE_FALSE(nested.is_well_designed());
    REQUIRE(nested.violations.size() == 1);
    CHECK(nested.violations[0].path == "/R");  // the inner OPT
    CHECK(nested.violations[0].variable == Variable("X"));

    CHECK(is_well_designed(parse_pattern(example::kP2)).is_well_designed());
    CHECK(is_well_designed(parse_pattern("(?X p ?Y)")).is_well_designed());
    CHECK_FALSE(is_well_designed(parse_pattern(example::kAndComm1)).is_well_designed());
    CHECK_THROWS_AS(is_well_designed(parse_pattern(example::kP4)), UnsupportedError);
}

TEST_CASE("filter conditions count as occurrences for well-designedness") {
    // ?Z occurs in the optional side and in the outer filter condition,
    // but not in the mandatory side.
    PatternPtr p = parse_pattern("(((?X p ?Y) OPT (?Y q ?Z)) FILTER (! bound(?Z)))");
    CHECK_FALSE(is_well_designed(p).is_well_designed());
    PatternPtr ok = parse_pattern("(((?X p ?Z) OPT (?Z q ?Y)) FILTER (! bound(?Z)))");
    CHECK(is_well_designed(ok).is_well_designed());
}

TEST_CASE("constructively generated patterns verify as well designed") {
    testgen::Rng rng(testgen::env_seed(502));
    for (int i = 0; i < 300; ++i) {
        PatternPtr p = testgen::random_well_designed_pattern(rng, 3, true);
        CHECK(is_well_designed(p).is_well_designed());
    }
}

TEST_CASE("measure counts OPT nodes under AND blocks") {
    CHECK(opt_in_and_measure(parse_pattern("((?X p a) AND ((?X q b) OPT (?X q c)))")) == 1);
    CHECK(opt_in_and_measure(parse_pattern("(((?X p a) AND (?X q b)) OPT (?X q c))")) == 0);
    CHECK(opt_in_and_measure(parse_pattern(
              "((?X p a) AND (((?X q b) OPT (?X q c)) AND ((?X p b) OPT (?X p c))))")) == 2);
    // Nested AND blocks separated by an OPT count once per enclosing block.
    CHECK(opt_in_and_measure(parse_pattern(
              "((?X p a) AND ((?X p b) OPT ((?X q a) AND ((?X q b) OPT (?X q c)))))")) == 3);
}

TEST_CASE("OPT normal form of the worked example") {
    OptNormalForm nf = to_opt_normal_form(parse_pattern(example::kNormInput));
    REQUIRE(well_formed(nf));
    REQUIRE(nf.mandatory.size() == 2);
    CHECK(nf.mandatory[0].to_text() == "(?X name ?Y)");
    CHECK(nf.mandatory[1].to_text() == "(?X phone \"888-4537\")");
    REQUIRE(nf.optionals.size() == 1);
    CHECK(nf.optionals[0].mandatory.size() == 1);
    CHECK(nf.optionals[0].mandatory[0].to_text() == "(?X email ?E)");
    CHECK(to_text(flatten(nf)) == example::kNormOutput);
}

TEST_CASE("OPT normal form trivial shapes") {
    OptNormalForm conj = to_opt_normal_form(parse_pattern("((?X p a) AND (?X q b))"));
    CHECK(conj.mandatory.size() == 2);
    CHECK(conj.optionals.empty());

    OptNormalForm ladder = to_opt_normal_form(parse_pattern("(((?X p a) OPT (?X p b)) OPT (?X p c))"));
    CHECK(ladder.mandatory.size() == 1);
    REQUIRE(ladder.optionals.size() == 2);
    CHECK(ladder.optionals[0].mandatory[0].to_text() == "(?X p b)");
    CHECK(ladder.optionals[1].mandatory[0].to_text() == "(?X p c)");
}

TEST_CASE("OPT normal form rejects bad inputs") {
    CHECK_THROWS_AS(to_opt_normal_form(parse_pattern(example::kP4)), UnsupportedError);
    CHECK_THROWS_AS(to_opt_normal_form(parse_pattern(example::kP5)), UnsupportedError);
    try {
        to_opt_normal_form(parse_pattern(example::kNestedOpt));
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("?X") != std::string::npos);
    }
}

TEST_CASE("rewrite steps decrease the measure and preserve semantics") {
    testgen::Rng rng(testgen::env_seed(503));
    for (int i = 0; i < 150; ++i) {
        Dataset d = testgen::random_dataset(rng);
        PatternPtr p = testgen::random_well_designed_pattern(rng, 2, false);
        REQUIRE(is_well_designed(p).is_well_designed());
        for (RewriteStrategy strategy :
             {RewriteStrategy::LeftmostInnermost, RewriteStrategy::LeftmostOutermost}) {
            std::vector<PatternPtr> steps = opt_rewrite_trajectory(p, strategy);
            for (std::size_t s = 1; s < steps.size(); ++s) {
                CHECK(opt_in_and_measure(steps[s]) < opt_in_and_measure(steps[s - 1]));
                CHECK(is_well_designed(steps[s]).is_well_designed());
            }
            CHECK(eval_compositional(d, steps.back()) == eval_compositional(d, p));
        }
    }
}

TEST_CASE("the two strategies agree modulo AC and OPT order") {
    testgen::Rng rng(testgen::env_seed(504));
    for (int i = 0; i < 150; ++i) {
        PatternPtr p = testgen::random_well_designed_pattern(rng, 2, false);
        OptNormalForm inner = to_opt_normal_form(p, RewriteStrategy::LeftmostInnermost);
        OptNormalForm outer = to_opt_normal_form(p, RewriteStrategy::LeftmostOutermost);
        CHECK(canonical_key(inner) == canonical_key(outer));
    }
}

TEST_CASE("critical pair: two OPT leaves in one AND block") {
    PatternPtr p = parse_pattern("(((?X p a) OPT (?X p b)) AND ((?X q a) OPT (?X q b)))");
    REQUIRE(is_well_designed(p).is_well_designed());
    OptNormalForm inner = to_opt_normal_form(p, RewriteStrategy::LeftmostInnermost);
    OptNormalForm outer = to_opt_normal_form(p, RewriteStrategy::LeftmostOutermost);
    CHECK(canonical_key(inner) == canonical_key(outer));
    Dataset d = parse_dataset("x p a\nx p b\nx q a\nx q b");
    CHECK(equivalent_on(flatten(inner), p, d));
}

TEST_CASE("normal form output stays well designed and preserves semantics") {
    testgen::Rng rng(testgen::env_seed(505));
    for (int i = 0; i < 150; ++i) {
        Dataset d = testgen::random_dataset(rng);
        PatternPtr p = testgen::random_well_designed_pattern(rng, 2, false);
        OptNormalForm nf = to_opt_normal_form(p);
        CHECK(well_formed(nf));
        PatternPtr flat = flatten(nf);
        CHECK(is_well_designed(flat).is_well_designed());
        CHECK(equivalent_on(flat, p, d));
    }
}

TEST_CASE("Prop-2 style equivalences inside well-designed patterns") {
    testgen::Rng rng(testgen::env_seed(506));
    int and_opt_cases = 0, opt_opt_cases = 0;
    for (int i = 0; i < 400 && (and_opt_cases < 60 || opt_opt_cases < 60); ++i) {
        PatternPtr p = testgen::random_well_designed_pattern(rng, 2, false);
        if (!is_well_designed(p).is_well_designed()) continue;
        Dataset d = testgen::random_dataset(rng);

        // (P1 AND (P2 OPT P3)) ≡ ((P1 AND P2) OPT P3)
        for (const auto& path : testgen::node_paths(p, [](const GraphPattern& n) {
                 return n.kind() == PatternKind::And && n.right()->kind() == PatternKind::Opt;
             })) {
            PatternPtr rewritten = testgen::apply_at(p, path, [](const PatternPtr& n) {
                return GraphPattern::opt(GraphPattern::conj(n->left(), n->right()->left()),
                                         n->right()->right());
            });
            CHECK(is_well_designed(rewritten).is_well_designed());
            CHECK(equivalent_on(p, rewritten, d));
            ++and_opt_cases;
        }
        // ((P1 OPT P2) OPT P3) ≡ ((P1 OPT P3) OPT P2)
        for (const auto& path : testgen::node_paths(p, [](const GraphPattern& n) {
                 return n.kind() == PatternKind::Opt && n.left()->kind() == PatternKind::Opt;
             })) {
            PatternPtr rewritten = testgen::apply_at(p, path, [](const PatternPtr& n) {
                return GraphPattern::opt(GraphPattern::opt(n->left()->left(), n->right()),
                                         n->left()->right());
            });
            CHECK(is_well_designed(rewritten).is_well_designed());
            CHECK(equivalent_on(p, rewritten, d));
            ++opt_opt_cases;
        }
    }
    CHECK(and_opt_cases >= 60);
    CHECK(opt_opt_cases >= 60);
}

TEST_CASE("filter rewrites: merge, pushout, guards") {
    PatternPtr merged = apply_filter_rewrites(
        parse_pattern("(((?X p ?Y) FILTER bound(?X)) FILTER ?Y = a)"));
    CHECK(to_text(merged) == "((?X p ?Y) FILTER (bound(?X) && ?Y = a))");

    PatternPtr pushed =
        apply_filter_rewrites(parse_pattern("(((?X p ?Y) FILTER ?X = a) AND (?Y q ?Z))"));
    CHECK(to_text(pushed) == "(((?X p ?Y) AND (?Y q ?Z)) FILTER ?X = a)");

    // An OPT operand blocks the pull-out.
    PatternPtr guarded = parse_pattern("(((?X p ?Y) FILTER ?X = a) AND ((?Y q ?Z) OPT (?Z q b)))");
    CHECK(equal(apply_filter_rewrites(guarded), guarded));

    // Right-hand side filters are pulled too.
    PatternPtr right = apply_filter_rewrites(
        parse_pattern("((?Y q ?Z) AND ((?X p ?Y) FILTER ?X = a))"));
    CHECK(to_text(right) == "(((?Y q ?Z) AND (?X p ?Y)) FILTER ?X = a)");
}

TEST_CASE("filter or-split stays off unless requested") {
    PatternPtr p = parse_pattern("((?X p ?Y) FILTER (?X = a || ?Y = b))");
    CHECK(equal(apply_filter_rewrites(p), p));
    FilterRewriteOptions options;
    options.split_or = true;
    PatternPtr split = apply_filter_rewrites(p, options);
    CHECK(to_text(split) == "(((?X p ?Y) FILTER ?X = a) UNION ((?X p ?Y) FILTER ?Y = b))");
}

TEST_CASE("filter rewrites preserve evaluation") {
    testgen::Rng rng(testgen::env_seed(507));
    for (int i = 0; i < 300; ++i) {
        Dataset d = testgen::random_dataset(rng);
        PatternPtr p = testgen::random_pattern(rng, {.max_depth = 4});
        CHECK(equivalent_on(apply_filter_rewrites(p), p, d));
        FilterRewriteOptions options;
        options.split_or = true;
        CHECK(equivalent_on(apply_filter_rewrites(p, options), p, d));
    }
}

TEST_CASE("equivalent_on") {
    Dataset d = example_dataset();
    PatternPtr p4 = parse_pattern(example::kP4);
    std::vector<PatternPtr> branches = to_union_normal_form(p4);
    PatternPtr rebuilt = branches[0];
    for (std::size_t i = 1; i < branches.size(); ++i)
        rebuilt = GraphPattern::disj(rebuilt, branches[i]);
    CHECK(equivalent_on(p4, rebuilt, d));
    CHECK_FALSE(equivalent_on(parse_pattern(example::kP2), parse_pattern(example::kP3), d));
    CHECK(equivalent_on(p4, p4, d));
}
