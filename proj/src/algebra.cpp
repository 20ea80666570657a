#include "sparqlalgebra/algebra.hpp"

#include <cassert>
#include <cctype>

namespace sparqlalg {

Variable::Variable(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw Error("variable name must be non-empty");
    for (char c : name_)
        if (!is_token_char(c)) throw Error("invalid character in variable name: " + name_);
}

bool is_variable(const TermOrVar& tv) { return std::holds_alternative<Variable>(tv); }

std::string to_text(const TermOrVar& tv) {
    if (const auto* v = std::get_if<Variable>(&tv)) return v->to_text();
    return std::get<Term>(tv).to_text();
}

namespace {

bool slot_allows_iri_or_var(const TermOrVar& tv) {
    const auto* t = std::get_if<Term>(&tv);
    return t == nullptr || t->kind() == TermKind::Iri;
}

}  // namespace

TriplePattern::TriplePattern(TermOrVar subject, TermOrVar predicate, TermOrVar object)
    : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
    if (!slot_allows_iri_or_var(subject_))
        throw Error("triple pattern subject must be a variable or IRI");
    if (!slot_allows_iri_or_var(predicate_))
        throw Error("triple pattern predicate must be a variable or IRI");
}

VariableSet TriplePattern::variables() const {
    VariableSet vars;
    for (const TermOrVar* tv : {&subject_, &predicate_, &object_})
        if (const auto* v = std::get_if<Variable>(tv)) vars.insert(*v);
    return vars;
}

bool TriplePattern::is_ground() const { return variables().empty(); }

std::string TriplePattern::to_text() const {
    return "(" + sparqlalg::to_text(subject_) + " " + sparqlalg::to_text(predicate_) + " " +
           sparqlalg::to_text(object_) + ")";
}

ConditionPtr Condition::bound(Variable v) {
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::Bound;
    c->var_ = std::move(v);
    return c;
}

ConditionPtr Condition::eq_const(Variable v, Term constant) {
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::EqConst;
    c->var_ = std::move(v);
    c->constant_ = std::move(constant);
    return c;
}

ConditionPtr Condition::eq_var(Variable v1, Variable v2) {
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::EqVar;
    c->var_ = std::move(v1);
    c->other_var_ = std::move(v2);
    return c;
}

ConditionPtr Condition::negation(ConditionPtr inner) {
    assert(inner);
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::Not;
    c->left_ = std::move(inner);
    return c;
}

ConditionPtr Condition::disjunction(ConditionPtr a, ConditionPtr b) {
    assert(a && b);
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::Or;
    c->left_ = std::move(a);
    c->right_ = std::move(b);
    return c;
}

ConditionPtr Condition::conjunction(ConditionPtr a, ConditionPtr b) {
    assert(a && b);
    auto c = std::shared_ptr<Condition>(new Condition());
    c->kind_ = ConditionKind::And;
    c->left_ = std::move(a);
    c->right_ = std::move(b);
    return c;
}

bool equal(const Condition& a, const Condition& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ConditionKind::Bound: return a.var() == b.var();
        case ConditionKind::EqConst: return a.var() == b.var() && a.constant() == b.constant();
        case ConditionKind::EqVar: return a.var() == b.var() && a.other_var() == b.other_var();
        case ConditionKind::Not: return equal(*a.left(), *b.left());
        case ConditionKind::Or:
        case ConditionKind::And:
            return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
    }
    return false;
}

std::string to_text(const Condition& c) {
    switch (c.kind()) {
        case ConditionKind::Bound: return "bound(" + c.var().to_text() + ")";
        case ConditionKind::EqConst: return c.var().to_text() + " = " + c.constant().to_text();
        case ConditionKind::EqVar: return c.var().to_text() + " = " + c.other_var().to_text();
        case ConditionKind::Not: return "(! " + to_text(*c.left()) + ")";
        case ConditionKind::Or: return "(" + to_text(*c.left()) + " || " + to_text(*c.right()) + ")";
        case ConditionKind::And:
            return "(" + to_text(*c.left()) + " && " + to_text(*c.right()) + ")";
    }
    return {};
}

PatternPtr GraphPattern::triple(TriplePattern t) {
    auto p = std::shared_ptr<GraphPattern>(new GraphPattern());
    p->kind_ = PatternKind::Triple;
    p->triple_ = std::move(t);
    return p;
}

PatternPtr GraphPattern::conj(PatternPtr l, PatternPtr r) {
    assert(l && r);
    auto p = std::shared_ptr<GraphPattern>(new GraphPattern());
    p->kind_ = PatternKind::And;
    p->left_ = std::move(l);
    p->right_ = std::move(r);
    return p;
}

PatternPtr GraphPattern::opt(PatternPtr l, PatternPtr r) {
    assert(l && r);
    auto p = std::shared_ptr<GraphPattern>(new GraphPattern());
    p->kind_ = PatternKind::Opt;
    p->left_ = std::move(l);
    p->right_ = std::move(r);
    return p;
}

PatternPtr GraphPattern::disj(PatternPtr l, PatternPtr r) {
    assert(l && r);
    auto p = std::shared_ptr<GraphPattern>(new GraphPattern());
    p->kind_ = PatternKind::Union;
    p->left_ = std::move(l);
    p->right_ = std::move(r);
    return p;
}

PatternPtr GraphPattern::filter(PatternPtr operand, ConditionPtr cond) {
    assert(operand && cond);
    auto p = std::shared_ptr<GraphPattern>(new GraphPattern());
    p->kind_ = PatternKind::Filter;
    p->left_ = std::move(operand);
    p->condition_ = std::move(cond);
    return p;
}

bool equal(const GraphPattern& a, const GraphPattern& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case PatternKind::Triple: return a.triple() == b.triple();
        case PatternKind::Filter:
            return equal(*a.left(), *b.left()) && equal(*a.condition(), *b.condition());
        default: return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
    }
}

std::string to_text(const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return p.triple().to_text();
        case PatternKind::And: return "(" + to_text(*p.left()) + " AND " + to_text(*p.right()) + ")";
        case PatternKind::Opt: return "(" + to_text(*p.left()) + " OPT " + to_text(*p.right()) + ")";
        case PatternKind::Union:
            return "(" + to_text(*p.left()) + " UNION " + to_text(*p.right()) + ")";
        case PatternKind::Filter:
            return "(" + to_text(*p.left()) + " FILTER " + to_text(*p.condition()) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Lexing and recursive-descent parsing
// ---------------------------------------------------------------------------

namespace {

enum class TokenKind { LParen, RParen, Bang, Eq, OrOr, AndAnd, Var, Bare, Literal, End };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& input) : input_(input) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_])))
            ++pos_;
        current_.pos = pos_;
        if (pos_ >= input_.size()) {
            current_.kind = TokenKind::End;
            current_.text.clear();
            return;
        }
        char c = input_[pos_];
        switch (c) {
            case '(': current_ = {TokenKind::LParen, "(", pos_++}; return;
            case ')': current_ = {TokenKind::RParen, ")", pos_++}; return;
            case '!': current_ = {TokenKind::Bang, "!", pos_++}; return;
            case '=': current_ = {TokenKind::Eq, "=", pos_++}; return;
            case '|':
                if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '|') {
                    current_ = {TokenKind::OrOr, "||", pos_};
                    pos_ += 2;
                    return;
                }
                throw ParseError("offset " + std::to_string(pos_) + ": expected '||'", pos_);
            case '&':
                if (pos_ + 1 < input_.size() && input_[pos_ + 1] == '&') {
                    current_ = {TokenKind::AndAnd, "&&", pos_};
                    pos_ += 2;
                    return;
                }
                throw ParseError("offset " + std::to_string(pos_) + ": expected '&&'", pos_);
            case '"': {
                std::size_t start = pos_;
                std::size_t end = input_.find('"', pos_ + 1);
                if (end == std::string::npos)
                    throw ParseError("offset " + std::to_string(start) + ": unterminated literal",
                                     start);
                current_ = {TokenKind::Literal, input_.substr(pos_ + 1, end - pos_ - 1), start};
                pos_ = end + 1;
                return;
            }
            case '?': {
                std::size_t start = pos_++;
                std::size_t name_start = pos_;
                while (pos_ < input_.size() && is_token_char(input_[pos_])) ++pos_;
                if (pos_ == name_start)
                    throw ParseError("offset " + std::to_string(start) + ": expected variable name",
                                     start);
                current_ = {TokenKind::Var, input_.substr(name_start, pos_ - name_start), start};
                return;
            }
            default: {
                if (!is_token_char(c))
                    throw ParseError("offset " + std::to_string(pos_) + ": unexpected character '" +
                                         std::string(1, c) + "'",
                                     pos_);
                std::size_t start = pos_;
                while (pos_ < input_.size() && is_token_char(input_[pos_])) ++pos_;
                current_ = {TokenKind::Bare, input_.substr(start, pos_ - start), start};
                return;
            }
        }
    }

    const std::string& input_;
    std::size_t pos_ = 0;
    Token current_{TokenKind::End, "", 0};
};

[[noreturn]] void fail(const Token& at, const std::string& what) {
    throw ParseError("offset " + std::to_string(at.pos) + ": " + what, at.pos);
}

class PatternParser {
public:
    explicit PatternParser(const std::string& input) : lexer_(input) {}

    PatternPtr parse_full_pattern() {
        PatternPtr p = parse_pattern();
        if (lexer_.peek().kind != TokenKind::End)
            fail(lexer_.peek(), "trailing content after pattern");
        return p;
    }

    ConditionPtr parse_full_condition() {
        ConditionPtr c = parse_condition();
        if (lexer_.peek().kind != TokenKind::End)
            fail(lexer_.peek(), "trailing content after condition");
        return c;
    }

private:
    void expect(TokenKind kind, const char* what) {
        if (lexer_.peek().kind != kind) fail(lexer_.peek(), std::string("expected ") + what);
        lexer_.take();
    }

    TermOrVar parse_term_or_var() {
        Token t = lexer_.take();
        switch (t.kind) {
            case TokenKind::Var: return Variable(t.text);
            case TokenKind::Bare: return iri(t.text);
            case TokenKind::Literal:
                if (t.text.empty()) fail(t, "empty literal");
                return literal(t.text);
            default: fail(t, "expected term or variable");
        }
    }

    PatternPtr parse_pattern() {
        Token open = lexer_.peek();
        expect(TokenKind::LParen, "'('");
        if (lexer_.peek().kind == TokenKind::LParen) {
            // Compound form: "(" pattern OP ... ")".
            PatternPtr left = parse_pattern();
            Token op = lexer_.take();
            if (op.kind != TokenKind::Bare) fail(op, "expected operator AND, OPT, UNION or FILTER");
            if (op.text == "FILTER") {
                ConditionPtr cond = parse_condition();
                expect(TokenKind::RParen, "')'");
                return GraphPattern::filter(std::move(left), std::move(cond));
            }
            PatternPtr right = parse_pattern();
            expect(TokenKind::RParen, "')'");
            if (op.text == "AND") return GraphPattern::conj(std::move(left), std::move(right));
            if (op.text == "OPT") return GraphPattern::opt(std::move(left), std::move(right));
            if (op.text == "UNION") return GraphPattern::disj(std::move(left), std::move(right));
            fail(op, "unknown operator '" + op.text + "'");
        }
        // Triple form: "(" termv termv termv ")".
        TermOrVar s = parse_term_or_var();
        TermOrVar p = parse_term_or_var();
        TermOrVar o = parse_term_or_var();
        expect(TokenKind::RParen, "')'");
        if (!slot_allows_iri_or_var(s)) fail(open, "literal in triple pattern subject position");
        if (!slot_allows_iri_or_var(p)) fail(open, "literal in triple pattern predicate position");
        return GraphPattern::triple(TriplePattern(std::move(s), std::move(p), std::move(o)));
    }

    ConditionPtr parse_condition() {
        const Token& t = lexer_.peek();
        if (t.kind == TokenKind::Bare && t.text == "bound") {
            lexer_.take();
            expect(TokenKind::LParen, "'('");
            Token v = lexer_.take();
            if (v.kind != TokenKind::Var) fail(v, "expected variable in bound(...)");
            expect(TokenKind::RParen, "')'");
            return Condition::bound(Variable(v.text));
        }
        if (t.kind == TokenKind::Var) {
            Token v = lexer_.take();
            expect(TokenKind::Eq, "'='");
            Token rhs = lexer_.take();
            switch (rhs.kind) {
                case TokenKind::Var:
                    return Condition::eq_var(Variable(v.text), Variable(rhs.text));
                case TokenKind::Bare: return Condition::eq_const(Variable(v.text), iri(rhs.text));
                case TokenKind::Literal:
                    if (rhs.text.empty()) fail(rhs, "empty literal");
                    return Condition::eq_const(Variable(v.text), literal(rhs.text));
                default: fail(rhs, "expected term or variable after '='");
            }
        }
        if (t.kind == TokenKind::LParen) {
            lexer_.take();
            if (lexer_.peek().kind == TokenKind::Bang) {
                lexer_.take();
                ConditionPtr inner = parse_condition();
                expect(TokenKind::RParen, "')'");
                return Condition::negation(std::move(inner));
            }
            ConditionPtr left = parse_condition();
            Token op = lexer_.take();
            ConditionPtr right;
            switch (op.kind) {
                case TokenKind::RParen:  // redundant parentheses
                    return left;
                case TokenKind::OrOr:
                    right = parse_condition();
                    expect(TokenKind::RParen, "')'");
                    return Condition::disjunction(std::move(left), std::move(right));
                case TokenKind::AndAnd:
                    right = parse_condition();
                    expect(TokenKind::RParen, "')'");
                    return Condition::conjunction(std::move(left), std::move(right));
                default: fail(op, "expected '||' or '&&'");
            }
        }
        fail(t, "expected condition");
    }

    Lexer lexer_;
};

}  // namespace

PatternPtr parse_pattern(const std::string& text) {
    return PatternParser(text).parse_full_pattern();
}

ConditionPtr parse_condition(const std::string& text) {
    return PatternParser(text).parse_full_condition();
}

// ---------------------------------------------------------------------------
// Variable analysis
// ---------------------------------------------------------------------------

VariableSet vars_of_condition(const Condition& c) {
    VariableSet vars;
    switch (c.kind()) {
        case ConditionKind::Bound: vars.insert(c.var()); break;
        case ConditionKind::EqConst: vars.insert(c.var()); break;
        case ConditionKind::EqVar:
            vars.insert(c.var());
            vars.insert(c.other_var());
            break;
        case ConditionKind::Not: return vars_of_condition(*c.left());
        case ConditionKind::Or:
        case ConditionKind::And: {
            vars = vars_of_condition(*c.left());
            VariableSet rhs = vars_of_condition(*c.right());
            vars.insert(rhs.begin(), rhs.end());
            break;
        }
    }
    return vars;
}

namespace {

void collect_vars(const GraphPattern& p, VariableSet& out) {
    switch (p.kind()) {
        case PatternKind::Triple: {
            VariableSet vs = p.triple().variables();
            out.insert(vs.begin(), vs.end());
            break;
        }
        case PatternKind::Filter: {
            collect_vars(*p.left(), out);
            VariableSet vs = vars_of_condition(*p.condition());
            out.insert(vs.begin(), vs.end());
            break;
        }
        default:
            collect_vars(*p.left(), out);
            collect_vars(*p.right(), out);
            break;
    }
}

void collect_scope_violations(const GraphPattern& p, const std::string& path,
                              std::vector<ScopeViolation>& out) {
    switch (p.kind()) {
        case PatternKind::Triple: return;
        case PatternKind::Filter: {
            VariableSet cond_vars = vars_of_condition(*p.condition());
            VariableSet operand_vars = vars_of_pattern(*p.left());
            VariableSet missing;
            for (const Variable& v : cond_vars)
                if (!operand_vars.count(v)) missing.insert(v);
            if (!missing.empty())
                out.push_back({path, to_text(*p.condition()), std::move(missing)});
            collect_scope_violations(*p.left(), path == "/" ? "/L" : path + "/L", out);
            return;
        }
        default:
            collect_scope_violations(*p.left(), path == "/" ? "/L" : path + "/L", out);
            collect_scope_violations(*p.right(), path == "/" ? "/R" : path + "/R", out);
            return;
    }
}

}  // namespace

VariableSet vars_of_pattern(const GraphPattern& p) {
    VariableSet out;
    collect_vars(p, out);
    return out;
}

ScopeReport validate_filter_scope(const GraphPattern& p) {
    ScopeReport report;
    collect_scope_violations(p, "/", report.violations);
    return report;
}

bool is_union_free(const GraphPattern& p) {
    switch (p.kind()) {
        case PatternKind::Triple: return true;
        case PatternKind::Union: return false;
        case PatternKind::Filter: return is_union_free(*p.left());
        default: return is_union_free(*p.left()) && is_union_free(*p.right());
    }
}

std::size_t count_nodes(const GraphPattern& p, PatternKind kind) {
    std::size_t n = p.kind() == kind ? 1 : 0;
    switch (p.kind()) {
        case PatternKind::Triple: return n;
        case PatternKind::Filter: return n + count_nodes(*p.left(), kind);
        default: return n + count_nodes(*p.left(), kind) + count_nodes(*p.right(), kind);
    }
}

}  // namespace sparqlalg
