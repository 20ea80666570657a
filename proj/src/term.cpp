#include "sparqlalgebra/term.hpp"

#include <sstream>

namespace sparqlalg {

Term::Term(TermKind kind, std::string text) : kind_(kind), text_(std::move(text)) {
    if (text_.empty()) throw Error("term text must be non-empty");
    if (kind_ == TermKind::Literal && text_.find('"') != std::string::npos)
        throw Error("literal text must not contain '\"'");
}

std::string Term::to_text() const {
    if (kind_ == TermKind::Literal) return "\"" + text_ + "\"";
    return text_;
}

Triple::Triple(Term subject, Term predicate, Term object)
    : subject_(std::move(subject)), predicate_(std::move(predicate)), object_(std::move(object)) {
    if (subject_.kind() != TermKind::Iri)
        throw Error("triple subject must be an IRI, got literal " + subject_.to_text());
    if (predicate_.kind() != TermKind::Iri)
        throw Error("triple predicate must be an IRI, got literal " + predicate_.to_text());
}

std::string Triple::to_text() const {
    return subject_.to_text() + " " + predicate_.to_text() + " " + object_.to_text();
}

std::string Dataset::to_text() const {
    std::string out;
    for (const Triple& t : triples_) {
        out += t.to_text();
        out += '\n';
    }
    return out;
}

bool is_token_char(char c) {
    if (c >= 'A' && c <= 'Z') return true;
    if (c >= 'a' && c <= 'z') return true;
    if (c >= '0' && c <= '9') return true;
    return c == '_' || c == '.' || c == ':' || c == '/' || c == '@' || c == '#' || c == '-';
}

namespace {

// Splits one dataset line into exactly three fields. A field is a bare
// token or a quoted literal; anything else is a syntax error.
Term parse_field(const std::string& line, std::size_t& i, std::size_t line_no) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size())
        throw ParseError("line " + std::to_string(line_no) + ": expected three fields", line_no);
    if (line[i] == '"') {
        std::size_t end = line.find('"', i + 1);
        if (end == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": unterminated literal", line_no);
        std::string text = line.substr(i + 1, end - i - 1);
        if (text.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty literal", line_no);
        i = end + 1;
        return literal(text);
    }
    std::size_t start = i;
    while (i < line.size() && is_token_char(line[i])) ++i;
    if (i == start)
        throw ParseError("line " + std::to_string(line_no) + ": unexpected character '" +
                             std::string(1, line[i]) + "'",
                         line_no);
    return iri(line.substr(start, i - start));
}

}  // namespace

Dataset parse_dataset(const std::string& text) {
    std::set<Triple> triples;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size() || line[i] == '#') continue;
        Term s = parse_field(line, i, line_no);
        Term p = parse_field(line, i, line_no);
        Term o = parse_field(line, i, line_no);
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i < line.size())
            throw ParseError("line " + std::to_string(line_no) + ": trailing content after triple",
                             line_no);
        if (s.kind() != TermKind::Iri)
            throw ParseError("line " + std::to_string(line_no) + ": literal in subject position",
                             line_no);
        if (p.kind() != TermKind::Iri)
            throw ParseError("line " + std::to_string(line_no) + ": literal in predicate position",
                             line_no);
        triples.insert(Triple(std::move(s), std::move(p), std::move(o)));
    }
    return Dataset(std::move(triples));
}

bool dataset_contains(const Dataset& d, const Triple& t) { return d.contains(t); }

}  // namespace sparqlalg
