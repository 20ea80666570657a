#ifndef SPARQLALGEBRA_TERM_HPP
#define SPARQLALGEBRA_TERM_HPP

#include <compare>
#include <set>
#include <stdexcept>
#include <string>

namespace sparqlalg {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Malformed input text. `position` is a 1-based line number for dataset
/// text and a 0-based character offset for pattern text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message), position(position) {}
    std::size_t position;
};

/// A FILTER condition mentions a variable outside its operand pattern.
class ScopeError : public Error {
public:
    using Error::Error;
};

/// The requested operation is not defined for this pattern shape.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A stated precondition does not hold (domain mismatch, size cap, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

enum class TermKind { Iri, Literal };

/// A ground RDF term: an IRI or a literal. Equality is kind + text.
class Term {
public:
    Term(TermKind kind, std::string text);

    TermKind kind() const { return kind_; }
    const std::string& text() const { return text_; }

    /// Rendered form: bare token for IRIs, double quotes around literals.
    std::string to_text() const;

    friend bool operator==(const Term&, const Term&) = default;
    // Ordered by text first so serialized output sorts the way it reads.
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
        if (auto c = a.text_ <=> b.text_; c != 0) return c;
        return a.kind_ <=> b.kind_;
    }

private:
    TermKind kind_;
    std::string text_;
};

inline Term iri(std::string text) { return Term(TermKind::Iri, std::move(text)); }
inline Term literal(std::string text) { return Term(TermKind::Literal, std::move(text)); }

/// A ground triple. Subjects and predicates are IRIs; literals may only
/// appear in object position.
class Triple {
public:
    Triple(Term subject, Term predicate, Term object);

    const Term& subject() const { return subject_; }
    const Term& predicate() const { return predicate_; }
    const Term& object() const { return object_; }

    std::string to_text() const;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;

private:
    Term subject_;
    Term predicate_;
    Term object_;
};

/// An immutable set of ground triples.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::set<Triple> triples) : triples_(std::move(triples)) {}

    bool contains(const Triple& t) const { return triples_.count(t) != 0; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    const std::set<Triple>& triples() const { return triples_; }

    void insert(Triple t) { triples_.insert(std::move(t)); }

    /// One triple per line, in sorted order.
    std::string to_text() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::set<Triple> triples_;
};

/// Parses dataset text: one triple per line, three whitespace-separated
/// fields, '#' comment lines and blank lines ignored. Duplicate lines
/// collapse. Throws ParseError with the offending line number.
Dataset parse_dataset(const std::string& text);

/// True iff `c` may appear in a bare (IRI) token.
bool is_token_char(char c);

/// True iff t ∈ D.
bool dataset_contains(const Dataset& d, const Triple& t);

}  // namespace sparqlalg

#endif
