#include "sparql_algebra.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "sparqlalgebra/algebra.hpp"
#include "sparqlalgebra/eval.hpp"
#include "sparqlalgebra/mapping.hpp"
#include "sparqlalgebra/reductions.hpp"
#include "sparqlalgebra/rewriter.hpp"
#include "sparqlalgebra/term.hpp"

using namespace sparqlalg;

struct sa_dataset {
    Dataset impl;
};
struct sa_pattern {
    PatternPtr impl;
};
struct sa_solution {
    MappingSet impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
sa_status guarded(F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        set_error(e.what());
        return SA_ERROR_PARSE;
    } catch (const ScopeError& e) {
        set_error(e.what());
        return SA_ERROR_PARSE;
    } catch (const UnsupportedError& e) {
        set_error(e.what());
        return SA_ERROR_UNSUPPORTED;
    } catch (const PreconditionError& e) {
        set_error(e.what());
        return SA_ERROR_PRECONDITION;
    } catch (const UnboundVariableError& e) {
        set_error(e.what());
        return SA_ERROR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return SA_ERROR_INTERNAL;
    }
}

sa_status require(bool ok, const char* what) {
    if (ok) return SA_OK;
    set_error(std::string("invalid argument: ") + what);
    return SA_ERROR_INVALID_ARGUMENT;
}

std::string mapping_to_json(const Mapping& m) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [v, t] : m.bindings()) obj[v.to_text()] = t.to_text();
    return obj.dump();
}

}  // namespace

extern "C" {

const char* sa_last_error(void) { return g_last_error.c_str(); }

void sa_string_free(char* s) { std::free(s); }

sa_status sa_dataset_parse(const char* text, sa_dataset** out) {
    if (auto s = require(text && out, "sa_dataset_parse")) return s;
    return guarded([&] {
        *out = new sa_dataset{parse_dataset(text)};
        return SA_OK;
    });
}

void sa_dataset_free(sa_dataset* d) { delete d; }

size_t sa_dataset_size(const sa_dataset* d) { return d ? d->impl.size() : 0; }

sa_status sa_dataset_to_text(const sa_dataset* d, char** out) {
    if (auto s = require(d && out, "sa_dataset_to_text")) return s;
    *out = dup_string(d->impl.to_text());
    return SA_OK;
}

sa_status sa_pattern_parse(const char* text, sa_pattern** out) {
    if (auto s = require(text && out, "sa_pattern_parse")) return s;
    return guarded([&] {
        *out = new sa_pattern{parse_pattern(text)};
        return SA_OK;
    });
}

void sa_pattern_free(sa_pattern* p) { delete p; }

sa_status sa_pattern_to_text(const sa_pattern* p, char** out) {
    if (auto s = require(p && out, "sa_pattern_to_text")) return s;
    *out = dup_string(to_text(p->impl));
    return SA_OK;
}

sa_status sa_pattern_check_filter_scope(const sa_pattern* p, int* ok, char** report) {
    if (auto s = require(p && ok, "sa_pattern_check_filter_scope")) return s;
    return guarded([&] {
        ScopeReport r = validate_filter_scope(p->impl);
        *ok = r.ok() ? 1 : 0;
        if (report) *report = dup_string(to_text(r));
        return SA_OK;
    });
}

sa_status sa_pattern_check_well_designed(const sa_pattern* p, int* ok, char** report) {
    if (auto s = require(p && ok, "sa_pattern_check_well_designed")) return s;
    return guarded([&] {
        WellDesignedReport r = is_well_designed(p->impl);
        *ok = r.is_well_designed() ? 1 : 0;
        if (report) *report = dup_string(to_text(r));
        return SA_OK;
    });
}

int sa_pattern_is_union_free(const sa_pattern* p) {
    return p && is_union_free(p->impl) ? 1 : 0;
}

sa_status sa_eval(const sa_dataset* d, const sa_pattern* p, sa_semantics semantics,
                  int allow_union_in_depth_first, sa_solution** out) {
    if (auto s = require(d && p && out, "sa_eval")) return s;
    return guarded([&] {
        ScopeReport scope = validate_filter_scope(p->impl);
        if (!scope.ok()) throw ScopeError(to_text(scope));
        MappingSet result;
        if (semantics == SA_SEMANTICS_COMPOSITIONAL) {
            result = eval_compositional(d->impl, p->impl);
        } else {
            DepthFirstOptions options;
            options.allow_union = allow_union_in_depth_first != 0;
            result = eval_depth_first(d->impl, p->impl, options);
        }
        *out = new sa_solution{std::move(result)};
        return SA_OK;
    });
}

void sa_solution_free(sa_solution* s) { delete s; }

size_t sa_solution_size(const sa_solution* s) { return s ? s->impl.size() : 0; }

int sa_solution_equal(const sa_solution* a, const sa_solution* b) {
    if (!a || !b) return 0;
    return a->impl == b->impl ? 1 : 0;
}

sa_status sa_solution_subtract(const sa_solution* a, const sa_solution* b, sa_solution** out) {
    if (auto s = require(a && b && out, "sa_solution_subtract")) return s;
    MappingSet result;
    for (const Mapping& m : a->impl)
        if (!b->impl.count(m)) result.insert(m);
    *out = new sa_solution{std::move(result)};
    return SA_OK;
}

sa_status sa_solution_format(const sa_solution* s, sa_format format, char** out) {
    if (auto st = require(s && out, "sa_solution_format")) return st;
    return guarded([&] {
        *out = dup_string(format == SA_FORMAT_STRUCTURED ? to_structured(s->impl)
                                                         : to_table(s->impl));
        return SA_OK;
    });
}

sa_status sa_normalize_union(const sa_pattern* p, char** branches) {
    if (auto s = require(p && branches, "sa_normalize_union")) return s;
    return guarded([&] {
        ScopeReport scope = validate_filter_scope(p->impl);
        if (!scope.ok()) throw ScopeError(to_text(scope));
        std::string out;
        for (const PatternPtr& branch : to_union_normal_form(p->impl)) {
            out += to_text(branch);
            out += '\n';
        }
        *branches = dup_string(out);
        return SA_OK;
    });
}

sa_status sa_normalize_opt(const sa_pattern* p, char** out) {
    if (auto s = require(p && out, "sa_normalize_opt")) return s;
    return guarded([&] {
        OptNormalForm nf = to_opt_normal_form(p->impl);
        *out = dup_string(to_text(flatten(nf)));
        return SA_OK;
    });
}

sa_status sa_normalize_filter(const sa_pattern* p, int split_or, char** out) {
    if (auto s = require(p && out, "sa_normalize_filter")) return s;
    return guarded([&] {
        ScopeReport scope = validate_filter_scope(p->impl);
        if (!scope.ok()) throw ScopeError(to_text(scope));
        FilterRewriteOptions options;
        options.split_or = split_or != 0;
        *out = dup_string(to_text(apply_filter_rewrites(p->impl, options)));
        return SA_OK;
    });
}

sa_status sa_reduce_sat(const char* dimacs, char** dataset_text, char** pattern_text,
                        char** mapping_json) {
    if (auto s = require(dimacs && dataset_text && pattern_text && mapping_json, "sa_reduce_sat"))
        return s;
    return guarded([&] {
        ReductionInstance instance = reduce_sat_cnf(parse_dimacs_cnf(dimacs));
        *dataset_text = dup_string(instance.dataset.to_text());
        *pattern_text = dup_string(to_text(instance.pattern) + "\n");
        *mapping_json = dup_string(mapping_to_json(instance.target) + "\n");
        return SA_OK;
    });
}

sa_status sa_reduce_qbf(const char* dimacs, char** dataset_text, char** pattern_text,
                        char** mapping_json) {
    if (auto s = require(dimacs && dataset_text && pattern_text && mapping_json, "sa_reduce_qbf"))
        return s;
    return guarded([&] {
        ReductionInstance instance = reduce_qbf(parse_dimacs_qbf(dimacs));
        *dataset_text = dup_string(instance.dataset.to_text());
        *pattern_text = dup_string(to_text(instance.pattern) + "\n");
        *mapping_json = dup_string(mapping_to_json(instance.target) + "\n");
        return SA_OK;
    });
}

}  // extern "C"
