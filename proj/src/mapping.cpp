#include "sparqlalgebra/mapping.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace sparqlalg {

const Term* Mapping::lookup(const Variable& v) const {
    auto it = bindings_.find(v);
    return it == bindings_.end() ? nullptr : &it->second;
}

const Term& Mapping::at(const Variable& v) const {
    const Term* t = lookup(v);
    if (!t) throw UnboundVariableError(v);
    return *t;
}

VariableSet Mapping::domain() const {
    VariableSet vars;
    for (const auto& [v, t] : bindings_) vars.insert(v);
    return vars;
}

bool Mapping::bind(const Variable& v, const Term& t) {
    auto [it, inserted] = bindings_.emplace(v, t);
    return inserted || it->second == t;
}

std::string Mapping::to_text() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : bindings_) {
        if (!first) out += ", ";
        first = false;
        out += v.to_text() + " -> " + t.to_text();
    }
    return out + "}";
}

bool compatible(const Mapping& m1, const Mapping& m2) {
    // Walk the smaller mapping and probe the larger one.
    const Mapping& small = m1.size() <= m2.size() ? m1 : m2;
    const Mapping& large = m1.size() <= m2.size() ? m2 : m1;
    for (const auto& [v, t] : small.bindings()) {
        const Term* other = large.lookup(v);
        if (other && !(*other == t)) return false;
    }
    return true;
}

std::optional<Mapping> merge(const Mapping& m1, const Mapping& m2) {
    if (!compatible(m1, m2)) return std::nullopt;
    std::map<Variable, Term> merged = m1.bindings();
    merged.insert(m2.bindings().begin(), m2.bindings().end());
    return Mapping(std::move(merged));
}

namespace {

// Variables bound in every member of the set.
VariableSet common_domain(const MappingSet& o) {
    VariableSet common;
    bool first = true;
    for (const Mapping& m : o) {
        if (first) {
            common = m.domain();
            first = false;
            continue;
        }
        VariableSet kept;
        for (const Variable& v : common)
            if (m.binds(v)) kept.insert(v);
        common = std::move(kept);
        if (common.empty()) break;
    }
    return common;
}

std::string key_on(const Mapping& m, const std::vector<Variable>& vars) {
    std::string key;
    for (const Variable& v : vars) {
        key += m.at(v).to_text();
        key += '\x1f';
    }
    return key;
}

}  // namespace

MappingSet join(const MappingSet& o1, const MappingSet& o2) {
    MappingSet out;
    if (o1.empty() || o2.empty()) return out;

    // Hash on the variables every member of both sides binds; mappings in
    // different buckets can never be compatible. Remaining shared variables
    // are still checked pairwise inside a bucket.
    VariableSet c1 = common_domain(o1);
    VariableSet c2 = common_domain(o2);
    std::vector<Variable> key_vars;
    std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(),
                          std::back_inserter(key_vars));

    if (key_vars.empty()) {
        for (const Mapping& m1 : o1)
            for (const Mapping& m2 : o2)
                if (auto m = merge(m1, m2)) out.insert(std::move(*m));
        return out;
    }

    std::unordered_map<std::string, std::vector<const Mapping*>> buckets;
    for (const Mapping& m2 : o2) buckets[key_on(m2, key_vars)].push_back(&m2);
    for (const Mapping& m1 : o1) {
        auto it = buckets.find(key_on(m1, key_vars));
        if (it == buckets.end()) continue;
        for (const Mapping* m2 : it->second)
            if (auto m = merge(m1, *m2)) out.insert(std::move(*m));
    }
    return out;
}

MappingSet set_union(const MappingSet& o1, const MappingSet& o2) {
    MappingSet out = o1;
    out.insert(o2.begin(), o2.end());
    return out;
}

MappingSet difference(const MappingSet& o1, const MappingSet& o2) {
    MappingSet out;
    for (const Mapping& m1 : o1) {
        bool any_compatible = false;
        for (const Mapping& m2 : o2)
            if (compatible(m1, m2)) {
                any_compatible = true;
                break;
            }
        if (!any_compatible) out.insert(m1);
    }
    return out;
}

MappingSet left_outer_join(const MappingSet& o1, const MappingSet& o2) {
    return set_union(join(o1, o2), difference(o1, o2));
}

Triple apply_mapping(const Mapping& m, const TriplePattern& t) {
    auto resolve = [&m](const TermOrVar& tv) -> Term {
        if (const auto* v = std::get_if<Variable>(&tv)) return m.at(*v);
        return std::get<Term>(tv);
    };
    return Triple(resolve(t.subject()), resolve(t.predicate()), resolve(t.object()));
}

namespace {

std::vector<Variable> sorted_columns(const MappingSet& mappings) {
    VariableSet vars;
    for (const Mapping& m : mappings) {
        VariableSet dom = m.domain();
        vars.insert(dom.begin(), dom.end());
    }
    return {vars.begin(), vars.end()};
}

std::vector<std::pair<std::string, const Mapping*>> sorted_rows(
    const MappingSet& mappings, const std::vector<Variable>& columns) {
    std::vector<std::pair<std::string, const Mapping*>> rows;
    rows.reserve(mappings.size());
    for (const Mapping& m : mappings) {
        std::string row;
        bool first = true;
        for (const Variable& v : columns) {
            if (!first) row += '\t';
            first = false;
            if (const Term* t = m.lookup(v)) row += t->to_text();
        }
        rows.emplace_back(std::move(row), &m);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

}  // namespace

std::string to_table(const MappingSet& mappings) {
    std::vector<Variable> columns = sorted_columns(mappings);
    std::string out;
    bool first = true;
    for (const Variable& v : columns) {
        if (!first) out += '\t';
        first = false;
        out += v.to_text();
    }
    out += '\n';
    for (const auto& [row, m] : sorted_rows(mappings, columns)) {
        out += row;
        out += '\n';
    }
    return out;
}

std::string to_structured(const MappingSet& mappings) {
    std::vector<Variable> columns = sorted_columns(mappings);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [row, m] : sorted_rows(mappings, columns)) {
        nlohmann::json obj = nlohmann::json::object();
        for (const auto& [v, t] : m->bindings()) obj[v.to_text()] = t.to_text();
        rows.push_back(std::move(obj));
    }
    return rows.dump();
}

}  // namespace sparqlalg
