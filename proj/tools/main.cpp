// sparql-algebra: batch front end for graph-pattern evaluation, analysis,
// rewriting and reduction generation, built on the C API only.
//
// Exit codes: 0 ok/equal, 1 semantic difference (diff) or failed check,
// 2 parse/validation error, 3 unsupported operation, 4 precondition
// failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sparql_algebra.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDifferent = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitPrecondition = 4;

int exit_code_for(sa_status status) {
    switch (status) {
        case SA_OK: return kExitOk;
        case SA_ERROR_PARSE: return kExitParse;
        case SA_ERROR_UNSUPPORTED: return kExitUnsupported;
        case SA_ERROR_PRECONDITION: return kExitPrecondition;
        default: return kExitParse;
    }
}

[[noreturn]] void fail(sa_status status) {
    std::cerr << "error: " << sa_last_error() << "\n";
    std::exit(exit_code_for(status));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(kExitParse);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(kExitParse);
    }
    out << content;
}

struct StringDeleter {
    void operator()(char* s) const { sa_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct DatasetDeleter {
    void operator()(sa_dataset* d) const { sa_dataset_free(d); }
};
struct PatternDeleter {
    void operator()(sa_pattern* p) const { sa_pattern_free(p); }
};
struct SolutionDeleter {
    void operator()(sa_solution* s) const { sa_solution_free(s); }
};

std::unique_ptr<sa_dataset, DatasetDeleter> load_dataset(const std::string& path) {
    sa_dataset* d = nullptr;
    if (sa_status s = sa_dataset_parse(read_file(path).c_str(), &d)) fail(s);
    return std::unique_ptr<sa_dataset, DatasetDeleter>(d);
}

std::unique_ptr<sa_pattern, PatternDeleter> load_pattern(const std::string& path) {
    sa_pattern* p = nullptr;
    if (sa_status s = sa_pattern_parse(read_file(path).c_str(), &p)) fail(s);
    return std::unique_ptr<sa_pattern, PatternDeleter>(p);
}

sa_format parse_format(const std::string& name) {
    return name == "structured" ? SA_FORMAT_STRUCTURED : SA_FORMAT_TABLE;
}

std::string format_solution(const sa_solution* s, sa_format format) {
    char* text = nullptr;
    if (sa_status st = sa_solution_format(s, format, &text)) fail(st);
    CString owned(text);
    std::string out = owned.get();
    if (format == SA_FORMAT_STRUCTURED) out += '\n';
    return out;
}

int run_eval(const std::string& data_path, const std::string& pattern_path,
             const std::string& semantics, bool allow_union, const std::string& format) {
    auto dataset = load_dataset(data_path);
    auto pattern = load_pattern(pattern_path);
    sa_solution* result = nullptr;
    sa_semantics mode =
        semantics == "depthfirst" ? SA_SEMANTICS_DEPTH_FIRST : SA_SEMANTICS_COMPOSITIONAL;
    if (sa_status s = sa_eval(dataset.get(), pattern.get(), mode, allow_union ? 1 : 0, &result))
        fail(s);
    std::unique_ptr<sa_solution, SolutionDeleter> owned(result);
    std::cout << format_solution(result, parse_format(format));
    return kExitOk;
}

int run_check(const std::string& pattern_path) {
    auto pattern = load_pattern(pattern_path);
    int scope_ok = 0;
    char* scope_report = nullptr;
    if (sa_status s = sa_pattern_check_filter_scope(pattern.get(), &scope_ok, &scope_report))
        fail(s);
    CString scope_owned(scope_report);
    std::cout << scope_report;

    if (!sa_pattern_is_union_free(pattern.get())) {
        std::cout << "well designed: not applicable (UNION present)\n";
        return scope_ok ? kExitOk : kExitDifferent;
    }
    int wd_ok = 0;
    char* wd_report = nullptr;
    if (sa_status s = sa_pattern_check_well_designed(pattern.get(), &wd_ok, &wd_report)) fail(s);
    CString wd_owned(wd_report);
    std::cout << wd_report;
    return scope_ok && wd_ok ? kExitOk : kExitDifferent;
}

int run_diff(const std::string& data_path, const std::string& pattern_path, bool allow_union,
             const std::string& format) {
    auto dataset = load_dataset(data_path);
    auto pattern = load_pattern(pattern_path);

    if (sa_pattern_is_union_free(pattern.get())) {
        int wd_ok = 0;
        if (sa_status s = sa_pattern_check_well_designed(pattern.get(), &wd_ok, nullptr)) fail(s);
        std::cout << "well designed: " << (wd_ok ? "yes" : "no") << "\n";
    } else {
        std::cout << "well designed: not applicable (UNION present)\n";
    }

    sa_solution* compositional = nullptr;
    if (sa_status s = sa_eval(dataset.get(), pattern.get(), SA_SEMANTICS_COMPOSITIONAL, 0,
                              &compositional))
        fail(s);
    std::unique_ptr<sa_solution, SolutionDeleter> comp_owned(compositional);
    sa_solution* depth_first = nullptr;
    if (sa_status s = sa_eval(dataset.get(), pattern.get(), SA_SEMANTICS_DEPTH_FIRST,
                              allow_union ? 1 : 0, &depth_first))
        fail(s);
    std::unique_ptr<sa_solution, SolutionDeleter> df_owned(depth_first);

    if (sa_solution_equal(compositional, depth_first)) {
        std::cout << "EQUAL\n";
        return kExitOk;
    }
    std::cout << "DIFFERENT\n";
    sa_format fmt = parse_format(format);
    sa_solution* only_comp = nullptr;
    sa_solution* only_df = nullptr;
    if (sa_status s = sa_solution_subtract(compositional, depth_first, &only_comp)) fail(s);
    std::unique_ptr<sa_solution, SolutionDeleter> oc_owned(only_comp);
    if (sa_status s = sa_solution_subtract(depth_first, compositional, &only_df)) fail(s);
    std::unique_ptr<sa_solution, SolutionDeleter> od_owned(only_df);
    std::cout << "only in compositional (" << sa_solution_size(only_comp) << "):\n"
              << format_solution(only_comp, fmt);
    std::cout << "only in depth-first (" << sa_solution_size(only_df) << "):\n"
              << format_solution(only_df, fmt);
    return kExitDifferent;
}

int run_normalize(const std::string& pattern_path, bool form_union, bool form_opt, bool split_or) {
    auto pattern = load_pattern(pattern_path);
    char* out = nullptr;
    if (form_union) {
        if (sa_status s = sa_normalize_union(pattern.get(), &out)) fail(s);
        CString owned(out);
        std::cout << out;
        return kExitOk;
    }
    if (form_opt) {
        if (sa_status s = sa_normalize_opt(pattern.get(), &out)) fail(s);
        CString owned(out);
        std::cout << out << "\n";
        return kExitOk;
    }
    if (sa_status s = sa_normalize_filter(pattern.get(), split_or ? 1 : 0, &out)) fail(s);
    CString owned(out);
    std::cout << out << "\n";
    return kExitOk;
}

int run_reduce(const std::string& kind, const std::string& input_path,
               const std::string& out_data, const std::string& out_pattern,
               const std::string& out_mapping) {
    std::string input = read_file(input_path);
    char* dataset_text = nullptr;
    char* pattern_text = nullptr;
    char* mapping_json = nullptr;
    sa_status s = kind == "qbf"
                      ? sa_reduce_qbf(input.c_str(), &dataset_text, &pattern_text, &mapping_json)
                      : sa_reduce_sat(input.c_str(), &dataset_text, &pattern_text, &mapping_json);
    if (s) fail(s);
    CString d_owned(dataset_text), p_owned(pattern_text), m_owned(mapping_json);
    write_file(out_data, dataset_text);
    write_file(out_pattern, pattern_text);
    write_file(out_mapping, mapping_json);
    std::cout << "wrote " << out_data << ", " << out_pattern << ", " << out_mapping << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPARQL graph-pattern algebra tool"};
    app.require_subcommand(1);

    std::string data_path, pattern_path;
    std::string semantics = "compositional";
    std::string format = "table";
    bool allow_union = false;

    CLI::App* eval = app.add_subcommand("eval", "evaluate a pattern over a dataset");
    eval->add_option("--data,-d", data_path, "dataset file")->required();
    eval->add_option("--pattern,-p", pattern_path, "pattern file")->required();
    eval->add_option("--semantics", semantics, "compositional or depthfirst")
        ->check(CLI::IsMember({"compositional", "depthfirst"}));
    eval->add_option("--format", format, "table or structured")
        ->check(CLI::IsMember({"table", "structured"}));
    eval->add_flag("--allow-union-in-df", allow_union,
                   "evaluate UNION patterns depth-first via the union normal form");

    CLI::App* check = app.add_subcommand("check", "report filter scope and well-designedness");
    check->add_option("--pattern,-p", pattern_path, "pattern file")->required();

    CLI::App* diff = app.add_subcommand("diff", "compare the two semantics");
    diff->add_option("--data,-d", data_path, "dataset file")->required();
    diff->add_option("--pattern,-p", pattern_path, "pattern file")->required();
    diff->add_option("--format", format, "table or structured")
        ->check(CLI::IsMember({"table", "structured"}));
    diff->add_flag("--allow-union-in-df", allow_union,
                   "evaluate UNION patterns depth-first via the union normal form");

    CLI::App* normalize = app.add_subcommand("normalize", "rewrite a pattern to a normal form");
    normalize->add_option("--pattern,-p", pattern_path, "pattern file")->required();
    bool form_union = false, form_opt = false, form_filter = false, split_or = false;
    normalize->add_flag("--union", form_union, "union normal form: one branch per line");
    normalize->add_flag("--opt", form_opt, "OPT normal form (well-designed, filter-free input)");
    normalize->add_flag("--filter", form_filter, "apply the FILTER identities");
    normalize->add_flag("--or-split", split_or, "with --filter: split disjunctive filters");

    std::string kind = "sat", input_path, out_data, out_pattern, out_mapping;
    CLI::App* reduce = app.add_subcommand("reduce", "generate a reduction instance");
    reduce->add_option("--kind", kind, "sat or qbf")->check(CLI::IsMember({"sat", "qbf"}));
    reduce->add_option("--input,-i", input_path, "DIMACS-like formula file")->required();
    reduce->add_option("--out-data", out_data, "dataset output file")->required();
    reduce->add_option("--out-pattern", out_pattern, "pattern output file")->required();
    reduce->add_option("--out-mapping", out_mapping, "target mapping output file")->required();

    CLI11_PARSE(app, argc, argv);

    if (eval->parsed()) return run_eval(data_path, pattern_path, semantics, allow_union, format);
    if (check->parsed()) return run_check(pattern_path);
    if (diff->parsed()) return run_diff(data_path, pattern_path, allow_union, format);
    if (normalize->parsed()) {
        int forms = (form_union ? 1 : 0) + (form_opt ? 1 : 0) + (form_filter ? 1 : 0);
        if (forms != 1) {
            std::cerr << "error: normalize needs exactly one of --union, --opt, --filter\n";
            return kExitParse;
        }
        return run_normalize(pattern_path, form_union, form_opt, split_or);
    }
    if (reduce->parsed())
        return run_reduce(kind, input_path, out_data, out_pattern, out_mapping);
    return kExitParse;
}
