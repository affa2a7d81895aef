// dqp: catalog, validate, adapt, concretize, genquery, run.
//
// Exit codes: 0 ok, 1 domain failure (violations, missing bindings, abstract
// input), 2 usage or I/O failure.

#include <chrono>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "dqp/catalog.hpp"
#include "dqp/concretisation.hpp"
#include "dqp/errors.hpp"
#include "dqp/evaluator.hpp"
#include "dqp/external.hpp"
#include "dqp/io.hpp"
#include "dqp/query_gen.hpp"
#include "dqp/report.hpp"
#include "dqp/validation.hpp"
#include "dqp/xml_adaption.hpp"

using namespace dqp;

namespace {

// Domain failure, exit 1.
struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Usage or I/O failure, exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

AbstractionLevel parse_level(const std::string& s) {
    if (s == "g" || s == "generic") return AbstractionLevel::Generic;
    if (s == "x" || s == "abstract" || s == "xml") return AbstractionLevel::AbstractXml;
    if (s == "c" || s == "concrete") return AbstractionLevel::Concrete;
    throw UsageError("unknown level '" + s + "' (g, x or c)");
}

std::string read_input(const std::string& path) {
    try {
        return read_file(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

CompletePattern load_pattern(const std::string& path) {
    std::string text = read_input(path);
    try {
        return deserialize(text);
    } catch (const SchemaError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const PatternError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    try {
        write_file(out, text);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

CatalogId catalog_id(const std::string& name) {
    auto id = parse_catalog_id(name);
    if (!id) throw UsageError("unknown catalog pattern '" + name + "'");
    return *id;
}

std::string join(const std::vector<std::string_view>& v, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += std::string(i ? sep : "") + std::string(v[i]);
    return out;
}

// ------------------------------------------------------------------ commands

int catalog_list() {
    for (const auto& e : catalog_entries())
        std::cout << e.name << "\t" << e.purpose << "\t" << join(e.covered_variants, "; ") << "\n";
    return 0;
}

int catalog_show(const std::string& name) {
    const CatalogEntry& e = catalog_entry(catalog_id(name));
    std::cout << "id:       " << e.name << "\n"
              << "purpose:  " << e.purpose << "\n"
              << "variants: " << join(e.covered_variants, "; ") << "\n"
              << "parameters:\n";
    CompletePattern p = instantiate(e.id, AbstractionLevel::AbstractXml);
    for (const auto& par : p.parameters())
        std::cout << "  " << par.name << "\t" << kind_name(par.body) << (has_value(par.body) ? "\t(predefined)" : "")
                  << "\n";
    return 0;
}

int catalog_export(const std::string& name, const std::string& level, const std::string& out) {
    AbstractionLevel l = parse_level(level);
    if (l == AbstractionLevel::Concrete) throw UsageError("catalog patterns exist at levels g and x");
    emit(out, serialize(instantiate(catalog_id(name), l)));
    return 0;
}

int validate_cmd(const std::string& file, const std::string& level) {
    CompletePattern p = load_pattern(file);
    auto violations = validate(p, level.empty() ? p.level() : parse_level(level));
    for (const auto& v : violations) std::cout << format_violation(v) << "\n";
    return violations.empty() ? 0 : 1;
}

int concretize_cmd(const std::string& file, const std::string& bindings, const std::string& out) {
    CompletePattern p = load_pattern(file);
    std::vector<Binding> b;
    try {
        b = parse_bindings(read_input(bindings));
    } catch (const ParseError& e) {
        throw UsageError(bindings + ": " + e.what());
    }
    try {
        bind_all(p, b);
        emit(out, serialize(finalize(p)));
    } catch (const IncompleteBindingError& e) {
        std::cout << "missing bindings:\n";
        for (const auto& m : e.missing()) std::cout << "  " << m << "\n";
        return 1;
    } catch (const BindingError& e) {
        throw Failure(e.what());
    }
    return 0;
}

int genquery_cmd(const std::string& file, const std::string& out, bool check) {
    CompletePattern p = load_pattern(file);
    if (p.level() != AbstractionLevel::Concrete) throw Failure(file + ": pattern is not concrete");
    std::string q = generate_query(p);
    if (check)
        if (auto err = check_grammar(q)) throw Failure("generated query does not parse: " + *err);
    emit(out, q);
    return 0;
}

int adapt_cmd(const std::string& file, const std::string& decisions, const std::string& out) {
    CompletePattern p = load_pattern(file);
    AdaptionDecisions d;
    try {
        d = parse_decisions(read_input(decisions));
    } catch (const ParseError& e) {
        throw UsageError(decisions + ": " + e.what());
    }
    emit(out, serialize(adapt_to_xml(p, d)));
    return 0;
}

struct RunOptions {
    std::vector<std::string> patterns;
    std::string data;
    std::string format = "text";
    std::string engine = "native";
    std::string out;
    bool fail_on_match = false;
};

int run_cmd(const RunOptions& o, const std::string& xquery_cmd) {
    std::vector<CompletePattern> patterns;
    for (const auto& f : o.patterns) {
        patterns.push_back(load_pattern(f));
        if (patterns.back().level() != AbstractionLevel::Concrete) throw Failure(f + ": pattern is not concrete");
    }
    std::optional<std::string> cmd;
    if (o.engine == "external") {
        cmd = xquery_command(xquery_cmd.empty() ? std::nullopt : std::optional(xquery_cmd));
        if (!cmd) throw UsageError("engine external needs xquery_cmd (option, config key or XQUERY_CMD)");
    }
    Document doc = [&] {
        try {
            return Document::parse_file(o.data);
        } catch (const ParseError& e) {
            throw UsageError(o.data + ": " + e.what());
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }();

    std::vector<std::future<MatchReport>> jobs;
    for (const auto& p : patterns)
        jobs.push_back(std::async(std::launch::async, [&, pp = &p] {
            auto start = std::chrono::steady_clock::now();
            std::vector<NodeId> nodes = cmd ? evaluate_external(*cmd, *pp, doc, o.data) : evaluate(*pp, doc).nodes;
            std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
            return make_report(pp->name(), o.engine, nodes, doc, ms.count());
        }));
    std::vector<MatchReport> reports;
    for (auto& j : jobs) reports.push_back(j.get());

    std::string text = o.format == "json" ? reports_json(reports)
                       : o.format == "csv" ? reports_csv(reports)
                                           : reports_text(reports);
    emit(o.out, text);
    bool any = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return !r.matches.empty(); });
    return o.fail_on_match && any ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"XML data-quality patterns: catalog, validation, adaption, concretisation, XQuery generation and "
                 "evaluation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat config file (key = value), e.g. xquery_cmd");
    std::string xquery_cmd;
    app.add_option("--xquery_cmd", xquery_cmd, "Command template for the external engine ({query}, {data})");

    auto* catalog = app.add_subcommand("catalog", "Browse and export catalog patterns");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "Ids, purposes and covered problem variants");
    std::string show_id, export_id, level = "x", out;
    auto* show = catalog->add_subcommand("show", "Details of one pattern");
    show->add_option("id", show_id)->required();
    auto* exp = catalog->add_subcommand("export", "Write a catalog pattern as .dqp.json");
    exp->add_option("id", export_id)->required();
    exp->add_option("--level", level, "g (generic) or x (XML-adapted)")->capture_default_str();
    exp->add_option("-o,--output", out);

    auto* val = app.add_subcommand("validate", "Check the well-formedness constraints");
    std::string val_file, val_level;
    val->add_option("pattern", val_file)->required();
    val->add_option("--level", val_level, "g, x or c (default: the pattern's own level)");

    auto* conc = app.add_subcommand("concretize", "Bind parameters and write the concrete pattern");
    std::string conc_file, conc_bind;
    conc->add_option("pattern", conc_file)->required();
    conc->add_option("bindings", conc_bind)->required();
    conc->add_option("-o,--output", out);

    auto* gen = app.add_subcommand("genquery", "Generate the XQuery for a concrete pattern");
    std::string gen_file;
    bool check = false;
    gen->add_option("pattern", gen_file)->required();
    gen->add_option("-o,--output", out);
    gen->add_flag("--check-grammar", check, "Parse the generated query before writing it");

    auto* run = app.add_subcommand("run", "Evaluate concrete patterns on a document");
    RunOptions ro;
    run->add_option("patterns", ro.patterns)->required();
    run->add_option("--data", ro.data)->required();
    run->add_option("--format", ro.format)->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    run->add_option("--engine", ro.engine)->check(CLI::IsMember({"native", "external"}))->capture_default_str();
    run->add_option("-o,--output", ro.out);
    run->add_flag("--fail-on-match", ro.fail_on_match, "Exit with 1 when any pattern matches");

    auto* adapt = app.add_subcommand("adapt", "Adapt a generic pattern to XML");
    std::string adapt_file, adapt_dec;
    adapt->add_option("pattern", adapt_file)->required();
    adapt->add_option("decisions", adapt_dec)->required();
    adapt->add_option("-o,--output", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (catalog->parsed()) {
            if (catalog->got_subcommand("list")) return catalog_list();
            if (show->parsed()) return catalog_show(show_id);
            return catalog_export(export_id, level, out);
        }
        if (val->parsed()) return validate_cmd(val_file, val_level);
        if (conc->parsed()) return concretize_cmd(conc_file, conc_bind, out);
        if (gen->parsed()) return genquery_cmd(gen_file, out, check);
        if (run->parsed()) return run_cmd(ro, xquery_cmd);
        if (adapt->parsed()) return adapt_cmd(adapt_file, adapt_dec, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const PatternError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const BindingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
