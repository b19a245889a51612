#include "imog/cli.hpp"

#include "imog/dsl.hpp"
#include "imog/errors.hpp"
#include "imog/knowledge.hpp"
#include "imog/trace.hpp"
#include "imog/validate.hpp"
#include "imog/variability.hpp"
#include "imog/views.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace imog::cli {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_errors = 1;
constexpr int exit_usage = 2;

struct UsageError : Error {
    using Error::Error;
};

enum class Format { Text, Records };

void report(std::ostream& err, const std::vector<Diagnostic>& diagnostics, Format format)
{
    for (const auto& d : diagnostics)
        err << (format == Format::Records ? format_record(d) : format_text(d)) << '\n';
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::string store_path(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv(store_env_var); env && *env)
        return env;
    return default_store_path;
}

/// Parses and resolves; nullopt (after reporting) when that failed.
std::optional<Model> load_model(const std::string& path, std::ostream& err, Format format)
{
    ParseResult parsed = parse_file(path);
    if (!parsed.ok()) {
        report(err, parsed.diagnostics, format);
        return std::nullopt;
    }
    auto diagnostics = parsed.diagnostics;
    const auto resolution = resolve(*parsed.model);
    diagnostics.insert(diagnostics.end(), resolution.begin(), resolution.end());
    if (count_errors(resolution) > 0) {
        sort_diagnostics(diagnostics);
        report(err, diagnostics, format);
        return std::nullopt;
    }
    report(err, diagnostics, format);
    return std::move(*parsed.model);
}

void write_payload(const std::string& text, const std::string& out_path, std::ostream& out)
{
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file)
        throw IoFailure("cannot write " + out_path);
}

std::string ids_line(const std::vector<ElementId>& ids)
{
    std::string out;
    for (const auto& id : ids)
        out += (out.empty() ? "" : " ") + id.str();
    return out;
}

struct Options {
    std::string file;
    std::string format = "text";
    std::string out_path;
    std::string store;

    bool count = false;
    std::optional<std::size_t> enumerate;
    bool dead = false;
    std::string select;
    std::string variants;
    std::size_t budget = VariabilityOptions{}.budget;

    bool coverage = false;
    std::string impact_id;
    bool conflicts = false;
    bool no_inherit = false;

    std::string levels;
    std::string perspectives;

    bool graph = false;
    bool reqtable = false;
    bool roadmap = false;

    std::vector<std::string> ids;
    std::string type;
    std::optional<int> max_year;
    std::string property;

    Format fmt() const { return format == "records" ? Format::Records : Format::Text; }
};

int cmd_check(const Options& o, std::ostream& out, std::ostream& err)
{
    ParseResult parsed = parse_file(o.file);
    std::vector<Diagnostic> all = parsed.diagnostics;
    if (parsed.ok()) {
        const Model& m = *parsed.model;
        const auto resolution = resolve(m);
        all.insert(all.end(), resolution.begin(), resolution.end());
        if (count_errors(resolution) == 0) {
            const auto validation = validate(m);
            all.insert(all.end(), validation.begin(), validation.end());
            const auto conflicts = conflict_diagnostics(m);
            all.insert(all.end(), conflicts.begin(), conflicts.end());
            const auto store = load(store_path(o.store));
            const auto refs = check_kbrefs(m, store);
            all.insert(all.end(), refs.begin(), refs.end());
        }
    }
    sort_diagnostics(all);
    report(err, all, o.fmt());
    std::size_t warnings = 0, infos = 0;
    for (const auto& d : all) {
        warnings += d.severity == Severity::Warning;
        infos += d.severity == Severity::Info;
    }
    const std::size_t errors = count_errors(all);
    if (o.fmt() == Format::Records)
        out << nlohmann::ordered_json{{"file", o.file}, {"errors", errors}, {"warnings", warnings}, {"infos", infos}}
                   .dump()
            << '\n';
    else
        out << o.file << ": " << errors << " errors, " << warnings << " warnings, " << infos << " infos\n";
    return errors ? exit_errors : exit_ok;
}

int cmd_vars(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    const VariabilityOptions vopts{o.budget};
    const int chosen = o.count + o.enumerate.has_value() + o.dead + !o.select.empty() + !o.variants.empty();
    if (chosen != 1)
        throw UsageError("vars: choose exactly one of --count, --enumerate, --dead, --select, --variants");
    try {
        if (o.count) {
            out << count_configurations(*model, vopts) << '\n';
        } else if (o.enumerate) {
            for (const auto& c : enumerate_configurations(*model, *o.enumerate, vopts))
                out << (o.fmt() == Format::Records ? format_configuration_record(*model, c) : ids_line(c.selected))
                    << '\n';
        } else if (o.dead) {
            for (const auto& id : dead_features(*model, vopts))
                out << id.str() << '\n';
        } else if (!o.variants.empty()) {
            std::vector<ElementId> blocks;
            for (const auto& b : split(o.variants, ','))
                blocks.emplace_back(b);
            out << variant_combinations(*model, blocks) << '\n';
        } else {
            Decisions decisions;
            for (const auto& item : split(o.select, ',')) {
                const auto eq = item.find('=');
                const std::string value = eq == std::string::npos ? "in" : item.substr(eq + 1);
                if (value != "in" && value != "out")
                    throw UsageError("vars --select: expected id=in or id=out, got '" + item + "'");
                decisions[ElementId(item.substr(0, eq))] = value == "in" ? Decision::In : Decision::Out;
            }
            const PropagationState s = propagate(*model, decisions);
            if (o.fmt() == Format::Records) {
                auto ids = [](const std::vector<ElementId>& v) {
                    nlohmann::ordered_json a = nlohmann::ordered_json::array();
                    for (const auto& id : v)
                        a.push_back(id.str());
                    return a;
                };
                nlohmann::ordered_json j{{"model", model->name()},
                                         {"forced_in", ids(s.forced_in)},
                                         {"forced_out", ids(s.forced_out)},
                                         {"open", ids(s.open)}};
                if (s.conflict)
                    j["conflict"] = {{"rule", s.conflict->rule}, {"elements", ids(s.conflict->elements)}};
                out << j.dump() << '\n';
            } else {
                out << "in: " << ids_line(s.forced_in) << '\n';
                out << "out: " << ids_line(s.forced_out) << '\n';
                out << "open: " << ids_line(s.open) << '\n';
                if (s.conflict)
                    out << "conflict: " << s.conflict->rule << ' ' << ids_line(s.conflict->elements) << '\n';
            }
        }
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_errors;
    } catch (const InvalidFeatureModel& e) {
        err << "error: invalid feature model: " << e.what() << '\n';
        return exit_errors;
    }
    return exit_ok;
}

int cmd_trace(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    const TraceOptions topts{!o.no_inherit};
    const int chosen = o.coverage + !o.impact_id.empty() + o.conflicts;
    if (chosen != 1)
        throw UsageError("trace: choose exactly one of --coverage, --impact, --conflicts");
    if (o.coverage) {
        const TraceReport r = coverage_report(*model, topts);
        out << (o.fmt() == Format::Records ? format_report_records(*model, r) : format_report_text(r));
        return exit_ok;
    }
    if (o.conflicts) {
        const auto diagnostics = conflict_diagnostics(*model, topts);
        report(err, diagnostics, o.fmt());
        const auto groups = find_conflicts(*model, topts);
        if (o.fmt() == Format::Records) {
            TraceReport r;
            r.conflict_groups = groups;
            out << format_report_records(*model, r);
        } else {
            out << format_conflicts_text(groups);
        }
        return count_errors(diagnostics) ? exit_errors : exit_ok;
    }
    const ElementId id(o.impact_id);
    if (!model->contains(id)) {
        err << "error: unknown element '" << o.impact_id << "'\n";
        return exit_errors;
    }
    for (const auto& reached : impact(*model, id))
        out << reached.str() << '\n';
    return exit_ok;
}

int cmd_view(const Options& o, std::ostream& out, std::ostream& err)
{
    LevelSet levels;
    for (const auto& l : split(o.levels, ',')) {
        const auto level = parse_level(l);
        if (!level)
            throw UsageError("view: unknown level '" + l + "'");
        levels.insert(*level);
    }
    PerspectiveSet perspectives;
    for (const auto& p : split(o.perspectives, ',')) {
        const auto perspective = parse_perspective(p);
        if (!perspective)
            throw UsageError("view: unknown perspective '" + p + "'");
        perspectives.insert(*perspective);
    }
    if (levels.empty() || perspectives.empty())
        throw UsageError("view: --levels and --perspectives must not be empty");
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    write_payload(print(filter_view(*model, levels, perspectives)), o.out_path, out);
    return exit_ok;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.graph + o.reqtable + o.roadmap != 1)
        throw UsageError("export: choose exactly one of --graph, --reqtable, --roadmap");
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    std::string text;
    if (o.graph)
        text = export_graph(*model);
    else if (o.reqtable)
        text = export_requirements_table(*model);
    else
        text = roadmap_scaffold(*model, load(store_path(o.store)));
    write_payload(text, o.out_path, out);
    return exit_ok;
}

nlohmann::ordered_json entry_record(const KnowledgeEntry& e)
{
    nlohmann::ordered_json props = nlohmann::ordered_json::object();
    for (const auto& p : e.properties) {
        if (const auto* n = std::get_if<Number>(&p.value))
            props[p.key] = {{"value", n->value}, {"unit", n->unit}};
        else if (const auto* s = std::get_if<std::string>(&p.value))
            props[p.key] = *s;
        else
            props[p.key] = std::get<bool>(p.value);
    }
    return {{"id", e.id.str()},
            {"name", e.name},
            {"type", e.type},
            {"year", e.year_available},
            {"properties", props},
            {"provenance", e.provenance.model + "@" + e.provenance.timestamp}};
}

void print_entries(const std::vector<KnowledgeEntry>& entries, Format format, std::ostream& out)
{
    for (const auto& e : entries)
        out << (format == Format::Records ? entry_record(e).dump() : format_entry(e)) << '\n';
}

int cmd_kb_extract(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    std::vector<ElementId> ids;
    for (const auto& id : o.ids)
        ids.emplace_back(id);
    ExtractResult r;
    try {
        r = extract(*model, ids, Clock::from_environment());
    } catch (const UnknownElement& e) {
        err << "error: " << e.what() << '\n';
        return exit_errors;
    } catch (const KindNotExtractable& e) {
        err << "error: " << e.what() << '\n';
        return exit_errors;
    }
    report(err, r.diagnostics, o.fmt());
    const std::string path = store_path(o.store);
    const std::size_t stored = save(path, r.entries);
    print_entries(r.entries, o.fmt(), out);
    err << "stored " << r.entries.size() << " entries in " << path << " (" << stored << " total)\n";
    return exit_ok;
}

int cmd_kb_query(const Options& o, std::ostream& out)
{
    const auto entries = load(store_path(o.store));
    KnowledgeQuery q;
    if (!o.type.empty())
        q.type = o.type;
    q.max_year = o.max_year;
    if (!o.property.empty())
        q.property_key = o.property;
    print_entries(query(entries, q), o.fmt(), out);
    return exit_ok;
}

int cmd_kb_check(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto model = load_model(o.file, err, o.fmt());
    if (!model)
        return exit_errors;
    const auto diagnostics = check_kbrefs(*model, load(store_path(o.store)));
    report(err, diagnostics, o.fmt());
    const std::size_t errors = count_errors(diagnostics);
    out << o.file << ": " << errors << " unresolved knowledge references\n";
    return errors ? exit_errors : exit_ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Innovation model checker and analysis tool", "imog"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dsl_version));
    Options o;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "Diagnostic and payload format")
            ->check(CLI::IsMember({"text", "records"}));
    };
    auto add_file = [&](CLI::App* cmd) { cmd->add_option("file", o.file, "Model file (.imog)")->required(); };

    auto* check = app.add_subcommand("check", "Parse, resolve, validate and check conflicts");
    add_file(check);
    add_format(check);
    check->add_option("--store", o.store, "Knowledge base store");

    auto* vars = app.add_subcommand("vars", "Variability analyses");
    add_file(vars);
    add_format(vars);
    vars->add_flag("--count", o.count, "Number of valid configurations");
    vars->add_option("--enumerate", o.enumerate, "List the first N configurations");
    vars->add_flag("--dead", o.dead, "Features in no valid configuration");
    vars->add_option("--select", o.select, "Propagate decisions id=in,id=out,...");
    vars->add_option("--variants", o.variants, "Variant combinations over blocks B1,B2,...");
    vars->add_option("--budget", o.budget, "Exhaustive search budget in features")->check(CLI::PositiveNumber);

    auto* trace = app.add_subcommand("trace", "Traceability analyses");
    add_file(trace);
    add_format(trace);
    trace->add_flag("--coverage", o.coverage, "Coverage report");
    trace->add_option("--impact", o.impact_id, "Elements affected by a change of ID");
    trace->add_flag("--conflicts", o.conflicts, "Requirement conflicts");
    trace->add_flag("--no-inherit", o.no_inherit, "Do not inherit requirements of containing blocks");

    auto* view = app.add_subcommand("view", "Print a level and perspective filtered view");
    add_file(view);
    add_format(view);
    view->add_option("--levels", o.levels, "Comma-separated levels")->required();
    view->add_option("--perspectives", o.perspectives, "Comma-separated perspectives")->required();
    view->add_option("--out", o.out_path, "Write to file instead of standard output");

    auto* exp = app.add_subcommand("export", "Graph, requirements table or roadmap scaffold");
    add_file(exp);
    add_format(exp);
    exp->add_flag("--graph", o.graph, "DOT graph");
    exp->add_flag("--reqtable", o.reqtable, "Requirements table (CSV)");
    exp->add_flag("--roadmap", o.roadmap, "Roadmap document scaffold");
    exp->add_option("--out", o.out_path, "Write to file instead of standard output");
    exp->add_option("--store", o.store, "Knowledge base store for the roadmap timeline");

    auto* kb = app.add_subcommand("kb", "Knowledge base");
    kb->require_subcommand(1);
    kb->add_option("--store", o.store, "Store file (default $IMOG_KB or ./kb.imogkb)");
    add_format(kb);
    auto* kb_extract = kb->add_subcommand("extract", "Extract elements into the store");
    add_file(kb_extract);
    kb_extract->add_option("ids", o.ids, "Element ids")->required();
    auto* kb_query = kb->add_subcommand("query", "List matching entries");
    kb_query->add_option("--type", o.type, "Entry type");
    kb_query->add_option("--max-year", o.max_year, "Available by this year");
    kb_query->add_option("--property", o.property, "Entries carrying this property");
    auto* kb_check = kb->add_subcommand("check", "Check knowledge references of a model");
    add_file(kb_check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        if (check->parsed())
            return cmd_check(o, out, err);
        if (vars->parsed())
            return cmd_vars(o, out, err);
        if (trace->parsed())
            return cmd_trace(o, out, err);
        if (view->parsed())
            return cmd_view(o, out, err);
        if (exp->parsed())
            return cmd_export(o, out, err);
        if (kb_extract->parsed())
            return cmd_kb_extract(o, out, err);
        if (kb_query->parsed())
            return cmd_kb_query(o, out);
        if (kb_check->parsed())
            return cmd_kb_check(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const StoreCorrupt& e) {
        err << "error: corrupt store: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_errors;
    }
    return exit_usage;
}

} // namespace imog::cli
