#include "dks/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "dks/defaults.hpp"
#include "dks/errors.hpp"
#include "dks/nonmono.hpp"
#include "dks/random.hpp"
#include "dks/represent.hpp"
#include "dks/structure_file.hpp"

namespace dks::cli {

using json = nlohmann::ordered_json;

namespace {

/// Bad invocation or input that is not a verification result.
struct UsageError : Error {
    using Error::Error;
};

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string{s.substr(b, e - b)};
}

} // namespace

TokenSet parse_token_list(const TokenUniverse& u, std::string_view text)
{
    std::string body = trim(text);
    if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = trim(std::string_view{body}.substr(1, body.size() - 2));
    TokenSet out;
    int depth = 0;
    std::string current;
    auto flush = [&] {
        const std::string name = trim(current);
        current.clear();
        if (name.empty()) return;
        const auto t = u.find(name);
        if (!t) throw ModelError("unknown token '" + name + "'");
        out.insert(*t);
    };
    for (char c : body) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (depth == 0 && (c == ',' || std::isspace(static_cast<unsigned char>(c)))) {
            flush();
        } else {
            current += c;
        }
    }
    flush();
    return out;
}

namespace {

struct Options {
    std::string file;
    bool json = false;
    std::size_t max_tokens = default_max_tokens;
    std::string state;
    bool trace = false;
    bool cumulative = false;
    bool dot = false;
    std::string output;
    std::string against;
    std::uint64_t seed = default_seed;
    std::size_t samples = default_samples;
};

struct Loaded {
    StructureFile file;
    std::string path;
};

Loaded load(const std::string& path, const Options& opt, std::ostream& err)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Loaded l;
    l.path = path;
    try {
        l.file = parse_structure(buf.str());
    } catch (const ParseError& e) {
        throw UsageError(path + ":" + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column) + ": " +
                         e.message());
    }
    for (const auto& w : l.file.warnings) err << path << ": warning: " << w << "\n";
    if (l.file.tokens.size() > opt.max_tokens) {
        throw UsageError(path + " declares " + std::to_string(l.file.tokens.size()) +
                         " tokens; exhaustive checks are capped at --max-tokens " + std::to_string(opt.max_tokens));
    }
    if (l.file.tokens.size() > TokenSet::capacity) throw UsageError("at most 64 tokens are supported");
    return l;
}

json witness_json(const std::optional<Witness>& w)
{
    if (!w) return nullptr;
    return json{{"parts", w->parts}, {"explanation", w->explanation}};
}

json verdict_json(const CheckReport& r)
{
    return json{{"name", r.name}, {"passed", r.passed}, {"cases", r.cases}, {"witness", witness_json(r.witness)}};
}

json set_json(const TokenUniverse& u, TokenSet s)
{
    json arr = json::array();
    for (Token t : s) arr.push_back(u.name(t));
    return arr;
}

/// Collects verdicts and command data, then renders text or JSON.
class Report {
public:
    Report(std::string command, const Options& opt) : command_{std::move(command)}, opt_{opt}
    {
        data_["command"] = command_;
        data_["file"] = opt.file;
    }

    void add(CheckReport r) { verdicts_.push_back(std::move(r)); }
    void add_all(std::vector<CheckReport> rs)
    {
        for (auto& r : rs) add(std::move(r));
    }
    void line(const std::string& s) { text_ += s + "\n"; }
    void note(const std::string& s) { notes_.push_back(s); }
    json& data() { return data_; }

    [[nodiscard]] bool passed() const
    {
        return std::all_of(verdicts_.begin(), verdicts_.end(), [](const CheckReport& r) { return r.passed; });
    }

    int emit(std::ostream& out, std::ostream& err, bool verdicts_decide = true)
    {
        if (opt_.json) {
            json doc;
            doc["command"] = data_["command"];
            doc["file"] = data_["file"];
            json vs = json::array();
            for (const auto& r : verdicts_) vs.push_back(verdict_json(r));
            doc["verdicts"] = std::move(vs);
            for (auto it = data_.begin(); it != data_.end(); ++it) {
                if (it.key() != "command" && it.key() != "file") doc[it.key()] = it.value();
            }
            if (!notes_.empty()) doc["notes"] = notes_;
            out << doc.dump(2) << "\n";
        } else {
            out << text_;
            for (const auto& r : verdicts_) {
                out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  (" << r.cases << " cases)\n";
                if (r.witness) out << "      witness " << r.witness->tuple() << ": " << r.witness->explanation << "\n";
            }
            for (const auto& n : notes_) err << "note: " << n << "\n";
        }
        return (!verdicts_decide || passed()) ? ok : verification_failed;
    }

private:
    std::string command_;
    const Options& opt_;
    json data_ = json::object();
    std::string text_;
    std::vector<std::string> notes_;
    std::vector<CheckReport> verdicts_;
};

CheckReport system_laws(const InformationSystem& sys)
{
    const auto v = validate_system(sys);
    CheckReport r{"information system laws", true, v.sets_checked, std::nullopt};
    if (!v.ok()) {
        Witness w = v.violations.front().witness;
        w.explanation = "property " + std::to_string(v.violations.front().property) + ": " + w.explanation;
        r.fail(std::move(w));
    }
    return r;
}

CheckReport failed(const std::string& name, const std::string& why)
{
    CheckReport r{name, true, 1, std::nullopt};
    r.fail(Witness{{}, why});
    return r;
}

/// The relation a file denotes: the closure of its assumptions, or the
/// skeptical consequence of its default structure.
NmRelation source_relation(const StructureFile& file)
{
    if (file.kind() == FileKind::abstract_system) return file_abstract_system(file);
    return derive_nm(file_default_structure(file));
}

DefaultStructure require_structure(const Loaded& l)
{
    if (l.file.kind() != FileKind::default_structure) throw UsageError(l.path + " is an abstract-system file; this command needs default rules");
    return file_default_structure(l.file);
}

TokenSet read_state(const TokenUniverse& u, const Options& opt)
{
    return parse_token_list(u, opt.state);
}

std::vector<CheckReport> structure_checks(const DefaultStructure& ds, bool cumulative)
{
    std::vector<CheckReport> out;
    out.push_back(check_extension_laws(ds));
    out.push_back(check_extension_absorption(ds));
    out.push_back(check_enumeration_agreement(ds));
    if (ds.system().entail().trivial()) {
        out.push_back(check_cautious_cut_theorem(ds));
        auto verdict = check_axioms(derive_nm(ds));
        for (std::size_t i = 0; i + 1 < verdict.axioms.size(); ++i) {
            verdict.axioms[i].name = "derived relation: axiom " + verdict.axioms[i].name;
            out.push_back(verdict.axioms[i]);
        }
        if (cumulative || ds.precondition_free()) {
            auto cm = verdict.cautious_monotony();
            cm.name = "derived relation: " + cm.name;
            out.push_back(cm);
        }
    }
    return out;
}

std::vector<TokenSet> lifted_premises(const NmRelation& nm, const RepresentationResult& rep)
{
    std::vector<TokenSet> out;
    for (TokenSet x : nm.premises()) out.push_back(rep.lift(x));
    return out;
}

CheckReport renamed(CheckReport r, const std::string& prefix)
{
    r.name = prefix + r.name;
    return r;
}

std::vector<CheckReport> relation_checks(const NmRelation& nm, bool cumulative, std::vector<std::string>* notes)
{
    std::vector<CheckReport> out;
    const auto verdict = check_axioms(nm);
    for (std::size_t i = 0; i + 1 < verdict.axioms.size(); ++i) out.push_back(renamed(verdict.axioms[i], "axiom "));
    if (cumulative) out.push_back(verdict.cautious_monotony());
    if (!verdict.abstract()) return out;

    out.push_back(check_tilde_intersection_law(nm));
    const auto plain = build_plain(nm);
    out.push_back(renamed(verify_conservativity(nm, plain), "plain: "));
    out.push_back(renamed(verify_extension_shape(nm, plain), "plain: "));
    out.push_back(renamed(check_enumeration_agreement(plain.structure(), lifted_premises(nm, plain)), "plain: "));

    if (!verdict.cumulative()) {
        if (notes && !cumulative) notes->push_back("cautious monotony fails; cumulative checks skipped");
        return out;
    }
    out.push_back(check_cumulative_tilde_law(nm));
    const auto cum = build_cumulative(nm);
    out.push_back(renamed(verify_unique_extension(nm, cum), "cumulative: "));
    out.push_back(renamed(verify_conservativity(nm, cum), "cumulative: "));
    out.push_back(renamed(check_enumeration_agreement(cum.structure(), lifted_premises(nm, cum)), "cumulative: "));
    return out;
}

/// Runs `check` on `samples` seeded random instances and folds the results
/// into one verdict naming the first failing sample.
CheckReport random_suite(const std::string& name, const Options& opt,
                         const std::function<std::vector<CheckReport>(Rng&)>& check)
{
    CheckReport out{name + " (seed " + std::to_string(opt.seed) + ")", true, 0, std::nullopt};
    Rng rng(opt.seed);
    for (std::size_t i = 0; i < opt.samples; ++i) {
        ++out.cases;
        for (auto& r : check(rng)) {
            if (!r.passed) {
                Witness w = r.witness.value_or(Witness{});
                w.explanation = "sample " + std::to_string(i) + ", " + r.name + ": " + w.explanation;
                out.fail(std::move(w));
            }
        }
    }
    return out;
}

/// Compares the relation derived from a constructed structure, restricted
/// to the source tokens, with the source relation.
CheckReport compare_against(const DefaultStructure& ds, const NmRelation& source)
{
    CheckReport r{"agreement with source relation", true, 0, std::nullopt};
    const auto& su = source.universe();
    std::vector<Token> map;
    TokenSet image;
    for (const auto& name : su.names()) {
        const auto t = ds.universe().find(name);
        if (!t) {
            r.fail(Witness{{name}, "source token missing from the structure"});
            return r;
        }
        map.push_back(*t);
        image.insert(*t);
    }
    auto lift = [&](TokenSet x) {
        TokenSet w;
        for (Token t : x) w.insert(map[t]);
        return w;
    };
    auto restrict = [&](TokenSet w) {
        TokenSet x;
        for (Token t = 0; t < map.size(); ++t) {
            if (w.contains(map[t])) x.insert(t);
        }
        return x;
    };
    const NmRelation derived = derive_nm(ds);
    for_each_subset(su.all(), [&](TokenSet x) {
        ++r.cases;
        const bool src = source.con().contains(x);
        if (src != ds.con().contains(lift(x))) {
            r.fail(Witness{{su.format(x)}, src ? "consistent in the source only" : "consistent in the structure only"});
            return;
        }
        if (!src) return;
        const TokenSet got = restrict(derived.consequences(lift(x)) & image);
        const TokenSet want = source.consequences(x);
        if (got != want) {
            r.fail(Witness{{su.format(x), su.format(want), su.format(got)},
                           "source consequences differ from derived consequences"});
        }
    });
    return r;
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    Report rep("check", opt);
    if (l.file.kind() == FileKind::default_structure) {
        const auto sys = file_system(l.file);
        rep.data()["kind"] = "default structure";
        rep.line("default structure: " + std::to_string(sys.universe().size()) + " tokens, " +
                 std::to_string(l.file.defaults.size()) + " defaults");
        rep.add(system_laws(sys));
    } else {
        rep.data()["kind"] = "abstract system";
        rep.line("abstract system: " + std::to_string(l.file.tokens.size()) + " tokens, " +
                 std::to_string(l.file.assumes.size()) + " assumptions");
        try {
            const auto nm = file_abstract_system(l.file);
            const auto verdict = check_axioms(nm);
            for (std::size_t i = 0; i + 1 < verdict.axioms.size(); ++i) rep.add(renamed(verdict.axioms[i], "axiom "));
        } catch (const ModelError& e) {
            rep.add(failed("closure", e.what()));
        }
    }
    return rep.emit(out, err);
}

int cmd_extensions(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    const auto ds = require_structure(l);
    const auto& u = ds.universe();
    const auto report = enumerate_extensions(ds, read_state(u, opt));
    Report rep("extensions", opt);
    rep.data()["state"] = set_json(u, report.state);
    json exts = json::array();
    for (const auto& e : report.extensions) {
        json trace = json::array();
        for (const auto& f : e.trace) trace.push_back(json{{"step", f.step}, {"rule", ds.format_rule(f.rule)}});
        exts.push_back(json{{"set", set_json(u, e.set)}, {"depth", e.depth}, {"trace", trace}});
        rep.line(u.format(e.set) + " (depth " + std::to_string(e.depth) + ")");
        if (opt.trace) {
            for (const auto& f : e.trace) rep.line("  step " + std::to_string(f.step) + ": " + ds.format_rule(f.rule));
        }
    }
    rep.data()["extensions"] = std::move(exts);
    return rep.emit(out, err);
}

int cmd_consequence(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    const auto nm = source_relation(l.file);
    const auto& u = nm.universe();
    const TokenSet x = read_state(u, opt);
    if (!nm.con().contains(x)) throw UsageError("premise " + u.format(x) + " is inconsistent");
    const TokenSet t = tilde(nm, x);
    Report rep("consequence", opt);
    rep.data()["premise"] = set_json(u, x);
    rep.data()["consequences"] = set_json(u, t);
    rep.line(u.format(t));
    return rep.emit(out, err);
}

int cmd_axioms(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    const auto nm = source_relation(l.file);
    const auto& u = nm.universe();
    Report rep("axioms", opt);
    json table = json::array();
    for (TokenSet x : nm.premises()) {
        const TokenSet t = tilde(nm, x);
        rep.line(u.format(x) + " |~ " + u.format(t));
        table.push_back(json{{"premise", set_json(u, x)}, {"consequences", set_json(u, t)}});
    }
    rep.data()["relation"] = std::move(table);
    const auto verdict = check_axioms(nm);
    for (std::size_t i = 0; i + 1 < verdict.axioms.size(); ++i) rep.add(renamed(verdict.axioms[i], "axiom "));
    const auto& cm = verdict.cautious_monotony();
    rep.data()["cumulative"] = cm.passed;
    rep.data()["cautious_monotony"] = verdict_json(cm);
    const int code = rep.emit(out, err);
    if (!opt.json) {
        out << (cm.passed ? "PASS  " : "FAIL  ") << cm.name << "  (" << cm.cases << " cases)\n";
        if (cm.witness) out << "      witness " << cm.witness->tuple() << ": " << cm.witness->explanation << "\n";
    }
    return code;
}

int cmd_represent(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    const auto nm = source_relation(l.file);
    std::optional<RepresentationResult> result;
    try {
        result = opt.cumulative ? build_cumulative(nm) : build_plain(nm);
    } catch (const ModelError& e) {
        Report rep("represent", opt);
        rep.add(failed("representation", e.what()));
        return rep.emit(out, err);
    }
    const auto& r = *result;
    const auto& su = r.source_universe();
    StructureFile file = to_file(r.structure());
    file.comments.push_back(std::string{to_string(r.mode())} + " representation of " + opt.file);
    for (const auto& label : r.labels()) {
        file.comments.push_back(label.name + " labels " + su.format(label.source) + ", consequences " +
                                su.format(tilde(nm, label.source)));
    }
    const std::string text = serialize(file);

    Report rep("represent", opt);
    const auto& st = r.stats();
    rep.data()["mode"] = to_string(r.mode());
    rep.data()["tokens"] = st.tokens;
    rep.data()["labels"] = r.labels().size();
    rep.data()["rules"] = st.rules;
    rep.data()["max_depth"] = st.max_depth;
    rep.line("mode: " + std::string{to_string(r.mode())});
    rep.line("tokens: " + std::to_string(st.tokens) + " (" + std::to_string(su.size()) + " source, " +
             std::to_string(r.labels().size()) + " labels)");
    rep.line("rules: " + std::to_string(st.rules));
    rep.line("max depth: " + std::to_string(st.max_depth));
    if (opt.output.empty()) {
        out << text;
        std::ostringstream stats;
        const int code = rep.emit(stats, err);
        err << stats.str();
        return code;
    }
    std::ofstream o(opt.output, std::ios::binary);
    if (!o) throw UsageError("cannot write '" + opt.output + "'");
    o << text;
    if (!o) throw UsageError("failed writing '" + opt.output + "'");
    rep.data()["output"] = opt.output;
    rep.line("wrote " + opt.output);
    return rep.emit(out, err);
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    Report rep("verify", opt);
    std::vector<std::string> notes;
    if (l.file.kind() == FileKind::default_structure) {
        rep.data()["kind"] = "default structure";
        const auto sys = file_system(l.file);
        auto laws = system_laws(sys);
        const bool lawful = laws.passed;
        rep.add(std::move(laws));
        if (lawful) {
            const auto ds = file_default_structure(l.file);
            rep.add_all(structure_checks(ds, opt.cumulative));
            if (!opt.against.empty()) {
                const auto src = load(opt.against, opt, err);
                try {
                    rep.add(compare_against(ds, source_relation(src.file)));
                } catch (const ModelError& e) {
                    rep.add(failed("agreement with source relation", e.what()));
                }
            }
        }
        if (opt.samples) {
            StructureShape shape;
            shape.max_tokens = 5;
            shape.max_rules = 6;
            shape.entailment_percent = 30;
            rep.add(random_suite("random default structures", opt, [&](Rng& rng) {
                return structure_checks(random_default_structure(rng, shape), false);
            }));
        }
    } else {
        rep.data()["kind"] = "abstract system";
        if (!opt.against.empty()) throw UsageError("--against expects a default-structure FILE");
        try {
            rep.add_all(relation_checks(file_abstract_system(l.file), opt.cumulative, &notes));
        } catch (const ModelError& e) {
            rep.add(failed("closure", e.what()));
        }
        if (opt.samples) {
            rep.add(random_suite("random abstract systems", opt, [&](Rng& rng) {
                return relation_checks(random_abstract_system(rng, SystemShape{}), false, nullptr);
            }));
            if (opt.cumulative) {
                rep.add(random_suite("random cumulative systems", opt, [&](Rng& rng) {
                    return relation_checks(random_cumulative_system(rng, SystemShape{}), true, nullptr);
                }));
            }
        }
    }
    for (const auto& n : notes) rep.note(n);
    return rep.emit(out, err);
}

int cmd_kripke(const Options& opt, std::ostream& out, std::ostream& err)
{
    const auto l = load(opt.file, opt, err);
    const auto ds = require_structure(l);
    const auto& u = ds.universe();
    const auto g = kripke_graph(ds);
    if (opt.dot) {
        out << g.to_dot(u);
        return ok;
    }
    Report rep("kripke", opt);
    json nodes = json::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        nodes.push_back(json{{"id", i}, {"set", set_json(u, g.nodes[i])}, {"stable", static_cast<bool>(g.stable[i])}});
        rep.line(u.format(g.nodes[i]) + (g.stable[i] ? " (stable)" : ""));
    }
    json edges = json::array();
    for (const auto& [from, to] : g.edges) {
        edges.push_back(json::array({from, to}));
        rep.line(u.format(g.nodes[from]) + " -> " + u.format(g.nodes[to]));
    }
    rep.data()["nodes"] = std::move(nodes);
    rep.data()["edges"] = std::move(edges);
    return rep.emit(out, err);
}

void common(CLI::App* sub, Options& opt)
{
    sub->add_option("file", opt.file, "Structure file")->required();
    sub->add_flag("--json", opt.json, "Machine-readable report");
    sub->add_option("--max-tokens", opt.max_tokens, "Refuse files with more tokens than this")->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Default information structures: extensions, nonmonotonic consequence and representation", "dks"};
    app.require_subcommand(1);
    Options opt;

    auto* check = app.add_subcommand("check", "Validate the laws of the file's information system or abstract system");
    common(check, opt);

    auto* extensions = app.add_subcommand("extensions", "List the extensions of a state");
    common(extensions, opt);
    extensions->add_option("--state", opt.state, "Comma-separated tokens of the state (default: empty)");
    extensions->add_flag("--trace", opt.trace, "Show the rules fired at each step");

    auto* consequence = app.add_subcommand("consequence", "Print everything a premise nonmonotonically entails");
    common(consequence, opt);
    consequence->add_option("--state", opt.state, "Comma-separated tokens of the premise (default: empty)");

    auto* axioms = app.add_subcommand("axioms", "Print the consequence table and check its axioms");
    common(axioms, opt);

    auto* represent = app.add_subcommand("represent", "Build a default structure representing the relation");
    common(represent, opt);
    represent->add_flag("--cumulative", opt.cumulative, "Unique-extension construction (needs cautious monotony)");
    represent->add_option("-o,--output", opt.output, "Output structure file (default: standard output)");

    auto* verify = app.add_subcommand("verify", "Run every applicable verifier; exit 0 only if all pass");
    common(verify, opt);
    verify->add_flag("--cumulative", opt.cumulative, "Require cautious monotony");
    verify->add_option("--seed", opt.seed, "Seed for the random samples")->capture_default_str();
    verify->add_option("--samples", opt.samples, "Number of random instances to check as well")->capture_default_str();
    verify->add_option("--against", opt.against, "Abstract-system file the structure should represent");

    auto* kripke = app.add_subcommand("kripke", "Print the Kripke structure of states and extensions");
    common(kripke, opt);
    kripke->add_flag("--dot", opt.dot, "Emit Graphviz DOT");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*check) return cmd_check(opt, out, err);
        if (*extensions) return cmd_extensions(opt, out, err);
        if (*consequence) return cmd_consequence(opt, out, err);
        if (*axioms) return cmd_axioms(opt, out, err);
        if (*represent) return cmd_represent(opt, out, err);
        if (*verify) return cmd_verify(opt, out, err);
        if (*kripke) return cmd_kripke(opt, out, err);
    } catch (const ParseError& e) {
        err << "dks: " << opt.file << ":" << e.pos().line << ":" << e.pos().column << ": " << e.message() << "\n";
        return usage_error;
    } catch (const InvariantBreach& e) {
        err << "dks: internal invariant breached: " << e.what() << "\n";
        return invariant_breach;
    } catch (const Error& e) {
        err << "dks: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}

} // namespace dks::cli
