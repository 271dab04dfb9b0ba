#include "seqsynth/spec_io.hpp"

#include "seqsynth/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace seqsynth {

namespace {

std::size_t line_at(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the first occurrence of a quoted string after `from`, or of `from` itself.
std::size_t line_of_string(std::string_view text, const std::string& s, std::size_t from = 0)
{
    const std::string quoted = Json(s).dump();
    auto pos = text.find(quoted, from);
    return line_at(text, pos == std::string_view::npos ? from : pos);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg)
{
    throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + msg);
}

Alphabet parse_alphabet(const nlohmann::json& j, std::string_view text, const char* key)
{
    const auto line = line_of_string(text, key);
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
        parse_fail(line, std::string(key) + " must be a non-empty list of symbols");
    std::vector<Symbol> syms;
    for (const auto& s : j[key]) {
        if (!s.is_string() || s.get<std::string>().size() != 1)
            parse_fail(line, std::string(key) + " entries must be single-character strings");
        syms.push_back(s.get<std::string>()[0]);
    }
    auto sorted = syms;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        parse_fail(line, std::string(key) + " lists a symbol twice");
    return Alphabet(std::move(syms));
}

std::string get_string(const nlohmann::json& j, const char* key, std::size_t line, const std::string& where)
{
    if (!j.contains(key) || !j[key].is_string()) parse_fail(line, where + ": missing string field '" + key + "'");
    return j[key].get<std::string>();
}

TransducerSpec parse_block(const nlohmann::json& p, const Alphabet& in, const Alphabet& out, bool multi_initial,
                           std::size_t line, const std::string& where)
{
    if (!p.is_object()) parse_fail(line, where + " must be an object");
    TransducerSpec spec{in, out, {}, {}, {}, {}};
    if (!p.contains("states") || !p["states"].is_array()) parse_fail(line, where + ": missing list 'states'");
    for (const auto& s : p["states"]) {
        if (!s.is_string()) parse_fail(line, where + ": state names must be strings");
        spec.states.push_back(s.get<std::string>());
    }
    if (multi_initial) {
        if (!p.contains("initials") || !p["initials"].is_array()) parse_fail(line, where + ": missing list 'initials'");
        for (const auto& s : p["initials"]) {
            if (!s.is_string()) parse_fail(line, where + ": initial states must be strings");
            spec.initials.push_back(s.get<std::string>());
        }
    } else {
        spec.initials.push_back(get_string(p, "initial", line, where));
    }
    if (p.contains("finals")) {
        if (!p["finals"].is_object()) parse_fail(line, where + ": 'finals' must map states to terminal outputs");
        for (const auto& [name, w] : p["finals"].items()) {
            if (!w.is_string()) parse_fail(line, where + ": terminal output of " + name + " must be a string");
            spec.finals.emplace_back(name, w.get<std::string>());
        }
    }
    if (p.contains("transitions")) {
        if (!p["transitions"].is_array()) parse_fail(line, where + ": 'transitions' must be a list");
        for (const auto& tr : p["transitions"]) {
            if (!tr.is_object()) parse_fail(line, where + ": transitions must be objects");
            auto sym = get_string(tr, "in", line, where);
            if (sym.size() != 1) parse_fail(line, where + ": transition input must be a single symbol");
            spec.transitions.push_back({get_string(tr, "from", line, where), sym[0], get_string(tr, "out", line, where),
                                        get_string(tr, "to", line, where)});
        }
    }
    return spec;
}

Json alphabet_json(const Alphabet& a)
{
    Json arr = Json::array();
    for (Symbol s : a.symbols()) arr.push_back(std::string(1, s));
    return arr;
}

Json block_json(const Transducer& t, const std::string* name)
{
    Json p = Json::object();
    if (name) p["name"] = *name;
    Json states = Json::array();
    for (const auto& s : t.input().state_names()) states.push_back(s);
    p["states"] = std::move(states);
    if (name) {
        p["initial"] = t.name(t.input().initials().front());
    } else {
        Json init = Json::array();
        for (auto q : t.input().initials()) init.push_back(t.name(q));
        p["initials"] = std::move(init);
    }
    Json finals = Json::object();
    for (auto q : t.input().finals()) finals[t.name(q)] = t.terminal(q);
    p["finals"] = std::move(finals);
    Json trans = Json::array();
    for (std::size_t i = 0; i < t.input().transitions().size(); ++i) {
        const auto& tr = t.input().transitions()[i];
        Json e = Json::object();
        e["from"] = t.name(tr.from);
        e["in"] = std::string(1, tr.symbol);
        e["out"] = t.output(i);
        e["to"] = t.name(tr.to);
        trans.push_back(std::move(e));
    }
    p["transitions"] = std::move(trans);
    return p;
}

Json header(const Alphabet& in, const Alphabet& out)
{
    Json j = Json::object();
    j["format"] = format_version;
    j["input_alphabet"] = alphabet_json(in);
    j["output_alphabet"] = alphabet_json(out);
    return j;
}

Json index_list(const std::vector<std::size_t>& v)
{
    Json arr = Json::array();
    for (auto i : v) arr.push_back(i + 1);
    return arr;
}

} // namespace

SpecFile parse_spec(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail(line_at(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
    }
    if (!j.is_object()) parse_fail(1, "top level must be an object");
    if (j.contains("format") && (!j["format"].is_number_integer() || j["format"].get<int>() != format_version))
        parse_fail(line_of_string(text, "format"), "unsupported format version");

    const auto in = parse_alphabet(j, text, "input_alphabet");
    const auto out = parse_alphabet(j, text, "output_alphabet");

    SpecFile file;
    if (j.contains("parts")) {
        const auto parts_line = line_of_string(text, "parts");
        if (!j["parts"].is_array() || j["parts"].empty()) parse_fail(parts_line, "'parts' must be a non-empty list");
        std::vector<SequentialTransducer> parts;
        std::vector<std::string> names;
        std::size_t cursor = text.find("\"parts\"");
        for (std::size_t i = 0; i < j["parts"].size(); ++i) {
            const auto& p = j["parts"][i];
            std::string name = "part" + std::to_string(i + 1);
            if (p.is_object() && p.contains("name") && p["name"].is_string()) name = p["name"].get<std::string>();
            const auto pos = text.find(Json(name).dump(), cursor);
            const auto line = line_at(text, pos == std::string_view::npos ? cursor : pos);
            if (pos != std::string_view::npos) cursor = pos + 1;
            const std::string where = "part " + name;
            auto spec = parse_block(p, in, out, false, line, where);
            Transducer t;
            try {
                t = Transducer(spec);
            } catch (const Error& e) {
                parse_fail(line, where + ": " + e.what());
            }
            try {
                parts.emplace_back(std::move(t));
            } catch (const Error&) {
                parse_fail(line, "part " + name + " not sequential");
            }
            names.push_back(name);
        }
        try {
            file.multi = MultiSequentialTransducer(std::move(parts), std::move(names));
        } catch (const Error& e) {
            parse_fail(parts_line, e.what());
        }
    } else if (j.contains("transducer")) {
        const auto line = line_of_string(text, "transducer");
        auto spec = parse_block(j["transducer"], in, out, true, line, "transducer");
        try {
            file.general = Transducer(spec);
        } catch (const Error& e) {
            parse_fail(line, std::string("transducer: ") + e.what());
        }
    } else {
        parse_fail(1, "expected a 'parts' list or a 'transducer' block");
    }
    return file;
}

SpecFile load_spec(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::parse_error, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

Json spec_to_json(const MultiSequentialTransducer& t)
{
    Json j = header(t.input_alphabet(), t.output_alphabet());
    Json parts = Json::array();
    for (std::size_t i = 0; i < t.num_parts(); ++i) parts.push_back(block_json(t.part(i).transducer(), &t.part_name(i)));
    j["parts"] = std::move(parts);
    return j;
}

Json spec_to_json(const Transducer& t)
{
    Json j = header(t.input_alphabet(), t.output_alphabet());
    j["transducer"] = block_json(t, nullptr);
    return j;
}

Json realiser_to_json(const SequentialTransducer& r, const std::string& name)
{
    const auto& t = r.transducer();
    Json j = header(t.input_alphabet(), t.output_alphabet());
    j["parts"] = Json::array({block_json(t, &name)});
    return j;
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

Json to_json(const CriticalCertificate& c, const MultiSequentialTransducer& t)
{
    Json j = Json::object();
    j["parts"] = index_list(c.parts);
    Json start = Json::array();
    for (auto q : c.start) start.push_back(t.flat().name(q));
    j["start"] = std::move(start);
    j["prefix"] = c.prefix;
    Json fails = Json::array();
    for (const auto& f : c.failures) {
        Json e = Json::object();
        e["subset"] = index_list(f.subset);
        e["condition"] = f.condition;
        if (f.counterexample) e["counterexample"] = *f.counterexample;
        if (f.nested) e["nested"] = to_json(*f.nested, t);
        fails.push_back(std::move(e));
    }
    j["failures"] = std::move(fails);
    return j;
}

Json to_json(const CriticalLoop& l, const MultiSequentialTransducer& t)
{
    Json j = Json::object();
    j["u"] = l.u;
    j["v"] = l.v;
    j["parts"] = index_list(l.parts);
    Json runs = Json::array();
    for (std::size_t k = 0; k < l.parts.size(); ++k) {
        Json r = Json::object();
        r["part"] = l.parts[k] + 1;
        r["state"] = t.part(l.parts[k]).transducer().name(l.state[k]);
        r["alpha"] = l.alpha[k];
        r["beta"] = l.beta[k];
        runs.push_back(std::move(r));
    }
    j["runs"] = std::move(runs);
    return j;
}

Json to_json(const WitnessNode& w, const MultiSequentialTransducer& t)
{
    Json j = Json::object();
    j["u"] = w.u;
    j["v"] = w.v;
    j["parts"] = index_list(w.parts);
    j["dead"] = index_list(w.dead);
    Json looping = Json::array();
    for (std::size_t k = 0; k < w.looping.size(); ++k) {
        Json r = Json::object();
        r["part"] = w.looping[k] + 1;
        r["state"] = t.part(w.looping[k]).transducer().name(w.state[k]);
        r["alpha"] = w.alpha[k];
        r["beta"] = w.beta[k];
        looping.push_back(std::move(r));
    }
    j["looping"] = std::move(looping);
    if (w.leaf_word) j["leaf_word"] = *w.leaf_word;
    Json children = Json::array();
    for (const auto& c : w.children) children.push_back(to_json(c, t));
    j["children"] = std::move(children);
    return j;
}

WitnessNode witness_from_json(const Json& j, const MultiSequentialTransducer& t)
{
    auto bad = [](const std::string& m) { return Error(ErrorKind::parse_error, "witness: " + m); };
    auto indices = [&](const Json& arr) {
        std::vector<std::size_t> out;
        for (const auto& x : arr) {
            auto i = x.get<std::size_t>();
            if (i == 0 || i > t.num_parts()) throw bad("part index out of range");
            out.push_back(i - 1);
        }
        return out;
    };
    try {
        WitnessNode w;
        w.u = j.at("u").get<std::string>();
        w.v = j.at("v").get<std::string>();
        w.parts = indices(j.at("parts"));
        w.dead = indices(j.at("dead"));
        for (const auto& r : j.at("looping")) {
            auto i = r.at("part").get<std::size_t>();
            if (i == 0 || i > t.num_parts()) throw bad("part index out of range");
            auto q = t.part(i - 1).transducer().input().find_state(r.at("state").get<std::string>());
            if (!q) throw bad("unknown state");
            w.looping.push_back(i - 1);
            w.state.push_back(*q);
            w.alpha.push_back(r.at("alpha").get<std::string>());
            w.beta.push_back(r.at("beta").get<std::string>());
        }
        if (j.contains("leaf_word")) w.leaf_word = j["leaf_word"].get<std::string>();
        for (const auto& c : j.at("children")) w.children.push_back(witness_from_json(c, t));
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw bad(e.what());
    }
}

Json to_json(const GameStats& s)
{
    Json j = Json::object();
    j["k"] = s.bound;
    j["adam_vertices"] = s.adam_vertices;
    j["eve_vertices"] = s.eve_vertices;
    j["edges"] = s.edges;
    j["unsafe"] = s.unsafe;
    j["winning_region"] = s.winning_region;
    j["eve_wins"] = s.eve_wins;
    return j;
}

Json to_json(const VerificationReport& r)
{
    Json j = Json::object();
    j["format"] = format_version;
    j["ok"] = r.ok();
    j["domain_ok"] = r.domain.ok;
    j["domain_counterexample"] = r.domain.counterexample ? Json(*r.domain.counterexample) : Json();
    j["membership_ok"] = r.membership.ok;
    j["membership_failing"] = r.membership.failing ? Json(*r.membership.failing) : Json();
    j["membership_reason"] = r.membership.reason;
    j["words_checked"] = r.membership.words_checked;
    Json h = Json::array();
    for (const auto& [len, feasible] : r.horizon) {
        Json e = Json::object();
        e["L"] = len;
        e["feasible"] = feasible;
        h.push_back(std::move(e));
    }
    j["horizon"] = std::move(h);
    return j;
}

} // namespace seqsynth
