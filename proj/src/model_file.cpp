#include "confound/model_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "confound/errors.hpp"

namespace confound {

using nlohmann::json;

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

const json& member(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where, std::string("missing member '") + key + "'");
    return *it;
}

void only_members(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, _] : obj.items()) {
        bool known = false;
        for (const char* allowed : keys) known = known || k == allowed;
        if (!known) throw ParseError(where, "unexpected member '" + k + "'");
    }
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ParseError(where, "expected a string");
    return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where, "expected an array");
    return v;
}

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

DiscreteBayesNet parse_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, false);
    } catch (const json::parse_error& e) {
        throw ParseError(line_col(text, e.byte > 0 ? e.byte - 1 : 0), "malformed JSON");
    }
    if (!doc.is_object()) throw ParseError("document", "expected a JSON object");
    only_members(doc, {"variables", "edges", "cpts"}, "document");

    // variables
    std::vector<Variable> vars;
    std::set<std::string> names;
    const json& jvars = as_array(member(doc, "variables", "document"), "variables");
    for (std::size_t i = 0; i < jvars.size(); ++i) {
        const std::string where = idx("variables", i);
        const json& jv = jvars[i];
        if (!jv.is_object()) throw ParseError(where, "expected an object");
        only_members(jv, {"name", "states"}, where);
        Variable v;
        v.name = as_string(member(jv, "name", where), where + ".name");
        if (v.name.empty()) throw ParseError(where + ".name", "empty variable name");
        if (!names.insert(v.name).second) throw ParseError(where + ".name", "duplicate variable '" + v.name + "'");
        const json& jstates = as_array(member(jv, "states", where), where + ".states");
        std::set<std::string> labels;
        for (std::size_t s = 0; s < jstates.size(); ++s) {
            auto label = as_string(jstates[s], idx(where + ".states", s));
            if (!labels.insert(label).second)
                throw ParseError(idx(where + ".states", s), "duplicate state '" + label + "' of '" + v.name + "'");
            v.states.push_back(std::move(label));
        }
        if (v.states.size() < 2) throw ParseError(where + ".states", "need at least two states");
        vars.push_back(std::move(v));
    }

    // edges
    std::set<std::pair<std::string, std::string>> edges;
    const json& jedges = as_array(member(doc, "edges", "document"), "edges");
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        const std::string where = idx("edges", i);
        const json& je = as_array(jedges[i], where);
        if (je.size() != 2) throw ParseError(where, "an edge is a [parent, child] pair");
        auto parent = as_string(je[0], where);
        auto child = as_string(je[1], where);
        for (const auto& n : {parent, child})
            if (!names.count(n)) throw ParseError(where, "unknown variable '" + n + "'");
        if (!edges.emplace(parent, child).second)
            throw ParseError(where, "duplicate edge " + parent + " -> " + child);
    }

    // cpts
    const json& jcpts = member(doc, "cpts", "document");
    if (!jcpts.is_object()) throw ParseError("cpts", "expected an object");
    for (const auto& [key, _] : jcpts.items())
        if (!names.count(key)) throw ParseError("cpts." + key, "CPT for unknown variable '" + key + "'");

    std::map<std::string, std::size_t> card;
    for (const auto& v : vars) card[v.name] = v.cardinality();

    std::vector<Cpt> cpts;
    std::map<std::string, NodeSet> parents;
    std::size_t edges_used = 0;
    for (const auto& v : vars) {
        const std::string where = "cpts." + v.name;
        auto it = jcpts.find(v.name);
        if (it == jcpts.end()) throw ParseError(where, "missing CPT for '" + v.name + "'");
        const json& jc = *it;
        if (!jc.is_object()) throw ParseError(where, "expected an object");
        only_members(jc, {"parents", "table"}, where);

        Cpt cpt{v.name, {}, {}};
        const json& jp = as_array(member(jc, "parents", where), where + ".parents");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < jp.size(); ++i) {
            auto p = as_string(jp[i], idx(where + ".parents", i));
            if (!names.count(p)) throw ParseError(idx(where + ".parents", i), "unknown variable '" + p + "'");
            if (!seen.insert(p).second) throw ParseError(idx(where + ".parents", i), "duplicate parent '" + p + "'");
            if (!edges.count({p, v.name}))
                throw ParseError(idx(where + ".parents", i),
                                 "parent mismatch: no edge " + p + " -> " + v.name + " in edges");
            cpt.parents.push_back(std::move(p));
        }
        edges_used += cpt.parents.size();

        std::size_t rows = 1;
        for (const auto& p : cpt.parents) rows *= card[p];
        const json& jt = as_array(member(jc, "table", where), where + ".table");
        if (jt.size() != rows)
            throw ParseError(where + ".table", "CPT '" + v.name + "' has " + std::to_string(jt.size()) +
                                                   " rows, expected " + std::to_string(rows));
        for (std::size_t r = 0; r < jt.size(); ++r) {
            const std::string rw = idx(where + ".table", r);
            const json& jrow = as_array(jt[r], rw);
            if (jrow.size() != v.cardinality())
                throw ParseError(rw, "CPT '" + v.name + "' row has " + std::to_string(jrow.size()) +
                                         " entries, expected " + std::to_string(v.cardinality()));
            std::vector<double> row;
            for (std::size_t s = 0; s < jrow.size(); ++s) {
                if (!jrow[s].is_number()) throw ParseError(idx(rw, s), "expected a number");
                row.push_back(jrow[s].get<double>());
            }
            cpt.table.push_back(std::move(row));
        }
        parents[v.name] = cpt.parents;
        cpts.push_back(std::move(cpt));
    }
    if (edges_used != edges.size())
        throw ParseError("edges", "parent mismatch: an edge is not listed among its child's CPT parents");

    std::vector<std::string> order;
    for (const auto& v : vars) order.push_back(v.name);
    DiscreteBayesNet net(Dag(order, parents), std::move(vars), std::move(cpts));
    validate(net);
    return net;
}

std::string serialize_model(const DiscreteBayesNet& net) {
    auto str = [](const std::string& s) { return json(s).dump(); };
    auto num = [](double v) { return json(v).dump(); };
    std::ostringstream out;
    const auto vars = net.variables();

    out << "{\n  \"variables\": [";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        out << (i ? ",\n" : "\n") << "    {\"name\": " << str(vars[i].name) << ", \"states\": [";
        for (std::size_t s = 0; s < vars[i].states.size(); ++s) out << (s ? ", " : "") << str(vars[i].states[s]);
        out << "]}";
    }
    out << "\n  ],\n  \"edges\": [";
    bool first = true;
    for (const auto& v : vars)
        for (const auto& p : net.cpt(v.name).parents) {
            out << (first ? "\n" : ",\n") << "    [" << str(p) << ", " << str(v.name) << "]";
            first = false;
        }
    out << (first ? "],\n" : "\n  ],\n") << "  \"cpts\": {";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const Cpt& c = net.cpt(vars[i].name);
        out << (i ? ",\n" : "\n") << "    " << str(c.child) << ": {\"parents\": [";
        for (std::size_t p = 0; p < c.parents.size(); ++p) out << (p ? ", " : "") << str(c.parents[p]);
        out << "], \"table\": [";
        for (std::size_t r = 0; r < c.table.size(); ++r) {
            out << (r ? ", [" : "[");
            for (std::size_t s = 0; s < c.table[r].size(); ++s) out << (s ? ", " : "") << num(c.table[r][s]);
            out << "]";
        }
        out << "]}";
    }
    out << "\n  }\n}\n";
    return out.str();
}

DiscreteBayesNet load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), "cannot open model file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_model(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ":" + e.location(), std::string(e.what()).substr(e.location().size() + 2));
    }
}

}  // namespace confound
