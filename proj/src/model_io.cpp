#include "bnet/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bnet {

namespace {

using json = nlohmann::json;

void reject_unknown_fields(const json& object, std::initializer_list<std::string_view> allowed,
                           const std::string& locus) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        bool known = false;
        for (auto name : allowed)
            known = known || it.key() == name;
        if (!known)
            throw Error(ErrorCode::schema_error, "unknown field '" + it.key() + "' in " + locus, locus);
    }
}

const json& require(const json& object, const char* field, const std::string& locus) {
    auto it = object.find(field);
    if (it == object.end())
        throw Error(ErrorCode::schema_error, "missing field '" + std::string(field) + "' in " + locus, locus);
    return *it;
}

std::string require_string(const json& value, const std::string& locus) {
    if (!value.is_string())
        throw Error(ErrorCode::schema_error, locus + " must be a string", locus);
    return value.get<std::string>();
}

std::vector<std::string> require_strings(const json& value, const std::string& locus) {
    if (!value.is_array())
        throw Error(ErrorCode::schema_error, locus + " must be an array of strings", locus);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i)
        out.push_back(require_string(value[i], locus + "[" + std::to_string(i) + "]"));
    return out;
}

std::string dump_string(const std::string& s) { return json(s).dump(); }

std::string dump_number(double p) { return json(p).dump(); }

std::string dump_strings(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += dump_string(items[i]);
    }
    return out + "]";
}

}  // namespace

NetworkDefinition parse_model_definition(std::string_view document, bool rows_optional) {
    json root;
    try {
        root = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& err) {
        throw Error(ErrorCode::parse_error, std::string("malformed model document: ") + err.what(),
                    "byte " + std::to_string(err.byte));
    }
    if (!root.is_object())
        throw Error(ErrorCode::schema_error, "model document must be a JSON object", "$");
    reject_unknown_fields(root, {"name", "description", "variables", "cpts"}, "$");

    NetworkDefinition def;
    def.name = require_string(require(root, "name", "$"), "$.name");
    if (auto it = root.find("description"); it != root.end())
        def.description = require_string(*it, "$.description");

    const json& variables = require(root, "variables", "$");
    if (!variables.is_array())
        throw Error(ErrorCode::schema_error, "$.variables must be an array", "$.variables");
    for (std::size_t i = 0; i < variables.size(); ++i) {
        std::string locus = "$.variables[" + std::to_string(i) + "]";
        const json& v = variables[i];
        if (!v.is_object())
            throw Error(ErrorCode::schema_error, locus + " must be an object", locus);
        reject_unknown_fields(v, {"name", "states"}, locus);
        Variable var;
        var.name = require_string(require(v, "name", locus), locus + ".name");
        var.states = require_strings(require(v, "states", locus), locus + ".states");
        def.structure.variables.push_back(std::move(var));
    }

    std::set<std::string> declared;
    for (const auto& v : def.structure.variables)
        declared.insert(v.name);

    const json& cpts = require(root, "cpts", "$");
    if (!cpts.is_array())
        throw Error(ErrorCode::schema_error, "$.cpts must be an array", "$.cpts");
    for (std::size_t i = 0; i < cpts.size(); ++i) {
        std::string locus = "$.cpts[" + std::to_string(i) + "]";
        const json& c = cpts[i];
        if (!c.is_object())
            throw Error(ErrorCode::schema_error, locus + " must be an object", locus);
        reject_unknown_fields(c, {"child", "parents", "rows"}, locus);
        Cpt cpt;
        cpt.child = require_string(require(c, "child", locus), locus + ".child");
        if (!declared.contains(cpt.child))
            throw Error(ErrorCode::schema_error, "CPT child '" + cpt.child + "' is not a declared variable",
                        cpt.child);
        cpt.parents = require_strings(require(c, "parents", locus), locus + ".parents");
        for (const auto& p : cpt.parents) {
            if (!declared.contains(p))
                throw Error(ErrorCode::schema_error,
                            "CPT of '" + cpt.child + "' names undeclared parent '" + p + "'", p);
        }
        auto rows_it = c.find("rows");
        if (rows_it == c.end()) {
            if (!rows_optional)
                throw Error(ErrorCode::schema_error, "missing field 'rows' in " + locus, locus);
        } else {
            if (!rows_it->is_array())
                throw Error(ErrorCode::schema_error, locus + ".rows must be an array", locus + ".rows");
            for (std::size_t r = 0; r < rows_it->size(); ++r) {
                const json& row = (*rows_it)[r];
                std::string row_locus = locus + ".rows[" + std::to_string(r) + "]";
                if (!row.is_array())
                    throw Error(ErrorCode::schema_error, row_locus + " must be an array of numbers", row_locus);
                std::vector<double> values;
                for (const auto& p : row) {
                    if (!p.is_number())
                        throw Error(ErrorCode::schema_error, row_locus + " must be an array of numbers",
                                    row_locus);
                    values.push_back(p.get<double>());
                }
                cpt.rows.push_back(std::move(values));
            }
        }
        for (const auto& p : cpt.parents)
            def.structure.edges.push_back({p, cpt.child});
        def.cpts.push_back(std::move(cpt));
    }
    return def;
}

BayesianNetwork load_model(std::string_view document) {
    return BayesianNetwork::create(parse_model_definition(document));
}

BayesianNetwork load_model_file(const std::filesystem::path& path) { return load_model(read_text_file(path)); }

NetworkStructure load_structure(std::string_view document) {
    auto def = parse_model_definition(document, true);
    for (const auto& v : def.structure.variables) {
        int count = 0;
        for (const auto& c : def.cpts)
            count += c.child == v.name;
        if (count > 1)
            throw Error(ErrorCode::schema_error, "variable '" + v.name + "' is listed as a child more than once",
                        v.name);
    }
    return def.structure;
}

std::string save_model(const BayesianNetwork& net) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"name\": " << dump_string(net.name()) << ",\n";
    if (!net.description().empty())
        out << "  \"description\": " << dump_string(net.description()) << ",\n";
    out << "  \"variables\": [\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& v = net.variable(i);
        out << "    {\"name\": " << dump_string(v.name) << ", \"states\": " << dump_strings(v.states) << "}"
            << (i + 1 < net.size() ? "," : "") << "\n";
    }
    out << "  ],\n";
    out << "  \"cpts\": [\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& cpt = net.cpt(i);
        out << "    {\n";
        out << "      \"child\": " << dump_string(cpt.child) << ",\n";
        out << "      \"parents\": " << dump_strings(cpt.parents) << ",\n";
        out << "      \"rows\": [\n";
        for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
            out << "        [";
            for (std::size_t k = 0; k < cpt.rows[r].size(); ++k)
                out << (k ? ", " : "") << dump_number(cpt.rows[r][k]);
            out << "]" << (r + 1 < cpt.rows.size() ? "," : "") << "\n";
        }
        out << "      ]\n";
        out << "    }" << (i + 1 < net.size() ? "," : "") << "\n";
    }
    out << "  ]\n";
    out << "}\n";
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::usage_error, "cannot read '" + path.string() + "'", path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace bnet
