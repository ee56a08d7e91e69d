#include "bnet/api.hpp"

#include <cmath>
#include <cstdio>

#include "bnet/inference.hpp"
#include "bnet/model_io.hpp"

namespace bnet::api {

namespace {

std::string format_fixed(double value, int precision) {
    if (!std::isfinite(value))
        return "null";
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, "%.*f", precision, value);
    std::string text(buffer);
    if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos)
        text.erase(0, 1);
    return text;
}

void render_into(std::string& out, const ordered_json& value, int precision) {
    switch (value.type()) {
        case ordered_json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!first)
                    out += ',';
                first = false;
                out += ordered_json(it.key()).dump();
                out += ':';
                render_into(out, it.value(), precision);
            }
            out += '}';
            break;
        }
        case ordered_json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i)
                    out += ',';
                render_into(out, value[i], precision);
            }
            out += ']';
            break;
        }
        case ordered_json::value_t::number_float:
            out += format_fixed(value.get<double>(), precision);
            break;
        default:
            out += value.dump();
    }
}

void check_fields(const json& request, std::initializer_list<std::string_view> allowed) {
    if (!request.is_object())
        throw Error(ErrorCode::schema_error, "request body must be a JSON object", "$");
    for (auto it = request.begin(); it != request.end(); ++it) {
        bool known = false;
        for (auto name : allowed)
            known = known || it.key() == name;
        if (!known)
            throw Error(ErrorCode::schema_error, "unknown request field '" + it.key() + "'", it.key());
    }
}

const json& required(const json& request, const char* field) {
    auto it = request.find(field);
    if (it == request.end())
        throw Error(ErrorCode::schema_error, std::string("missing request field '") + field + "'", field);
    return *it;
}

template <class B>
B bindings_from(const json& request, const char* field) {
    B out;
    auto it = request.find(field);
    if (it == request.end() || it->is_null())
        return out;
    if (!it->is_object())
        throw Error(ErrorCode::schema_error, std::string("'") + field + "' must be an object of strings", field);
    for (auto b = it->begin(); b != it->end(); ++b) {
        if (!b.value().is_string())
            throw Error(ErrorCode::schema_error, std::string("'") + field + "." + b.key() + "' must be a string",
                        b.key());
        out.bind(b.key(), b.value().get<std::string>());
    }
    return out;
}

std::string string_field(const json& request, const char* field) {
    const json& value = required(request, field);
    if (!value.is_string())
        throw Error(ErrorCode::schema_error, std::string("'") + field + "' must be a string", field);
    return value.get<std::string>();
}

// Bindings in network declaration order.
template <class B>
ordered_json bindings_json(const BayesianNetwork& net, const B& bindings) {
    ordered_json out = ordered_json::object();
    for (const auto& v : net.variables())
        if (const std::string* state = bindings.find(v.name))
            out[v.name] = *state;
    return out;
}

ordered_json distribution_json(const Distribution& dist) {
    ordered_json out = ordered_json::object();
    for (std::size_t i = 0; i < dist.states.size(); ++i)
        out[dist.states[i]] = dist.probabilities[i];
    return out;
}

curriculum::ScoreWeights weights_from(const json& request, curriculum::ScoreWeights fallback) {
    auto it = request.find("weights");
    if (it == request.end() || it->is_null())
        return fallback;
    check_fields(*it, {"grade", "recommendation", "satisfaction"});
    curriculum::ScoreWeights w{0.0, 0.0, 0.0};
    auto read = [&](const char* name, double& slot) {
        auto f = it->find(name);
        if (f == it->end())
            return;
        if (!f->is_number())
            throw Error(ErrorCode::schema_error, std::string("weight '") + name + "' must be a number", name);
        slot = f->get<double>();
    };
    read("grade", w.grade);
    read("recommendation", w.recommendation);
    read("satisfaction", w.satisfaction);
    w.check();
    return w;
}

ordered_json plan_json(const BayesianNetwork& net, const curriculum::PlanReport& report) {
    ordered_json out = ordered_json::object();
    out["profile"] = bindings_json(net, report.profile);
    ordered_json outcomes = ordered_json::object();
    outcomes[report.grade.variable] = distribution_json(report.grade);
    outcomes[report.recommendation.variable] = distribution_json(report.recommendation);
    outcomes[report.satisfaction.variable] = distribution_json(report.satisfaction);
    out["outcomes"] = std::move(outcomes);
    out["success_score"] = report.success_score;
    return out;
}

std::pair<std::string, std::string> split_binding(std::string_view item) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
        throw Error(ErrorCode::usage_error, "expected Var=state, got '" + std::string(item) + "'",
                    std::string(item));
    return {std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))};
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == text.npos ? text.npos : pos - start));
        if (pos == text.npos)
            break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

std::string render(const ordered_json& document, int precision) {
    if (precision < 0 || precision > kMaxPrecision)
        throw Error(ErrorCode::usage_error, "precision must be between 0 and 17");
    std::string out;
    render_into(out, document, precision);
    return out;
}

ordered_json error_body(const Error& error) {
    ordered_json detail = ordered_json::object();
    detail["code"] = std::string(to_string(error.code()));
    detail["message"] = error.what();
    detail["locus"] = error.locus();
    ordered_json body = ordered_json::object();
    body["error"] = std::move(detail);
    return body;
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::usage_error: return 1;
        case ErrorCode::parse_error:
        case ErrorCode::schema_error:
        case ErrorCode::validation_error:
        case ErrorCode::unknown_symbol: return 2;
        case ErrorCode::impossible_evidence:
        case ErrorCode::degenerate_baseline: return 3;
        case ErrorCode::size_limit: return 4;
    }
    return 1;
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::impossible_evidence:
        case ErrorCode::degenerate_baseline: return 422;
        case ErrorCode::size_limit: return 413;
        default: return 400;
    }
}

Evidence parse_evidence(std::string_view text) {
    Evidence evidence;
    if (text.empty())
        return evidence;
    for (auto item : split(text, ',')) {
        auto [var, state] = split_binding(item);
        evidence.bind(std::move(var), std::move(state));
    }
    return evidence;
}

TargetSpec parse_target(std::string_view text) {
    auto [var, state] = split_binding(text);
    return {std::move(var), std::move(state)};
}

std::vector<std::string> parse_names(std::string_view text) {
    std::vector<std::string> names;
    if (text.empty())
        return names;
    for (auto item : split(text, ',')) {
        if (item.empty())
            throw Error(ErrorCode::usage_error, "empty variable name in '" + std::string(text) + "'");
        names.emplace_back(item);
    }
    return names;
}

std::vector<Evidence> parse_scenarios(std::string_view text) {
    std::vector<Evidence> scenarios;
    for (auto item : split(text, ';'))
        scenarios.push_back(parse_evidence(item));
    return scenarios;
}

json parse_request(std::string_view body) {
    try {
        return json::parse(body.begin(), body.end());
    } catch (const json::parse_error& err) {
        throw Error(ErrorCode::parse_error, std::string("malformed request: ") + err.what(),
                    "byte " + std::to_string(err.byte));
    }
}

ordered_json validation_report_json(const ValidationReport& report) {
    ordered_json out = ordered_json::object();
    out["valid"] = report.valid();
    ordered_json violations = ordered_json::array();
    for (const auto& v : report.violations) {
        ordered_json item = ordered_json::object();
        item["kind"] = v.kind;
        item["locus"] = v.locus;
        item["message"] = v.message;
        if (v.kind == "row_sum")
            item["residual"] = v.residual;
        violations.push_back(std::move(item));
    }
    out["violations"] = std::move(violations);
    return out;
}

Handler::Handler(BayesianNetwork net, curriculum::ScoreWeights weights)
    : m_net(std::move(net)), m_weights(weights), m_document(save_model(m_net)) {
    m_weights.check();
}

ordered_json Handler::infer(const json& request) const {
    check_fields(request, {"evidence", "query"});
    auto evidence = bindings_from<Evidence>(request, "evidence");
    auto query = string_field(request, "query");
    auto dist = posterior_marginal(m_net, evidence, query);
    ordered_json out = ordered_json::object();
    out[dist.variable] = distribution_json(dist);
    return out;
}

ordered_json Handler::map(const json& request) const {
    check_fields(request, {"evidence", "vars", "mode"});
    auto evidence = bindings_from<Evidence>(request, "evidence");
    const json& vars_json = required(request, "vars");
    std::vector<std::string> vars;
    if (vars_json.is_string()) {
        vars = parse_names(vars_json.get<std::string>());
    } else if (vars_json.is_array()) {
        for (const auto& v : vars_json) {
            if (!v.is_string())
                throw Error(ErrorCode::schema_error, "'vars' must hold strings", "vars");
            vars.push_back(v.get<std::string>());
        }
    } else {
        throw Error(ErrorCode::schema_error, "'vars' must be an array of names", "vars");
    }
    std::string mode = request.contains("mode") ? string_field(request, "mode") : "map";
    MapResult result;
    if (mode == "map")
        result = map_assignment(m_net, evidence, vars);
    else if (mode == "ml")
        result = ml_assignment(m_net, evidence, vars);
    else
        throw Error(ErrorCode::usage_error, "mode must be 'map' or 'ml'", "mode");

    ordered_json assignment = ordered_json::object();
    for (std::size_t v : m_net.topological_order())
        if (const std::string* state = result.assignment.find(m_net.variable(v).name))
            assignment[m_net.variable(v).name] = *state;
    ordered_json out = ordered_json::object();
    out["mode"] = mode;
    out["assignment"] = std::move(assignment);
    out["probability"] = result.probability;
    return out;
}

ordered_json Handler::joint(const json& request) const {
    check_fields(request, {"assignment"});
    required(request, "assignment");
    auto assignment = bindings_from<Assignment>(request, "assignment");
    ordered_json out = ordered_json::object();
    out["probability"] = joint_probability(m_net, assignment);
    return out;
}

ordered_json Handler::likelihood(const json& request) const {
    check_fields(request, {"evidence"});
    auto evidence = bindings_from<Evidence>(request, "evidence");
    ordered_json out = ordered_json::object();
    out["likelihood"] = evidence_likelihood(m_net, evidence);
    return out;
}

ordered_json Handler::impact(const json& request) const {
    check_fields(request, {"target", "evidence"});
    const json& target_json = required(request, "target");
    TargetSpec target;
    if (target_json.is_string()) {
        target = parse_target(target_json.get<std::string>());
    } else if (target_json.is_object()) {
        check_fields(target_json, {"variable", "state"});
        target = {string_field(target_json, "variable"), string_field(target_json, "state")};
    } else {
        throw Error(ErrorCode::schema_error, "'target' must be \"Var=state\" or {variable, state}", "target");
    }
    auto evidence = bindings_from<Evidence>(request, "evidence");
    auto report = impact_ranking(m_net, target, evidence);

    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        ordered_json item = ordered_json::object();
        item["influencer"] = e.influencer;
        item["level"] = e.level;
        item["achieving_state"] = e.achieving_state;
        item["magnitude"] = e.magnitude;
        item["mutual_information"] = e.mutual_information;
        entries.push_back(std::move(item));
    }
    return entries;
}

ordered_json Handler::plan(const json& request) const {
    check_fields(request, {"profile", "weights"});
    curriculum::StudentProfile profile(bindings_from<Evidence>(request, "profile"));
    auto weights = weights_from(request, m_weights);
    return plan_json(m_net, curriculum::evaluate_plan(m_net, profile, weights));
}

ordered_json Handler::whatif(const json& request) const {
    check_fields(request, {"profile", "scenarios", "weights"});
    curriculum::StudentProfile profile(bindings_from<Evidence>(request, "profile"));
    auto weights = weights_from(request, m_weights);
    const json& scenarios_json = required(request, "scenarios");
    if (!scenarios_json.is_array())
        throw Error(ErrorCode::schema_error, "'scenarios' must be an array of objects", "scenarios");
    std::vector<Evidence> scenarios;
    for (const auto& s : scenarios_json) {
        json holder = json::object();
        holder["scenario"] = s;
        scenarios.push_back(bindings_from<Evidence>(holder, "scenario"));
    }

    ordered_json out = ordered_json::array();
    for (const auto& outcome : curriculum::compare_plans(m_net, profile, scenarios, weights)) {
        ordered_json item = ordered_json::object();
        item["scenario"] = bindings_json(m_net, outcome.overrides);
        if (outcome.report)
            item["report"] = plan_json(m_net, *outcome.report);
        else
            item["error"] = error_body(*outcome.error)["error"];
        out.push_back(std::move(item));
    }
    return out;
}

ordered_json Handler::dispatch(std::string_view endpoint, const json& request) const {
    if (endpoint == "infer")
        return infer(request);
    if (endpoint == "map")
        return map(request);
    if (endpoint == "joint")
        return joint(request);
    if (endpoint == "likelihood")
        return likelihood(request);
    if (endpoint == "impact")
        return impact(request);
    if (endpoint == "plan")
        return plan(request);
    if (endpoint == "whatif")
        return whatif(request);
    throw Error(ErrorCode::usage_error, "unknown endpoint '" + std::string(endpoint) + "'", std::string(endpoint));
}

}  // namespace bnet::api
