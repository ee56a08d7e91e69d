#include "bnet/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "bnet/api.hpp"
#include "bnet/curriculum.hpp"
#include "bnet/learning.hpp"
#include "bnet/model_io.hpp"
#include "bnet/service.hpp"

namespace bnet::cli {

namespace {

using api::json;

json evidence_json(const Evidence& evidence) {
    json out = json::object();
    for (const auto& [name, state] : evidence)
        out[name] = state;
    return out;
}

BayesianNetwork load_or_default(const std::string& path) {
    if (path.empty())
        return curriculum::build_default_model();
    return load_model_file(path);
}

std::pair<std::string, int> parse_addr(const std::string& addr) {
    auto colon = addr.rfind(':');
    if (colon == std::string::npos)
        throw Error(ErrorCode::usage_error, "--addr must be host:port", addr);
    try {
        std::size_t used = 0;
        int port = std::stoi(addr.substr(colon + 1), &used);
        if (used != addr.size() - colon - 1 || port < 0 || port > 65535)
            throw std::out_of_range("port");
        return {addr.substr(0, colon), port};
    } catch (const std::exception&) {
        throw Error(ErrorCode::usage_error, "invalid port in --addr '" + addr + "'", addr);
    }
}

curriculum::ScoreWeights parse_weights(const std::string& text) {
    auto parts = api::parse_names(text);
    if (parts.size() != 3)
        throw Error(ErrorCode::usage_error, "--weights takes grade,recommendation,satisfaction", text);
    try {
        curriculum::ScoreWeights w{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
        w.check();
        return w;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::usage_error, "--weights must be numbers", text);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete Bayesian network engine and curriculum advisor", "bnet"};
    app.require_subcommand(1);
    app.fallthrough();

    int precision = api::kDefaultPrecision;
    app.add_option("--precision", precision, "Decimals for probabilities in JSON output (0-17)")
        ->check(CLI::Range(0, api::kMaxPrecision));

    std::string model_path, evidence_text, query, vars, assignment_text, target_text, profile_text,
        scenarios_text, weights_text, structure_path, data_path, out_path, addr = "127.0.0.1:8080", static_dir,
        name = "fitted";
    bool ml = false;
    double smoothing = 1.0;
    std::size_t count = 0;
    std::uint64_t seed = 0;

    auto model_option = [&](CLI::App* sub) {
        sub->add_option("--model", model_path, "Model document (default: bundled curriculum model)");
    };
    auto evidence_option = [&](CLI::App* sub, const char* flag = "--evidence") {
        sub->add_option(flag, evidence_text, "Comma-separated Var=state bindings");
    };

    auto* validate = app.add_subcommand("validate", "Check a model document");
    validate->add_option("model", model_path, "Model document")->required();

    auto* model = app.add_subcommand("model", "Print the canonical model document");
    model_option(model);

    auto* infer = app.add_subcommand("infer", "Posterior marginal of one variable");
    model_option(infer);
    evidence_option(infer);
    infer->add_option("--query", query, "Query variable")->required();

    auto* map = app.add_subcommand("map", "Most probable assignment of a variable set");
    model_option(map);
    evidence_option(map);
    map->add_option("--vars", vars, "Comma-separated query variables")->required();
    map->add_flag("--ml", ml, "Maximum-likelihood hypothesis instead of MAP");

    auto* joint = app.add_subcommand("joint", "Probability of a full assignment");
    model_option(joint);
    joint->add_option("--assignment", assignment_text, "Var=state for every variable")->required();

    auto* likelihood = app.add_subcommand("likelihood", "Probability of the evidence");
    model_option(likelihood);
    evidence_option(likelihood);

    auto* learn = app.add_subcommand("learn", "Fit CPTs to complete data");
    learn->add_option("--structure", structure_path, "Structure or model document")->required();
    learn->add_option("--data", data_path, "CSV records")->required();
    learn->add_option("--smoothing", smoothing, "Laplace smoothing constant (>= 0)");
    learn->add_option("--name", name, "Name of the fitted model");

    auto* sample = app.add_subcommand("sample", "Forward-sample records");
    model_option(sample);
    sample->add_option("--n", count, "Number of records")->required();
    sample->add_option("--seed", seed, "Generator seed")->required();
    sample->add_option("--out", out_path, "CSV output file (default: standard output)");

    auto* impact = app.add_subcommand("impact", "Rank variables by log-odds impact on a target state");
    model_option(impact);
    impact->add_option("--target", target_text, "Var=state")->required();
    evidence_option(impact);

    auto* plan = app.add_subcommand("plan", "Evaluate a student profile, optionally under what-if scenarios");
    model_option(plan);
    plan->add_option("--profile", profile_text, "Comma-separated Var=state over AG,S,A,NumC,RBG,Pub");
    plan->add_option("--scenarios", scenarios_text, "';'-separated override sets over NumC and A");
    plan->add_option("--weights", weights_text, "grade,recommendation,satisfaction weights summing to 1");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    model_option(serve);
    serve->add_option("--addr", addr, "host:port to listen on");
    serve->add_option("--static", static_dir, "Directory served under /");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        Error usage(ErrorCode::usage_error, e.what());
        err << api::render(api::error_body(usage)) << '\n';
        return api::exit_code(ErrorCode::usage_error);
    }

    try {
        auto emit = [&](const api::ordered_json& doc) { out << api::render(doc, precision) << '\n'; };

        if (validate->parsed()) {
            auto definition = parse_model_definition(read_text_file(model_path));
            auto report = validate_network(definition);
            emit(api::validation_report_json(report));
            return report.valid() ? 0 : api::exit_code(ErrorCode::validation_error);
        }
        if (learn->parsed()) {
            auto structure = load_structure(read_text_file(structure_path));
            auto data = parse_csv(read_text_file(data_path));
            auto fit = fit_parameters(structure, data, smoothing, name);
            if (!fit.unseen.empty()) {
                std::map<std::string, std::size_t> per_child;
                for (const auto& u : fit.unseen)
                    ++per_child[u.child];
                for (const auto& [child, n] : per_child)
                    err << "note: " << n << " parent configuration(s) of '" << child
                        << "' never observed; rows set from smoothing only\n";
            }
            out << save_model(fit.network);
            return 0;
        }

        api::Handler handler(load_or_default(model_path),
                             weights_text.empty() ? curriculum::ScoreWeights{} : parse_weights(weights_text));

        if (model->parsed()) {
            out << handler.model_document();
            return 0;
        }
        if (sample->parsed()) {
            auto records = forward_sample(handler.network(), count, seed);
            if (out_path.empty()) {
                write_csv(out, records);
                return 0;
            }
            std::ofstream file(out_path, std::ios::binary);
            if (!file)
                throw Error(ErrorCode::usage_error, "cannot write '" + out_path + "'", out_path);
            write_csv(file, records);
            api::ordered_json summary = api::ordered_json::object();
            summary["rows"] = count;
            summary["seed"] = seed;
            summary["out"] = out_path;
            emit(summary);
            return 0;
        }
        if (serve->parsed()) {
            auto [host, port] = parse_addr(addr);
            ServiceOptions options;
            options.precision = precision;
            if (!static_dir.empty())
                options.static_dir = static_dir;
            Service service(std::move(handler), options);
            int bound = service.bind(host, port);
            err << "listening on http://" << host << ":" << bound << '\n';
            service.listen();
            return 0;
        }

        json request = json::object();
        std::string endpoint;
        if (infer->parsed()) {
            endpoint = "infer";
            request["evidence"] = evidence_json(api::parse_evidence(evidence_text));
            request["query"] = query;
        } else if (map->parsed()) {
            endpoint = "map";
            request["evidence"] = evidence_json(api::parse_evidence(evidence_text));
            request["vars"] = api::parse_names(vars);
            request["mode"] = ml ? "ml" : "map";
        } else if (joint->parsed()) {
            endpoint = "joint";
            Assignment assignment;
            for (const auto& [k, v] : api::parse_evidence(assignment_text))
                assignment.bind(k, v);
            json a = json::object();
            for (const auto& [k, v] : assignment)
                a[k] = v;
            request["assignment"] = std::move(a);
        } else if (likelihood->parsed()) {
            endpoint = "likelihood";
            request["evidence"] = evidence_json(api::parse_evidence(evidence_text));
        } else if (impact->parsed()) {
            endpoint = "impact";
            request["target"] = target_text;
            request["evidence"] = evidence_json(api::parse_evidence(evidence_text));
        } else if (plan->parsed()) {
            request["profile"] = evidence_json(api::parse_evidence(profile_text));
            if (plan->count("--scenarios")) {
                endpoint = "whatif";
                json scenarios = json::array();
                for (const auto& s : api::parse_scenarios(scenarios_text))
                    scenarios.push_back(evidence_json(s));
                request["scenarios"] = std::move(scenarios);
            } else {
                endpoint = "plan";
            }
        }
        emit(handler.dispatch(endpoint, request));
        return 0;
    } catch (const Error& e) {
        err << api::render(api::error_body(e)) << '\n';
        return api::exit_code(e.code());
    }
}

}  // namespace bnet::cli
