#include "bnet/service.hpp"

#include <httplib.h>

namespace bnet {

struct Service::Impl {
    Impl(api::Handler h, ServiceOptions o) : handler(std::move(h)), options(std::move(o)) {}

    api::Handler handler;
    ServiceOptions options;
    httplib::Server server;
};

Service::Service(api::Handler handler, ServiceOptions options)
    : m_impl(std::make_unique<Impl>(std::move(handler), std::move(options))) {
    if (m_impl->options.precision < 0 || m_impl->options.precision > api::kMaxPrecision)
        throw Error(ErrorCode::usage_error, "precision must be between 0 and 17");

    auto& server = m_impl->server;
    server.Get("/api/model", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(m_impl->handler.model_document(), "application/json");
    });
    server.Post(R"(/api/([a-z]+))", [this](const httplib::Request& req, httplib::Response& res) {
        auto [status, body] = respond(req.matches[1].str(), req.body);
        res.status = status;
        res.set_content(body, "application/json");
    });
    if (m_impl->options.static_dir)
        server.set_mount_point("/", m_impl->options.static_dir->string());
}

Service::~Service() { stop(); }

std::pair<int, std::string> Service::respond(const std::string& endpoint, const std::string& body) const {
    static const char* const kEndpoints[] = {"infer", "map", "joint", "likelihood", "impact", "plan", "whatif"};
    bool known = false;
    for (const char* e : kEndpoints)
        known = known || endpoint == e;
    if (!known) {
        Error err(ErrorCode::usage_error, "unknown endpoint '/api/" + endpoint + "'", endpoint);
        return {404, api::render(api::error_body(err))};
    }
    try {
        auto request = api::parse_request(body.empty() ? "{}" : body);
        auto response = m_impl->handler.dispatch(endpoint, request);
        return {200, api::render(response, m_impl->options.precision)};
    } catch (const Error& err) {
        return {api::http_status(err.code()), api::render(api::error_body(err))};
    }
}

int Service::bind(const std::string& host, int port) {
    int bound = port == 0 ? m_impl->server.bind_to_any_port(host)
                          : (m_impl->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0)
        throw Error(ErrorCode::usage_error, "cannot bind " + host + ":" + std::to_string(port),
                    host + ":" + std::to_string(port));
    return bound;
}

void Service::listen() { m_impl->server.listen_after_bind(); }

void Service::wait_until_ready() const { m_impl->server.wait_until_ready(); }

void Service::stop() {
    if (m_impl && m_impl->server.is_running())
        m_impl->server.stop();
}

bool Service::running() const { return m_impl->server.is_running(); }

}  // namespace bnet
