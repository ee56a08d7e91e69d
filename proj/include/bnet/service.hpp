#ifndef BNET_SERVICE_HPP
#define BNET_SERVICE_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "bnet/api.hpp"

namespace bnet {

struct ServiceOptions {
    int precision = api::kDefaultPrecision;
    /// Directory served under "/" (the advisor UI bundle), if any.
    std::optional<std::filesystem::path> static_dir;
};

/// Stateless HTTP front end over one immutable model.
///
///   GET  /api/model        model document
///   POST /api/infer|map|joint|likelihood|impact|plan|whatif
///
/// Errors carry {"error": {code, message, locus}} with 400, 413 or 422.
class Service {
public:
    Service(api::Handler handler, ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds without serving; port 0 picks a free port. Returns the bound port
    /// or throws usage_error.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    /// Returns once a concurrent listen() accepts connections.
    void wait_until_ready() const;
    void stop();
    bool running() const;

    /// Status and body the service would send for `endpoint` (without the
    /// "/api/" prefix) and `body`.
    std::pair<int, std::string> respond(const std::string& endpoint, const std::string& body) const;

private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

}  // namespace bnet

#endif  // BNET_SERVICE_HPP
