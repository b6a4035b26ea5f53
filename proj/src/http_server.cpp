#include <httplib.h>

#include "attitude/error.hpp"
#include "attitude/service.hpp"

namespace attitude {

struct ApiServer::Impl {
    SnapshotStore& store;
    httplib::Server server;

    explicit Impl(SnapshotStore& s) : store(s) {
        server.Get(R"(/api/.*)", [this](const httplib::Request& req, httplib::Response& res) {
            std::map<std::string, std::string> query;
            for (const auto& [k, v] : req.params) query.emplace(k, v);  // first value wins
            // Pin the snapshot for the whole request so a concurrent replace
            // cannot change the data halfway through.
            const auto snapshot = store.current();
            ApiResponse r = snapshot ? handle_request(*snapshot, req.path, query)
                                     : ApiResponse{503, R"({"error":"no cohort loaded"})"};
            res.status = r.status;
            res.set_content(r.body, "application/json; charset=utf-8");
        });
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (!res.body.empty()) return;
            res.set_content(R"({"error":"no such endpoint"})", "application/json; charset=utf-8");
        });
    }
};

ApiServer::ApiServer(SnapshotStore& store) : impl_(std::make_unique<Impl>(store)) {}
ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
    int bound = -1;
    if (port == 0)
        bound = impl_->server.bind_to_any_port(host);
    else if (impl_->server.bind_to_port(host, port))
        bound = port;
    if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

}  // namespace attitude
