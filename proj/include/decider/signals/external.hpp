#pragma once

#include <chrono>
#include <string>

#include <httplib.h>

#include "decider/core/context.hpp"
#include "decider/core/errors.hpp"
#include "decider/core/json.hpp"
#include "decider/core/signal.hpp"

namespace decider {

// Hook for attaching a real (e.g. LLM-backed) estimator over the wire.
// One JSON document each way:
//   request:  {"signal_name": ..., "context": {"signals", "flags", "counters", "history"}}
//   response: {"name": ..., "value": ...}
struct ExternalEstimatorEndpoint {
    std::string address;  // "host:port"
    int timeout_ms = 1000;
    std::string signal_name;

    void validate() const {
        if (timeout_ms <= 0) throw config_error("estimator endpoint timeout must be > 0");
        if (address.empty()) throw config_error("estimator endpoint address is empty");
    }
};

inline json context_to_json(const DecisionContext& ctx) {
    json j;
    j["signals"] = json::object();
    for (const auto& [name, sig] : ctx.signals) j["signals"][name] = sig.value;
    j["flags"] = ctx.flags;
    j["counters"] = ctx.counters;
    j["history"] = ctx.history;
    return j;
}

inline Signal query_external_estimator(const ExternalEstimatorEndpoint& endpoint,
                                       const DecisionContext& context) {
    endpoint.validate();
    auto colon = endpoint.address.rfind(':');
    if (colon == std::string::npos) {
        throw config_error("estimator address must be host:port, got " + endpoint.address);
    }
    std::string host = endpoint.address.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(endpoint.address.substr(colon + 1));
    } catch (const std::exception&) {
        throw config_error("bad port in estimator address: " + endpoint.address);
    }

    httplib::Client client(host, port);
    client.set_connection_timeout(0, endpoint.timeout_ms * 1000);
    client.set_read_timeout(0, endpoint.timeout_ms * 1000);
    client.set_write_timeout(0, endpoint.timeout_ms * 1000);

    json request;
    request["signal_name"] = endpoint.signal_name;
    request["context"] = context_to_json(context);

    auto res = client.Post("/estimate", request.dump(), "application/json");
    if (!res || res->status != 200) {
        throw estimator_unavailable_error("estimator at " + endpoint.address + " unreachable");
    }
    try {
        auto body = json::parse(res->body);
        return clamp_external_signal(body.at("name").get<std::string>(),
                                     body.at("value").get<double>());
    } catch (const std::exception& e) {
        throw estimator_unavailable_error(std::string("malformed estimator response: ") + e.what());
    }
}

}  // namespace decider
