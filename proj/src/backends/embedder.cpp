#include "conclave/backends/embedder.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "conclave/core/serde.hpp"

namespace conclave::backends {

namespace {

// Uniform double in [0,1) from a raw 64-bit draw (53-bit mantissa). We avoid
// std::uniform_real_distribution because its output sequence is
// implementation-defined; this mapping is not.
double unit_interval(std::uint64_t raw) { return static_cast<double>(raw >> 11) * 0x1.0p-53; }

void check_texts(const std::vector<std::string>& texts) {
    if (texts.empty()) throw std::invalid_argument("embed: batch must be non-empty");
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dimension)
    : dimension_(dimension), model_tag_("hash-" + std::to_string(dimension)) {
    if (dimension == 0) throw std::invalid_argument("HashEmbedder: dimension must be positive");
}

std::vector<EmbeddingVector> HashEmbedder::embed(const std::vector<std::string>& texts) {
    check_texts(texts);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        std::mt19937_64 rng(core::fnv1a64(model_tag_ + '\x1f' + text));
        std::vector<double> values(dimension_);
        double norm_sq = 0.0;
        for (double& v : values) {
            v = 2.0 * unit_interval(rng()) - 1.0;
            norm_sq += v * v;
        }
        double norm = std::sqrt(norm_sq);
        if (norm == 0.0) {  // keep the unit-norm contract even for a degenerate draw
            values[0] = 1.0;
            norm = 1.0;
        }
        for (double& v : values) v /= norm;
        out.push_back({std::move(values), model_tag_});
    }
    return out;
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) {
        throw std::invalid_argument("HttpEmbedder: base_url must be configured");
    }
}

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    check_texts(texts);

    nlohmann::json body{{"model", config_.model}, {"input", texts}};

    httplib::Client client(config_.base_url);
    const time_t seconds = config_.timeout_ms / 1000;
    const time_t micros = (config_.timeout_ms % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        headers.emplace("Authorization", "Bearer " + resolve_env_credential(config_.api_key_env));
    }

    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res) {
        throw BackendError("embeddings: transport error: " + httplib::to_string(res.error()),
                           true);
    }
    if (res->status == 429 || res->status >= 500) {
        throw BackendError("embeddings: HTTP " + std::to_string(res->status), true);
    }
    if (res->status != 200) {
        throw BackendError("embeddings: HTTP " + std::to_string(res->status) + ": " + res->body,
                           false);
    }

    nlohmann::json payload;
    try {
        payload = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("embeddings: malformed response: ") + e.what(), false);
    }

    if (!payload.contains("data") || !payload.at("data").is_array()) {
        throw BackendError("embeddings: response has no 'data' array", false);
    }
    const std::string model_tag =
        payload.value("model", config_.model.empty() ? std::string("unknown") : config_.model);

    std::vector<EmbeddingVector> out(texts.size());
    std::vector<bool> seen(texts.size(), false);
    for (const nlohmann::json& item : payload.at("data")) {
        if (!item.contains("index") || !item.contains("embedding")) {
            throw BackendError("embeddings: data item missing index/embedding", false);
        }
        const std::size_t index = item.at("index").get<std::size_t>();
        if (index >= texts.size() || seen[index]) {
            throw BackendError("embeddings: bad or duplicate index in response", false);
        }
        std::vector<double> values = item.at("embedding").get<std::vector<double>>();
        for (const double v : values) {
            if (!std::isfinite(v)) {
                throw BackendError("embeddings: non-finite value in vector", false);
            }
        }
        out[index] = {std::move(values), model_tag};
        seen[index] = true;
    }
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (!seen[i]) {
            throw BackendError("embeddings: response missing vector for input " +
                                   std::to_string(i),
                               false);
        }
    }
    for (const EmbeddingVector& v : out) {
        if (v.values.empty() || v.values.size() != out.front().values.size()) {
            throw std::logic_error("embeddings: dimension mismatch within batch");
        }
    }
    return out;
}

}  // namespace conclave::backends
