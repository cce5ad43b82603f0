#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "conclave/backends/chat.hpp"

namespace conclave::backends {

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_tag;

    bool operator==(const EmbeddingVector&) const = default;
};

/// Batch embedding provider. Implementations return one vector per input
/// text, in input order, all with the same dimension.
class Embedder {
public:
    virtual ~Embedder() = default;

    /// Pre: texts non-empty (std::invalid_argument otherwise). Throws
    /// BackendError on provider failure.
    virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) = 0;
    virtual std::string name() const = 0;
};

/// Offline embedder: maps each distinct input text to a stable pseudo-random
/// unit vector. The generator is seeded with an FNV-1a hash of the text and
/// expanded from raw mt19937_64 draws, so vectors are bit-identical across
/// platforms and standard libraries. Distinct texts get (near-)orthogonal
/// vectors in expectation, which is all the diversity math needs offline.
class HashEmbedder : public Embedder {
public:
    explicit HashEmbedder(std::size_t dimension = 64);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::string name() const override { return "hash"; }

private:
    std::size_t dimension_;
    std::string model_tag_;
};

struct HttpEmbedderConfig {
    std::string base_url;     // scheme + host[:port], e.g. "http://localhost:8080"
    std::string path = "/v1/embeddings";
    std::string model;
    std::string api_key_env;  // name of the env var holding the credential; empty = no auth
    std::uint32_t timeout_ms = 30000;
};

/// Client for an OpenAI-style embeddings endpoint.
class HttpEmbedder : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig config);

    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) override;
    std::string name() const override { return "http-embedder"; }

private:
    HttpEmbedderConfig config_;
};

}  // namespace conclave::backends
