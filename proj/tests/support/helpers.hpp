#pragma once

// Shared test scaffolding: temp directories, canned rosters/instances, and
// a fixture embedder that returns exactly the vectors a test plants.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conclave/backends/embedder.hpp"
#include "conclave/core/types.hpp"

namespace testsupport {

/// Self-deleting unique temp directory under the system temp root.
class TempDir {
  public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("conclave_test_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline conclave::core::AgentRoster make_roster(conclave::core::ExpertGroup group,
                                               conclave::core::Paradigm paradigm,
                                               std::uint32_t size) {
    conclave::core::AgentRoster roster;
    roster.domain_tag = group;
    roster.paradigm = paradigm;
    roster.size = size;
    roster.provenance = conclave::core::Provenance::Generated;
    for (std::uint32_t i = 0; i < size; ++i) {
        conclave::core::ExpertSpec expert;
        expert.expert_group = group;
        expert.paradigm = paradigm;
        expert.formal_role = "Specialist " + std::to_string(i + 1);
        expert.responsibility = "Handle aspect " + std::to_string(i + 1) + " of the problem";
        expert.index = i;
        roster.experts.push_back(std::move(expert));
    }
    return roster;
}

inline conclave::core::TaskInstance make_instance(const std::string& id,
                                                  conclave::core::TaskDomain domain,
                                                  std::size_t n_options = 4,
                                                  std::uint32_t gold = 1) {
    conclave::core::TaskInstance instance;
    instance.instance_id = id;
    instance.domain = domain;
    instance.question = "Question for " + id + "?";
    for (std::size_t i = 0; i < n_options; ++i) {
        instance.options.push_back("option " + std::to_string(i + 1));
    }
    instance.gold_index = gold;
    return instance;
}

/// Embedder that returns pre-planted vectors keyed by exact text. Unknown
/// text is an error: diversity tests must control every embedding.
class FixtureEmbedder : public conclave::backends::Embedder {
  public:
    void plant(const std::string& text, std::vector<double> values) {
        vectors_[text] = std::move(values);
    }

    std::vector<conclave::backends::EmbeddingVector> embed(
        const std::vector<std::string>& texts) override {
        if (texts.empty()) throw std::invalid_argument("embed: texts is empty");
        std::vector<conclave::backends::EmbeddingVector> out;
        for (const std::string& text : texts) {
            const auto it = vectors_.find(text);
            if (it == vectors_.end()) {
                throw std::runtime_error("FixtureEmbedder: no vector planted for: " + text);
            }
            out.push_back({it->second, "fixture"});
        }
        return out;
    }

    std::string name() const override { return "fixture"; }

  private:
    std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace testsupport
