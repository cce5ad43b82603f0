#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "conclave/core/types.hpp"

namespace conclave::roles {

class LibraryError : public std::runtime_error {
public:
    explicit LibraryError(const std::string& what) : std::runtime_error(what) {}
};

struct RosterKey {
    core::ExpertGroup group = core::ExpertGroup::Math;
    core::Paradigm paradigm = core::Paradigm::DiversityDriven;
    std::uint32_t size = 0;

    auto operator<=>(const RosterKey&) const = default;
};

/// File name a roster is stored under, e.g. "law_workflow_3.json".
std::string roster_filename(core::ExpertGroup group, core::Paradigm paradigm, std::uint32_t size);

/// On-disk collection of expert-group configurations, one roster per file.
/// Every stored roster passes validate_roster; loading reports all problems
/// across all files at once rather than stopping at the first.
class RoleLibrary {
public:
    RoleLibrary() = default;

    static RoleLibrary load_dir(const std::filesystem::path& dir);

    /// nullptr when the combination has no stored roster.
    const core::AgentRoster* find(core::ExpertGroup group, core::Paradigm paradigm,
                                  std::uint32_t size) const;

    /// Validates and stores, replacing any existing entry for the key.
    void put(core::AgentRoster roster);

    /// Writes the entry for the key into dir under its canonical file name.
    /// Creates the directory if needed.
    void save(const std::filesystem::path& dir, core::ExpertGroup group, core::Paradigm paradigm,
              std::uint32_t size) const;

    /// The group x paradigm combinations lacking a size-3 entry of shipped
    /// provenance. Empty means the static library is complete.
    std::vector<std::string> missing_shipped() const;

    std::size_t count() const { return entries_.size(); }
    const std::map<RosterKey, core::AgentRoster>& entries() const { return entries_; }

private:
    std::map<RosterKey, core::AgentRoster> entries_;
};

}  // namespace conclave::roles
