#include "conclave/roles/library.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "conclave/core/serde.hpp"
#include "conclave/core/validate.hpp"

namespace conclave::roles {

std::string roster_filename(core::ExpertGroup group, core::Paradigm paradigm,
                            std::uint32_t size) {
    return std::string(core::token(group)) + "_" + std::string(core::token(paradigm)) + "_" +
           std::to_string(size) + ".json";
}

RoleLibrary RoleLibrary::load_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw LibraryError("role library: " + dir.string() + " is not a directory");
    }

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    RoleLibrary library;
    std::vector<std::string> problems;
    for (const std::filesystem::path& file : files) {
        std::ifstream in(file);
        if (!in) {
            problems.push_back(file.filename().string() + ": cannot open");
            continue;
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            problems.push_back(file.filename().string() + ": " + e.what());
            continue;
        }

        core::AgentRoster roster;
        try {
            roster = core::roster_from_json(j);
        } catch (const core::SchemaError& e) {
            problems.push_back(file.filename().string() + ": " + e.what());
            continue;
        }

        for (const std::string& violation : core::validate_roster(roster)) {
            problems.push_back(file.filename().string() + ": " + violation);
        }

        const std::string expected =
            roster_filename(roster.domain_tag, roster.paradigm, roster.size);
        if (file.filename().string() != expected) {
            problems.push_back(file.filename().string() + ": holds the roster that belongs in " +
                               expected);
        }

        const RosterKey key{roster.domain_tag, roster.paradigm, roster.size};
        if (library.entries_.count(key) != 0) {
            problems.push_back(file.filename().string() + ": duplicate entry for " + expected);
        } else if (problems.empty()) {
            library.entries_.emplace(key, std::move(roster));
        }
    }

    if (!problems.empty()) {
        std::string message = "role library: " + std::to_string(problems.size()) + " problem(s)";
        for (const std::string& p : problems) message += "\n  - " + p;
        throw LibraryError(message);
    }
    return library;
}

const core::AgentRoster* RoleLibrary::find(core::ExpertGroup group, core::Paradigm paradigm,
                                           std::uint32_t size) const {
    const auto it = entries_.find(RosterKey{group, paradigm, size});
    return it == entries_.end() ? nullptr : &it->second;
}

void RoleLibrary::put(core::AgentRoster roster) {
    const std::vector<std::string> violations = core::validate_roster(roster);
    if (!violations.empty()) {
        std::string message = "role library: roster rejected";
        for (const std::string& v : violations) message += "\n  - " + v;
        throw LibraryError(message);
    }
    const RosterKey key{roster.domain_tag, roster.paradigm, roster.size};
    entries_[key] = std::move(roster);
}

void RoleLibrary::save(const std::filesystem::path& dir, core::ExpertGroup group,
                       core::Paradigm paradigm, std::uint32_t size) const {
    const core::AgentRoster* roster = find(group, paradigm, size);
    if (roster == nullptr) {
        throw LibraryError("role library: no entry for " +
                           roster_filename(group, paradigm, size));
    }
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / roster_filename(group, paradigm, size);
    std::ofstream out(path);
    if (!out) {
        throw LibraryError("role library: cannot write " + path.string());
    }
    out << core::to_json(*roster).dump(2) << '\n';
    if (!out) {
        throw LibraryError("role library: write failed for " + path.string());
    }
}

std::vector<std::string> RoleLibrary::missing_shipped() const {
    std::vector<std::string> missing;
    for (const core::ExpertGroup group : {core::ExpertGroup::Math, core::ExpertGroup::Finance,
                                          core::ExpertGroup::Medical, core::ExpertGroup::Law}) {
        for (const core::Paradigm paradigm :
             {core::Paradigm::DiversityDriven, core::Paradigm::StructuredWorkflow}) {
            const core::AgentRoster* roster = find(group, paradigm, 3);
            if (roster == nullptr || roster->provenance != core::Provenance::Shipped) {
                missing.push_back(std::string(core::token(group)) + "/" +
                                  std::string(core::token(paradigm)));
            }
        }
    }
    return missing;
}

}  // namespace conclave::roles
