#include "conclave/harness/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "conclave/core/serde.hpp"

namespace conclave::harness {

std::vector<core::TaskInstance> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("dataset: cannot open " + path.string());
    }

    std::vector<core::TaskInstance> instances;
    std::vector<std::string> problems;
    std::map<std::string, std::size_t> first_line_of_id;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(),
                        [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }

        core::TaskInstance instance;
        try {
            instance = core::task_instance_from_json(j);
        } catch (const core::SchemaError& e) {
            problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }

        const auto [it, inserted] = first_line_of_id.emplace(instance.instance_id, line_no);
        if (!inserted) {
            problems.push_back("line " + std::to_string(line_no) + ": duplicate instance_id '" +
                               instance.instance_id + "' (first seen at line " +
                               std::to_string(it->second) + ")");
            continue;
        }
        instances.push_back(std::move(instance));
    }

    if (!problems.empty()) {
        std::string message =
            "dataset " + path.string() + ": " + std::to_string(problems.size()) + " bad line(s)";
        for (const std::string& p : problems) message += "\n  - " + p;
        throw DatasetError(message);
    }
    return instances;
}

}  // namespace conclave::harness
