#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "conclave/core/types.hpp"

namespace conclave::harness {

class DatasetError : public std::runtime_error {
public:
    explicit DatasetError(const std::string& what) : std::runtime_error(what) {}
};

/// Loads a JSONL dataset (one TaskInstance per line; blank lines ignored).
/// Aborts on ANY malformed line; the error message lists every problem with
/// its line number, including duplicate instance_ids, so one pass over the
/// output fixes the file.
std::vector<core::TaskInstance> load_dataset(const std::filesystem::path& path);

}  // namespace conclave::harness
