#pragma once

#include <stdexcept>
#include <string>

namespace conclave::analysis {

class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conclave::analysis
