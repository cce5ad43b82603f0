#include "conclave/analysis/relevance.hpp"

#include <algorithm>
#include <cctype>

namespace conclave::analysis {

std::string render_relevance_prompt(const core::TaskInstance& instance) {
    return "You are an expert in identifying the domains of expertise required to solve a given "
           "problem.\n"
           "You will be provided with a question, and your task is to determine which domains "
           "from the following list are relevant: ['Math', 'Law', 'Business', 'Health'].\n"
           "Please analyze the question and return the appropriate domains.\n"
           "There could be more than one domain that is necessary.\n"
           "Please directly output a python list of the domains without other output.\n"
           "Please limit your output to 2-3 domains.\n"
           "For example: ['Med', 'Fina']\n"
           "Please directly output the list that is loadable by python, no other output.\n"
           "2-3 domains should be outputted, no more or less.\n"
           "\n"
           "Question: " +
           instance.question;
}

namespace {

std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::optional<core::TaskDomain> canonical_domain(std::string_view element) {
    std::string folded;
    folded.reserve(element.size());
    for (const char c : element) {
        folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (folded == "math" || folded == "mathematics") return core::TaskDomain::Math;
    if (folded == "law" || folded == "legal") return core::TaskDomain::Law;
    if (folded == "business" || folded == "fina" || folded == "finance") {
        return core::TaskDomain::Business;
    }
    if (folded == "health" || folded == "med" || folded == "medical" || folded == "medicine") {
        return core::TaskDomain::Health;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<core::TaskDomain>> parse_relevance_response(std::string_view text) {
    const std::size_t open = text.find('[');
    if (open == std::string_view::npos) return std::nullopt;
    const std::size_t close = text.find(']', open + 1);
    if (close == std::string_view::npos) return std::nullopt;
    const std::string_view body = text.substr(open + 1, close - open - 1);

    std::vector<core::TaskDomain> domains;
    std::size_t start = 0;
    while (start <= body.size()) {
        const std::size_t comma = body.find(',', start);
        std::string_view element = comma == std::string_view::npos
                                       ? body.substr(start)
                                       : body.substr(start, comma - start);
        element = trim(element);
        if (element.size() >= 2 && ((element.front() == '\'' && element.back() == '\'') ||
                                    (element.front() == '"' && element.back() == '"'))) {
            element = trim(element.substr(1, element.size() - 2));
        }
        if (!element.empty()) {
            const auto domain = canonical_domain(element);
            if (!domain) return std::nullopt;
            if (std::find(domains.begin(), domains.end(), *domain) != domains.end()) {
                return std::nullopt;  // duplicate: not a sensible domain set
            }
            domains.push_back(*domain);
        } else if (!trim(body).empty()) {
            return std::nullopt;  // empty element in a non-empty list
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }

    if (domains.size() < 2 || domains.size() > 3) return std::nullopt;
    return domains;
}

RelevanceMatrix build_relevance_matrix(const std::vector<core::TaskInstance>& instances,
                                       backends::ChatBackend& backend,
                                       std::uint64_t samples_per_domain) {
    if (samples_per_domain < 1) {
        throw AnalysisError("relevance: samples_per_domain must be at least 1");
    }
    if (instances.empty()) {
        throw AnalysisError("relevance: no instances to judge");
    }

    RelevanceMatrix matrix;
    matrix.samples_per_domain = samples_per_domain;

    auto ask = [&backend](const backends::ChatRequest& request) {
        try {
            return backend.complete(request);
        } catch (const backends::BackendError& e) {
            if (!e.retryable()) throw;
            return backend.complete(request);
        }
    };

    std::uint64_t total_counted = 0;
    for (const core::TaskInstance& instance : instances) {
        auto& queried = matrix.queried[instance.domain];
        if (queried >= samples_per_domain) {
            throw AnalysisError("relevance: more than " + std::to_string(samples_per_domain) +
                                " instances supplied for domain " +
                                std::string(core::token(instance.domain)));
        }
        ++queried;

        backends::ChatRequest request;
        request.system_prompt = "You are a helpful assistant.";
        request.user_prompt = render_relevance_prompt(instance);
        request.instance_id = instance.instance_id;
        request.agent_index = 0;  // not a roster turn

        std::optional<std::vector<core::TaskDomain>> judged;
        for (int attempt = 0; attempt < 2 && !judged; ++attempt) {
            judged = parse_relevance_response(ask(request).full_text);
        }

        if (judged) {
            for (const core::TaskDomain domain : *judged) {
                ++matrix.counts[instance.domain][domain];
                ++total_counted;
            }
        } else {
            ++matrix.dropped[instance.domain];
        }
    }

    if (total_counted == 0) {
        throw AnalysisError("relevance: every response was invalid after retry");
    }
    return matrix;
}

}  // namespace conclave::analysis
