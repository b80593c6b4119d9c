#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>

#include "clarirank/types.hpp"

namespace clarirank {

/// Optional post-tokenization hooks. Both are off by default and everywhere
/// in the shipped configurations.
struct PreprocessOptions {
    std::unordered_set<std::string> stopwords;                        // dropped when non-empty
    std::function<std::string(const std::string&)> stemmer;           // applied per token when set
};

/// Lowercase the text, treat every ASCII punctuation character as a
/// separator, and split on whitespace runs. Total: any input is accepted.
TokenList preprocess(std::string_view text);
TokenList preprocess(std::string_view text, const PreprocessOptions& options);

}  // namespace clarirank
