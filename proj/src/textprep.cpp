#include "clarirank/textprep.hpp"

namespace clarirank {

namespace {

// ASCII punctuation and whitespace act as token separators. Explicit ranges
// so the rule is locale independent; bytes >= 0x80 (UTF-8) pass through.
constexpr bool is_separator(unsigned char c) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return true;
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
           (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

constexpr char fold_case(unsigned char c) {
    if (c >= 'A' && c <= 'Z') return static_cast<char>(c + ('a' - 'A'));
    return static_cast<char>(c);
}

}  // namespace

TokenList preprocess(std::string_view text) {
    TokenList tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_separator(c)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(fold_case(c));
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

TokenList preprocess(std::string_view text, const PreprocessOptions& options) {
    TokenList tokens = preprocess(text);
    if (!options.stopwords.empty()) {
        TokenList kept;
        kept.reserve(tokens.size());
        for (auto& t : tokens) {
            if (options.stopwords.count(t) == 0) kept.push_back(std::move(t));
        }
        tokens = std::move(kept);
    }
    if (options.stemmer) {
        for (auto& t : tokens) t = options.stemmer(t);
    }
    return tokens;
}

}  // namespace clarirank
