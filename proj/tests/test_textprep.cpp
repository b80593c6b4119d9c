#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

#include "clarirank/textprep.hpp"

using namespace clarirank;

namespace {

std::string join(const TokenList& tokens) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tokens.size(); ++i) out << (i ? " " : "") << tokens[i];
    return out.str();
}

std::string random_ascii(std::mt19937& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> char_dist(0x20, 0x7e);  // printable ASCII
    std::string out;
    const std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) out.push_back(static_cast<char>(char_dist(rng)));
    return out;
}

}  // namespace

TEST_CASE("preprocess: stated examples") {
    CHECK(preprocess("Can you clarify?") == TokenList{"can", "you", "clarify"});
    CHECK(preprocess("") == TokenList{});
    CHECK(preprocess("PLACE 3 Red-blocks!!") == TokenList{"place", "3", "red", "blocks"});
}

TEST_CASE("preprocess: separators and digits") {
    CHECK(preprocess("a,b;c") == TokenList{"a", "b", "c"});
    CHECK(preprocess("  \t spaced \n out \r\n ") == TokenList{"spaced", "out"});
    CHECK(preprocess("block42") == TokenList{"block42"});
    CHECK(preprocess("!!!") == TokenList{});
    CHECK(preprocess("don't") == TokenList{"don", "t"});
}

TEST_CASE("preprocess: idempotence over random strings") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 300; ++i) {
        const std::string text = random_ascii(rng, 40);
        const TokenList once = preprocess(text);
        CHECK(preprocess(join(once)) == once);
    }
}

TEST_CASE("preprocess: case insensitivity") {
    std::mt19937 rng(777);
    for (int i = 0; i < 300; ++i) {
        std::string text = random_ascii(rng, 40);
        std::string upper = text;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        CHECK(preprocess(text) == preprocess(upper));
    }
}

TEST_CASE("preprocess: output alphabet excludes uppercase and punctuation") {
    std::mt19937 rng(42);
    for (int i = 0; i < 300; ++i) {
        for (const std::string& token : preprocess(random_ascii(rng, 60))) {
            CHECK(!token.empty());
            for (const unsigned char c : token) {
                CHECK(!std::isupper(c));
                CHECK(!std::ispunct(c));
                CHECK(!std::isspace(c));
            }
        }
    }
}

TEST_CASE("preprocess: optional stopword and stemmer hooks") {
    PreprocessOptions options;
    options.stopwords = {"the", "a"};
    options.stemmer = [](const std::string& token) {
        if (token.size() > 3 && token.ends_with("s")) return token.substr(0, token.size() - 1);
        return token;
    };
    CHECK(preprocess("The red blocks", options) == TokenList{"red", "block"});

    PreprocessOptions defaults;  // both hooks off by default
    CHECK(preprocess("The red blocks", defaults) == preprocess("The red blocks"));
}
