#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace attitude {

using Tokens = std::vector<std::string>;

// Lowercases, drops whitespace-delimited chunks that are URLs (http:// or
// https://), then splits on every byte outside [a-z0-9@#']. Handle and hashtag
// prefixes survive, so "Awesome @Delta!" yields {"awesome", "@delta"}.
Tokens tokenize(std::string_view text);

// Brand keywords are matched as whole tokens, case-insensitively.
class KeywordSet {
public:
    KeywordSet() = default;
    explicit KeywordSet(const std::vector<std::string>& keywords);

    bool contains(std::string_view token) const;
    bool empty() const noexcept { return words_.empty(); }
    const std::vector<std::string>& words() const noexcept { return words_; }

    // True if any token is a keyword.
    bool mentioned_in(const Tokens& tokens) const;

    // Indices of keyword tokens, ascending.
    std::vector<std::size_t> positions(const Tokens& tokens) const;

private:
    std::vector<std::string> words_;  // sorted, unique, lowercase
};

}  // namespace attitude
