#include "attitude/tokenize.hpp"

#include <algorithm>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/error.hpp"

namespace attitude {
namespace {

constexpr bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

constexpr char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

constexpr bool is_token_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '@' || c == '#' || c == '\'';
}

bool is_url(std::string_view chunk) {
    auto starts = [&](std::string_view prefix) {
        if (chunk.size() < prefix.size()) return false;
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            if (lower(chunk[i]) != prefix[i]) return false;
        }
        return true;
    };
    return starts("http://") || starts("https://");
}

}  // namespace

Tokens tokenize(std::string_view text) {
    Tokens out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        std::string_view chunk = text.substr(start, i - start);
        if (chunk.empty() || is_url(chunk)) continue;

        std::string current;
        for (char raw : chunk) {
            char c = lower(raw);
            if (is_token_char(c)) {
                current.push_back(c);
            } else if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
        }
        if (!current.empty()) out.push_back(std::move(current));
    }
    return out;
}

KeywordSet::KeywordSet(const std::vector<std::string>& keywords) {
    for (const auto& k : keywords) {
        std::string w(detail::trim(k));
        std::transform(w.begin(), w.end(), w.begin(), lower);
        if (w.empty()) throw Error("brand keyword must not be empty");
        words_.push_back(std::move(w));
    }
    std::sort(words_.begin(), words_.end());
    words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
}

bool KeywordSet::contains(std::string_view token) const {
    return std::binary_search(words_.begin(), words_.end(), token);
}

bool KeywordSet::mentioned_in(const Tokens& tokens) const {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return contains(t); });
}

std::vector<std::size_t> KeywordSet::positions(const Tokens& tokens) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (contains(tokens[i])) out.push_back(i);
    }
    return out;
}

}  // namespace attitude
