#include "attitude/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"
#include "attitude/tokenize.hpp"

namespace attitude {
namespace {

std::string normalize_word(std::string_view raw) {
    std::string w(detail::trim(raw));
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return w;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
    if (s == "positive") return Polarity::Positive;
    if (s == "negative") return Polarity::Negative;
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Polarity p) noexcept { return p == Polarity::Positive ? "positive" : "negative"; }

Lexicon::Lexicon(const std::vector<std::string>& positive, const std::vector<std::string>& negative) {
    std::set<std::string, std::less<>> pos, neg;
    for (const auto& w : positive)
        if (auto n = normalize_word(w); !n.empty()) pos.insert(std::move(n));
    for (const auto& w : negative)
        if (auto n = normalize_word(w); !n.empty()) neg.insert(std::move(n));

    for (const auto& w : pos) {
        if (neg.count(w)) {
            warn("lexicon word '" + w + "' listed as both positive and negative; dropped");
            continue;
        }
        entries_.emplace(w, Polarity::Positive);
    }
    for (const auto& w : neg)
        if (!pos.count(w)) entries_.emplace(w, Polarity::Negative);
}

std::optional<Polarity> Lexicon::polarity(std::string_view word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> read_word_list(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto t = detail::trim(line);
        if (t.empty() || t.front() == ';') continue;
        words.emplace_back(t);
    }
    return words;
}

Lexicon load_lexicon(const std::filesystem::path& positive_path, const std::filesystem::path& negative_path) {
    auto pos_in = open_input(positive_path);
    auto neg_in = open_input(negative_path);
    return Lexicon(read_word_list(pos_in), read_word_list(neg_in));
}

std::optional<Polarity> DomainLexicon::polarity(std::string_view word) const {
    auto it = entries.find(word);
    if (it == entries.end()) return std::nullopt;
    return it->second.polarity;
}

CooccurrenceCounts count_brand_cooccurrences(std::span<const UserRecord> users,
                                             const std::vector<std::string>& brand_keywords, const Lexicon& general,
                                             int window) {
    if (window < 1) throw std::invalid_argument("induction window must be >= 1");
    KeywordSet keywords(brand_keywords);
    CooccurrenceCounts out;

    for (const auto& user : users) {
        for (const auto& tweet : user.tweets) {
            Tokens tokens = tokenize(tweet.text);
            auto anchors = keywords.positions(tokens);
            if (anchors.empty()) continue;

            int balance = 0;
            for (const auto& t : tokens) {
                if (auto p = general.polarity(t)) balance += (*p == Polarity::Positive) ? 1 : -1;
            }
            if (balance == 0) continue;

            const auto w = static_cast<std::size_t>(window);
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                const auto& token = tokens[i];
                if (keywords.contains(token) || general.contains(token)) continue;
                bool near = std::any_of(anchors.begin(), anchors.end(), [&](std::size_t a) {
                    return (i > a ? i - a : a - i) <= w;
                });
                if (!near) continue;
                auto& [pos, neg] = out.counts[token];
                (balance > 0 ? pos : neg) += 1;
            }
        }
    }
    return out;
}

DomainLexicon induce_domain_lexicon(std::span<const UserRecord> training_users,
                                    const std::vector<std::string>& brand_keywords, const Lexicon& general,
                                    const InductionParams& params, std::string source_brand) {
    if (!(params.threshold > 0)) throw std::invalid_argument("induction threshold must be > 0");
    auto counts = count_brand_cooccurrences(training_users, brand_keywords, general, params.window);

    DomainLexicon lex;
    lex.source_brand = std::move(source_brand);
    lex.threshold_used = params.threshold;
    lex.window_used = params.window;
    for (const auto& [word, c] : counts.counts) {
        const double diff = static_cast<double>(c.first) - static_cast<double>(c.second);
        if (diff >= params.threshold)
            lex.entries.emplace(word, DomainEntry{Polarity::Positive, diff});
        else if (-diff >= params.threshold)
            lex.entries.emplace(word, DomainEntry{Polarity::Negative, -diff});
    }
    return lex;
}

void save_domain_lexicon(std::ostream& out, const DomainLexicon& lex) {
    out << ";brand\t" << lex.source_brand << '\n';
    out << ";threshold\t" << detail::format_double(lex.threshold_used) << '\n';
    out << ";window\t" << lex.window_used << '\n';
    for (const auto& [word, e] : lex.entries)
        out << word << '\t' << to_string(e.polarity) << '\t' << detail::format_double(e.score) << '\n';
}

void save_domain_lexicon(const std::filesystem::path& path, const DomainLexicon& lex) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    save_domain_lexicon(out, lex);
}

DomainLexicon load_domain_lexicon(std::istream& in) {
    DomainLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab1 = line.find('\t');
        if (tab1 == std::string::npos) throw ParseError("expected tab-separated fields", line_no);
        std::string_view key(line.data(), tab1);
        std::string_view rest(line.data() + tab1 + 1, line.size() - tab1 - 1);
        if (key.starts_with(';')) {
            if (key == ";brand") {
                lex.source_brand = std::string(rest);
            } else if (key == ";threshold") {
                auto v = detail::parse_double(rest);
                if (!v) throw ParseError("bad threshold", line_no);
                lex.threshold_used = *v;
            } else if (key == ";window") {
                auto v = detail::parse_int<int>(rest);
                if (!v) throw ParseError("bad window", line_no);
                lex.window_used = *v;
            }
            continue;
        }
        auto tab2 = rest.find('\t');
        if (tab2 == std::string_view::npos) throw ParseError("expected word, polarity and score", line_no);
        auto pol = parse_polarity(rest.substr(0, tab2));
        auto score = detail::parse_double(rest.substr(tab2 + 1));
        if (!pol) throw ParseError("polarity must be 'positive' or 'negative'", line_no);
        if (!score || !(*score > 0)) throw ParseError("score must be a positive number", line_no);
        if (!lex.entries.emplace(std::string(key), DomainEntry{*pol, *score}).second)
            throw ParseError("duplicate word '" + std::string(key) + "'", line_no);
    }
    return lex;
}

DomainLexicon load_domain_lexicon(const std::filesystem::path& path) {
    auto in = open_input(path);
    return load_domain_lexicon(in);
}

void save_lexicon(std::ostream& out, const Lexicon& lex) {
    for (const auto& [word, p] : lex.entries()) out << word << '\t' << to_string(p) << '\n';
}

Lexicon load_lexicon_table(std::istream& in) {
    std::vector<std::string> pos, neg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == ';') continue;
        auto tab = line.find('\t');
        auto pol = tab == std::string::npos ? std::nullopt : parse_polarity(std::string_view(line).substr(tab + 1));
        if (!pol) throw ParseError("expected word<TAB>positive|negative", line_no);
        (*pol == Polarity::Positive ? pos : neg).push_back(line.substr(0, tab));
    }
    return Lexicon(pos, neg);
}

}  // namespace attitude
