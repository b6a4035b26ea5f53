#include "attitude/corpus.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/diagnostics.hpp"
#include "attitude/error.hpp"
#include "attitude/tokenize.hpp"

namespace attitude {
namespace {

using nlohmann::json;

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::array<std::string_view, 3> kTopLevelProfileFields = {"handle", "location", "bio"};

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

struct PendingUser {
    UserRecord record;
    std::set<std::pair<std::int64_t, std::string>> seen;
};

void read_profile_field(Profile& profile, const std::string& key, const json& value, std::size_t line) {
    if (value.is_null()) return;
    if (!value.is_string()) throw ParseError("profile field '" + key + "' must be a string", line);
    profile[key] = value.get<std::string>();
}

}  // namespace

std::vector<UserRecord> load_users(std::istream& in) {
    std::vector<PendingUser> users;
    std::unordered_map<std::string, std::size_t> index;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with(kBom)) throw ParseError("byte-order mark is not allowed", line_no);
        if (detail::trim(line).empty()) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) throw ParseError("record must be a JSON object", line_no);

        auto uid = obj.find("user_id");
        if (uid == obj.end() || !uid->is_string() || uid->get_ref<const std::string&>().empty())
            throw ParseError("missing or empty string field 'user_id'", line_no);
        auto ts = obj.find("timestamp");
        if (ts == obj.end() || !(ts->is_number_integer()))
            throw ParseError("missing or non-integer field 'timestamp'", line_no);
        if (ts->is_number_unsigned() ? ts->get<std::uint64_t>() > std::uint64_t(INT64_MAX)
                                     : ts->get<std::int64_t>() < 0)
            throw ParseError("timestamp must be a non-negative 64-bit integer", line_no);
        auto text = obj.find("text");
        if (text == obj.end() || !text->is_string()) throw ParseError("missing string field 'text'", line_no);

        Tweet tweet{uid->get<std::string>(), ts->get<std::int64_t>(), text->get<std::string>()};

        auto [it, inserted] = index.try_emplace(tweet.user_id, users.size());
        if (inserted) users.push_back(PendingUser{UserRecord{tweet.user_id, {}, {}}, {}});
        PendingUser& user = users[it->second];

        if (auto p = obj.find("profile"); p != obj.end() && !p->is_null()) {
            if (!p->is_object()) throw ParseError("'profile' must be an object", line_no);
            for (const auto& [k, v] : p->items()) read_profile_field(user.record.profile, k, v, line_no);
        }
        for (auto field : kTopLevelProfileFields) {
            if (auto f = obj.find(std::string(field)); f != obj.end())
                read_profile_field(user.record.profile, std::string(field), *f, line_no);
        }

        if (user.seen.emplace(tweet.timestamp, tweet.text).second) user.record.tweets.push_back(std::move(tweet));
    }

    std::vector<UserRecord> out;
    out.reserve(users.size());
    for (auto& pending : users) {
        auto& tweets = pending.record.tweets;
        std::stable_sort(tweets.begin(), tweets.end(),
                         [](const Tweet& a, const Tweet& b) { return a.timestamp < b.timestamp; });
        if (tweets.size() > kMaxTweetsPerUser)
            tweets.erase(tweets.begin(), tweets.end() - static_cast<std::ptrdiff_t>(kMaxTweetsPerUser));
        out.push_back(std::move(pending.record));
    }
    return out;
}

std::vector<UserRecord> load_users(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return load_users(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_users(std::ostream& out, std::span<const UserRecord> users) {
    for (const auto& user : users) {
        bool first = true;
        for (const auto& tweet : user.tweets) {
            json obj = {{"user_id", user.user_id}, {"timestamp", tweet.timestamp}, {"text", tweet.text}};
            if (first && !user.profile.empty()) obj["profile"] = user.profile;
            first = false;
            out << obj.dump() << '\n';
        }
    }
}

void save_users(const std::filesystem::path& path, std::span<const UserRecord> users) {
    auto out = open_output(path);
    save_users(out, users);
}

std::vector<UserRecord> filter_brand_mentions(std::span<const UserRecord> users,
                                              const std::vector<std::string>& brand_keywords) {
    if (brand_keywords.empty()) throw std::invalid_argument("filter_brand_mentions: no brand keywords");
    KeywordSet keywords(brand_keywords);
    std::vector<UserRecord> out;
    for (const auto& user : users) {
        bool hit = std::any_of(user.tweets.begin(), user.tweets.end(),
                               [&](const Tweet& t) { return keywords.mentioned_in(tokenize(t.text)); });
        if (hit) out.push_back(user);
    }
    return out;
}

double aggregate_dimension(std::span<const double> values) {
    if (values.empty()) throw Error("aggregate_dimension: no responses to average");
    double sum = std::accumulate(values.begin(), values.end(), 0.0);
    double mean = sum / static_cast<double>(values.size());
    // n copies of v must give v back exactly; the division above can be off by an ulp.
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) return values.front();
    return mean;
}

Label binarize(double value, double midpoint) {
    if (!(value >= kLikertMin && value <= kLikertMax))
        throw Error("Likert value " + detail::format_double(value) + " outside [1, 5]");
    return label_from_bool(value > midpoint);
}

// Survey --------------------------------------------------------------------

namespace {

constexpr std::string_view kSurveyHeader =
    "user_id,brand,favorability,persistence,confidence,accessibility,resistance,buy,recommend,prohibit";

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cells.push_back(detail::trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::vector<SurveyResponse> load_survey(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<SurveyResponse> out;
    std::set<std::pair<std::string, std::string>> keys;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with(kBom)) throw ParseError("byte-order mark is not allowed", line_no);
        auto trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        if (!header_seen) {
            std::string normalized;
            for (auto cell : split_csv(trimmed)) {
                if (!normalized.empty()) normalized += ',';
                normalized += lowercase(cell);
            }
            if (normalized != kSurveyHeader)
                throw ParseError("unexpected survey header, expected '" + std::string(kSurveyHeader) + "'", line_no);
            header_seen = true;
            continue;
        }
        auto cells = split_csv(trimmed);
        if (cells.size() != 2 + kDimensionCount)
            throw ParseError("expected " + std::to_string(2 + kDimensionCount) + " cells, got " +
                                 std::to_string(cells.size()),
                             line_no);
        SurveyResponse r;
        r.user_id = std::string(cells[0]);
        r.brand = std::string(cells[1]);
        if (r.user_id.empty()) throw ParseError("empty user_id", line_no);
        for (Dimension d : kAllDimensions) {
            auto cell = cells[2 + index_of(d)];
            auto v = detail::parse_double(cell);
            if (!v || !(*v >= kLikertMin && *v <= kLikertMax))
                throw ParseError("value '" + std::string(cell) + "' for " + std::string(to_string(d)) +
                                     " is not a number in [1, 5]",
                                 line_no);
            r.values[index_of(d)] = *v;
        }
        if (!keys.emplace(r.user_id, r.brand).second)
            throw ParseError("duplicate response for user '" + r.user_id + "'", line_no);
        out.push_back(std::move(r));
    }
    if (!header_seen && line_no > 0) throw ParseError("survey file has no header");
    return out;
}

std::vector<SurveyResponse> load_survey(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return load_survey(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_survey(std::ostream& out, std::span<const SurveyResponse> responses) {
    out << kSurveyHeader << '\n';
    for (const auto& r : responses) {
        out << r.user_id << ',' << r.brand;
        for (double v : r.values) out << ',' << detail::format_double(v);
        out << '\n';
    }
}

PerDimension<double> label_thresholds(std::span<const SurveyResponse> responses, ThresholdPolicy policy) {
    PerDimension<double> thresholds;
    thresholds.fill(kLikertMidpoint);
    if (policy == ThresholdPolicy::ScaleMidpoint) return thresholds;
    if (responses.empty()) throw Error("sample-mean thresholds need at least one response");
    for (Dimension d : kAllDimensions) {
        std::vector<double> column;
        column.reserve(responses.size());
        for (const auto& r : responses) column.push_back(r.values[index_of(d)]);
        thresholds[index_of(d)] = aggregate_dimension(column);
    }
    return thresholds;
}

std::vector<LabeledUser> label_users(std::span<const UserRecord> users, std::span<const SurveyResponse> responses,
                                     ThresholdPolicy policy) {
    std::unordered_map<std::string, const SurveyResponse*> by_user;
    for (const auto& r : responses) {
        if (!by_user.emplace(r.user_id, &r).second)
            throw Error("more than one survey response for user '" + r.user_id + "'");
    }
    auto thresholds = label_thresholds(responses, policy);

    std::vector<LabeledUser> out;
    std::size_t missing = 0;
    for (const auto& user : users) {
        auto it = by_user.find(user.user_id);
        if (it == by_user.end()) {
            ++missing;
            continue;
        }
        LabeledUser labeled{user, {}, it->second->values};
        for (Dimension d : kAllDimensions)
            labeled.labels[index_of(d)] = binarize(it->second->values[index_of(d)], thresholds[index_of(d)]);
        out.push_back(std::move(labeled));
    }
    if (missing) warn(std::to_string(missing) + " user(s) without a survey response were skipped");
    return out;
}

}  // namespace attitude
