#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "attitude/detail/numeric_text.hpp"
#include "attitude/error.hpp"
#include "attitude/service.hpp"
#include "attitude/tokenize.hpp"

namespace attitude {

using ordered = nlohmann::ordered_json;

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
    });
}

double edge(int i, int bins) { return static_cast<double>(i) / bins; }

}  // namespace

// Scoring ------------------------------------------------------------------

std::vector<ScoredUser> score_cohort(std::span<const UserRecord> users, const std::string& brand,
                                     const ModelBundle& bundle) {
    if (!iequals(brand, bundle.config.brand))
        throw std::invalid_argument("model bundle was trained for brand '" + bundle.config.brand + "', not '" +
                                    brand + "'");
    const KeywordSet keywords(bundle.config.brand_keywords);
    const auto& a = bundle.artifacts;

    std::vector<ScoredUser> out;
    for (const UserRecord& u : filter_brand_mentions(users, bundle.config.brand_keywords)) {
        const FeatureVector x = build_feature_vector(u, a.features, bundle.general, a.domain);
        const IcaResult r = ica_infer(x, a.models, a.graph, bundle.config.ica);

        ScoredUser s;
        s.user_id = u.user_id;
        s.brand = bundle.config.brand;
        s.scores = r.assignment.probs;
        s.independent = r.static_probs;
        s.profile = u.profile;
        for (const Tweet& t : u.tweets)
            if (keywords.mentioned_in(tokenize(t.text))) s.relevant_tweets.push_back(t);
        std::stable_sort(s.relevant_tweets.begin(), s.relevant_tweets.end(),
                         [](const Tweet& x, const Tweet& y) { return x.timestamp > y.timestamp; });
        out.push_back(std::move(s));
    }
    return out;
}

// Distributions and filters ------------------------------------------------

std::size_t bin_index(double score, int bins) {
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    if (!(score >= 0.0 && score <= 1.0)) throw std::invalid_argument("score outside [0, 1]");
    // Start from the arithmetic guess, then settle against the edges themselves
    // so a score equal to an edge always lands in the bin that edge opens.
    int i = std::min(static_cast<int>(score * bins), bins - 1);
    while (i > 0 && score < edge(i, bins)) --i;
    while (i + 1 < bins && score >= edge(i + 1, bins)) ++i;
    return static_cast<std::size_t>(i);
}

Histogram distribution(std::span<const ScoredUser> cohort, Dimension dimension, EvalMode mode, int bins) {
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    Histogram h;
    h.dimension = dimension;
    for (int i = 0; i <= bins; ++i) h.bin_edges.push_back(edge(i, bins));
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (const auto& u : cohort) ++h.counts[bin_index(u.scores_for(mode)[index_of(dimension)], bins)];
    return h;
}

void FilterSpec::validate() const {
    PerDimension<bool> seen{};
    for (const auto& p : predicates) {
        if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= 1.0))
            throw std::invalid_argument("filter on " + std::string(to_string(p.dimension)) +
                                        ": need 0 <= lo <= hi <= 1");
        if (seen[index_of(p.dimension)])
            throw std::invalid_argument("more than one filter on " + std::string(to_string(p.dimension)));
        seen[index_of(p.dimension)] = true;
    }
}

bool FilterSpec::matches(const PerDimension<double>& scores) const {
    return std::all_of(predicates.begin(), predicates.end(), [&](const RangePredicate& p) {
        const double s = scores[index_of(p.dimension)];
        return s >= p.lo && s <= p.hi;
    });
}

FilterSpec parse_filter_spec(std::string_view text) {
    FilterSpec spec;
    text = detail::trim(text);
    if (text.empty()) return spec;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = detail::trim(text.substr(start, comma - start));
        const std::size_t c1 = item.find(':');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
        if (c2 == std::string_view::npos || item.find(':', c2 + 1) != std::string_view::npos)
            throw std::invalid_argument("filter '" + std::string(item) + "' is not dimension:lo:hi");
        const auto dim = parse_dimension(item.substr(0, c1));
        if (!dim) throw std::invalid_argument("unknown dimension '" + std::string(item.substr(0, c1)) + "'");
        const auto lo = detail::parse_double(item.substr(c1 + 1, c2 - c1 - 1));
        const auto hi = detail::parse_double(item.substr(c2 + 1));
        if (!lo || !hi) throw std::invalid_argument("filter '" + std::string(item) + "' has a non-numeric bound");
        spec.predicates.push_back({*dim, *lo, *hi});
        start = comma + 1;
    }
    spec.validate();
    return spec;
}

std::string format_filter_spec(const FilterSpec& spec) {
    std::string out;
    for (const auto& p : spec.predicates) {
        if (!out.empty()) out += ',';
        out += std::string(to_string(p.dimension)) + ':' + detail::format_double(p.lo) + ':' +
               detail::format_double(p.hi);
    }
    return out;
}

std::vector<ScoredUser> filter_users(std::span<const ScoredUser> cohort, const FilterSpec& spec, EvalMode mode) {
    spec.validate();
    std::vector<ScoredUser> out;
    for (const auto& u : cohort)
        if (spec.matches(u.scores_for(mode))) out.push_back(u);
    return out;
}

const ScoredUser& user_detail(std::span<const ScoredUser> cohort, std::string_view user_id) {
    for (const auto& u : cohort)
        if (u.user_id == user_id) return u;
    throw NotFoundError("unknown user '" + std::string(user_id) + "'");
}

// Snapshot files -----------------------------------------------------------

namespace {

ordered scores_json(const PerDimension<double>& scores) {
    ordered j = ordered::object();
    for (Dimension d : kAllDimensions) j[std::string(to_string(d))] = scores[index_of(d)];
    return j;
}

PerDimension<double> scores_from_json(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw ParseError("scores must be an object", line);
    PerDimension<double> s{};
    for (Dimension d : kAllDimensions) {
        const auto it = j.find(std::string(to_string(d)));
        if (it == j.end() || !it->is_number())
            throw ParseError("missing score for " + std::string(to_string(d)), line);
        s[index_of(d)] = it->get<double>();
        if (!(s[index_of(d)] >= 0.0 && s[index_of(d)] <= 1.0))
            throw ParseError("score for " + std::string(to_string(d)) + " outside [0, 1]", line);
    }
    return s;
}

ordered profile_json(const Profile& p) {
    ordered j = ordered::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

ordered tweets_json(const std::vector<Tweet>& tweets) {
    ordered j = ordered::array();
    for (const auto& t : tweets) j.push_back(ordered{{"timestamp", t.timestamp}, {"text", t.text}});
    return j;
}

ordered scored_user_json(const ScoredUser& u) {
    return ordered{{"user_id", u.user_id},
                   {"brand", u.brand},
                   {"scores", scores_json(u.scores)},
                   {"independent", scores_json(u.independent)},
                   {"profile", profile_json(u.profile)},
                   {"relevant_tweets", tweets_json(u.relevant_tweets)}};
}

}  // namespace

void save_snapshot(std::ostream& out, std::span<const ScoredUser> cohort) {
    for (const auto& u : cohort) out << scored_user_json(u).dump() << '\n';
}

void save_snapshot(const std::filesystem::path& path, std::span<const ScoredUser> cohort) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    save_snapshot(out, cohort);
}

std::vector<ScoredUser> load_snapshot(std::istream& in) {
    std::vector<ScoredUser> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
        try {
            ScoredUser u;
            u.user_id = j.at("user_id").get<std::string>();
            u.brand = j.at("brand").get<std::string>();
            u.scores = scores_from_json(j.at("scores"), line_no);
            u.independent = scores_from_json(j.at("independent"), line_no);
            const nlohmann::json profile = j.value("profile", nlohmann::json::object());
            for (const auto& [k, v] : profile.items()) u.profile[k] = v.get<std::string>();
            const nlohmann::json tweets = j.value("relevant_tweets", nlohmann::json::array());
            for (const auto& t : tweets)
                u.relevant_tweets.push_back({u.user_id, t.at("timestamp").get<std::int64_t>(),
                                             t.at("text").get<std::string>()});
            out.push_back(std::move(u));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return out;
}

std::vector<ScoredUser> load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return load_snapshot(in);
}

// Snapshot store -----------------------------------------------------------

SnapshotStore::SnapshotStore(Snapshot initial) : snapshot_(std::make_shared<const Snapshot>(std::move(initial))) {}

std::shared_ptr<const Snapshot> SnapshotStore::current() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

void SnapshotStore::replace(Snapshot next) {
    auto fresh = std::make_shared<const Snapshot>(std::move(next));
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(fresh);
}

// Request routing ----------------------------------------------------------

namespace {

ApiResponse error_response(int status, const std::string& message) {
    return {status, ordered{{"error", message}}.dump()};
}

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start < path.size()) {
        std::size_t slash = path.find('/', start);
        if (slash == std::string_view::npos) slash = path.size();
        if (slash > start) parts.push_back(path.substr(start, slash - start));
        start = slash + 1;
    }
    return parts;
}

}  // namespace

ApiResponse handle_request(const Snapshot& snapshot, std::string_view path,
                           const std::map<std::string, std::string>& query) {
    const auto parts = split_path(path);
    if (parts.size() < 4 || parts[0] != "api" || parts[1] != "v1" || parts[2] != "brands")
        return error_response(404, "no such endpoint");
    if (!iequals(parts[3], snapshot.brand)) return error_response(404, "unknown brand '" + std::string(parts[3]) + "'");

    EvalMode mode = EvalMode::Ica;
    if (auto it = query.find("mode"); it != query.end()) {
        auto m = parse_eval_mode(it->second);
        if (!m) return error_response(400, "mode must be 'ica' or 'independent'");
        mode = *m;
    }

    try {
        if (parts.size() == 5 && parts[4] == "distributions") {
            ordered dists = ordered::array();
            for (Dimension d : kAllDimensions) {
                const Histogram h = distribution(snapshot.users, d, mode, snapshot.histogram_bins);
                dists.push_back(ordered{{"dimension", to_string(d)}, {"bin_edges", h.bin_edges}, {"counts", h.counts}});
            }
            return {200, ordered{{"brand", snapshot.brand},
                                 {"mode", to_string(mode)},
                                 {"cohort_size", snapshot.users.size()},
                                 {"distributions", dists}}
                             .dump()};
        }
        if (parts.size() == 5 && parts[4] == "users") {
            FilterSpec spec;
            if (auto it = query.find("filters"); it != query.end()) {
                try {
                    spec = parse_filter_spec(it->second);
                } catch (const std::invalid_argument& e) {
                    return error_response(400, e.what());
                }
            }
            ordered users = ordered::array();
            for (const auto& u : filter_users(snapshot.users, spec, mode))
                users.push_back(ordered{{"user_id", u.user_id},
                                        {"profile", profile_json(u.profile)},
                                        {"scores", scores_json(u.scores_for(mode))}});
            return {200, ordered{{"brand", snapshot.brand},
                                 {"mode", to_string(mode)},
                                 {"filters", format_filter_spec(spec)},
                                 {"count", users.size()},
                                 {"users", users}}
                             .dump()};
        }
        if (parts.size() == 6 && parts[4] == "users") {
            const ScoredUser& u = user_detail(snapshot.users, parts[5]);
            return {200, ordered{{"user_id", u.user_id},
                                 {"brand", u.brand},
                                 {"mode", to_string(mode)},
                                 {"scores", scores_json(u.scores_for(mode))},
                                 {"profile", profile_json(u.profile)},
                                 {"relevant_tweets", tweets_json(u.relevant_tweets)}}
                             .dump()};
        }
    } catch (const NotFoundError& e) {
        return error_response(404, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
    return error_response(404, "no such endpoint");
}

}  // namespace attitude
