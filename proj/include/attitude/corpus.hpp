#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attitude/dimension.hpp"

namespace attitude {

struct Tweet {
    std::string user_id;
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
    std::string text;

    friend bool operator==(const Tweet&, const Tweet&) = default;
};

// Display fields such as handle, location, bio.
using Profile = std::map<std::string, std::string>;

struct UserRecord {
    std::string user_id;
    std::vector<Tweet> tweets;  // ascending timestamp
    Profile profile;

    friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

// Upper bound on retained history per user; the oldest tweets are dropped.
inline constexpr std::size_t kMaxTweetsPerUser = 3200;

// Reads the line-delimited corpus format: one JSON object per line with
// user_id, timestamp, text and optional profile fields (either a "profile"
// object or top-level handle/location/bio). Users come back in order of first
// appearance with tweets sorted, deduplicated and capped.
std::vector<UserRecord> load_users(std::istream& in);
std::vector<UserRecord> load_users(const std::filesystem::path& path);

// Writes records in the format load_users reads. Loading the output
// reproduces the input exactly.
void save_users(std::ostream& out, std::span<const UserRecord> users);
void save_users(const std::filesystem::path& path, std::span<const UserRecord> users);

// Users with at least one tweet containing a brand keyword token.
std::vector<UserRecord> filter_brand_mentions(std::span<const UserRecord> users,
                                              const std::vector<std::string>& brand_keywords);

// Survey responses ---------------------------------------------------------

struct SurveyResponse {
    std::string user_id;
    std::string brand;
    PerDimension<double> values{};  // Likert values in [1, 5]
};

// Mean of the per-question responses of a multi-question dimension.
double aggregate_dimension(std::span<const double> values);

inline constexpr double kLikertMin = 1.0;
inline constexpr double kLikertMax = 5.0;
inline constexpr double kLikertMidpoint = 3.0;

// Positive iff value > midpoint. A tie is negative.
Label binarize(double value, double midpoint = kLikertMidpoint);

// CSV with header
// user_id,brand,favorability,persistence,confidence,accessibility,resistance,buy,recommend,prohibit
std::vector<SurveyResponse> load_survey(std::istream& in);
std::vector<SurveyResponse> load_survey(const std::filesystem::path& path);
void save_survey(std::ostream& out, std::span<const SurveyResponse> responses);

enum class ThresholdPolicy {
    ScaleMidpoint,  // fixed 3.0
    SampleMean,     // per-dimension mean of the responses being labeled
};

struct LabeledUser {
    UserRecord record;
    PerDimension<Label> labels{};
    // Raw survey values, kept for descriptive statistics.
    std::optional<PerDimension<double>> likert;
};

// Per-dimension binarization thresholds under a policy.
PerDimension<double> label_thresholds(std::span<const SurveyResponse> responses, ThresholdPolicy policy);

// Joins users with their responses by user_id (users without a response are
// skipped with a warning) and binarizes every dimension.
std::vector<LabeledUser> label_users(std::span<const UserRecord> users, std::span<const SurveyResponse> responses,
                                     ThresholdPolicy policy = ThresholdPolicy::ScaleMidpoint);

}  // namespace attitude
