#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/report.hpp"

namespace lcforge {

enum class StoreMode { Append, Read };

using RecordFilter = std::function<bool(const Json& metadata)>;

inline DataRecord parse_record_line(const std::string& line, std::size_t line_no) {
    try {
        return record_from_json(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
        throw ParseFailure(line_no, e.what());
    }
}

/// Records satisfying the filter, in file order. Blank lines are skipped; a bad line throws
/// ParseFailure with its 1-based number.
inline std::vector<DataRecord> load_records(const std::filesystem::path& path, const RecordFilter& filter = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read records: " + path.string());
    std::vector<DataRecord> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        DataRecord r = parse_record_line(line, n);
        if (!filter || filter(r.metadata)) out.push_back(std::move(r));
    }
    return out;
}

/// Append-only JSONL writer. Existing lines are never rewritten; ids are unique across the file.
class JsonlStore {
public:
    JsonlStore(std::filesystem::path path, StoreMode mode = StoreMode::Append) : path_(std::move(path)), mode_(mode) {
        if (std::filesystem::exists(path_)) {
            for (const auto& r : load_records(path_)) ids_.insert(r.id);
        } else if (mode_ == StoreMode::Read) {
            throw IoFailure("no such store: " + path_.string());
        }
        if (mode_ == StoreMode::Append) {
            if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
            out_.open(path_, std::ios::binary | std::ios::app);
            if (!out_) throw IoFailure("cannot open store for append: " + path_.string());
        }
    }

    /// Assigns a content id when the record has none.
    void append(DataRecord record) {
        std::lock_guard lock(mutex_);
        if (mode_ != StoreMode::Append) throw IoFailure("store opened read-only: " + path_.string());
        if (record.id.empty()) assign_id(record);
        if (ids_.count(record.id)) throw DuplicateId(record.id);
        out_ << dump_compact(record_to_json(record)) << '\n';
        out_.flush();
        if (!out_) throw IoFailure("write failed: " + path_.string());
        ids_.insert(record.id);
        ++written_;
    }

    bool contains(const std::string& id) const {
        std::lock_guard lock(mutex_);
        return ids_.count(id) > 0;
    }

    std::size_t written() const {
        std::lock_guard lock(mutex_);
        return written_;
    }

    const std::filesystem::path& path() const { return path_; }
    StoreMode mode() const { return mode_; }

private:
    std::filesystem::path path_;
    StoreMode mode_;
    std::ofstream out_;
    std::set<std::string> ids_;
    std::size_t written_ = 0;
    mutable std::mutex mutex_;
};

/// Staging list for records awaiting judgment. Flushes to a pending file, not the final store.
class ResponseBuffer {
public:
    void stage(DataRecord r) {
        std::lock_guard lock(mutex_);
        items_.push_back(std::move(r));
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return items_.size();
    }

    std::vector<DataRecord> drain() {
        std::lock_guard lock(mutex_);
        return std::exchange(items_, {});
    }

    /// Returns how many records were written.
    std::size_t flush_pending(const std::filesystem::path& pending_path) {
        auto items = drain();
        JsonlStore store(pending_path, StoreMode::Append);
        for (auto& r : items) store.append(std::move(r));
        return items.size();
    }

private:
    std::vector<DataRecord> items_;
    mutable std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Statistics

struct TokenDistribution {
    std::size_t min = 0;
    double median = 0.0;
    std::size_t max = 0;
};

struct RulePassRate {
    std::size_t records = 0;  // records with at least one check of this rule
    std::size_t passing = 0;  // of those, records with no failed check of this rule
    double rate() const { return records ? static_cast<double>(passing) / static_cast<double>(records) : 0.0; }
};

struct CorpusStats {
    std::size_t records = 0;
    std::map<std::string, std::size_t> by_type;
    std::size_t validated = 0;  // records carrying validator_logs
    std::size_t failing = 0;    // validated records with any failed check
    TokenDistribution tokens;
    std::map<std::string, RulePassRate> rule_pass_rates;
    std::map<std::string, std::size_t> judge_histogram;  // floor(judge_score) as "1".."5"
    std::map<std::string, std::size_t> judge_status;
};

inline double median_of(std::vector<std::size_t> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? static_cast<double>(v[n / 2]) : (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

/// Token count of a record: metadata.token_count when present, else whitespace words.
inline std::size_t record_tokens(const DataRecord& r) {
    if (auto it = r.metadata.find("token_count"); it != r.metadata.end() && it->is_number_unsigned()) {
        return it->get<std::size_t>();
    }
    std::size_t n = 0;
    for (const auto& m : r.conversation) n += count_words(m.content);
    return n;
}

inline CorpusStats stats(const std::vector<DataRecord>& records) {
    CorpusStats s;
    s.records = records.size();
    std::vector<std::size_t> tokens;
    for (const auto& r : records) {
        ++s.by_type[r.metadata.value("record_type", std::string("chat"))];
        tokens.push_back(record_tokens(r));
        if (auto it = r.metadata.find("validator_logs"); it != r.metadata.end() && it->is_object()) {
            ++s.validated;
            const ValidationReport rep = report_from_json(*it);
            if (!rep.pass()) ++s.failing;
            std::map<std::string, bool> seen;
            for (const auto& c : rep.checks) {
                auto [pos, inserted] = seen.emplace(std::string(rule_name(c.rule)), true);
                pos->second = pos->second && c.pass;
            }
            for (const auto& [rule, ok] : seen) {
                auto& pr = s.rule_pass_rates[rule];
                ++pr.records;
                if (ok) ++pr.passing;
            }
        }
        if (auto it = r.metadata.find("judge_score"); it != r.metadata.end() && it->is_number()) {
            const int bin = std::clamp(static_cast<int>(std::floor(it->get<double>())), 1, 5);
            ++s.judge_histogram[std::to_string(bin)];
        }
        if (auto it = r.metadata.find("judge_status"); it != r.metadata.end() && it->is_string()) {
            ++s.judge_status[it->get<std::string>()];
        }
    }
    if (!tokens.empty()) {
        s.tokens.min = *std::min_element(tokens.begin(), tokens.end());
        s.tokens.max = *std::max_element(tokens.begin(), tokens.end());
        s.tokens.median = median_of(tokens);
    }
    return s;
}

inline Json stats_to_json(const CorpusStats& s) {
    Json rates = Json::object();
    for (const auto& [rule, pr] : s.rule_pass_rates) {
        rates[rule] = Json{{"records", pr.records}, {"passing", pr.passing}, {"rate", pr.rate()}};
    }
    return Json{{"records", s.records},
                {"by_type", s.by_type},
                {"validated", s.validated},
                {"failing", s.failing},
                {"tokens", Json{{"min", s.tokens.min}, {"median", s.tokens.median}, {"max", s.tokens.max}}},
                {"rule_pass_rates", rates},
                {"judge_histogram", s.judge_histogram},
                {"judge_status", s.judge_status}};
}

}  // namespace lcforge
