#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rearrange/errors.hpp"
#include "rearrange/process.hpp"

namespace rearrange {

struct FileChange {
    std::string path;      // post-image path; pre-image path for deletions
    std::string old_path;  // pre-image path, empty for additions
    bool is_deletion = false;
    bool is_binary = false;
    long lines_added = 0;
    long lines_deleted = 0;
    // (start, length) hunk ranges in the post-image, sorted, non-overlapping
    std::vector<std::pair<long, long>> changed_line_ranges;
};

struct CommitRecord {
    std::string commit_id;
    std::string author_key;  // lowercased author email
    std::int64_t timestamp_utc = 0;
    std::vector<std::string> parent_ids;
    std::vector<FileChange> file_changes;
    std::optional<double> tct_hours;

    bool is_merge() const { return parent_ids.size() > 1; }
};

inline long commit_loc(const CommitRecord& commit) {
    long total = 0;
    for (const auto& fc : commit.file_changes)
        total += fc.lines_added + fc.lines_deleted;
    return total;
}

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

inline bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

// Strips the a/ or b/ prefix git puts on diff paths.
inline std::string strip_diff_prefix(const std::string& p) {
    if (p == "/dev/null") return {};
    if (p.size() > 2 && (p[0] == 'a' || p[0] == 'b') && p[1] == '/') return p.substr(2);
    return p;
}

struct diff_file_state {
    std::string old_path;
    std::string new_path;
    bool binary = false;
    long added = 0;
    long deleted = 0;
    std::vector<std::pair<long, long>> ranges;
    bool active = false;
};

inline void flush_file(diff_file_state& st, CommitRecord& rec) {
    if (!st.active) return;
    // Pure renames and binary changes carry no countable lines; drop them.
    if (st.added + st.deleted > 0) {
        FileChange fc;
        fc.is_deletion = st.new_path.empty();
        fc.path = fc.is_deletion ? st.old_path : st.new_path;
        fc.old_path = st.old_path;
        fc.is_binary = st.binary;
        fc.lines_added = st.added;
        fc.lines_deleted = st.deleted;
        fc.changed_line_ranges = std::move(st.ranges);
        std::sort(fc.changed_line_ranges.begin(), fc.changed_line_ranges.end());
        rec.file_changes.push_back(std::move(fc));
    }
    st = diff_file_state{};
}

// Parses "@@ -a[,b] +c[,d] @@ ..." into (old_count, new_start, new_count).
// Omitted counts default to 1 per the unified diff format.
inline bool parse_hunk_header(const std::string& line, long& old_count,
                              long& new_start, long& new_count) {
    if (!starts_with(line, "@@ -")) return false;
    const char* p = line.c_str() + 4;
    char* end = nullptr;
    std::strtol(p, &end, 10);  // old start, unused
    if (end == p) return false;
    p = end;
    old_count = 1;
    if (*p == ',') {
        old_count = std::strtol(p + 1, &end, 10);
        p = end;
    }
    if (*p != ' ' || *(p + 1) != '+') return false;
    p += 2;
    new_start = std::strtol(p, &end, 10);
    if (end == p) return false;
    p = end;
    new_count = 1;
    if (*p == ',') {
        new_count = std::strtol(p + 1, &end, 10);
        p = end;
    }
    return true;
}

} // namespace detail

// Walks the history of `branch` in ascending topological order, diffing each
// commit against its first parent. Renames above 50% similarity are collapsed.
inline std::vector<CommitRecord> walk_history(const std::string& repo_path,
                                              const std::string& branch = "HEAD",
                                              std::optional<long> max_commits = std::nullopt) {
    using namespace detail;
    auto probe = run_command({"git", "-C", repo_path, "rev-parse", "--git-dir"});
    if (probe.exit_code != 0)
        throw config_error("not a readable git repository: " + repo_path);

    auto head = run_command({"git", "-C", repo_path, "rev-list", "-n", "1", branch, "--"});
    if (head.exit_code != 0) {
        auto any = run_command({"git", "-C", repo_path, "rev-list", "-n", "1", "--all"});
        if (any.exit_code != 0 || any.output.empty())
            return {};  // empty repository: no history is not an error
        throw config_error("cannot resolve branch '" + branch + "' in " + repo_path);
    }

    std::vector<std::string> argv = {
        "git", "-C", repo_path, "log", branch,
        "--topo-order", "--reverse", "--diff-merges=first-parent",
        "-M50%", "-p", "-U0", "--no-color",
        "--format=\x01REC\x01%H\x01%P\x01%ae\x01%at"};
    if (max_commits && *max_commits >= 0) {
        argv.insert(argv.begin() + 5, "-n");
        argv.insert(argv.begin() + 6, std::to_string(*max_commits));
    }
    auto log = run_command(argv);
    if (log.exit_code != 0)
        throw config_error("git log failed for " + repo_path);

    std::vector<CommitRecord> commits;
    diff_file_state file;
    std::istringstream iss(log.output);
    std::string line;
    while (std::getline(iss, line)) {
        if (starts_with(line, "\x01REC\x01")) {
            if (!commits.empty()) flush_file(file, commits.back());
            std::vector<std::string> parts;
            size_t pos = 5, next;
            while ((next = line.find('\x01', pos)) != std::string::npos) {
                parts.push_back(line.substr(pos, next - pos));
                pos = next + 1;
            }
            parts.push_back(line.substr(pos));
            CommitRecord rec;
            rec.commit_id = parts.size() > 0 ? parts[0] : "";
            if (parts.size() > 1) rec.parent_ids = split_ws(parts[1]);
            rec.author_key = parts.size() > 2 ? lower(parts[2]) : "";
            rec.timestamp_utc = parts.size() > 3 ? std::stoll(parts[3]) : 0;
            commits.push_back(std::move(rec));
            continue;
        }
        if (commits.empty()) continue;
        CommitRecord& rec = commits.back();
        if (starts_with(line, "diff --git ")) {
            flush_file(file, rec);
            file.active = true;
        } else if (file.active && starts_with(line, "--- ")) {
            file.old_path = strip_diff_prefix(line.substr(4));
        } else if (file.active && starts_with(line, "+++ ")) {
            file.new_path = strip_diff_prefix(line.substr(4));
        } else if (file.active && starts_with(line, "rename from ")) {
            file.old_path = line.substr(12);
        } else if (file.active && starts_with(line, "rename to ")) {
            file.new_path = line.substr(10);
        } else if (file.active && starts_with(line, "Binary files ")) {
            file.binary = true;
        } else if (file.active && starts_with(line, "@@ ")) {
            long old_count, new_start, new_count;
            if (parse_hunk_header(line, old_count, new_start, new_count)) {
                file.deleted += old_count;
                file.added += new_count;
                if (new_count > 0) file.ranges.emplace_back(new_start, new_count);
            }
        }
    }
    if (!commits.empty()) flush_file(file, commits.back());
    return commits;
}

struct TctParams {
    double session_gap_hours = 4.0;
    double seed_hours = 0.5;
    double cap_hours = 12.0;
};

// Per-author session heuristic: the first commit of a session is seeded with
// seed_hours; later commits get the gap to the author's previous commit,
// capped at cap_hours. Input must be sorted ascending by timestamp.
inline std::vector<CommitRecord> estimate_tct(std::vector<CommitRecord> commits,
                                              const TctParams& params = {}) {
    if (params.session_gap_hours <= 0)
        throw contract_error("session_gap_hours must be positive");
    if (params.seed_hours <= 0 || params.seed_hours > params.cap_hours)
        throw contract_error("need 0 < seed_hours <= cap_hours");
    std::map<std::string, std::int64_t> last_seen;
    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    for (auto& c : commits) {
        if (c.timestamp_utc < prev_ts)
            throw contract_error("estimate_tct requires commits sorted ascending by timestamp");
        prev_ts = c.timestamp_utc;
        auto it = last_seen.find(c.author_key);
        if (it == last_seen.end()) {
            c.tct_hours = params.seed_hours;
        } else {
            double delta_h = static_cast<double>(c.timestamp_utc - it->second) / 3600.0;
            if (delta_h > params.session_gap_hours || delta_h <= 0)
                c.tct_hours = params.seed_hours;
            else
                c.tct_hours = std::min(delta_h, params.cap_hours);
        }
        last_seen[c.author_key] = c.timestamp_utc;
    }
    return commits;
}

inline void write_commits_manifest(const std::vector<CommitRecord>& commits,
                                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write commits manifest: " + path);
    out << "commit_id,author_key,timestamp_utc,cloc,tct_hours\n";
    for (const auto& c : commits) {
        out << c.commit_id << ',' << c.author_key << ',' << c.timestamp_utc << ','
            << commit_loc(c) << ',';
        if (c.tct_hours)
            out << *c.tct_hours;
        out << '\n';
    }
}

} // namespace rearrange
