#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rearrange/dataset.hpp"
#include "rearrange/dependency_graph.hpp"
#include "rearrange/effort.hpp"
#include "rearrange/git_history.hpp"
#include "rearrange/refactoring_detect.hpp"
#include "rearrange/snapshot.hpp"

namespace rearrange {

struct MineOptions {
    std::string branch = "HEAD";
    std::optional<long> max_commits;
    TctParams tct;
    double similarity_threshold = 0.7;
    std::optional<double> max_target_hours;  // optional outlier filter, off by default
};

struct MineResult {
    std::vector<CommitRecord> commits;
    std::vector<RefactoringOp> ops;
    std::vector<EffortTarget> targets;
    Dataset dataset;
    long imputed_rows = 0;
};

namespace detail {

// Parses only the Java files a commit touched, on both sides of the diff.
// Class membership can only change in touched files, so these restricted
// universes are sufficient for detection.
inline void changed_universes(const std::string& repo, const CommitRecord& commit,
                              std::vector<ClassSummary>& before,
                              std::vector<ClassSummary>& after) {
    const std::string parent = commit.parent_ids.empty() ? "" : commit.parent_ids.front();
    for (const auto& fc : commit.file_changes) {
        if (!fc.old_path.empty() && ends_with(fc.old_path, ".java") && !parent.empty()) {
            if (auto content = file_at_commit(repo, parent, fc.old_path)) {
                auto classes = parse_compilation_unit(*content, fc.old_path);
                before.insert(before.end(), classes.begin(), classes.end());
            }
        }
        if (!fc.is_deletion && ends_with(fc.path, ".java")) {
            if (auto content = file_at_commit(repo, commit.commit_id, fc.path)) {
                auto classes = parse_compilation_unit(*content, fc.path);
                after.insert(after.end(), classes.begin(), classes.end());
            }
        }
    }
}

} // namespace detail

// Full mining pipeline: walk history, estimate per-commit time, detect
// refactorings, derive effort targets, and join them with parent-snapshot
// class features into a training dataset.
inline MineResult mine_repository(const std::string& repo, const MineOptions& opts = {}) {
    MineResult result;
    result.commits = walk_history(repo, opts.branch, opts.max_commits);
    std::stable_sort(result.commits.begin(), result.commits.end(),
                     [](const CommitRecord& a, const CommitRecord& b) {
                         return a.timestamp_utc < b.timestamp_utc;
                     });
    result.commits = estimate_tct(std::move(result.commits), opts.tct);

    for (auto& commit : result.commits) {
        // Merge diffs double-count merged work; keep the record, skip the ops.
        if (commit.is_merge()) continue;
        bool touches_java = std::any_of(
            commit.file_changes.begin(), commit.file_changes.end(), [](const FileChange& fc) {
                return detail::ends_with(fc.path, ".java") ||
                       detail::ends_with(fc.old_path, ".java");
            });
        if (!touches_java) continue;
        std::vector<ClassSummary> before, after;
        detail::changed_universes(repo, commit, before, after);
        auto ops = detect(before, after, commit, opts.similarity_threshold);
        if (ops.empty()) continue;
        attribute_touched_lines(ops, commit);
        result.ops.insert(result.ops.end(), ops.begin(), ops.end());
    }

    result.targets = build_targets(result.commits, result.ops);
    if (opts.max_target_hours) {
        std::erase_if(result.targets, [&](const EffortTarget& t) {
            return t.rtt_hours > *opts.max_target_hours;
        });
    }

    // Parent-snapshot features, computed once per commit that produced targets.
    std::map<std::string, const CommitRecord*> by_id;
    for (const auto& c : result.commits) by_id[c.commit_id] = &c;
    std::map<std::string, std::map<std::string, ClassFeatures>> parent_features;
    for (const auto& t : result.targets) {
        if (parent_features.count(t.op.commit_id)) continue;
        const CommitRecord* commit = by_id.at(t.op.commit_id);
        if (commit->parent_ids.empty()) {
            parent_features[t.op.commit_id] = {};
            continue;
        }
        auto universe = load_snapshot_from_commit(repo, commit->parent_ids.front());
        auto edges = extract_dependencies(universe);
        parent_features[t.op.commit_id] = snapshot_class_features(universe, edges);
    }

    result.dataset = assemble(result.targets, parent_features, result.commits,
                              &result.imputed_rows);
    return result;
}

} // namespace rearrange
