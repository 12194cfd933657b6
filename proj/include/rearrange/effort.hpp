#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "rearrange/errors.hpp"
#include "rearrange/git_history.hpp"
#include "rearrange/refactoring_detect.hpp"

namespace rearrange {

struct EffortTarget {
    RefactoringOp op;
    double rtt_hours = 0;
};

// Refactoring Time Taken: the share of the commit's time spent on the
// refactored lines, RTT = TCT * RLoC / CLoC.
inline double compute_rtt(double tct_hours, double rloc, double cloc) {
    if (tct_hours <= 0) throw contract_error("compute_rtt: tct_hours must be positive");
    if (cloc <= 0) throw data_error("compute_rtt: commit carries no measurable change (cloc = 0)");
    if (rloc < 0 || rloc > cloc)
        throw contract_error("compute_rtt: need 0 <= rloc <= cloc");
    return tct_hours * rloc / cloc;
}

// One regression target per detected op with a positive RTT. Ops whose RTT
// is zero carry no signal and are dropped.
inline std::vector<EffortTarget> build_targets(const std::vector<CommitRecord>& commits,
                                               const std::vector<RefactoringOp>& ops) {
    std::map<std::string, const CommitRecord*> by_id;
    for (const auto& c : commits) by_id[c.commit_id] = &c;

    std::vector<EffortTarget> targets;
    for (const auto& op : ops) {
        auto it = by_id.find(op.commit_id);
        if (it == by_id.end())
            throw contract_error("build_targets: op references unknown commit " + op.commit_id);
        const CommitRecord& commit = *it->second;
        if (!commit.tct_hours)
            throw contract_error("build_targets: commit " + op.commit_id + " has no tct_hours");
        long cloc = commit_loc(commit);
        if (cloc <= 0) continue;  // nothing measurable to apportion
        double rtt = compute_rtt(*commit.tct_hours, op.touched_lines, static_cast<double>(cloc));
        if (rtt <= 0) continue;
        targets.push_back({op, rtt});
    }

    std::map<std::string, std::int64_t> ts;
    for (const auto& c : commits) ts[c.commit_id] = c.timestamp_utc;
    std::sort(targets.begin(), targets.end(), [&](const EffortTarget& a, const EffortTarget& b) {
        auto ta = ts[a.op.commit_id], tb = ts[b.op.commit_id];
        if (ta != tb) return ta < tb;
        return a.op.after_fqn < b.op.after_fqn;
    });
    return targets;
}

} // namespace rearrange
