#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rearrange/errors.hpp"
#include "rearrange/git_history.hpp"
#include "rearrange/java_parser.hpp"

namespace rearrange {

enum class RefKind { MoveClass, RenameClass, MoveAndRenameClass, ExtractClass };

inline const char* ref_kind_name(RefKind k) {
    switch (k) {
        case RefKind::MoveClass: return "MoveClass";
        case RefKind::RenameClass: return "RenameClass";
        case RefKind::MoveAndRenameClass: return "MoveAndRenameClass";
        case RefKind::ExtractClass: return "ExtractClass";
    }
    return "?";
}

inline RefKind ref_kind_from_name(const std::string& s) {
    if (s == "MoveClass") return RefKind::MoveClass;
    if (s == "RenameClass") return RefKind::RenameClass;
    if (s == "MoveAndRenameClass") return RefKind::MoveAndRenameClass;
    if (s == "ExtractClass") return RefKind::ExtractClass;
    throw data_error("unknown refactoring kind: " + s);
}

struct RefactoringOp {
    RefKind kind = RefKind::MoveClass;
    std::string commit_id;
    std::string before_fqn;
    std::string after_fqn;
    std::string before_path;  // file of before_fqn in the parent snapshot
    std::string after_path;   // file of after_fqn in the child snapshot
    double touched_lines = 0;
};

namespace detail {

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

} // namespace detail

// Detects class-level refactorings between the parsed universes of a commit's
// parent and the commit itself. Disappeared classes are matched to appeared
// classes by member-signature Jaccard similarity, greedily in descending
// similarity with lexicographic after_fqn tie-breaks; each class participates
// in at most one Move/Rename op. Remaining new classes whose members overlap
// the members removed from a surviving class become ExtractClass ops.
inline std::vector<RefactoringOp> detect(const std::vector<ClassSummary>& before,
                                         const std::vector<ClassSummary>& after,
                                         const CommitRecord& commit,
                                         double threshold = 0.7) {
    std::map<std::string, const ClassSummary*> before_ix, after_ix;
    for (const auto& c : before) before_ix[c.fqn] = &c;
    for (const auto& c : after) after_ix[c.fqn] = &c;

    std::vector<const ClassSummary*> disappeared, appeared;
    for (const auto& c : before)
        if (!after_ix.count(c.fqn)) disappeared.push_back(&c);
    for (const auto& c : after)
        if (!before_ix.count(c.fqn)) appeared.push_back(&c);

    struct Candidate {
        double sim;
        const ClassSummary* gone;
        const ClassSummary* added;
    };
    std::vector<Candidate> candidates;
    for (const auto* d : disappeared) {
        auto d_members = d->member_signatures();
        for (const auto* a : appeared) {
            double sim = detail::jaccard(d_members, a->member_signatures());
            if (sim >= threshold) candidates.push_back({sim, d, a});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.sim != y.sim) return x.sim > y.sim;
        if (x.added->fqn != y.added->fqn) return x.added->fqn < y.added->fqn;
        return x.gone->fqn < y.gone->fqn;
    });

    std::vector<RefactoringOp> ops;
    std::set<std::string> used_before, used_after;
    for (const auto& c : candidates) {
        if (used_before.count(c.gone->fqn) || used_after.count(c.added->fqn)) continue;
        used_before.insert(c.gone->fqn);
        used_after.insert(c.added->fqn);
        RefactoringOp op;
        bool same_name = c.gone->simple_name == c.added->simple_name;
        bool same_pkg = c.gone->package == c.added->package;
        if (same_name && !same_pkg) op.kind = RefKind::MoveClass;
        else if (!same_name && same_pkg) op.kind = RefKind::RenameClass;
        else op.kind = RefKind::MoveAndRenameClass;
        op.commit_id = commit.commit_id;
        op.before_fqn = c.gone->fqn;
        op.after_fqn = c.added->fqn;
        op.before_path = c.gone->source_path;
        op.after_path = c.added->source_path;
        ops.push_back(std::move(op));
    }

    // ExtractClass: new class carved out of a surviving one.
    for (const auto* a : appeared) {
        if (used_after.count(a->fqn)) continue;
        auto a_members = a->member_signatures();
        if (a_members.empty()) continue;
        double best_sim = 0;
        const ClassSummary* best_src = nullptr;
        for (const auto& s_before : before) {
            auto it = after_ix.find(s_before.fqn);
            if (it == after_ix.end()) continue;  // not surviving
            auto kept = it->second->member_signatures();
            std::set<std::string> removed;
            for (const auto& sig : s_before.member_signatures())
                if (!kept.count(sig)) removed.insert(sig);
            if (removed.empty()) continue;
            double sim = detail::jaccard(a_members, removed);
            if (sim > best_sim || (sim == best_sim && best_src && s_before.fqn < best_src->fqn)) {
                best_sim = sim;
                best_src = &s_before;
            }
        }
        if (best_src && best_sim >= threshold) {
            RefactoringOp op;
            op.kind = RefKind::ExtractClass;
            op.commit_id = commit.commit_id;
            op.before_fqn = best_src->fqn;
            op.after_fqn = a->fqn;
            op.before_path = best_src->source_path;
            op.after_path = a->source_path;
            ops.push_back(std::move(op));
        }
    }

    std::sort(ops.begin(), ops.end(), [](const RefactoringOp& x, const RefactoringOp& y) {
        if (x.after_fqn != y.after_fqn) return x.after_fqn < y.after_fqn;
        return x.before_fqn < y.before_fqn;
    });
    return ops;
}

namespace detail {

inline bool op_touches(const RefactoringOp& op, const FileChange& fc) {
    const auto matches = [&](const std::string& p) {
        return !p.empty() && (fc.path == p || fc.old_path == p);
    };
    return matches(op.before_path) || matches(op.after_path);
}

} // namespace detail

// Changed lines of the files holding the op's before and after classes in
// this commit's diff. A pure index rename that left both files change-free
// yields 0.
inline double refactored_loc(RefactoringOp& op, const CommitRecord& commit) {
    double total = 0;
    for (const auto& fc : commit.file_changes)
        if (detail::op_touches(op, fc)) total += static_cast<double>(fc.lines_added + fc.lines_deleted);
    op.touched_lines = total;
    return total;
}

// Multi-op commits: a file referenced by several ops has its changed lines
// apportioned equally among them.
inline void attribute_touched_lines(std::vector<RefactoringOp>& ops,
                                    const CommitRecord& commit) {
    for (auto& op : ops) op.touched_lines = 0;
    for (const auto& fc : commit.file_changes) {
        std::vector<RefactoringOp*> touching;
        for (auto& op : ops)
            if (detail::op_touches(op, fc)) touching.push_back(&op);
        if (touching.empty()) continue;
        double share = static_cast<double>(fc.lines_added + fc.lines_deleted) /
                       static_cast<double>(touching.size());
        for (auto* op : touching) op->touched_lines += share;
    }
}

inline void write_ops_dump(const std::vector<RefactoringOp>& ops, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write ops dump: " + path);
    out << "commit_id,kind,before_fqn,after_fqn,touched_lines\n";
    for (const auto& op : ops)
        out << op.commit_id << ',' << ref_kind_name(op.kind) << ',' << op.before_fqn
            << ',' << op.after_fqn << ',' << op.touched_lines << '\n';
}

} // namespace rearrange
