#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rearrange/dataset.hpp"
#include "rearrange/errors.hpp"
#include "rearrange/gbm.hpp"
#include "rearrange/java_parser.hpp"

namespace rearrange {

struct ClusterAssignment {
    std::map<std::string, std::string> entries;  // class fqn -> cluster id
};

// File format: one `fully.qualified.ClassName,clusterId` per line, `#`
// comments and blank lines allowed.
inline ClusterAssignment read_cluster_assignment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read cluster assignment: " + path);
    ClusterAssignment assignment;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        line = line.substr(start);
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
            throw data_error(path + ":" + std::to_string(line_no) +
                             ": expected 'fqn,clusterId'");
        std::string fqn = line.substr(0, comma);
        std::string cluster = line.substr(comma + 1);
        if (!assignment.entries.emplace(fqn, cluster).second)
            throw data_error(path + ":" + std::to_string(line_no) +
                             ": duplicate class " + fqn);
    }
    return assignment;
}

struct MoveStep {
    std::string class_fqn;
    std::string from_package;
    std::string to_package;
};

struct PlannedMove {
    std::string class_fqn;
    std::string from_package;
    std::string to_package;
    FeatureVector features;
    double predicted_hours = 0;
};

struct RefactoringPlan {
    std::vector<PlannedMove> moves;  // sorted by predicted hours descending
    double total_hours = 0;
};

// Maps each cluster to its plurality package (ties broken by the
// lexicographically smallest package name); every class not already in that
// package yields one move.
inline std::vector<MoveStep> derive_moves(const ClusterAssignment& assignment,
                                          const std::vector<ClassSummary>& snapshot) {
    std::map<std::string, const ClassSummary*> by_fqn;
    for (const auto& c : snapshot) by_fqn[c.fqn] = &c;

    std::vector<std::string> missing;
    for (const auto& [fqn, _] : assignment.entries)
        if (!by_fqn.count(fqn)) missing.push_back(fqn);
    if (!missing.empty()) {
        std::string msg = "cluster assignment names classes absent from the snapshot:";
        for (const auto& fqn : missing) msg += " " + fqn;
        throw data_error(msg);
    }

    std::map<std::string, std::map<std::string, long>> package_votes;  // cluster -> package -> n
    for (const auto& [fqn, cluster] : assignment.entries)
        ++package_votes[cluster][by_fqn.at(fqn)->package];

    std::map<std::string, std::string> plurality;
    for (const auto& [cluster, votes] : package_votes) {
        std::string best;
        long best_count = -1;
        for (const auto& [pkg, count] : votes) {
            if (count > best_count) {  // map iteration is ascending, so ties keep
                best = pkg;            // the lexicographically smallest package
                best_count = count;
            }
        }
        plurality[cluster] = best;
    }

    std::vector<MoveStep> moves;
    for (const auto& [fqn, cluster] : assignment.entries) {
        const std::string& current = by_fqn.at(fqn)->package;
        const std::string& target = plurality.at(cluster);
        if (current != target) moves.push_back({fqn, current, target});
    }
    std::sort(moves.begin(), moves.end(),
              [](const MoveStep& a, const MoveStep& b) { return a.class_fqn < b.class_fqn; });
    return moves;
}

// Prediction-time feature proxies: kind is MoveClass, ops_in_commit is the
// plan size, and cloc is stood in for by the class's own loc.
inline RefactoringPlan estimate_plan(const std::vector<MoveStep>& moves,
                                     const std::map<std::string, ClassFeatures>& features,
                                     const GbmModel& model) {
    if (!(model.schema == FeatureSchema::standard())) {
        std::string msg = "model schema does not match the feature builder;\n  model: ";
        for (const auto& n : model.schema.names) msg += n + " ";
        msg += "\n  expected: ";
        for (const auto& n : FeatureSchema::standard().names) msg += n + " ";
        throw data_error(msg);
    }
    RefactoringPlan plan;
    for (const auto& step : moves) {
        auto it = features.find(step.class_fqn);
        if (it == features.end())
            throw data_error("no metrics available for planned move of " + step.class_fqn);
        PlannedMove pm;
        pm.class_fqn = step.class_fqn;
        pm.from_package = step.from_package;
        pm.to_package = step.to_package;
        pm.features = build_feature_vector(it->second, RefKind::MoveClass,
                                           static_cast<long>(moves.size()),
                                           static_cast<double>(it->second.ck.loc));
        pm.predicted_hours = predict(model, pm.features);
        plan.total_hours += pm.predicted_hours;
        plan.moves.push_back(std::move(pm));
    }
    std::sort(plan.moves.begin(), plan.moves.end(),
              [](const PlannedMove& a, const PlannedMove& b) {
                  if (a.predicted_hours != b.predicted_hours)
                      return a.predicted_hours > b.predicted_hours;
                  return a.class_fqn < b.class_fqn;
              });
    return plan;
}

enum class ReportFormat { Text, Csv };

constexpr double kLargeMoveHours = 8.0;  // one working day

inline std::string render_report(const RefactoringPlan& plan, ReportFormat format) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    if (format == ReportFormat::Csv) {
        out << "class,from,to,predicted_hours\n";
        for (const auto& m : plan.moves)
            out << m.class_fqn << ',' << m.from_package << ',' << m.to_package << ','
                << m.predicted_hours << '\n';
        return out.str();
    }
    if (plan.moves.empty()) {
        out << "0 moves, total 0.00 person-hours\n";
        return out.str();
    }
    out << "Refactoring plan (" << plan.moves.size() << " moves):\n";
    for (size_t i = 0; i < plan.moves.size(); ++i) {
        const auto& m = plan.moves[i];
        out << "  " << (i + 1) << ". " << m.class_fqn << "  " << m.from_package
            << " -> " << m.to_package << "  " << m.predicted_hours << " h";
        if (m.predicted_hours > kLargeMoveHours) out << "  LARGE";
        out << '\n';
    }
    out << "Total: " << plan.total_hours << " person-hours\n";
    out << "Note: per-move features are prediction-time proxies (single-move kind,\n"
           "plan-sized batch, class size standing in for commit size).\n";
    return out.str();
}

} // namespace rearrange
