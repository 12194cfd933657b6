#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rearrange/ck_metrics.hpp"
#include "rearrange/effort.hpp"
#include "rearrange/errors.hpp"

namespace rearrange {

struct FeatureSchema {
    std::vector<std::string> names;

    static FeatureSchema standard() {
        return FeatureSchema{{
            "wmc", "dit", "noc", "cbo", "rfc", "lcom", "loc", "fan_in", "fan_out",
            "kind_move", "kind_rename", "kind_move_rename", "kind_extract",
            "ops_in_commit", "cloc",
            "dep_import", "dep_contain", "dep_call", "dep_return",
            "dep_implement", "dep_extend", "dep_parameter", "dep_use",
        }};
    }

    size_t size() const { return names.size(); }
    bool operator==(const FeatureSchema&) const = default;
};

using FeatureVector = std::vector<double>;

struct DatasetRow {
    std::string commit_id;
    RefKind op_kind = RefKind::MoveClass;
    std::string before_fqn;
    FeatureVector features;
    double rtt_hours = 0;

    bool operator==(const DatasetRow&) const = default;
};

struct Dataset {
    FeatureSchema schema;
    std::vector<DatasetRow> rows;

    bool operator==(const Dataset&) const = default;
};

// Metrics and outgoing dependency-kind counts for one class in one snapshot.
struct ClassFeatures {
    CkMetrics ck;
    std::array<long, kDepKindCount> dep_out{};
};

inline std::map<std::string, ClassFeatures> snapshot_class_features(
    const std::vector<ClassSummary>& universe,
    const std::vector<DependencyEdge>& edges) {
    std::map<std::string, ClassFeatures> out;
    for (const auto& cls : universe) {
        ClassFeatures cf;
        cf.ck = compute_ck(cls, universe, edges);
        out[cls.fqn] = cf;
    }
    for (const auto& e : edges) {
        auto it = out.find(e.from_fqn);
        if (it != out.end()) it->second.dep_out[static_cast<int>(e.kind)] += e.count;
    }
    return out;
}

inline FeatureVector build_feature_vector(const ClassFeatures& cf, RefKind kind,
                                          long ops_in_commit, double cloc) {
    FeatureVector v;
    v.reserve(FeatureSchema::standard().size());
    const CkMetrics& m = cf.ck;
    for (long x : {m.wmc, m.dit, m.noc, m.cbo, m.rfc, m.lcom, m.loc, m.fan_in, m.fan_out})
        v.push_back(static_cast<double>(x));
    v.push_back(kind == RefKind::MoveClass ? 1.0 : 0.0);
    v.push_back(kind == RefKind::RenameClass ? 1.0 : 0.0);
    v.push_back(kind == RefKind::MoveAndRenameClass ? 1.0 : 0.0);
    v.push_back(kind == RefKind::ExtractClass ? 1.0 : 0.0);
    v.push_back(static_cast<double>(ops_in_commit));
    v.push_back(cloc);
    for (long x : cf.dep_out) v.push_back(static_cast<double>(x));
    return v;
}

// Joins effort targets with the parent-snapshot class features of each op's
// before-class. Classes whose metrics are missing are imputed with zeros and
// counted in *imputed.
inline Dataset assemble(const std::vector<EffortTarget>& targets,
                        const std::map<std::string, std::map<std::string, ClassFeatures>>&
                            parent_features_by_commit,
                        const std::vector<CommitRecord>& commits,
                        long* imputed = nullptr) {
    std::map<std::string, const CommitRecord*> by_id;
    for (const auto& c : commits) by_id[c.commit_id] = &c;
    std::map<std::string, long> ops_per_commit;
    for (const auto& t : targets) ++ops_per_commit[t.op.commit_id];

    Dataset ds;
    ds.schema = FeatureSchema::standard();
    long miss = 0;
    for (const auto& t : targets) {
        auto cit = by_id.find(t.op.commit_id);
        if (cit == by_id.end())
            throw contract_error("assemble: unknown commit " + t.op.commit_id);
        ClassFeatures cf;  // zero-imputed fallback
        auto sit = parent_features_by_commit.find(t.op.commit_id);
        if (sit != parent_features_by_commit.end()) {
            auto fit = sit->second.find(t.op.before_fqn);
            if (fit != sit->second.end()) cf = fit->second;
            else ++miss;
        } else {
            ++miss;
        }
        DatasetRow row;
        row.commit_id = t.op.commit_id;
        row.op_kind = t.op.kind;
        row.before_fqn = t.op.before_fqn;
        row.features = build_feature_vector(cf, t.op.kind, ops_per_commit[t.op.commit_id],
                                            static_cast<double>(commit_loc(*cit->second)));
        row.rtt_hours = t.rtt_hours;
        ds.rows.push_back(std::move(row));
    }
    if (imputed) *imputed = miss;
    return ds;
}

// Seeded shuffle-and-cut split. The test side takes round(n * fraction)
// rows, clamped to at least one; both sides must end up non-empty.
inline std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction,
                                         unsigned seed) {
    const size_t n = ds.rows.size();
    if (n < 2) throw data_error("split: need at least 2 rows");
    if (test_fraction <= 0 || test_fraction >= 1)
        throw contract_error("split: test_fraction must be in (0,1)");
    auto n_test = static_cast<size_t>(
        std::max<long long>(1, std::llround(static_cast<double>(n) * test_fraction)));
    if (n_test >= n)
        throw data_error("split: fraction leaves an empty train side");

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    Dataset train{ds.schema, {}}, test{ds.schema, {}};
    for (size_t i = 0; i < n; ++i) {
        (i < n_test ? test : train).rows.push_back(ds.rows[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream iss(line);
    while (std::getline(iss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

} // namespace detail

inline void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write dataset: " + path);
    out << "commit_id,op_kind,before_fqn";
    for (const auto& name : ds.schema.names) out << ',' << name;
    out << ",rtt_hours\n";
    for (const auto& row : ds.rows) {
        if (row.features.size() != ds.schema.size())
            throw contract_error("write_csv: row arity does not match schema");
        out << row.commit_id << ',' << ref_kind_name(row.op_kind) << ',' << row.before_fqn;
        for (double v : row.features) out << ',' << detail::format_double(v);
        out << ',' << detail::format_double(row.rtt_hours) << '\n';
    }
}

inline Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read dataset: " + path);
    Dataset ds;
    ds.schema = FeatureSchema::standard();
    std::string line;
    if (!std::getline(in, line)) throw data_error("dataset file is empty: " + path);
    {
        auto header = detail::split_csv_line(line);
        std::vector<std::string> expected = {"commit_id", "op_kind", "before_fqn"};
        expected.insert(expected.end(), ds.schema.names.begin(), ds.schema.names.end());
        expected.push_back("rtt_hours");
        if (header != expected)
            throw data_error("dataset header does not match the expected schema: " + path);
    }
    const size_t arity = 3 + ds.schema.size() + 1;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != arity)
            throw data_error(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(arity) + " cells, got " +
                             std::to_string(cells.size()));
        DatasetRow row;
        row.commit_id = cells[0];
        row.op_kind = ref_kind_from_name(cells[1]);
        row.before_fqn = cells[2];
        for (size_t i = 3; i < cells.size(); ++i) {
            char* end = nullptr;
            double v = std::strtod(cells[i].c_str(), &end);
            if (end == cells[i].c_str() || *end != '\0')
                throw data_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric cell '" + cells[i] + "'");
            if (i + 1 == cells.size()) row.rtt_hours = v;
            else row.features.push_back(v);
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

} // namespace rearrange
