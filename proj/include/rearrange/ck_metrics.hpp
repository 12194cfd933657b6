#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rearrange/dependency_graph.hpp"
#include "rearrange/errors.hpp"
#include "rearrange/java_parser.hpp"

namespace rearrange {

struct CkMetrics {
    long wmc = 0;
    long dit = 0;
    long noc = 0;
    long cbo = 0;
    long rfc = 0;
    long lcom = 0;
    long loc = 0;
    long fan_in = 0;
    long fan_out = 0;

    bool operator==(const CkMetrics&) const = default;
};

// Chidamber-Kemerer metrics plus size and fan measures for one class,
// computed against the snapshot it was parsed from.
//
// dit counts ancestors reachable through Extend edges inside the universe;
// inheritance cycles (malformed input) are cut at the first revisit.
// lcom is LCOM1: method pairs sharing no fields minus pairs sharing at least
// one, floored at zero.
inline CkMetrics compute_ck(const ClassSummary& target,
                            const std::vector<ClassSummary>& universe,
                            const std::vector<DependencyEdge>& edges) {
    bool found = false;
    for (const auto& c : universe)
        if (c.fqn == target.fqn) { found = true; break; }
    if (!found)
        throw contract_error("compute_ck: target " + target.fqn + " not in universe");

    CkMetrics m;
    m.loc = target.loc;
    for (const auto& meth : target.methods) m.wmc += meth.cyclomatic_complexity;

    std::map<std::string, std::string> extends;  // child -> parent
    long noc = 0;
    for (const auto& e : edges) {
        if (e.kind != DepKind::Extend) continue;
        extends[e.from_fqn] = e.to_fqn;
        if (e.to_fqn == target.fqn) ++noc;
    }
    m.noc = noc;

    std::set<std::string> visited{target.fqn};
    std::string cursor = target.fqn;
    while (true) {
        auto it = extends.find(cursor);
        if (it == extends.end()) break;
        if (!visited.insert(it->second).second) break;  // cycle cut
        ++m.dit;
        cursor = it->second;
    }

    std::set<std::string> coupled, out_partners, in_partners;
    for (const auto& e : edges) {
        if (e.from_fqn == target.fqn) {
            coupled.insert(e.to_fqn);
            out_partners.insert(e.to_fqn);
        } else if (e.to_fqn == target.fqn) {
            coupled.insert(e.from_fqn);
            in_partners.insert(e.from_fqn);
        }
    }
    m.cbo = static_cast<long>(coupled.size());
    m.fan_out = static_cast<long>(out_partners.size());
    m.fan_in = static_cast<long>(in_partners.size());

    std::set<std::pair<std::string, std::string>> invoked;
    for (const auto& meth : target.methods)
        invoked.insert(meth.invoked_names.begin(), meth.invoked_names.end());
    m.rfc = static_cast<long>(target.methods.size() + invoked.size());

    long non_sharing = 0, sharing = 0;
    const auto& methods = target.methods;
    for (size_t i = 0; i < methods.size(); ++i) {
        std::set<std::string> fi(methods[i].accessed_fields.begin(),
                                 methods[i].accessed_fields.end());
        for (size_t j = i + 1; j < methods.size(); ++j) {
            bool share = std::any_of(methods[j].accessed_fields.begin(),
                                     methods[j].accessed_fields.end(),
                                     [&](const std::string& f) { return fi.count(f) > 0; });
            if (share) ++sharing; else ++non_sharing;
        }
    }
    m.lcom = std::max(0L, non_sharing - sharing);
    return m;
}

inline void write_metrics_dump(const std::vector<std::pair<std::string, CkMetrics>>& rows,
                               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write metrics dump: " + path);
    out << "fqn,wmc,dit,noc,cbo,rfc,lcom,loc,fan_in,fan_out\n";
    for (const auto& [fqn, m] : rows)
        out << fqn << ',' << m.wmc << ',' << m.dit << ',' << m.noc << ',' << m.cbo
            << ',' << m.rfc << ',' << m.lcom << ',' << m.loc << ',' << m.fan_in
            << ',' << m.fan_out << '\n';
}

inline void write_edges_dump(const std::vector<DependencyEdge>& edges,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write edges dump: " + path);
    out << "from,to,kind,count\n";
    for (const auto& e : edges)
        out << e.from_fqn << ',' << e.to_fqn << ',' << dep_kind_name(e.kind) << ','
            << e.count << '\n';
}

} // namespace rearrange
