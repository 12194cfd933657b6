#pragma once

#include <map>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "rearrange/java_parser.hpp"

namespace rearrange {

enum class DepKind { Import, Contain, Call, Return, Implement, Extend, Parameter, Use };

inline const char* dep_kind_name(DepKind k) {
    switch (k) {
        case DepKind::Import: return "Import";
        case DepKind::Contain: return "Contain";
        case DepKind::Call: return "Call";
        case DepKind::Return: return "Return";
        case DepKind::Implement: return "Implement";
        case DepKind::Extend: return "Extend";
        case DepKind::Parameter: return "Parameter";
        case DepKind::Use: return "Use";
    }
    return "?";
}

constexpr int kDepKindCount = 8;

struct DependencyEdge {
    std::string from_fqn;
    std::string to_fqn;
    DepKind kind = DepKind::Use;
    long count = 1;
};

namespace detail {

// Resolves a source-level type name to a universe fqn. Resolution is purely
// syntactic: fully-qualified uses, explicit imports, wildcard imports, then
// same-package siblings. Unknown names resolve to nothing.
class NameResolver {
public:
    explicit NameResolver(const std::vector<ClassSummary>& universe) {
        for (const auto& c : universe) fqns_.insert(c.fqn);
    }

    std::string resolve(const std::string& name, const ClassSummary& ctx) const {
        if (name.empty()) return {};
        if (fqns_.count(name)) return name;
        std::string pkg_qualified = ctx.package.empty() ? name : ctx.package + "." + name;
        const std::string head = name.substr(0, name.find('.'));
        for (const auto& imp : ctx.imports) {
            if (imp.size() >= 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
                std::string candidate = imp.substr(0, imp.size() - 1) + name;
                if (fqns_.count(candidate)) return candidate;
            } else if (ends_with_segment(imp, head)) {
                std::string candidate =
                    name.find('.') == std::string::npos
                        ? imp
                        : imp + name.substr(name.find('.'));
                if (fqns_.count(candidate)) return candidate;
            }
        }
        if (fqns_.count(pkg_qualified)) return pkg_qualified;
        // own nested type: X seen from inside its declaring class
        if (fqns_.count(ctx.fqn + "." + name)) return ctx.fqn + "." + name;
        // nested sibling: X seen from another member of the same outer class
        if (ctx.outer_fqn) {
            std::string nested = *ctx.outer_fqn + "." + name;
            if (fqns_.count(nested)) return nested;
        }
        return {};
    }

    bool known(const std::string& fqn) const { return fqns_.count(fqn) > 0; }

private:
    static bool ends_with_segment(const std::string& imp, const std::string& seg) {
        if (imp.size() < seg.size()) return false;
        if (imp.compare(imp.size() - seg.size(), seg.size(), seg) != 0) return false;
        return imp.size() == seg.size() || imp[imp.size() - seg.size() - 1] == '.';
    }

    std::set<std::string> fqns_;
};

} // namespace detail

// Extracts the typed class-level dependency graph over one snapshot.
// Multiplicities are folded into edge counts; unresolvable names are counted
// in *unresolved and produce no edge.
inline std::vector<DependencyEdge> extract_dependencies(
    const std::vector<ClassSummary>& universe, long* unresolved = nullptr) {
    detail::NameResolver resolver(universe);
    std::map<std::tuple<std::string, std::string, DepKind>, long> folded;
    long miss = 0;

    static const std::set<std::string> non_types = {
        "boolean", "byte", "char", "short", "int", "long", "float", "double",
        "void", "var"};
    auto add = [&](const std::string& from, const std::string& raw, DepKind kind,
                   const ClassSummary& ctx) {
        if (raw.empty() || non_types.count(raw)) return;
        std::string to = resolver.resolve(raw, ctx);
        if (to.empty()) { ++miss; return; }
        if (to == from) return;
        ++folded[{from, to, kind}];
    };

    for (const auto& cls : universe) {
        for (const auto& imp : cls.imports) {
            if (imp.size() >= 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) continue;
            if (resolver.known(imp) && imp != cls.fqn)
                ++folded[{cls.fqn, imp, DepKind::Import}];
        }
        if (cls.outer_fqn && resolver.known(*cls.outer_fqn))
            ++folded[{*cls.outer_fqn, cls.fqn, DepKind::Contain}];
        if (cls.superclass_name) add(cls.fqn, *cls.superclass_name, DepKind::Extend, cls);
        for (const auto& ifc : cls.interface_names)
            add(cls.fqn, ifc, DepKind::Implement, cls);
        for (const auto& ft : cls.field_types) add(cls.fqn, ft, DepKind::Use, cls);
        for (const auto& m : cls.methods) {
            if (!m.return_type.empty()) add(cls.fqn, m.return_type, DepKind::Return, cls);
            for (const auto& pt : m.parameter_types)
                add(cls.fqn, pt, DepKind::Parameter, cls);
            for (const auto& [receiver, _] : m.invoked_names) {
                if (!receiver.empty()) add(cls.fqn, receiver, DepKind::Call, cls);
            }
        }
    }
    if (unresolved) *unresolved = miss;

    std::vector<DependencyEdge> edges;
    edges.reserve(folded.size());
    for (const auto& [key, count] : folded)
        edges.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), count});
    return edges;
}

} // namespace rearrange
