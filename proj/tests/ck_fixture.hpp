#pragma once

// Hand-annotated metric fixture: eleven small classes whose CK metrics were
// computed by hand. Line counts in the sources are deliberate; do not
// reformat.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rearrange/ck_metrics.hpp"
#include "rearrange/dependency_graph.hpp"
#include "rearrange/java_parser.hpp"

namespace fixtures {

inline const std::vector<std::pair<std::string, std::string>>& ck_sources() {
    static const std::vector<std::pair<std::string, std::string>> sources = {
        {"fix/Base.java",
         "package fix;\n"
         "public class Base {\n"
         "    protected int state;\n"
         "    public void init() { state = 0; }\n"
         "    public int read() { return state; }\n"
         "}\n"},
        {"fix/Mid.java",
         "package fix;\n"
         "public class Mid extends Base {\n"
         "    public void touch() { init(); }\n"
         "}\n"},
        {"fix/Leaf.java",
         "package fix;\n"
         "public class Leaf extends Mid {\n"
         "    public int depth() { return 3; }\n"
         "}\n"},
        {"fix/I.java",
         "package fix;\n"
         "public interface I {\n"
         "    int apply(int x);\n"
         "}\n"},
        {"fix/Impl.java",
         "package fix;\n"
         "public class Impl implements I {\n"
         "    public int apply(int x) {\n"
         "        if (x > 0) { return x; }\n"
         "        return -x;\n"
         "    }\n"
         "}\n"},
        {"fix/Holder.java",
         "package fix;\n"
         "public class Holder {\n"
         "    Base item;\n"
         "    Impl worker;\n"
         "    Base get() { return item; }\n"
         "    void set(Base b) { item = b; }\n"
         "}\n"},
        {"fix/Lonely.java",
         "package fix;\n"
         "public class Lonely {\n"
         "    int a;\n"
         "    int b;\n"
         "    void useA() { a = 1; }\n"
         "    void useB() { b = 2; }\n"
         "    void useBoth() { a = b; }\n"
         "}\n"},
        {"fix/Scattered.java",
         "package fix;\n"
         "public class Scattered {\n"
         "    int p;\n"
         "    int q;\n"
         "    void mp() { p = 1; }\n"
         "    void mq() { q = 1; }\n"
         "}\n"},
        {"fix/sub/Util.java",
         "package fix.sub;\n"
         "import fix.Base;\n"
         "public class Util {\n"
         "    public Base make() { return new Base(); }\n"
         "    public void apply(Base b) { b.init(); }\n"
         "}\n"},
        {"fix/Outer.java",
         "package fix;\n"
         "public class Outer {\n"
         "    Inner inner;\n"
         "    class Inner {\n"
         "        void ping() {}\n"
         "    }\n"
         "}\n"},
    };
    return sources;
}

inline std::vector<rearrange::ClassSummary> ck_universe() {
    std::vector<rearrange::ClassSummary> universe;
    for (const auto& [path, src] : ck_sources()) {
        auto classes = rearrange::parse_compilation_unit(src, path);
        universe.insert(universe.end(), classes.begin(), classes.end());
    }
    std::sort(universe.begin(), universe.end(),
              [](const auto& a, const auto& b) { return a.fqn < b.fqn; });
    return universe;
}

// wmc, dit, noc, cbo, rfc, lcom, loc, fan_in, fan_out — computed by hand.
inline const std::map<std::string, rearrange::CkMetrics>& ck_expected() {
    static const std::map<std::string, rearrange::CkMetrics> expected = {
        {"fix.Base", {2, 0, 1, 3, 2, 0, 5, 3, 0}},
        {"fix.Mid", {1, 1, 1, 2, 2, 0, 3, 1, 1}},
        {"fix.Leaf", {1, 2, 0, 1, 1, 0, 3, 0, 1}},
        {"fix.I", {1, 0, 0, 1, 1, 0, 3, 1, 0}},
        {"fix.Impl", {2, 0, 0, 2, 1, 0, 6, 1, 1}},
        {"fix.Holder", {2, 0, 0, 2, 2, 0, 6, 0, 2}},
        {"fix.Lonely", {3, 0, 0, 0, 3, 0, 7, 0, 0}},
        {"fix.Scattered", {2, 0, 0, 0, 2, 1, 6, 0, 0}},
        {"fix.sub.Util", {2, 0, 0, 1, 4, 1, 4, 0, 1}},
        {"fix.Outer", {0, 0, 0, 1, 0, 0, 6, 0, 1}},
        {"fix.Outer.Inner", {1, 0, 0, 1, 1, 0, 3, 1, 0}},
    };
    return expected;
}

} // namespace fixtures
