#include <catch_amalgamated.hpp>

#include "rearrange/refactoring_detect.hpp"

using namespace rearrange;

namespace {

std::vector<ClassSummary> parse_files(
    const std::vector<std::pair<std::string, std::string>>& files) {
    std::vector<ClassSummary> universe;
    for (const auto& [path, src] : files) {
        auto cs = parse_compilation_unit(src, path);
        universe.insert(universe.end(), cs.begin(), cs.end());
    }
    return universe;
}

CommitRecord commit_with(const std::vector<FileChange>& changes) {
    CommitRecord c;
    c.commit_id = "deadbeef";
    c.timestamp_utc = 1;
    c.file_changes = changes;
    return c;
}

const char* kClassA =
    "package p;\n"
    "public class A {\n"
    "    int f1;\n"
    "    void m1() {}\n"
    "    void m2(int x) {}\n"
    "}\n";

} // namespace

TEST_CASE("identical snapshots yield no refactorings") {
    auto snap = parse_files({{"p/A.java", kClassA}});
    CHECK(detect(snap, snap, commit_with({})).empty());
}

TEST_CASE("a class reappearing in another package is a MoveClass") {
    auto before = parse_files({{"p/A.java", kClassA}});
    auto after = parse_files({{"q/A.java",
                               "package q;\n"
                               "public class A {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].kind == RefKind::MoveClass);
    CHECK(ops[0].before_fqn == "p.A");
    CHECK(ops[0].after_fqn == "q.A");
    CHECK(ops[0].before_path == "p/A.java");
    CHECK(ops[0].after_path == "q/A.java");
}

TEST_CASE("a class renamed within its package is a RenameClass") {
    auto before = parse_files({{"p/A.java", kClassA}});
    auto after = parse_files({{"p/B.java",
                               "package p;\n"
                               "public class B {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].kind == RefKind::RenameClass);
    CHECK(ops[0].before_fqn == "p.A");
    CHECK(ops[0].after_fqn == "p.B");
}

TEST_CASE("package and name both changing is a MoveAndRenameClass") {
    auto before = parse_files({{"p/A.java", kClassA}});
    auto after = parse_files({{"q/Z.java",
                               "package q;\n"
                               "public class Z {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].kind == RefKind::MoveAndRenameClass);
}

TEST_CASE("dissimilar replacement stays below the threshold and yields no op") {
    auto before = parse_files({{"p/A.java", kClassA}});
    auto after = parse_files({{"q/A.java",
                               "package q;\n"
                               "public class A {\n"
                               "    long other;\n"
                               "    void different() {}\n"
                               "    void alsoDifferent() {}\n"
                               "}\n"}});
    CHECK(detect(before, after, commit_with({})).empty());
}

TEST_CASE("extract class is matched against members removed from a survivor") {
    auto before = parse_files({{"p/Big.java",
                                "package p;\n"
                                "public class Big {\n"
                                "    int keep;\n"
                                "    void stay() {}\n"
                                "    void carveMe() {}\n"
                                "    void carveMeToo(int x) {}\n"
                                "}\n"}});
    auto after = parse_files({{"p/Big.java",
                               "package p;\n"
                               "public class Big {\n"
                               "    int keep;\n"
                               "    void stay() {}\n"
                               "}\n"},
                              {"p/Carved.java",
                               "package p;\n"
                               "public class Carved {\n"
                               "    void carveMe() {}\n"
                               "    void carveMeToo(int x) {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].kind == RefKind::ExtractClass);
    CHECK(ops[0].before_fqn == "p.Big");
    CHECK(ops[0].after_fqn == "p.Carved");
}

TEST_CASE("each disappeared class is matched at most once, best match first") {
    auto before = parse_files({{"p/A.java", kClassA}});
    // two candidates: an identical copy and a partial copy; greedy picks the
    // identical one, the other gets nothing
    auto after = parse_files({{"q/A.java",
                               "package q;\n"
                               "public class A {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"},
                              {"r/A.java",
                               "package r;\n"
                               "public class A {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "    void extra() {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].after_fqn == "q.A");
}

TEST_CASE("equal-similarity candidates break ties on lexicographic after_fqn") {
    auto before = parse_files({{"p/A.java", kClassA}});
    auto after = parse_files({{"z/A.java",
                               "package z;\n"
                               "public class A {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"},
                              {"q/A.java",
                               "package q;\n"
                               "public class A {\n"
                               "    int f1;\n"
                               "    void m1() {}\n"
                               "    void m2(int x) {}\n"
                               "}\n"}});
    auto ops = detect(before, after, commit_with({}));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].after_fqn == "q.A");
}

TEST_CASE("refactored_loc sums the changed lines of the op's files") {
    RefactoringOp op;
    op.before_path = "p/A.java";
    op.after_path = "q/A.java";
    auto commit = commit_with({
        {"q/A.java", "p/A.java", false, false, 15, 10, {}},
        {"unrelated.java", "unrelated.java", false, false, 7, 7, {}},
    });
    CHECK(refactored_loc(op, commit) == 25.0);
    CHECK(op.touched_lines == 25.0);
}

TEST_CASE("a change-free collapsed rename contributes zero refactored lines") {
    RefactoringOp op;
    op.before_path = "p/A.java";
    op.after_path = "q/A.java";
    auto commit = commit_with({});  // pure rename dropped from the diff
    CHECK(refactored_loc(op, commit) == 0.0);
}

TEST_CASE("apportioning splits shared files equally and respects commit_loc") {
    RefactoringOp op1, op2;
    op1.before_path = "shared.java";
    op1.after_path = "a.java";
    op2.before_path = "shared.java";
    op2.after_path = "b.java";
    auto commit = commit_with({
        {"shared.java", "shared.java", false, false, 6, 4, {}},  // 10 lines, shared
        {"a.java", "", false, false, 8, 0, {}},
        {"b.java", "", false, false, 3, 1, {}},
        {"noise.java", "noise.java", false, false, 2, 2, {}},
    });
    std::vector<RefactoringOp> ops = {op1, op2};
    attribute_touched_lines(ops, commit);
    CHECK(ops[0].touched_lines == 13.0);  // 10/2 + 8
    CHECK(ops[1].touched_lines == 9.0);   // 10/2 + 4
    CHECK(ops[0].touched_lines + ops[1].touched_lines <= commit_loc(commit));
    CHECK(ops[0].touched_lines <= commit_loc(commit));
}
