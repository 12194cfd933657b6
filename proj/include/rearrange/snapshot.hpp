#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rearrange/errors.hpp"
#include "rearrange/java_parser.hpp"
#include "rearrange/process.hpp"

namespace rearrange {

namespace detail {

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace detail

// Contents of one repo file at one commit, or nullopt if absent there.
inline std::optional<std::string> file_at_commit(const std::string& repo,
                                                 const std::string& commit,
                                                 const std::string& path) {
    auto res = detail::run_command({"git", "-C", repo, "show", commit + ":" + path});
    if (res.exit_code != 0) return std::nullopt;
    return res.output;
}

inline std::vector<std::string> java_files_at_commit(const std::string& repo,
                                                     const std::string& commit) {
    auto res = detail::run_command({"git", "-C", repo, "ls-tree", "-r", "--name-only", commit});
    if (res.exit_code != 0)
        throw config_error("cannot list tree of commit " + commit + " in " + repo);
    std::vector<std::string> files;
    std::istringstream iss(res.output);
    std::string line;
    while (std::getline(iss, line))
        if (detail::ends_with(line, ".java")) files.push_back(line);
    return files;
}

// Parses every Java file reachable from a commit into one snapshot universe.
inline std::vector<ClassSummary> load_snapshot_from_commit(const std::string& repo,
                                                           const std::string& commit) {
    std::vector<ClassSummary> universe;
    for (const auto& path : java_files_at_commit(repo, commit)) {
        auto content = file_at_commit(repo, commit, path);
        if (!content) continue;
        auto classes = parse_compilation_unit(*content, path);
        universe.insert(universe.end(), classes.begin(), classes.end());
    }
    std::sort(universe.begin(), universe.end(),
              [](const ClassSummary& a, const ClassSummary& b) { return a.fqn < b.fqn; });
    return universe;
}

// Parses every Java file under a directory tree (a checked-out snapshot).
inline std::vector<ClassSummary> load_snapshot_from_dir(const std::string& root) {
    namespace fs = std::filesystem;
    if (!fs::exists(root)) throw config_error("snapshot directory not found: " + root);
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".java")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    std::vector<ClassSummary> universe;
    for (const auto& path : files) {
        std::ifstream in(path);
        std::ostringstream buf;
        buf << in.rdbuf();
        auto rel = fs::relative(path, root).string();
        auto classes = parse_compilation_unit(buf.str(), rel);
        universe.insert(universe.end(), classes.begin(), classes.end());
    }
    std::sort(universe.begin(), universe.end(),
              [](const ClassSummary& a, const ClassSummary& b) { return a.fqn < b.fqn; });
    return universe;
}

} // namespace rearrange
