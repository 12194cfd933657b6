#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "rearrange/errors.hpp"

namespace rearrange::detail {

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += "'";
    return out;
}

struct process_result {
    int exit_code = -1;
    std::string output;
};

// Runs a command line, capturing stdout. stderr is left attached to the
// parent so diagnostics stay visible.
inline process_result run_command(const std::vector<std::string>& argv) {
    std::string cmd;
    for (const auto& a : argv) {
        if (!cmd.empty()) cmd += ' ';
        cmd += shell_quote(a);
    }
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw config_error("failed to spawn: " + cmd);
    process_result res;
    std::array<char, 65536> buf{};
    size_t n;
    while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    int status = ::pclose(pipe);
    res.exit_code = (status >= 0 && (status & 0x7f) == 0) ? (status >> 8) & 0xff : -1;
    return res;
}

} // namespace rearrange::detail
