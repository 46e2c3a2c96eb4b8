#pragma once

#include "bubblelab/core/error.hpp"

#include <filesystem>
#include <string>

inline bool throws_kind(auto&& f, bubblelab::ErrorKind kind) {
    try {
        f();
    } catch (const bubblelab::Error& e) {
        return e.kind() == kind;
    }
    return false;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto p = std::filesystem::temp_directory_path() / ("bubblelab_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}
