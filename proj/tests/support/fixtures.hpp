#pragma once

#include "imog/dsl.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#ifndef IMOG_FIXTURE_DIR
#error "IMOG_FIXTURE_DIR must point at tests/"
#endif

namespace fx {

inline std::string path(const std::string& relative) { return std::string(IMOG_FIXTURE_DIR) + "/" + relative; }

inline std::string read_abs(const std::string& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + file);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string read(const std::string& relative) { return read_abs(path(relative)); }

/// Parses a fixture and fails loudly when it does not parse.
inline imog::Model model(const std::string& relative)
{
    auto r = imog::parse_file(path(relative));
    if (!r.ok())
        throw std::runtime_error("fixture " + relative + " does not parse");
    return *r.model;
}

inline imog::Model parse_ok(const std::string& text)
{
    auto r = imog::parse(text);
    if (!r.ok())
        throw std::runtime_error("source does not parse: " + (r.diagnostics.empty() ? "" : r.diagnostics[0].message));
    return *r.model;
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path dir;
    TempDir()
    {
        dir = std::filesystem::temp_directory_path() /
              ("imog-test-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "-" +
               std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

} // namespace fx
