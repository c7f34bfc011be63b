#pragma once

#include "opcalc/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace opcalc::cli {

inline constexpr int kSchema = 1;

/// Exclusive claim on an output directory. Creation fails if another run holds it.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::filesystem::path& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::filesystem::path path_;
};

/// CSV with a commented header: command, schema, then every resolved config entry.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& command, const RunConfig& cfg,
              const std::vector<std::string>& columns);
    CsvWriter& operator<<(double x);
    CsvWriter& operator<<(const std::string& s);
    CsvWriter& operator<<(int i);
    void end_row();

private:
    void sep();
    std::ofstream out_;
    bool first_ = true;
};

/// JSON document skeleton: {"schema": 1, "command": ..., "config": {...}}.
nlohmann::ordered_json document(const std::string& command, const RunConfig& cfg);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

}  // namespace opcalc::cli
