#include "output.hpp"

#include <fcntl.h>
#include <unistd.h>

namespace opcalc::cli {

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".opcalc.lock") {
    std::filesystem::create_directories(dir);
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        path_.clear();
        throw Error("output directory '" + dir.string() + "' is locked by another run (remove " +
                    (dir / ".opcalc.lock").string() + " if that run is gone)");
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] const auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirectoryLock::~DirectoryLock() {
    if (!path_.empty()) {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& command, const RunConfig& cfg,
                     const std::vector<std::string>& columns)
    : out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_ << "# opcalc " << command << "\n# schema = " << kSchema << "\n";
    for (const auto& [k, v] : cfg.entries()) out_ << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
}

void CsvWriter::sep() {
    if (!first_) out_ << ',';
    first_ = false;
}

CsvWriter& CsvWriter::operator<<(double x) {
    sep();
    out_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    sep();
    out_ << s;
    return *this;
}

CsvWriter& CsvWriter::operator<<(int i) {
    sep();
    out_ << i;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

nlohmann::ordered_json document(const std::string& command, const RunConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["schema"] = kSchema;
    doc["command"] = command;
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.entries()) c[k] = v;
    doc["config"] = c;
    return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << doc.dump(2) << "\n";
}

}  // namespace opcalc::cli
