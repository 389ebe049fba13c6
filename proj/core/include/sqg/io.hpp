#pragma once

#include <nlohmann/json.hpp>

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace sqg {

// Plain CSV with round-trippable number formatting.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::initializer_list<std::string> columns);
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(long long v);
    CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
    CsvWriter& operator<<(const std::string& v);
    void end_row();
    // Flushes and closes; required before hashing the file.
    void close();

private:
    std::ofstream out_;
    std::size_t ncols_;
    std::size_t col_ = 0;
    void sep();
};

std::string format_double(double v);

// SHA-1 over "blob <len>\0<bytes>", the object hash git uses.
std::string git_blob_hash(const std::string& bytes);
std::string git_blob_hash_file(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace sqg
