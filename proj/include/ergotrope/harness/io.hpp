#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ergotrope::harness {

// shortest round-trip decimal form (to_chars); CSV bodies stay byte-identical
// across runs with the same config and seed
std::string format_double(double x);

// CSV with a fixed column order; all floats through format_double
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void row(const std::vector<std::string>& cells);
    std::string cell(double x) const { return format_double(x); }
    const std::string& body() const { return body_; }

private:
    std::size_t ncols_;
    std::string body_;
};

std::uint64_t fnv1a64(const std::string& bytes);

struct OutputFile {
    std::string name;
    std::uint64_t bytes = 0;
    std::string digest; // fnv1a-64, hex
};

// writes bytes under dir and records the digest entry
OutputFile write_output(const std::filesystem::path& dir, const std::string& name,
                        const std::string& bytes);

} // namespace ergotrope::harness
