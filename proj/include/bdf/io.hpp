#pragma once
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bdf {

// Run configuration: ordered key = value document.  A run is reproducible
// from its config and seed alone.
class RunConfig {
public:
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // "# key = value" lines echoed at the top of every output file
    std::string echo_comment() const;
    nlohmann::ordered_json echo_json() const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// CSV with a leading config echo block; numbers at full precision (%.17g).
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const RunConfig& config,
              const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();
    ~CsvWriter();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

void write_json(const std::filesystem::path& path, const RunConfig& config,
                const nlohmann::ordered_json& payload);

// index-sliced parallel map; deterministic regardless of thread count
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

std::string format_full(double v);  // shortest round-trip decimal

} // namespace bdf
