#include "bdf/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <mutex>
#include <thread>

namespace bdf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("RunConfig: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("RunConfig: malformed line '" + t + "'");
        c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

bool RunConfig::has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return fallback;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const std::string s = get_string(key, "");
    if (s.empty()) return fallback;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("RunConfig: key '" + key + "' is not a number: " + s);
    }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const std::string s = get_string(key, "");
    if (s.empty()) return fallback;
    try {
        return std::stoi(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("RunConfig: key '" + key + "' is not an integer: " + s);
    }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    const std::string s = get_string(key, "");
    if (s.empty()) return fallback;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("RunConfig: key '" + key + "' is not a boolean: " + s);
}

std::string RunConfig::echo_comment() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += "# " + k + " = " + v + "\n";
    return out;
}

nlohmann::ordered_json RunConfig::echo_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const RunConfig& config,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
    std::filesystem::create_directories(path.parent_path());
    impl_->out.open(path);
    if (!impl_->out) throw std::runtime_error("CsvWriter: cannot open " + path.string());
    impl_->out << config.echo_comment();
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        impl_->out << format_full(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() {
    if (impl_ && impl_->out.is_open()) impl_->out.close();
}

CsvWriter::~CsvWriter() { close(); }

void write_json(const std::filesystem::path& path, const RunConfig& config,
                const nlohmann::ordered_json& payload) {
    std::filesystem::create_directories(path.parent_path());
    nlohmann::ordered_json doc;
    doc["config"] = config.echo_json();
    for (const auto& [k, v] : payload.items()) doc[k] = v;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
    out << doc.dump(2) << "\n";
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const int nt = std::min<std::size_t>(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::exception_ptr error;
    std::mutex emtx;
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < count; i += nt) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(emtx);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace bdf
