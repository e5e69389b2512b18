#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace kinlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* version = "0.3.0";

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

// Numeric table with a header row and fixed column order.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    std::string to_csv() const;
    static Table from_csv(const std::string& text);
};

// key = value configuration. "[section]" lines prefix the following keys with
// "section.". '#' starts a comment that runs to the end of the line.
class Config {
public:
    static Config from_file(const std::filesystem::path& p);
    static Config from_string(const std::string& text, const std::string& origin = "<string>");

    // "key=value"; later calls override earlier ones and file contents.
    void set(const std::string& assignment);
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& def) const;
    double get(const std::string& key, double def) const;
    int get(const std::string& key, int def) const;
    bool get(const std::string& key, bool def) const;
    std::vector<double> get(const std::string& key, const std::vector<double>& def) const;

    // Throws naming the first key not in `known`.
    void check_known(const std::set<std::string>& known) const;
    Json to_json() const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_ = "config";
};

// Output directory: explicit value, else $KINLAB_OUTPUT_ROOT, else ./kinlab_out.
std::filesystem::path output_root(const std::string& explicit_root = "");

// Writes <dir>/<name>.csv for each table and <dir>/manifest.json, replacing
// existing files. Throws std::runtime_error naming the path on I/O failure.
void persist(const std::filesystem::path& dir, const std::map<std::string, Table>& tables, const Json& manifest);
void write_text(const std::filesystem::path& p, const std::string& text);
std::string read_text(const std::filesystem::path& p);

}  // namespace kinlab::io
