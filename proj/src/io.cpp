#include "kinlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kinlab::io {

namespace fs = std::filesystem;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + s + "'");
    return x;
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Table: row has " + std::to_string(row.size()) + " entries, expected " +
                                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += '\n';
    }
    return out;
}

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}
}  // namespace

Table Table::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Table t;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: missing header");
    t.columns = split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& f : split(line, ',')) row.push_back(parse_double(f));
        t.add(std::move(row));
    }
    return t;
}

Config Config::from_string(const std::string& text, const std::string& origin) {
    Config c;
    c.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // '#' starts a comment anywhere; no value needs the character
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        c.values_[section.empty() ? key : section + "." + key] = trim(line.substr(eq + 1));
    }
    return c;
}

Config Config::from_file(const fs::path& p) {
    if (!fs::exists(p)) throw std::runtime_error("config file not found: " + p.string());
    return from_string(read_text(p), p.string());
}

void Config::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
        throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
    values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string Config::get(const std::string& key, const std::string& def) const {
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

double Config::get(const std::string& key, double def) const {
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        return parse_double(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument(origin_ + ": key '" + key + "' expects a number, got '" + it->second + "'");
    }
}

int Config::get(const std::string& key, int def) const {
    const double x = get(key, static_cast<double>(def));
    if (x != std::floor(x)) throw std::invalid_argument(origin_ + ": key '" + key + "' expects an integer");
    return static_cast<int>(x);
}

bool Config::get(const std::string& key, bool def) const {
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument(origin_ + ": key '" + key + "' expects true/false");
}

std::vector<double> Config::get(const std::string& key, const std::vector<double>& def) const {
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::vector<double> out;
    try {
        for (const auto& f : split(it->second, ',')) out.push_back(parse_double(trim(f)));
    } catch (const std::exception&) {
        throw std::invalid_argument(origin_ + ": key '" + key + "' expects a comma-separated list of numbers");
    }
    return out;
}

void Config::check_known(const std::set<std::string>& known) const {
    for (const auto& [k, v] : values_)
        if (!known.count(k)) throw std::invalid_argument(origin_ + ": unknown key '" + k + "'");
}

Json Config::to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
}

fs::path output_root(const std::string& explicit_root) {
    if (!explicit_root.empty()) return explicit_root;
    if (const char* env = std::getenv("KINLAB_OUTPUT_ROOT"); env && *env) return env;
    return "kinlab_out";
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + p.string());
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void persist(const fs::path& dir, const std::map<std::string, Table>& tables, const Json& manifest) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, t] : tables) write_text(dir / (name + ".csv"), t.to_csv());
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace kinlab::io
