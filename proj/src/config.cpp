#include "dolbeault/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dolbeault {

namespace {

std::string trim(std::string_view v) {
    std::size_t b = 0, e = v.size();
    while (b < e && std::isspace(static_cast<unsigned char>(v[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(v[e - 1]))) --e;
    return std::string(v.substr(b, e - b));
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
    return true;
}

// Strips an unquoted trailing comment, then surrounding quotes if present.
std::string clean_value(std::string v, int lineno) {
    bool quoted = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == '"') quoted = !quoted;
        else if (v[i] == '#' && !quoted) { v.resize(i); break; }
    }
    if (quoted) throw std::invalid_argument("config: unterminated quote on line " +
                                            std::to_string(lineno));
    v = trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    return v;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : v) {
        if (c == ',') { out.push_back(trim(cur)); cur.clear(); }
        else cur += c;
    }
    cur = trim(cur);
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& want) {
    throw std::invalid_argument("config: key '" + key + "' = '" + value + "' is not " + want);
}

} // namespace

Config Config::parse_text(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line, prefix;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config: malformed table header on line " +
                                            std::to_string(lineno));
            prefix = trim(t.substr(1, t.size() - 2));
            if (!valid_key(prefix))
                throw std::invalid_argument("config: bad table name '" + prefix +
                                            "' on line " + std::to_string(lineno));
            prefix += '.';
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value' on line " +
                                        std::to_string(lineno));
        std::string key = trim(t.substr(0, eq));
        if (!valid_key(key))
            throw std::invalid_argument("config: bad key '" + key + "' on line " +
                                        std::to_string(lineno));
        c.kv[prefix + key] = clean_value(t.substr(eq + 1), lineno);
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
}

std::string Config::get_str_req(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("config: missing required key '" + key + "'");
    return it->second;
}

long long Config::get_int(const std::string& key, long long dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    char* end = nullptr;
    long long v = std::strtoll(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0') bad_value(key, it->second, "an integer");
    return v;
}

unsigned long long Config::get_u64(const std::string& key, unsigned long long dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    char* end = nullptr;
    unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
    if (end == it->second.c_str() || *end != '\0' || it->second[0] == '-')
        bad_value(key, it->second, "an unsigned integer");
    return v;
}

double Config::get_double(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    if (end == it->second.c_str() || *end != '\0') bad_value(key, it->second, "a number");
    return v;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    bad_value(key, it->second, "a boolean (true/false)");
}

rat Config::get_rat(const std::string& key, const rat& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        return parse_rat(it->second);
    } catch (const std::exception&) {
        bad_value(key, it->second, "a rational (num or num/den)");
    }
}

pexp Config::get_pexp(const std::string& key, const pexp& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
        return parse_pexp(it->second);
    } catch (const std::exception&) {
        bad_value(key, it->second, "an exponent (rational >= 1 or inf)");
    }
}

std::vector<long long> Config::get_ints(const std::string& key,
                                        const std::vector<long long>& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::vector<long long> out;
    for (const auto& tok : split_list(it->second)) {
        char* end = nullptr;
        long long v = std::strtoll(tok.c_str(), &end, 10);
        if (tok.empty() || end == tok.c_str() || *end != '\0')
            bad_value(key, it->second, "a comma list of integers");
        out.push_back(v);
    }
    return out;
}

std::vector<rat> Config::get_rats(const std::string& key, const std::vector<rat>& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::vector<rat> out;
    for (const auto& tok : split_list(it->second)) {
        try {
            out.push_back(parse_rat(tok));
        } catch (const std::exception&) {
            bad_value(key, it->second, "a comma list of rationals");
        }
    }
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t fnv64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace dolbeault
