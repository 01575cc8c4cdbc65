#include "monoctr/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "monoctr/errors.hpp"

namespace monoctr {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strips a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

nlohmann::json parse_scalar(const std::string& raw, std::size_t line_no) {
    const std::string s = strip(raw);
    if (s.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
        return s.substr(1, s.size() - 2);
    }
    if (s == "true") return true;
    if (s == "false") return false;
    // integer, then float
    {
        char* end = nullptr;
        long long v = std::strtoll(s.c_str(), &end, 10);
        if (end != s.c_str() && *end == '\0') return v;
    }
    {
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() && *end == '\0') return v;
    }
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value: " + s);
}

nlohmann::json parse_value(const std::string& raw, std::size_t line_no) {
    const std::string s = strip(raw);
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']')
            throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
        nlohmann::json arr = nlohmann::json::array();
        std::string inner = s.substr(1, s.size() - 2);
        std::string cur;
        bool in_str = false;
        for (char c : inner) {
            if (c == '"') in_str = !in_str;
            if (c == ',' && !in_str) {
                if (!strip(cur).empty()) arr.push_back(parse_scalar(cur, line_no));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!strip(cur).empty()) arr.push_back(parse_scalar(cur, line_no));
        return arr;
    }
    return parse_scalar(s, line_no);
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
    nlohmann::json doc = nlohmann::json::object();
    nlohmann::json* current = &doc;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.size() > 3 && line[1] == '[' && line.substr(line.size() - 2) == "]]") {
                const std::string name = strip(line.substr(2, line.size() - 4));
                if (!doc.contains(name)) doc[name] = nlohmann::json::array();
                doc[name].push_back(nlohmann::json::object());
                current = &doc[name].back();
            } else if (line.back() == ']') {
                const std::string name = strip(line.substr(1, line.size() - 2));
                if (!doc.contains(name)) doc[name] = nlohmann::json::object();
                current = &doc[name];
            } else {
                throw ConfigError("line " + std::to_string(line_no) + ": bad table header");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        (*current)[key] = parse_value(line.substr(eq + 1), line_no);
    }
    return doc;
}

nlohmann::json parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

}  // namespace monoctr
