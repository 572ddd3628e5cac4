// Structured text run configuration: an INI-style format with [section]
// headers and key = value lines. Numbers carry no units by contract
// (everything is value/2pi in MHz); a trailing unit suffix is a parse
// error, not a convention.
#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lmg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    static Config parse(const std::string& text, const std::string& origin = "<string>") {
        Config cfg;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string s = trim(strip_comment(line));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno)
                                      + ": malformed section header '" + s + "'");
                section = trim(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno)
                                  + ": expected key = value, got '" + s + "'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            cfg.values_[qualify(section, key)] = {value, origin + ":" + std::to_string(lineno)};
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(qualify(section, key)) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key) const {
        return entry(section, key).value;
    }

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
        return has(section, key) ? get_string(section, key) : fallback;
    }

    double get_number(const std::string& section, const std::string& key) const {
        const auto& e = entry(section, key);
        return parse_number(e.value, e.where, qualify(section, key));
    }

    double get_number_or(const std::string& section, const std::string& key,
                         double fallback) const {
        return has(section, key) ? get_number(section, key) : fallback;
    }

    std::optional<double> get_optional_number(const std::string& section,
                                              const std::string& key) const {
        if (!has(section, key)) return std::nullopt;
        return get_number(section, key);
    }

    const std::map<std::string, std::string> flat() const {
        std::map<std::string, std::string> out;
        for (const auto& [k, v] : values_) out[k] = v.value;
        return out;
    }

    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[qualify(section, key)] = {value, "<set>"};
    }

    // Round-trippable INI serialization of the current contents.
    std::string to_ini_text() const {
        std::ostringstream out;
        // Sectionless keys first, so re-parsing cannot fold them into a
        // later section.
        for (const auto& [qualified, e] : values_)
            if (qualified.find('.') == std::string::npos)
                out << qualified << " = " << e.value << "\n";
        std::string current_section;
        for (const auto& [qualified, e] : values_) {
            const auto dot = qualified.find('.');
            if (dot == std::string::npos) continue;
            const std::string section = qualified.substr(0, dot);
            if (section != current_section) {
                out << "[" << section << "]\n";
                current_section = section;
            }
            out << qualified.substr(dot + 1) << " = " << e.value << "\n";
        }
        return out.str();
    }

    // Numbers are bare; "20 MHz", "20MHz", "20kHz" all reject.
    static double parse_number(const std::string& raw, const std::string& where,
                               const std::string& key) {
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(raw, &consumed);
        } catch (const std::exception&) {
            throw ConfigError(where + ": field '" + key + "': not a number: '" + raw + "'");
        }
        if (consumed != raw.size())
            throw ConfigError(where + ": field '" + key + "': trailing characters in '" + raw
                              + "' (unit suffixes are rejected; values are 2pi*MHz by contract)");
        return v;
    }

private:
    struct Entry {
        std::string value;
        std::string where;
    };

    const Entry& entry(const std::string& section, const std::string& key) const {
        const auto it = values_.find(qualify(section, key));
        if (it == values_.end())
            throw ConfigError("missing config field '" + qualify(section, key) + "'");
        return it->second;
    }

    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    static std::string strip_comment(const std::string& s) {
        const auto pos = s.find_first_of("#;");
        return pos == std::string::npos ? s : s.substr(0, pos);
    }

    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }

    std::map<std::string, Entry> values_;
};

} // namespace lmg
