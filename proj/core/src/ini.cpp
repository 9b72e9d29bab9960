#include "artic/ini.hpp"

#include <sstream>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
    IniFile file;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') {
            continue;
        }
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty()) {
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": empty section name");
            }
            file.sections_[section];
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": empty key");
        }
        file.sections_[section][key] = trim(stripped.substr(eq + 1));
    }
    return file;
}

IniFile IniFile::parse_file(const std::filesystem::path& path) {
    return parse(read_file_bytes(path), path.string());
}

std::optional<std::string> IniFile::get(const std::string& section,
                                        const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end()) {
        return std::nullopt;
    }
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) {
        return std::nullopt;
    }
    return it->second;
}

}  // namespace artic
