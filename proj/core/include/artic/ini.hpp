#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace artic {

/// Flat [section] key = value file with # / ; comments. Section and key
/// lookups are case-sensitive; duplicate keys take the last value.
class IniFile {
public:
    static IniFile parse(const std::string& text, const std::string& origin = "<string>");
    static IniFile parse_file(const std::filesystem::path& path);

    std::optional<std::string> get(const std::string& section,
                                   const std::string& key) const;

    bool has_section(const std::string& section) const {
        return sections_.count(section) > 0;
    }

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace artic
