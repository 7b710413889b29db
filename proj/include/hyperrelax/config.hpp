#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hyperrelax/study.hpp"

namespace hyperrelax {

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TomlValue {
  enum class Kind { number, boolean, string, array };
  Kind kind = Kind::number;
  double number = 0.0;
  bool integer = false;
  bool boolean = false;
  std::string text;
  std::vector<TomlValue> items;
};

/// table name -> key -> value; keys before the first header live in table "".
using TomlDocument = std::map<std::string, std::map<std::string, TomlValue>>;

/// Parses the subset used by study files: [table] headers, key = value pairs
/// with numbers, booleans, basic strings and one-line arrays, and # comments.
TomlDocument parse_toml(std::string_view text);

/// Builds a study from a document. A [model] family key starts from the desk
/// (or, with preset = "published", the published) settings for that family; every
/// other key overrides one field. Unknown tables or keys are errors.
StudyConfig study_config_from_toml(const TomlDocument& doc);

StudyConfig load_study_config(const std::filesystem::path& path);

}  // namespace hyperrelax
