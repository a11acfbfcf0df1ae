#ifndef KAMLAT_JSON_IO_HPP
#define KAMLAT_JSON_IO_HPP

#include <initializer_list>
#include <string>

#include "nlohmann/json.hpp"

namespace kamlat {

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Field schema for strict config validation: unknown keys are rejected,
/// required keys must be present, types must match.
struct Field {
  const char* key;
  enum class Type { Number, Integer, String, Object, Array, Boolean } type;
  bool required = false;
};

/// Validates one object level; `where` names the JSON path for error messages.
void validate_object(const nlohmann::json& j, const std::string& where,
                     std::initializer_list<Field> fields);

/// printf %.17g formatting for deterministic CSV output.
std::string fmt_double(double v);

}  // namespace kamlat

#endif
