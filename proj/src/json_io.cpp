#include "kamlat/json_io.hpp"

#include <cstdio>
#include <fstream>

#include "kamlat/errors.hpp"

namespace kamlat {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, "malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Config, "cannot open output file: " + path);
  out << text;
}

namespace {
bool type_matches(const nlohmann::json& v, Field::Type t) {
  switch (t) {
    case Field::Type::Number: return v.is_number();
    case Field::Type::Integer: return v.is_number_integer();
    case Field::Type::String: return v.is_string();
    case Field::Type::Object: return v.is_object();
    case Field::Type::Array: return v.is_array();
    case Field::Type::Boolean: return v.is_boolean();
  }
  return false;
}
const char* type_name(Field::Type t) {
  switch (t) {
    case Field::Type::Number: return "number";
    case Field::Type::Integer: return "integer";
    case Field::Type::String: return "string";
    case Field::Type::Object: return "object";
    case Field::Type::Array: return "array";
    case Field::Type::Boolean: return "boolean";
  }
  return "?";
}
}  // namespace

void validate_object(const nlohmann::json& j, const std::string& where,
                     std::initializer_list<Field> fields) {
  if (!j.is_object()) throw Error(ErrorKind::Config, where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& f : fields) {
      if (key == f.key) {
        known = true;
        if (!type_matches(value, f.type))
          throw Error(ErrorKind::Config,
                      where + "." + key + ": expected " + type_name(f.type));
        break;
      }
    }
    if (!known) throw Error(ErrorKind::Config, where + "." + key + ": unknown key");
  }
  for (const auto& f : fields)
    if (f.required && !j.contains(f.key))
      throw Error(ErrorKind::Config, where + "." + f.key + ": required key missing");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace kamlat
