#include "riskbn/json_format.hpp"

#include <charconv>
#include <algorithm>
#include <cmath>

namespace riskbn {

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void write(const Json& v, int depth, std::string& out) {
  auto indent = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        out += Json(it.key()).dump();
        out += ": ";
        write(it.value(), depth + 1, out);
      }
      out += "\n";
      indent(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; CPT rows read better that way.
      bool scalars = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (scalars) {
        out += "[";
        bool first = true;
        for (const auto& e : v) {
          if (!first) out += ", ";
          first = false;
          write(e, depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        write(e, depth + 1, out);
      }
      out += "\n";
      indent(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string to_canonical_json(const Json& value) {
  std::string out;
  write(value, 0, out);
  out += "\n";
  return out;
}

}  // namespace riskbn
