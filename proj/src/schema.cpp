#include "mosaic/schema.hpp"

#include <algorithm>
#include <cmath>

#include "mosaic/error.hpp"

namespace mosaic::schema {

namespace {

bool has_type(const Json& v, const std::string& type) {
  if (type == "null") return v.is_null();
  if (type == "boolean") return v.is_boolean();
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    return v.is_number_float() && std::floor(v.get<double>()) == v.get<double>();
  }
  throw Error(Errc::invalid_argument, "unknown schema type " + type);
}

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

class Validator {
 public:
  explicit Validator(const Json& root) : root_(root) {}

  void check(const Json& s, const Json& v, const std::string& path, std::vector<Violation>& out) const {
    if (s.is_boolean()) {
      if (!s.get<bool>()) out.push_back({path, "value not allowed"});
      return;
    }
    if (auto r = s.find("$ref"); r != s.end()) {
      check(resolve(r->get<std::string>()), v, path, out);
    }
    if (auto t = s.find("type"); t != s.end()) {
      bool ok = false;
      if (t->is_array()) {
        for (const auto& e : *t) ok = ok || has_type(v, e.get<std::string>());
      } else {
        ok = has_type(v, t->get<std::string>());
      }
      if (!ok) {
        out.push_back({path, "expected type " + t->dump()});
        return;
      }
    }
    if (auto c = s.find("const"); c != s.end() && *c != v) {
      out.push_back({path, "expected " + c->dump()});
    }
    if (auto e = s.find("enum"); e != s.end()) {
      if (std::find(e->begin(), e->end(), v) == e->end()) out.push_back({path, "not one of " + e->dump()});
    }
    if (auto a = s.find("anyOf"); a != s.end()) {
      bool any = false;
      for (const auto& sub : *a) {
        std::vector<Violation> tmp;
        check(sub, v, path, tmp);
        if (tmp.empty()) {
          any = true;
          break;
        }
      }
      if (!any) out.push_back({path, "matches no alternative"});
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (auto m = s.find("minimum"); m != s.end() && x < m->get<double>()) {
        out.push_back({path, "below minimum " + m->dump()});
      }
      if (auto m = s.find("maximum"); m != s.end() && x > m->get<double>()) {
        out.push_back({path, "above maximum " + m->dump()});
      }
    }
    if (v.is_string()) {
      if (auto m = s.find("minLength"); m != s.end() && utf8_chars(v.get_ref<const std::string&>()) < m->get<std::size_t>()) {
        out.push_back({path, "shorter than " + m->dump()});
      }
    }
    if (v.is_array()) {
      if (auto m = s.find("minItems"); m != s.end() && v.size() < m->get<std::size_t>()) {
        out.push_back({path, "fewer than " + m->dump() + " items"});
      }
      if (auto m = s.find("maxItems"); m != s.end() && v.size() > m->get<std::size_t>()) {
        out.push_back({path, "more than " + m->dump() + " items"});
      }
      if (auto items = s.find("items"); items != s.end()) {
        for (std::size_t i = 0; i < v.size(); ++i) check(*items, v[i], path + "/" + std::to_string(i), out);
      }
    }
    if (v.is_object()) {
      if (auto req = s.find("required"); req != s.end()) {
        for (const auto& k : *req) {
          if (!v.contains(k.get<std::string>())) out.push_back({path, "missing property " + k.get<std::string>()});
        }
      }
      const auto props = s.find("properties");
      const auto extra = s.find("additionalProperties");
      for (const auto& [k, sub] : v.items()) {
        const std::string p = path + "/" + escape_pointer(k);
        if (props != s.end() && props->contains(k)) {
          check((*props)[k], sub, p, out);
        } else if (extra != s.end()) {
          if (extra->is_boolean() && !extra->get<bool>()) {
            out.push_back({p, "unexpected property"});
          } else {
            check(*extra, sub, p, out);
          }
        }
      }
    }
  }

 private:
  static std::size_t utf8_chars(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
      return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
  }

  const Json& resolve(const std::string& ref) const {
    if (ref.empty() || ref[0] != '#') throw Error(Errc::invalid_argument, "only local $ref is supported: " + ref);
    try {
      return root_.at(Json::json_pointer(ref.substr(1)));
    } catch (const Json::exception&) {
      throw Error(Errc::invalid_argument, "unresolvable $ref " + ref);
    }
  }

  const Json& root_;
};

}  // namespace

std::vector<Violation> validate(const Json& schema, const Json& instance) {
  std::vector<Violation> out;
  Validator(schema).check(schema, instance, "", out);
  return out;
}

}  // namespace mosaic::schema
