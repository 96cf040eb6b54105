#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pasx::jsonw {

/// Insertion-ordered JSON value for CLI emission. Numbers print with 12
/// significant digits so outputs are byte-stable across runs.
class Value {
 public:
  Value() : kind_(Kind::null) {}
  Value(bool b) : kind_(Kind::boolean), bool_(b) {}
  Value(double d) : kind_(Kind::number), num_(d) {
    if (!std::isfinite(d)) throw std::invalid_argument("jsonw: non-finite number");
  }
  Value(std::int64_t i) : kind_(Kind::integer), int_(i) {}
  Value(std::uint64_t u) : kind_(Kind::uinteger), uint_(u) {}
  Value(int i) : Value(static_cast<std::int64_t>(i)) {}
  Value(unsigned u) : Value(static_cast<std::uint64_t>(u)) {}
  Value(const char* s) : kind_(Kind::string), str_(s) {}
  Value(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

  static Value array() {
    Value v;
    v.kind_ = Kind::array;
    return v;
  }
  static Value object() {
    Value v;
    v.kind_ = Kind::object;
    return v;
  }
  template <typename T>
  static Value array_of(const std::vector<T>& items) {
    Value v = array();
    for (const auto& item : items) v.push_back(Value(item));
    return v;
  }

  Value& push_back(Value v) {
    items_.push_back(std::move(v));
    return *this;
  }
  Value& set(const std::string& key, Value v) {
    members_.emplace_back(key, std::move(v));
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
  }

 private:
  enum class Kind { null, boolean, number, integer, uinteger, string, array, object };

  static void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    char buf[64];
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
      case Kind::null: out += "null"; break;
      case Kind::boolean: out += bool_ ? "true" : "false"; break;
      case Kind::number:
        std::snprintf(buf, sizeof buf, "%.12g", num_);
        out += buf;
        break;
      case Kind::integer:
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(int_));
        out += buf;
        break;
      case Kind::uinteger:
        std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(uint_));
        out += buf;
        break;
      case Kind::string: escape(out, str_); break;
      case Kind::array: {
        if (items_.empty()) {
          out += "[]";
          break;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "]";
        break;
      }
      case Kind::object: {
        if (members_.empty()) {
          out += "{}";
          break;
        }
        out += "{\n";
        for (std::size_t i = 0; i < members_.size(); ++i) {
          out += pad;
          escape(out, members_[i].first);
          out += ": ";
          members_[i].second.write(out, indent, depth + 1);
          if (i + 1 < members_.size()) out += ',';
          out += '\n';
        }
        out += close_pad + "}";
        break;
      }
    }
  }

  Kind kind_;
  bool bool_ = false;
  double num_ = 0.0;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  std::string str_;
  std::vector<Value> items_;
  std::vector<std::pair<std::string, Value>> members_;
};

}  // namespace pasx::jsonw
