#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>

namespace cli {

Section::Section(YAML::Node node, std::string file, std::string path, nlohmann::json* resolved)
    : node_(std::move(node)), file_(std::move(file)), path_(std::move(path)), resolved_(resolved) {}

Section Section::load(const std::string& file, nlohmann::json* resolved) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file + ": cannot open config file");
  YAML::Node root;
  try {
    root = YAML::Load(in);
  } catch (const YAML::Exception& e) {
    throw ConfigError(file + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(file + ":1: top level must be a mapping");
  *resolved = nlohmann::json::object();
  return Section(root, file, "", resolved);
}

std::string Section::where(const YAML::Node& n, const std::string& key) const {
  int line = n.Mark().line >= 0 ? n.Mark().line + 1 : 1;
  std::string field = path_.empty() ? key : path_ + "." + key;
  return file_ + ":" + std::to_string(line) + ": field '" + field + "'";
}

void Section::fail(const std::string& key, const std::string& msg) const {
  YAML::Node n = node_[key];
  throw ConfigError(where(n.IsDefined() ? n : node_, key) + ": " + msg);
}

nlohmann::json& Section::slot(const std::string& key) const { return (*resolved_)[key]; }

bool Section::has(const std::string& key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }

YAML::Node Section::get(const std::string& key) const {
  if (!has(key)) throw ConfigError(where(node_, key) + ": required field is missing");
  return node_[key];
}

Section Section::child(const std::string& key) const {
  YAML::Node n = get(key);
  if (!n.IsMap()) throw ConfigError(where(n, key) + ": expected a mapping");
  nlohmann::json& s = slot(key);
  if (!s.is_object()) s = nlohmann::json::object();
  return Section(n, file_, path_.empty() ? key : path_ + "." + key, &s);
}

std::optional<Section> Section::optional_child(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return child(key);
}

std::vector<Section> Section::list(const std::string& key) const {
  YAML::Node n = get(key);
  if (!n.IsSequence()) throw ConfigError(where(n, key) + ": expected a sequence");
  nlohmann::json& s = slot(key);
  // Sized up front so the element pointers handed out stay valid.
  s = nlohmann::json::array();
  for (std::size_t i = 0; i < n.size(); ++i) s.push_back(nlohmann::json::object());
  std::vector<Section> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    std::string p = (path_.empty() ? key : path_ + "." + key) + "[" + std::to_string(i) + "]";
    if (!n[i].IsMap()) throw ConfigError(where(n[i], key + "[" + std::to_string(i) + "]") + ": expected a mapping");
    out.emplace_back(n[i], file_, p, &s[i]);
  }
  return out;
}

namespace {

double scalar_number(const YAML::Node& n, const std::function<std::string()>& where) {
  if (!n.IsScalar()) throw ConfigError(where() + ": expected a number");
  double v;
  try {
    v = n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where() + ": '" + n.Scalar() + "' is not a number");
  }
  if (!std::isfinite(v)) throw ConfigError(where() + ": number must be finite");
  return v;
}

}  // namespace

double Section::number(const std::string& key) const {
  YAML::Node n = get(key);
  double v = scalar_number(n, [&] { return where(n, key); });
  slot(key) = v;
  return v;
}

double Section::number(const std::string& key, double fallback) const {
  if (!has(key)) {
    slot(key) = fallback;
    return fallback;
  }
  return number(key);
}

std::int64_t Section::integer(const std::string& key) const {
  YAML::Node n = get(key);
  std::int64_t v;
  try {
    v = n.as<std::int64_t>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(n, key) + ": expected an integer");
  }
  slot(key) = v;
  return v;
}

std::int64_t Section::integer(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) {
    slot(key) = fallback;
    return fallback;
  }
  return integer(key);
}

std::vector<double> Section::numbers(const std::string& key) const {
  YAML::Node n = get(key);
  if (!n.IsSequence()) throw ConfigError(where(n, key) + ": expected a sequence of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(scalar_number(n[i], [&] { return where(n[i], key + "[" + std::to_string(i) + "]"); }));
  slot(key) = out;
  return out;
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) {
    slot(key) = fallback;
    return fallback;
  }
  return numbers(key);
}

std::vector<std::vector<double>> Section::matrix(const std::string& key) const {
  YAML::Node n = get(key);
  if (!n.IsSequence()) throw ConfigError(where(n, key) + ": expected a sequence of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!n[i].IsSequence()) throw ConfigError(where(n[i], key) + ": each row must be a sequence");
    std::vector<double> row;
    for (std::size_t j = 0; j < n[i].size(); ++j)
      row.push_back(scalar_number(n[i][j], [&] {
        return where(n[i][j], key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }));
    out.push_back(row);
  }
  slot(key) = out;
  return out;
}

std::string Section::text(const std::string& key) const {
  YAML::Node n = get(key);
  if (!n.IsScalar()) throw ConfigError(where(n, key) + ": expected a string");
  slot(key) = n.Scalar();
  return n.Scalar();
}

std::string Section::text(const std::string& key, const std::string& fallback) const {
  if (!has(key)) {
    slot(key) = fallback;
    return fallback;
  }
  return text(key);
}

bool Section::flag(const std::string& key, bool fallback) const {
  if (!has(key)) {
    slot(key) = fallback;
    return fallback;
  }
  YAML::Node n = node_[key];
  bool v;
  try {
    v = n.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where(n, key) + ": expected true or false");
  }
  slot(key) = v;
  return v;
}

std::pair<double, double> Section::range(const std::string& key) const {
  std::vector<double> v = numbers(key);
  if (v.size() != 2 || !(v[0] <= v[1])) fail(key, "expected [lo, hi] with lo <= hi");
  return {v[0], v[1]};
}

}  // namespace cli
