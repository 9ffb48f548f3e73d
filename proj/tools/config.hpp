#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace cli {

//! Malformed or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*!
  A mapping node of the config file. Every value read through it, defaults
  included, is echoed into `resolved` so the manifest records the full run.
*/
class Section {
 public:
  Section(YAML::Node node, std::string file, std::string path, nlohmann::json* resolved);

  static Section load(const std::string& file, nlohmann::json* resolved);

  bool has(const std::string& key) const;
  Section child(const std::string& key) const;
  std::optional<Section> optional_child(const std::string& key) const;
  //! Elements of a sequence of mappings.
  std::vector<Section> list(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::vector<double>> matrix(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  //! Two numbers [lo, hi] with lo <= hi.
  std::pair<double, double> range(const std::string& key) const;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

 private:
  YAML::Node get(const std::string& key) const;
  std::string where(const YAML::Node& n, const std::string& key) const;
  nlohmann::json& slot(const std::string& key) const;

  YAML::Node node_;
  std::string file_;
  std::string path_;
  nlohmann::json* resolved_;
};

}  // namespace cli
