#pragma once
// Configuration, number parsing and the on-disk result cache used by the command-line tool.

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <openssl/evp.h>

#include <json.hpp>
#include <toml.hpp>

#include <crc/scalar.hpp>

namespace crc::cli {

namespace fs = std::filesystem;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  int order = 10;
  int precision = 40;
  std::string cache_dir;  // empty: caching disabled
  int gl_points = 30;
  double t_max = 80;
};

inline nlohmann::json toml_to_json(const toml::node& n) {
  if (auto t = n.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (auto a = n.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (auto v = n.as_integer()) return v->get();
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_boolean()) return v->get();
  if (auto v = n.as_string()) return v->get();
  throw usage_error("config: unsupported TOML value type");
}

// TOML when the extension says so, JSON otherwise.
inline nlohmann::json read_structured(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  if (fs::path(path).extension() == ".toml") {
    try {
      return toml_to_json(toml::parse(ss.str(), path));
    } catch (const toml::parse_error& e) {
      throw usage_error("config " + path + ": " + std::string(e.description()));
    }
  }
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw usage_error("config " + path + ": " + e.what());
  }
}

inline void apply_config(Settings& s, const nlohmann::json& j) {
  for (auto& [k, v] : j.items()) {
    if (k == "order") s.order = v.get<int>();
    else if (k == "precision") s.precision = v.get<int>();
    else if (k == "cache_dir") s.cache_dir = v.get<std::string>();
    else if (k == "contour") {
      for (auto& [ck, cv] : v.items()) {
        if (ck == "gl_points") s.gl_points = cv.get<int>();
        else if (ck == "t_max") s.t_max = cv.get<double>();
        else throw usage_error("config: unknown contour key '" + ck + "'");
      }
    } else {
      throw usage_error("config: unknown key '" + k + "'");
    }
  }
}

// "0.05", "0.05,0.01" (re,im) or "0.05+0.01i"; parsed from the decimal string, not via double.
inline Cplx parse_cplx(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  try {
    auto comma = s.find(',');
    if (comma != std::string::npos) return Cplx(Real(s.substr(0, comma)), Real(s.substr(comma + 1)));
    if (!s.empty() && s.back() == 'i') {
      auto body = s.substr(0, s.size() - 1);
      auto pos = body.find_last_of("+-");
      while (pos != std::string::npos && pos > 0 && (body[pos - 1] == 'e' || body[pos - 1] == 'E'))
        pos = body.find_last_of("+-", pos - 1);
      if (pos == std::string::npos || pos == 0) return Cplx(Real(0), Real(body.empty() || body == "+" ? "1" : body));
      return Cplx(Real(body.substr(0, pos)), Real(body.substr(pos)));
    }
    return Cplx(Real(s));
  } catch (const std::exception&) {
    throw usage_error("not a number: '" + s + "'");
  }
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// Results stored as <dir>/<sha256 of the key>.json; writes go to a temporary file that is
// renamed into place, so readers never see a partial file.
class Cache {
 public:
  explicit Cache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty() && !fs::is_directory(dir_)) throw usage_error("cache dir does not exist: " + dir_);
  }
  bool enabled() const { return !dir_.empty(); }
  fs::path path_for(const nlohmann::json& key) const { return fs::path(dir_) / (sha256_hex(key.dump()) + ".json"); }

  std::optional<nlohmann::json> get(const nlohmann::json& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_for(key));
    if (!in) return std::nullopt;
    try {
      auto j = nlohmann::json::parse(in);
      if (j.at("key") != key) return std::nullopt;  // hash collision or foreign file
      return j.at("value");
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void put(const nlohmann::json& key, const nlohmann::json& value) const {
    if (!enabled()) return;
    auto target = path_for(key);
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << nlohmann::json{{"key", key}, {"value", value}}.dump() << "\n";
      if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
  }

 private:
  std::string dir_;
};

}  // namespace crc::cli
