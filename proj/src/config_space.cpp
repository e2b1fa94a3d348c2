#include "poca/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace poca {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

const char* kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::continuous: return "continuous";
    case ParamKind::integer: return "integer";
    case ParamKind::categorical: return "categorical";
  }
  return "?";
}

ParamKind kind_from_name(const std::string& s) {
  if (s == "continuous") return ParamKind::continuous;
  if (s == "integer") return ParamKind::integer;
  if (s == "categorical") return ParamKind::categorical;
  fail("unknown parameter kind: " + s);
}

}  // namespace

const char* to_string(Provenance p) {
  return p == Provenance::random ? "random" : "model";
}

ConfigSpace::ConfigSpace(std::vector<ParamSpec> params) : params_(std::move(params)) {
  if (params_.empty()) fail("config space needs at least one parameter");

  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    ParamSpec& p = params_[i];
    if (p.name.empty()) fail("parameter name must not be empty");
    if (!seen.emplace(p.name, i).second) fail("duplicate parameter name: " + p.name);

    switch (p.kind) {
      case ParamKind::continuous:
        if (!(p.low < p.high)) fail(p.name + ": continuous bounds need low < high");
        if (p.log_scale && !(p.low > 0.0)) fail(p.name + ": log scale needs low > 0");
        break;
      case ParamKind::integer:
        if (p.ilow > p.ihigh) fail(p.name + ": integer bounds need low <= high");
        if (p.log_scale) fail(p.name + ": log scale only applies to continuous parameters");
        break;
      case ParamKind::categorical: {
        if (p.categories.size() < 2) fail(p.name + ": need at least 2 categories");
        if (p.log_scale) fail(p.name + ": log scale only applies to continuous parameters");
        std::vector<std::string> sorted = p.categories;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          fail(p.name + ": duplicate category label");
        break;
      }
    }

    if (!p.condition) continue;
    Condition& c = *p.condition;
    auto it = seen.find(c.parent);
    if (it == seen.end() || it->second >= i)
      fail(p.name + ": condition parent '" + c.parent + "' must be declared earlier");
    const ParamSpec& parent = params_[it->second];
    c.parent_index = it->second;
    switch (parent.kind) {
      case ParamKind::categorical: {
        c.parent_is_categorical = true;
        auto cat = std::find(parent.categories.begin(), parent.categories.end(), c.category_value);
        if (cat == parent.categories.end())
          fail(p.name + ": condition value '" + c.category_value + "' is not a category of " +
               parent.name);
        break;
      }
      case ParamKind::integer:
        c.parent_is_categorical = false;
        if (c.integer_value < parent.ilow || c.integer_value > parent.ihigh)
          fail(p.name + ": condition value out of parent range");
        break;
      case ParamKind::continuous:
        fail(p.name + ": condition parent must be categorical or integer");
    }
  }
}

std::size_t ConfigSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (params_[i].name == name) return i;
  fail("unknown parameter: " + name);
}

bool ConfigSpace::condition_satisfied(const ParamSpec& p, const Configuration& cfg) const {
  if (!p.condition) return true;
  const Condition& c = *p.condition;
  const ParamValue& parent = cfg.values[c.parent_index];
  if (is_inactive(parent)) return false;
  if (c.parent_is_categorical) {
    const auto* v = std::get_if<CategoryIndex>(&parent);
    return v && params_[c.parent_index].categories[v->index] == c.category_value;
  }
  const auto* v = std::get_if<std::int64_t>(&parent);
  return v && *v == c.integer_value;
}

Configuration ConfigSpace::sample_uniform(RngStream& rng) const {
  Configuration cfg;
  cfg.values.resize(params_.size(), Inactive{});
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamSpec& p = params_[i];
    if (!condition_satisfied(p, cfg)) continue;  // stays inactive, consumes no draws
    switch (p.kind) {
      case ParamKind::continuous:
        if (p.log_scale) {
          cfg.values[i] = std::exp(rng.uniform_real(std::log(p.low), std::log(p.high)));
        } else {
          cfg.values[i] = rng.uniform_real(p.low, p.high);
        }
        break;
      case ParamKind::integer:
        cfg.values[i] = rng.uniform_int(p.ilow, p.ihigh);
        break;
      case ParamKind::categorical:
        cfg.values[i] = CategoryIndex{static_cast<std::size_t>(rng.bounded(p.categories.size()))};
        break;
    }
  }
  return cfg;
}

std::vector<std::string> ConfigSpace::validate(const Configuration& cfg) const {
  std::vector<std::string> violations;
  if (cfg.values.size() != params_.size()) {
    violations.push_back("configuration has " + std::to_string(cfg.values.size()) +
                         " values, space has " + std::to_string(params_.size()));
    return violations;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamSpec& p = params_[i];
    const ParamValue& v = cfg.values[i];
    const bool active_expected = condition_satisfied(p, cfg);
    if (is_inactive(v)) {
      if (active_expected)
        violations.push_back(p.name + ": inactive but its condition is satisfied");
      continue;
    }
    if (!active_expected) {
      violations.push_back(p.name + ": active while its condition is unsatisfied");
      continue;
    }
    switch (p.kind) {
      case ParamKind::continuous: {
        const auto* d = std::get_if<double>(&v);
        if (!d) {
          violations.push_back(p.name + ": expected a real value");
        } else if (!(*d >= p.low && *d <= p.high)) {
          violations.push_back(p.name + ": value " + std::to_string(*d) + " outside [" +
                               std::to_string(p.low) + ", " + std::to_string(p.high) + "]");
        }
        break;
      }
      case ParamKind::integer: {
        const auto* n = std::get_if<std::int64_t>(&v);
        if (!n) {
          violations.push_back(p.name + ": expected an integer value");
        } else if (*n < p.ilow || *n > p.ihigh) {
          violations.push_back(p.name + ": value " + std::to_string(*n) + " outside [" +
                               std::to_string(p.ilow) + ", " + std::to_string(p.ihigh) + "]");
        }
        break;
      }
      case ParamKind::categorical: {
        const auto* c = std::get_if<CategoryIndex>(&v);
        if (!c) {
          violations.push_back(p.name + ": expected a category");
        } else if (c->index >= p.categories.size()) {
          violations.push_back(p.name + ": category index " + std::to_string(c->index) +
                               " out of range");
        }
        break;
      }
    }
  }
  return violations;
}

double ConfigSpace::encoded_low(std::size_t dim) const {
  const ParamSpec& p = params_[dim];
  switch (p.kind) {
    case ParamKind::continuous: return p.log_scale ? std::log(p.low) : p.low;
    case ParamKind::integer: return static_cast<double>(p.ilow);
    case ParamKind::categorical: return 0.0;
  }
  return 0.0;
}

double ConfigSpace::encoded_high(std::size_t dim) const {
  const ParamSpec& p = params_[dim];
  switch (p.kind) {
    case ParamKind::continuous: return p.log_scale ? std::log(p.high) : p.high;
    case ParamKind::integer: return static_cast<double>(p.ihigh);
    case ParamKind::categorical: return static_cast<double>(p.categories.size() - 1);
  }
  return 0.0;
}

double ConfigSpace::encoded_default(std::size_t dim) const {
  const ParamSpec& p = params_[dim];
  if (p.kind == ParamKind::categorical) return 0.0;  // first category
  return 0.5 * (encoded_low(dim) + encoded_high(dim));
}

std::vector<double> ConfigSpace::encode(const Configuration& cfg) const {
  if (auto violations = validate(cfg); !violations.empty())
    fail("cannot encode invalid configuration: " + violations.front());
  std::vector<double> x(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamValue& v = cfg.values[i];
    if (is_inactive(v)) {
      x[i] = encoded_default(i);
    } else if (const auto* d = std::get_if<double>(&v)) {
      x[i] = params_[i].log_scale ? std::log(*d) : *d;
    } else if (const auto* n = std::get_if<std::int64_t>(&v)) {
      x[i] = static_cast<double>(*n);
    } else {
      x[i] = static_cast<double>(std::get<CategoryIndex>(v).index);
    }
  }
  return x;
}

Configuration ConfigSpace::decode(std::span<const double> x) const {
  if (x.size() != params_.size()) fail("encoded vector has wrong dimension");
  Configuration cfg;
  cfg.values.resize(params_.size(), Inactive{});
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamSpec& p = params_[i];
    if (!condition_satisfied(p, cfg)) continue;
    switch (p.kind) {
      case ParamKind::continuous: {
        const double v = p.log_scale ? std::exp(x[i]) : x[i];
        cfg.values[i] = std::clamp(v, p.low, p.high);
        break;
      }
      case ParamKind::integer: {
        const auto n = static_cast<std::int64_t>(std::llround(x[i]));
        cfg.values[i] = std::clamp(n, p.ilow, p.ihigh);
        break;
      }
      case ParamKind::categorical: {
        const auto last = static_cast<std::int64_t>(p.categories.size()) - 1;
        const auto idx = std::clamp<std::int64_t>(std::llround(x[i]), 0, last);
        cfg.values[i] = CategoryIndex{static_cast<std::size_t>(idx)};
        break;
      }
    }
  }
  return cfg;
}

ConfigSpace ConfigSpace::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("params") || !doc["params"].is_array())
    fail("space document needs a 'params' array");
  std::vector<ParamSpec> params;
  for (const auto& jp : doc["params"]) {
    ParamSpec p;
    p.name = jp.at("name").get<std::string>();
    p.kind = kind_from_name(jp.at("kind").get<std::string>());
    switch (p.kind) {
      case ParamKind::continuous: {
        const auto& b = jp.at("bounds");
        p.low = b.at(0).get<double>();
        p.high = b.at(1).get<double>();
        p.log_scale = jp.value("log_scale", false);
        break;
      }
      case ParamKind::integer: {
        const auto& b = jp.at("bounds");
        p.ilow = b.at(0).get<std::int64_t>();
        p.ihigh = b.at(1).get<std::int64_t>();
        break;
      }
      case ParamKind::categorical:
        p.categories = jp.at("categories").get<std::vector<std::string>>();
        break;
    }
    if (jp.contains("condition")) {
      Condition c;
      const auto& jc = jp["condition"];
      c.parent = jc.at("parent").get<std::string>();
      const auto& v = jc.at("value");
      if (v.is_string()) {
        c.category_value = v.get<std::string>();
      } else {
        c.integer_value = v.get<std::int64_t>();
        c.parent_is_categorical = false;
      }
      p.condition = std::move(c);
    }
    params.push_back(std::move(p));
  }
  return ConfigSpace(std::move(params));
}

ConfigSpace ConfigSpace::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open space file: " + path);
  nlohmann::json doc;
  in >> doc;
  return from_json(doc);
}

nlohmann::json ConfigSpace::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const ParamSpec& p : params_) {
    nlohmann::json jp;
    jp["name"] = p.name;
    jp["kind"] = kind_name(p.kind);
    switch (p.kind) {
      case ParamKind::continuous:
        jp["bounds"] = {p.low, p.high};
        jp["log_scale"] = p.log_scale;
        break;
      case ParamKind::integer:
        jp["bounds"] = {p.ilow, p.ihigh};
        break;
      case ParamKind::categorical:
        jp["categories"] = p.categories;
        break;
    }
    if (p.condition) {
      nlohmann::json jc;
      jc["parent"] = p.condition->parent;
      if (p.condition->parent_is_categorical) {
        jc["value"] = p.condition->category_value;
      } else {
        jc["value"] = p.condition->integer_value;
      }
      jp["condition"] = std::move(jc);
    }
    arr.push_back(std::move(jp));
  }
  return nlohmann::json{{"params", std::move(arr)}};
}

nlohmann::json ConfigSpace::config_to_json(const Configuration& cfg) const {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const ParamValue& v = cfg.values[i];
    if (is_inactive(v)) continue;
    const ParamSpec& p = params_[i];
    if (const auto* d = std::get_if<double>(&v)) {
      out[p.name] = *d;
    } else if (const auto* n = std::get_if<std::int64_t>(&v)) {
      out[p.name] = *n;
    } else {
      out[p.name] = p.categories[std::get<CategoryIndex>(v).index];
    }
  }
  return out;
}

Configuration ConfigSpace::config_from_json(const nlohmann::json& doc) const {
  Configuration cfg;
  cfg.values.resize(params_.size(), Inactive{});
  for (const auto& [name, val] : doc.items()) {
    const std::size_t i = index_of(name);
    const ParamSpec& p = params_[i];
    switch (p.kind) {
      case ParamKind::continuous:
        cfg.values[i] = val.get<double>();
        break;
      case ParamKind::integer:
        cfg.values[i] = val.get<std::int64_t>();
        break;
      case ParamKind::categorical: {
        const auto label = val.get<std::string>();
        auto it = std::find(p.categories.begin(), p.categories.end(), label);
        if (it == p.categories.end()) fail(p.name + ": unknown category '" + label + "'");
        cfg.values[i] = CategoryIndex{static_cast<std::size_t>(it - p.categories.begin())};
        break;
      }
    }
  }
  return cfg;
}

}  // namespace poca
