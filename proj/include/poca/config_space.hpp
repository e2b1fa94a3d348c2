#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "poca/rng.hpp"

namespace poca {

// Resource units granted to a single evaluation (epochs, samples, ...).
using Budget = std::int64_t;

// How a configuration was generated.
enum class Provenance { random, model };

const char* to_string(Provenance p);

enum class ParamKind { continuous, integer, categorical };

// Value-equality condition on a single earlier-declared parameter.
struct Condition {
  std::string parent;
  std::string category_value;      // required label when the parent is categorical
  std::int64_t integer_value = 0;  // required value when the parent is integer
  // Resolved during space construction.
  std::size_t parent_index = 0;
  bool parent_is_categorical = true;
};

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::continuous;
  double low = 0.0;
  double high = 1.0;
  std::int64_t ilow = 0;
  std::int64_t ihigh = 0;
  std::vector<std::string> categories;
  bool log_scale = false;  // continuous only
  std::optional<Condition> condition;
};

// Marker for a parameter whose condition is unsatisfied.
struct Inactive {
  bool operator==(const Inactive&) const = default;
};

struct CategoryIndex {
  std::size_t index = 0;
  bool operator==(const CategoryIndex&) const = default;
};

using ParamValue = std::variant<Inactive, double, std::int64_t, CategoryIndex>;

inline bool is_inactive(const ParamValue& v) { return std::holds_alternative<Inactive>(v); }

// One assignment of all parameters, aligned with ConfigSpace::params().
struct Configuration {
  std::vector<ParamValue> values;
  bool operator==(const Configuration&) const = default;
};

// Immutable hyperparameter domain. Validated once at construction and safe
// to share across threads; sampling uses a caller-owned stream.
class ConfigSpace {
 public:
  explicit ConfigSpace(std::vector<ParamSpec> params);

  static ConfigSpace from_json(const nlohmann::json& doc);
  static ConfigSpace from_file(const std::string& path);
  nlohmann::json to_json() const;

  const std::vector<ParamSpec>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  std::size_t index_of(const std::string& name) const;

  Configuration sample_uniform(RngStream& rng) const;

  // All domain and conditionality violations; empty means the configuration
  // satisfies every invariant.
  std::vector<std::string> validate(const Configuration& cfg) const;

  // Fixed-dimension numeric view used by the surrogate. Continuous values
  // are log-transformed when log_scale is set; categorical values map to
  // their index; inactive parameters are imputed with encoded_default().
  std::vector<double> encode(const Configuration& cfg) const;
  Configuration decode(std::span<const double> x) const;

  // Encoded-domain bounds per dimension.
  double encoded_low(std::size_t dim) const;
  double encoded_high(std::size_t dim) const;
  double encoded_default(std::size_t dim) const;

  // Wire/name-map form: {name: value}, inactive parameters omitted,
  // categorical values as labels.
  nlohmann::json config_to_json(const Configuration& cfg) const;
  Configuration config_from_json(const nlohmann::json& doc) const;

  bool condition_satisfied(const ParamSpec& p, const Configuration& cfg) const;

 private:
  std::vector<ParamSpec> params_;
};

}  // namespace poca
