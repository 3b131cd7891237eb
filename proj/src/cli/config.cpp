#include "mohpo/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mohpo/common/errors.hpp"
#include "mohpo/common/parallel.hpp"
#include "mohpo/objectives/interaction_log.hpp"
#include "mohpo/retrieval/corpus.hpp"
#include "mohpo/retrieval/index.hpp"
#include "mohpo/sampling/tpe.hpp"

namespace mohpo::cli {

namespace {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

// Collects every problem found while reading a YAML document, each tagged
// with its source line (or the override that supplied the value).
class Reader {
 public:
  Reader(std::string source, std::set<std::string> overridden)
      : source_(std::move(source)), overridden_(std::move(overridden)) {}

  void error(const YAML::Node &node, const std::string &key, const std::string &message) {
    std::string where = source_;
    if (overridden_.count(key)) {
      where = "--override " + key;
    } else if (node.IsDefined() && node.Mark().line >= 0) {
      where += ":" + std::to_string(node.Mark().line + 1);
    }
    errors_.push_back(where + ": " + key + ": " + message);
  }

  const std::vector<std::string> &errors() const { return errors_; }

  void finish() const {
    if (errors_.empty()) return;
    std::string all;
    for (const auto &e : errors_) all += (all.empty() ? "" : "\n") + e;
    throw ConfigError(all);
  }

  /// Reports keys of `node` outside `allowed`.
  void check_keys(const YAML::Node &node, const std::string &path,
                  std::initializer_list<const char *> allowed) {
    if (!node.IsMap()) return;
    for (const auto &kv : node) {
      const auto key = kv.first.as<std::string>();
      const bool known = std::any_of(allowed.begin(), allowed.end(),
                                     [&](const char *a) { return key == a; });
      if (!known) error(kv.first, join(path, key), "unknown key");
    }
  }

  template <typename T>
  std::optional<T> as(const YAML::Node &node, const std::string &key, const char *what) {
    if (!node.IsScalar()) {
      error(node, key, std::string("expected ") + what);
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception &) {
      error(node, key, std::string("expected ") + what + ", got '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  /// Optional field: leaves `out` untouched when absent.
  template <typename T>
  void read(const YAML::Node &parent, const std::string &path, const char *name, T &out,
            const char *what) {
    const YAML::Node node = parent[name];
    if (!node.IsDefined() || node.IsNull()) return;
    if (auto v = as<T>(node, join(path, name), what)) out = *v;
  }

  template <typename T>
  std::optional<T> require(const YAML::Node &parent, const std::string &path, const char *name,
                           const char *what) {
    const YAML::Node node = parent[name];
    if (!node.IsDefined() || node.IsNull()) {
      error(parent, join(path, name), "required key is missing");
      return std::nullopt;
    }
    return as<T>(node, join(path, name), what);
  }

 private:
  std::string source_;
  std::set<std::string> overridden_;
  std::vector<std::string> errors_;
};

YAML::Node load_yaml(const std::string &text, const std::string &source) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
    return root;
  } catch (const YAML::ParserException &e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

std::set<std::string> apply_overrides(YAML::Node &root, const std::vector<Override> &overrides) {
  std::set<std::string> keys;
  for (const auto &o : overrides) {
    std::vector<std::string> parts;
    std::stringstream ss(o.key);
    for (std::string part; std::getline(ss, part, '.');) {
      if (part.empty()) throw ConfigError("--override " + o.key + ": empty key segment");
      parts.push_back(part);
    }
    if (parts.empty()) throw ConfigError("--override: empty key");
    YAML::Node value;
    try {
      value = YAML::Load(o.value);
    } catch (const YAML::Exception &e) {
      throw ConfigError("--override " + o.key + ": cannot parse value '" + o.value + "'");
    }
    YAML::Node cur = root;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const bool last = i + 1 == parts.size();
      if (cur.IsSequence()) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(parts[i]);
        } catch (const std::exception &) {
          throw ConfigError("--override " + o.key + ": '" + parts[i] + "' is not a list index");
        }
        if (idx >= cur.size()) {
          throw ConfigError("--override " + o.key + ": index " + parts[i] + " out of range");
        }
        if (last) {
          cur[idx] = value;
        } else {
          YAML::Node next = cur[idx];
          cur.reset(next);
        }
        continue;
      }
      if (!cur.IsMap() && !cur.IsNull()) {
        throw ConfigError("--override " + o.key + ": '" + parts[i - 1] + "' is not a section");
      }
      if (last) {
        cur[parts[i]] = value;
      } else {
        if (!cur[parts[i]].IsDefined() || cur[parts[i]].IsNull()) {
          cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
        }
        YAML::Node next = cur[parts[i]];
        cur.reset(next);
      }
    }
    keys.insert(o.key);
  }
  return keys;
}

void parse_space(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || !node.IsSequence() || node.size() == 0) {
    r.error(node, "space", "must be a non-empty list of parameters");
    return;
  }
  std::vector<space::ParamSpec> params;
  std::set<std::string> names;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const YAML::Node entry = node[i];
    const std::string path = "space." + std::to_string(i);
    if (!entry.IsMap()) {
      r.error(entry, path, "expected a mapping");
      continue;
    }
    r.check_keys(entry, path, {"name", "type", "low", "high", "scale", "choices", "points"});
    auto name = r.require<std::string>(entry, path, "name", "a string");
    auto type = r.require<std::string>(entry, path, "type", "a string");
    if (!name || !type) continue;
    if (!names.insert(*name).second) {
      r.error(entry, path + ".name", "duplicate parameter '" + *name + "'");
    }
    std::string scale_text = "linear";
    r.read(entry, path, "scale", scale_text, "linear or log");
    if (scale_text != "linear" && scale_text != "log") {
      r.error(entry["scale"], path + ".scale", "expected linear or log");
    }
    const auto scale = scale_text == "log" ? space::Scale::log : space::Scale::linear;
    space::ParamSpec p{*name, {}};
    auto literals = [&](const char *key) {
      std::vector<space::Literal> out;
      const YAML::Node list = entry[key];
      if (!list.IsSequence()) {
        r.error(list.IsDefined() ? list : entry, path + "." + key, "expected a list");
        return out;
      }
      for (const auto &item : list) {
        if (!item.IsScalar()) {
          r.error(item, path + "." + key, "list values must be scalars");
          continue;
        }
        try {
          out.emplace_back(item.as<double>());
        } catch (const YAML::Exception &) {
          out.emplace_back(item.Scalar());
        }
      }
      return out;
    };
    if (*type == "continuous") {
      auto lo = r.require<double>(entry, path, "low", "a number");
      auto hi = r.require<double>(entry, path, "high", "a number");
      if (!lo || !hi) continue;
      p.domain = space::ContinuousRange{*lo, *hi, scale};
    } else if (*type == "integer") {
      auto lo = r.require<std::int64_t>(entry, path, "low", "an integer");
      auto hi = r.require<std::int64_t>(entry, path, "high", "an integer");
      if (!lo || !hi) continue;
      p.domain = space::IntegerRange{*lo, *hi, scale};
    } else if (*type == "categorical") {
      p.domain = space::CategoricalChoices{literals("choices")};
    } else if (*type == "grid") {
      p.domain = space::GridPoints{literals("points")};
    } else {
      r.error(entry["type"], path + ".type", "expected continuous, integer, categorical or grid");
      continue;
    }
    const auto report = space::validate_space(space::SearchSpace({p}));
    for (const auto &e : report.errors) r.error(entry, path, e);
    params.push_back(std::move(p));
  }
  cfg.space = space::SearchSpace(std::move(params));
}

void parse_objectives(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || !node.IsSequence() || node.size() == 0) {
    r.error(node, "objectives", "must be a non-empty list");
    return;
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const YAML::Node entry = node[i];
    const std::string path = "objectives." + std::to_string(i);
    if (!entry.IsMap()) {
      r.error(entry, path, "expected a mapping");
      continue;
    }
    r.check_keys(entry, path,
                 {"name", "event", "min_impressions", "smoothing", "positive_threshold", "metrics",
                  "direction"});
    objectives::ObjectiveSpec spec;
    if (auto name = r.require<std::string>(entry, path, "name", "a string")) spec.name = *name;
    if (!spec.name.empty() && !names.insert(spec.name).second) {
      r.error(entry["name"], path + ".name", "duplicate objective '" + spec.name + "'");
    }
    if (auto event = r.require<std::string>(entry, path, "event", "clicks, carts or purchases")) {
      try {
        spec.numerator = objectives::parse_event(*event);
      } catch (const std::exception &e) {
        r.error(entry["event"], path + ".event", e.what());
      }
    }
    r.read(entry, path, "min_impressions", spec.min_impressions, "an integer");
    r.read(entry, path, "positive_threshold", spec.positive_threshold, "a number");
    const YAML::Node smoothing = entry["smoothing"];
    if (smoothing.IsDefined() && !smoothing.IsNull()) {
      if (!smoothing.IsMap()) {
        r.error(smoothing, path + ".smoothing", "expected {alpha, beta} or null");
      } else {
        r.check_keys(smoothing, path + ".smoothing", {"alpha", "beta"});
        objectives::Smoothing s;
        r.read(smoothing, path + ".smoothing", "alpha", s.alpha, "a number");
        r.read(smoothing, path + ".smoothing", "beta", s.beta, "a number");
        spec.smoothing = s;
      }
    }
    std::string direction = "maximize";
    r.read(entry, path, "direction", direction, "maximize or minimize");
    try {
      spec.direction = space::parse_direction(direction);
    } catch (const std::exception &e) {
      r.error(entry["direction"], path + ".direction", e.what());
    }
    const YAML::Node metrics = entry["metrics"];
    if (!metrics.IsSequence()) {
      r.error(metrics.IsDefined() ? metrics : entry, path + ".metrics",
              "expected a list such as [ndcg@20, precision@100]");
    } else {
      for (const auto &m : metrics) {
        try {
          spec.metrics.push_back(objectives::parse_metric(m.as<std::string>()));
        } catch (const std::exception &e) {
          r.error(m, path + ".metrics", e.what());
        }
      }
    }
    try {
      objectives::validate(spec);
    } catch (const std::exception &e) {
      r.error(entry, path, e.what());
    }
    cfg.objectives.push_back(std::move(spec));
  }
}

void parse_weights(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  const std::size_t m = cfg.objectives.size();
  if (!node.IsDefined() || node.IsNull()) {
    if (m > 0) cfg.weights.assign(m, 1.0 / static_cast<double>(m));
    return;
  }
  if (node.IsSequence()) {
    for (const auto &w : node) {
      if (auto v = r.as<double>(w, "weights", "a number")) cfg.weights.push_back(*v);
    }
  } else if (node.IsMap()) {
    cfg.weights.assign(m, 0.0);
    for (const auto &kv : node) {
      const auto name = kv.first.as<std::string>();
      auto it = std::find_if(cfg.objectives.begin(), cfg.objectives.end(),
                             [&](const auto &o) { return o.name == name; });
      if (it == cfg.objectives.end()) {
        r.error(kv.first, "weights." + name, "no objective with this name");
        continue;
      }
      if (auto v = r.as<double>(kv.second, "weights." + name, "a number")) {
        cfg.weights[static_cast<std::size_t>(it - cfg.objectives.begin())] = *v;
      }
    }
  } else {
    r.error(node, "weights", "expected a list or a mapping objective -> weight");
    return;
  }
  if (cfg.weights.size() != m) {
    r.error(node, "weights", "expected " + std::to_string(m) + " weights, got " +
                                 std::to_string(cfg.weights.size()));
    return;
  }
  double sum = 0.0;
  for (double w : cfg.weights) {
    if (!(w >= 0.0)) r.error(node, "weights", "weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    r.error(node, "weights", "weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

retrieval::NumericBinding numeric_binding(Reader &r, const YAML::Node &node,
                                          const std::string &key, const StudyConfig &cfg) {
  if (!node.IsScalar()) {
    r.error(node, key, "expected a number or a parameter name");
    return 0.0;
  }
  try {
    return node.as<double>();
  } catch (const YAML::Exception &) {
  }
  const auto name = node.Scalar();
  if (!cfg.space.find(name)) {
    r.error(node, key, "parameter '" + name + "' is not declared in space");
  }
  return retrieval::ParamRef{name};
}

void parse_transform(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || !node.IsMap()) {
    r.error(node, "transform", "required section is missing");
    return;
  }
  r.check_keys(node, "transform", {"weights", "candidate_k", "normalization", "bm25_k1", "bm25_b"});
  const YAML::Node weights = node["weights"];
  if (!weights.IsMap() || weights.size() == 0) {
    r.error(weights.IsDefined() ? weights : node, "transform.weights",
            "expected a mapping signal -> number or parameter name");
  } else {
    for (const auto &kv : weights) {
      const auto signal = kv.first.as<std::string>();
      cfg.transform.weights[signal] =
          numeric_binding(r, kv.second, "transform.weights." + signal, cfg);
    }
  }
  if (node["candidate_k"].IsDefined()) {
    cfg.transform.candidate_k = numeric_binding(r, node["candidate_k"], "transform.candidate_k", cfg);
    if (const double *k = std::get_if<double>(&cfg.transform.candidate_k)) {
      if (!(*k >= 1.0) || std::floor(*k) != *k) {
        r.error(node["candidate_k"], "transform.candidate_k", "must be an integer >= 1");
      }
    }
  }
  if (const YAML::Node n = node["normalization"]; n.IsDefined()) {
    auto text = r.as<std::string>(n, "transform.normalization", "none, minmax or a parameter name");
    if (text) {
      if (cfg.space.find(*text)) {
        cfg.transform.normalization = retrieval::ParamRef{*text};
      } else {
        try {
          cfg.transform.normalization = retrieval::parse_normalization(*text);
        } catch (const std::exception &e) {
          r.error(n, "transform.normalization", e.what());
        }
      }
    }
  }
  if (node["bm25_k1"].IsDefined()) {
    cfg.transform.bm25_k1 = numeric_binding(r, node["bm25_k1"], "transform.bm25_k1", cfg);
  }
  if (node["bm25_b"].IsDefined()) {
    cfg.transform.bm25_b = numeric_binding(r, node["bm25_b"], "transform.bm25_b", cfg);
  }
}

void parse_sampler(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || node.IsNull()) return;
  if (!node.IsMap()) {
    r.error(node, "sampler", "expected a mapping");
    return;
  }
  r.check_keys(node, "sampler",
               {"name", "mode", "gamma", "n_startup", "n_candidates", "bandwidth_floor",
                "categorical_prior"});
  auto &s = cfg.sampler;
  r.read(node, "sampler", "name", s.name, "a string");
  if (s.name != "tpe" && s.name != "random" && s.name != "grid") {
    r.error(node["name"], "sampler.name", "expected tpe, random or grid");
  }
  r.read(node, "sampler", "mode", s.mode, "a string");
  if (s.mode != "separate" && s.mode != "weighted_sum") {
    r.error(node["mode"], "sampler.mode", "expected separate or weighted_sum");
  }
  r.read(node, "sampler", "gamma", s.tpe.gamma_quantile, "a number");
  r.read(node, "sampler", "n_startup", s.tpe.n_startup, "a non-negative integer");
  r.read(node, "sampler", "n_candidates", s.tpe.n_candidates, "a positive integer");
  r.read(node, "sampler", "bandwidth_floor", s.tpe.bandwidth_floor, "a number");
  r.read(node, "sampler", "categorical_prior", s.tpe.categorical_prior, "a number");
  try {
    sampling::validate(s.tpe);
  } catch (const std::exception &e) {
    r.error(node, "sampler", e.what());
  }
}

void parse_cumulative(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || node.IsNull()) return;
  if (!node.IsMap()) {
    r.error(node, "cumulative", "expected a mapping");
    return;
  }
  r.check_keys(node, "cumulative", {"stages", "seed_quantile", "max_seeds"});
  auto &c = cfg.cumulative;
  if (const YAML::Node stages = node["stages"]; stages.IsDefined()) {
    c.stages.clear();
    if (!stages.IsSequence() || stages.size() == 0) {
      r.error(stages, "cumulative.stages", "expected a non-empty list of trial budgets");
    } else {
      for (const auto &b : stages) {
        auto v = r.as<std::size_t>(b, "cumulative.stages", "a positive integer");
        if (v && *v < 1) r.error(b, "cumulative.stages", "budgets must be >= 1");
        if (v) c.stages.push_back(*v);
      }
    }
  }
  if (const YAML::Node q = node["seed_quantile"]; q.IsDefined()) {
    c.seed_quantile.clear();
    if (q.IsSequence()) {
      for (const auto &x : q) {
        if (auto v = r.as<double>(x, "cumulative.seed_quantile", "a number")) c.seed_quantile.push_back(*v);
      }
    } else if (auto v = r.as<double>(q, "cumulative.seed_quantile", "a number")) {
      c.seed_quantile.push_back(*v);
    }
    for (double v : c.seed_quantile) {
      if (!(v >= 0.0 && v < 1.0)) r.error(q, "cumulative.seed_quantile", "values must lie in [0, 1)");
    }
    const std::size_t m = cfg.objectives.size();
    if (c.seed_quantile.size() != 1 && c.seed_quantile.size() != m) {
      r.error(q, "cumulative.seed_quantile", "needs one value or one per objective");
    }
  }
  r.read(node, "cumulative", "max_seeds", c.max_seeds, "a positive integer");
  if (c.max_seeds < 1) r.error(node["max_seeds"], "cumulative.max_seeds", "must be >= 1");
}

void parse_meta(Reader &r, const YAML::Node &node, StudyConfig &cfg) {
  if (!node.IsDefined() || node.IsNull()) return;
  if (!node.IsMap()) {
    r.error(node, "meta", "expected a mapping");
    return;
  }
  r.check_keys(node, "meta", {"top_n", "identity_split", "criteria"});
  r.read(node, "meta", "top_n", cfg.top_n, "a positive integer");
  if (cfg.top_n < 1) r.error(node["top_n"], "meta.top_n", "must be >= 1");
  r.read(node, "meta", "identity_split", cfg.identity_split, "true or false");
  if (const YAML::Node crit = node["criteria"]; crit.IsDefined() && !crit.IsNull()) {
    if (!crit.IsSequence()) {
      r.error(crit, "meta.criteria", "expected a list of objective names or weighted_sum");
      return;
    }
    for (const auto &c : crit) {
      auto name = r.as<std::string>(c, "meta.criteria", "a string");
      if (!name) continue;
      const bool known = *name == "weighted_sum" ||
                         std::any_of(cfg.objectives.begin(), cfg.objectives.end(),
                                     [&](const auto &o) { return o.name == *name; });
      if (!known) r.error(c, "meta.criteria", "unknown criterion '" + *name + "'");
      cfg.criteria.push_back(*name);
    }
  }
}

void parse_data(Reader &r, const YAML::Node &node, const std::filesystem::path &base,
                StudyConfig &cfg) {
  if (!node.IsDefined() || !node.IsMap()) {
    r.error(node, "data", "required section is missing");
    return;
  }
  r.check_keys(node, "data", {"corpus", "queries", "train_log", "meta_log"});
  auto path = [&](const char *key, std::filesystem::path &out) {
    auto text = r.require<std::string>(node, "data", key, "a file path");
    if (!text) return;
    std::filesystem::path p(*text);
    if (p.is_relative()) p = base / p;
    if (!std::filesystem::is_regular_file(p)) {
      r.error(node[key], std::string("data.") + key, "file not found: " + p.string());
    }
    out = p;
  };
  path("corpus", cfg.data.corpus);
  path("queries", cfg.data.queries);
  path("train_log", cfg.data.train_log);
  path("meta_log", cfg.data.meta_log);
}

std::optional<std::map<std::string, double>> parse_blend(Reader &r, const YAML::Node &node,
                                                        const std::string &key) {
  if (!node.IsDefined() || node.IsNull()) return std::nullopt;
  if (!node.IsMap()) {
    r.error(node, key, "expected a mapping signal -> weight");
    return std::nullopt;
  }
  std::map<std::string, double> out;
  for (const auto &kv : node) {
    const auto name = kv.first.as<std::string>();
    if (auto v = r.as<double>(kv.second, key + "." + name, "a number")) out[name] = *v;
  }
  return out;
}

}  // namespace

Override parse_override(const std::string &text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--override '" + text + "': expected key=value");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

StudyConfig parse_study_config(const std::string &text, const std::string &source_name,
                               const std::filesystem::path &base_dir,
                               const std::vector<Override> &overrides) {
  YAML::Node root = load_yaml(text, source_name);
  Reader r(source_name, apply_overrides(root, overrides));
  r.check_keys(root, "",
               {"seed", "parallelism", "data", "space", "sampler", "objectives", "weights",
                "transform", "meta", "cumulative", "output"});
  StudyConfig cfg;
  r.read(root, "", "seed", cfg.seed, "a non-negative integer");
  r.read(root, "", "parallelism", cfg.parallelism, "a non-negative integer");
  parse_data(r, root["data"], base_dir, cfg);
  parse_space(r, root["space"], cfg);
  parse_sampler(r, root["sampler"], cfg);
  parse_objectives(r, root["objectives"], cfg);
  parse_weights(r, root["weights"], cfg);
  parse_transform(r, root["transform"], cfg);
  parse_meta(r, root["meta"], cfg);
  parse_cumulative(r, root["cumulative"], cfg);
  if (const YAML::Node out = root["output"]; out.IsDefined() && !out.IsNull()) {
    r.check_keys(out, "output", {"dir"});
    std::string dir;
    r.read(out, "output", "dir", dir, "a directory path");
    if (!dir.empty()) {
      std::filesystem::path p(dir);
      cfg.output_dir = p.is_relative() ? base_dir / p : p;
    }
  }
  if (cfg.sampler.name == "grid") {
    for (const auto &p : cfg.space.params()) {
      if (std::holds_alternative<space::ContinuousRange>(p.domain)) {
        r.error(root["sampler"], "sampler.name",
                "grid sampler cannot enumerate continuous parameter '" + p.name + "'");
      }
    }
  }
  r.finish();
  return cfg;
}

StudyConfig load_study_config(const std::filesystem::path &path,
                              const std::vector<Override> &overrides) {
  const auto base = std::filesystem::absolute(path).parent_path();
  return parse_study_config(read_file(path), path.string(), base, overrides);
}

study::StudyDefinition build_study(const StudyConfig &cfg) {
  const auto corpus = retrieval::load_corpus(cfg.data.corpus.string());
  const auto queries = retrieval::load_queries(cfg.data.queries.string());
  const auto train_log = objectives::load_log(cfg.data.train_log.string());
  const auto meta_log = objectives::load_log(cfg.data.meta_log.string());
  auto index = std::make_shared<const retrieval::Index>(retrieval::Index::build(corpus));
  const unsigned parallelism = resolve_parallelism(cfg.parallelism);

  auto train_queries = study::queries_in_log(queries, train_log);
  auto meta_queries = study::queries_in_log(queries, meta_log);
  if (train_queries.empty()) throw ConfigError("data.train_log: no query of the log is in data.queries");
  if (meta_queries.empty()) throw ConfigError("data.meta_log: no query of the log is in data.queries");

  study::StudyDefinition d;
  d.train = std::make_shared<const study::Evaluator>(index, std::move(train_queries), train_log,
                                                     cfg.objectives, cfg.space, cfg.transform,
                                                     parallelism);
  d.meta = std::make_shared<const study::Evaluator>(index, std::move(meta_queries), meta_log,
                                                    cfg.objectives, cfg.space, cfg.transform,
                                                    parallelism);
  d.weights = cfg.weights;
  if (cfg.sampler.name == "random") {
    d.sampler = std::make_shared<sampling::RandomSampler>();
  } else if (cfg.sampler.name == "grid") {
    d.sampler = std::make_shared<sampling::GridSampler>();
  } else {
    const auto mode = cfg.sampler.mode == "weighted_sum"
                          ? sampling::ObjectiveMode::weighted_sum(cfg.weights)
                          : sampling::ObjectiveMode::separate();
    d.sampler = std::make_shared<sampling::TpeSampler>(mode, cfg.sampler.tpe);
  }
  d.cumulative = cfg.cumulative;
  d.top_n = cfg.top_n;
  d.allow_identity_split = cfg.identity_split;
  d.seed = cfg.seed;
  for (const auto &name : cfg.criteria) {
    if (name == "weighted_sum") {
      d.criteria.push_back(study::Criterion::weighted_sum());
      continue;
    }
    for (std::size_t m = 0; m < cfg.objectives.size(); ++m) {
      if (cfg.objectives[m].name == name) d.criteria.push_back({name, m});
    }
  }
  study::validate(d);
  return d;
}

datagen::GeneratorSpec parse_generator_spec(const std::string &text,
                                            const std::string &source_name,
                                            const std::vector<Override> &overrides) {
  YAML::Node root = text.find_first_not_of(" \t\r\n") == std::string::npos
                        ? YAML::Node(YAML::NodeType::Map)
                        : load_yaml(text, source_name);
  Reader r(source_name, apply_overrides(root, overrides));
  r.check_keys(root, "",
               {"n_items", "n_queries", "n_meta_queries", "vocab_size", "embedding_dim", "n_topics",
                "doc_length", "query_length", "true_weights", "conversion_weights",
                "meta_true_weights", "funnel", "impressions_per_pair", "relevance_sharpness",
                "seed"});
  datagen::GeneratorSpec spec;
  r.read(root, "", "n_items", spec.n_items, "a non-negative integer");
  r.read(root, "", "n_queries", spec.n_queries, "a non-negative integer");
  r.read(root, "", "n_meta_queries", spec.n_meta_queries, "a non-negative integer");
  r.read(root, "", "vocab_size", spec.vocab_size, "a non-negative integer");
  r.read(root, "", "embedding_dim", spec.embedding_dim, "a non-negative integer");
  r.read(root, "", "n_topics", spec.n_topics, "a non-negative integer");
  r.read(root, "", "doc_length", spec.doc_length, "a non-negative integer");
  r.read(root, "", "query_length", spec.query_length, "a non-negative integer");
  r.read(root, "", "impressions_per_pair", spec.impressions_per_pair, "an integer");
  r.read(root, "", "relevance_sharpness", spec.relevance_sharpness, "a number");
  r.read(root, "", "seed", spec.seed, "a non-negative integer");
  if (auto w = parse_blend(r, root["true_weights"], "true_weights")) spec.true_weights = *w;
  spec.conversion_weights = parse_blend(r, root["conversion_weights"], "conversion_weights");
  spec.meta_true_weights = parse_blend(r, root["meta_true_weights"], "meta_true_weights");
  if (const YAML::Node f = root["funnel"]; f.IsDefined() && !f.IsNull()) {
    r.check_keys(f, "funnel", {"base_ctr", "click_to_cart", "cart_to_purchase"});
    r.read(f, "funnel", "base_ctr", spec.funnel.base_ctr, "a probability");
    r.read(f, "funnel", "click_to_cart", spec.funnel.click_to_cart, "a probability");
    r.read(f, "funnel", "cart_to_purchase", spec.funnel.cart_to_purchase, "a probability");
  }
  r.finish();
  try {
    datagen::validate(spec);
  } catch (const ConfigError &e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  return spec;
}

datagen::GeneratorSpec load_generator_spec(const std::filesystem::path &path,
                                           const std::vector<Override> &overrides) {
  return parse_generator_spec(read_file(path), path.string(), overrides);
}

}  // namespace mohpo::cli
